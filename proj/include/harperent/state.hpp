// state.hpp
// One-particle states on a 1D lattice and the closed-form entanglement /
// localization functionals defined on them: per-site and block linear
// entropies, subset-averaged block entropy, participation ratio, and the
// identities tying them to the mean square concurrence.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace harperent {

/// Normalized superposition of single-site excitations over N >= 2 sites.
/// Site indices are 1-based in every public interface. Probabilities
/// |psi_n|^2 are computed once at construction and cached; every functional
/// in this module depends on the amplitudes through them alone.
class OneParticleState {
 public:
  /// Rescales the input to unit norm (the factor is real and positive).
  /// Throws std::invalid_argument for fewer than 2 sites ("too few sites")
  /// or a vector of norm < 1e-12 ("unnormalizable").
  explicit OneParticleState(std::vector<std::complex<double>> amplitudes);

  int n_sites() const { return static_cast<int>(amplitudes_.size()); }

  /// Amplitude psi_n, 1-based site index.
  std::complex<double> amplitude(int site) const;

  /// |psi_n|^2, 1-based site index.
  double probability(int site) const;

  const std::vector<std::complex<double>>& amplitudes() const {
    return amplitudes_;
  }
  const std::vector<double>& probabilities() const { return probabilities_; }

 private:
  std::vector<std::complex<double>> amplitudes_;
  std::vector<double> probabilities_;
};

/// A subset of 1-based site indices marking one side of a bipartition.
/// Sites must be strictly increasing and >= 1; empty selections are legal.
/// The upper bound against a concrete N is checked where the selection is
/// applied to a state.
class BlockSelection {
 public:
  BlockSelection() = default;
  explicit BlockSelection(std::vector<int> sites);

  /// The contiguous block {1, 2, ..., block_size}.
  static BlockSelection leading(int block_size);

  /// Sites 1..n_sites not in this selection.
  BlockSelection complement(int n_sites) const;

  int size() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  const std::vector<int>& sites() const { return sites_; }

  /// Hyphen-joined site list, e.g. "1-2-5"; "-" for the empty selection.
  std::string to_string() const;

 private:
  std::vector<int> sites_;
};

/// Scalar entanglement/localization summary of a state, all derived from a
/// single pass over the cached probabilities so the algebraic identities
/// between the fields hold to rounding error.
struct EntanglementSummary {
  double e_s = 0.0;     ///< 1 - sum |psi_n|^4, in [0, 1 - 1/N]
  double p = 0.0;       ///< participation ratio, in [1/N, 1]
  double mean_c2 = 0.0; ///< average square concurrence, 4/(N(N-1)) * e_s
  std::vector<double> site_entropies;  ///< 2(|psi_n|^2 - |psi_n|^4) per site
};

/// Uniform state psi_n = 1/sqrt(N) (the W state).
OneParticleState w_state(int n_sites);

/// p = 1 / (N * sum_n |psi_n|^4). 1 for the uniform state, 1/N for a
/// single-site state.
double participation_ratio(const OneParticleState& state);

/// E_s = 1 - sum_n |psi_n|^4.
double state_linear_entropy(const OneParticleState& state);

/// Linear entropy of one site against the rest: 2(|psi_n|^2 - |psi_n|^4).
double site_entropy(const OneParticleState& state, int site);

/// Linear entropy of a block against its complement: 2(s - s^2) with
/// s the total probability weight on the block. Symmetric under
/// complementation; 0 for empty and full blocks.
double block_entropy(const OneParticleState& state,
                     const BlockSelection& block);

/// Average of block_entropy over all C(N, L) blocks of size L, via the
/// closed form 2L(N-L)/(N(N-1)) * E_s.
double average_block_entropy(const OneParticleState& state, int block_size);

/// Same average computed by explicit enumeration of all C(N, L) subsets.
/// Verification oracle for average_block_entropy; throws
/// "enumeration too large" if C(N, L) exceeds subset_cap.
double average_block_entropy_enumerated(const OneParticleState& state,
                                        int block_size,
                                        std::uint64_t subset_cap = 1'000'000);

/// Average block entropy expressed through the participation ratio:
/// 2L(N-L)/(N(N-1)) * (1 - 1/(N p)). Monotone nondecreasing in p.
/// p must lie in [1/N, 1] (up to a 1e-9 rounding slack).
double entropy_from_participation(int n_sites, int block_size, double p);

/// Average square concurrence over all site pairs:
/// 4/(N(N-1)) * (1 - 1/(N p)).
double mean_square_concurrence(const OneParticleState& state);

/// Average block entropy reconstructed from the mean square concurrence:
/// L(N-L)/2 * mean_c2.
double bipartite_from_pairwise(int n_sites, int block_size, double mean_c2);

/// site_entropy for every site, n = 1..N.
std::vector<double> entropy_distribution(const OneParticleState& state);

EntanglementSummary summarize(const OneParticleState& state);

}  // namespace harperent
