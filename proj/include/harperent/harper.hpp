// harper.hpp
// The Harper chain: nearest-neighbor hopping 1/2 plus the quasiperiodic
// on-site potential V_n = lambda * cos(2 pi n sigma). Dense symmetric
// diagonalization, ground states, Fibonacci-approximant frequencies, and
// the ground-state entanglement sweep over lambda.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "harperent/state.hpp"

namespace harperent {

enum class Boundary { periodic, open };

std::string to_string(Boundary boundary);

/// Potential frequency sigma, kept as an exact rational p/q when known.
/// For rational sigma the phase n*sigma is reduced modulo 1 in integer
/// arithmetic before the cosine, so V_{n+q} = V_n holds exactly.
class Sigma {
 public:
  static Sigma rational(std::int64_t num, std::int64_t den);
  static Sigma real(double value);

  bool is_rational() const { return den_ != 0; }
  std::int64_t num() const;
  std::int64_t den() const;
  double value() const;

  /// 2 pi n sigma reduced modulo 2 pi.
  double angle(std::int64_t site) const;

  std::string to_string() const;  // "89/144" or the decimal value

 private:
  Sigma() = default;
  std::int64_t num_ = 0;
  std::int64_t den_ = 0;  // 0 marks the real-valued case
  double real_ = 0.0;
};

struct HarperParams {
  int n_sites = 0;
  double lambda = 0.0;
  Sigma sigma = Sigma::rational(0, 1);
  Boundary boundary = Boundary::periodic;
  double hopping = 0.5;

  /// Throws std::invalid_argument if n_sites < 3 or lambda < 0.
  void validate() const;
};

/// V_n = lambda * cos(2 pi n sigma), 1-based site index.
double potential(const HarperParams& params, int site);

/// All V_n for n = 1..N.
std::vector<double> potential_vector(const HarperParams& params);

/// Dense real symmetric N x N matrix: V_n on the diagonal, hopping on the
/// first off-diagonals, and corner entries for periodic boundaries.
Eigen::MatrixXd hamiltonian_matrix(const HarperParams& params);

/// In-place H * psi using the tridiagonal-plus-corners structure, O(N).
void apply_hamiltonian(const HarperParams& params,
                       const std::vector<double>& site_potential,
                       const Eigen::VectorXcd& in, Eigen::VectorXcd& out);

inline constexpr int kMaxDenseSites = 4096;

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< orthonormal columns, column k <-> eigenvalue k
  int ground_index = 0;
};

/// Full diagonalization with a deterministic eigenvector sign convention:
/// the largest-magnitude component of each column is positive, ties broken
/// by lowest index.
SpectrumResult full_spectrum(const HarperParams& params);

inline constexpr double kDegeneracyGap = 1e-10;

struct GroundStateResult {
  double energy = 0.0;
  OneParticleState state;
  bool degenerate = false;  ///< lowest two eigenvalues closer than kDegeneracyGap
};

GroundStateResult ground_state(const HarperParams& params);

/// F(k-1)/F(k) for the Fibonacci number F(k) = n_sites. Throws for
/// non-Fibonacci sizes, naming the nearest Fibonacci values.
Sigma fibonacci_sigma(int n_sites);

struct SweepRow {
  double lambda = 0.0;
  double e_avg = 0.0;          ///< average block entropy E_{L,N-L}
  double e_s = 0.0;            ///< quantum state linear entropy
  double participation = 0.0;
  double ground_energy = 0.0;
  bool degenerate = false;
};

/// Ground-state entanglement for each lambda; rows ordered by lambda.
/// Points are independent and computed in parallel.
std::vector<SweepRow> lambda_sweep(const HarperParams& base,
                                   std::span<const double> lambdas,
                                   int block_size);

}  // namespace harperent
