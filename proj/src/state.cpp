#include "harperent/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace harperent {

namespace {

// sum_n |psi_n|^4, the moment every closed form in this module reduces to
double fourth_moment(const OneParticleState& state) {
  double m4 = 0.0;
  for (double p : state.probabilities()) m4 += p * p;
  return m4;
}

void check_block_size(int n_sites, int block_size) {
  if (block_size < 0 || block_size > n_sites) {
    throw std::invalid_argument("block size must lie in [0, n_sites]");
  }
}

// C(n, k), or subset_cap + 1 as soon as the count exceeds the cap
std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t count = 1;
  for (int i = 1; i <= k; ++i) {
    // count * (n - k + i) cannot overflow before exceeding any sane cap:
    // bail out as soon as the cap is passed
    count = count * static_cast<std::uint64_t>(n - k + i) /
            static_cast<std::uint64_t>(i);
    if (count > cap) return cap + 1;
  }
  return count;
}

}  // namespace

OneParticleState::OneParticleState(
    std::vector<std::complex<double>> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) {
    throw std::invalid_argument("too few sites: need at least 2");
  }
  double norm_sq = 0.0;
  for (const auto& a : amplitudes_) norm_sq += std::norm(a);
  const double norm = std::sqrt(norm_sq);
  if (norm < 1e-12) {
    throw std::invalid_argument("unnormalizable: input vector has zero norm");
  }
  const double scale = 1.0 / norm;
  probabilities_.resize(amplitudes_.size());
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    amplitudes_[i] *= scale;
    probabilities_[i] = std::norm(amplitudes_[i]);
  }
}

std::complex<double> OneParticleState::amplitude(int site) const {
  if (site < 1 || site > n_sites()) {
    throw std::out_of_range("site index out of range");
  }
  return amplitudes_[static_cast<std::size_t>(site - 1)];
}

double OneParticleState::probability(int site) const {
  if (site < 1 || site > n_sites()) {
    throw std::out_of_range("site index out of range");
  }
  return probabilities_[static_cast<std::size_t>(site - 1)];
}

BlockSelection::BlockSelection(std::vector<int> sites)
    : sites_(std::move(sites)) {
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i] < 1) {
      throw std::invalid_argument("block sites must be >= 1");
    }
    if (i > 0 && sites_[i] <= sites_[i - 1]) {
      throw std::invalid_argument(
          "block sites must be strictly increasing (no duplicates)");
    }
  }
}

BlockSelection BlockSelection::leading(int block_size) {
  if (block_size < 0) {
    throw std::invalid_argument("block size must be >= 0");
  }
  std::vector<int> sites(static_cast<std::size_t>(block_size));
  std::iota(sites.begin(), sites.end(), 1);
  return BlockSelection(std::move(sites));
}

BlockSelection BlockSelection::complement(int n_sites) const {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n_sites) - sites_.size());
  auto it = sites_.begin();
  for (int n = 1; n <= n_sites; ++n) {
    if (it != sites_.end() && *it == n) {
      ++it;
    } else {
      rest.push_back(n);
    }
  }
  if (it != sites_.end()) {
    throw std::out_of_range("block site exceeds n_sites");
  }
  return BlockSelection(std::move(rest));
}

std::string BlockSelection::to_string() const {
  if (sites_.empty()) return "-";
  std::string out = std::to_string(sites_.front());
  for (std::size_t i = 1; i < sites_.size(); ++i) {
    out += '-';
    out += std::to_string(sites_[i]);
  }
  return out;
}

OneParticleState w_state(int n_sites) {
  if (n_sites < 2) {
    throw std::invalid_argument("too few sites: need at least 2");
  }
  const double a = 1.0 / std::sqrt(static_cast<double>(n_sites));
  return OneParticleState(
      std::vector<std::complex<double>>(static_cast<std::size_t>(n_sites), a));
}

double participation_ratio(const OneParticleState& state) {
  return 1.0 / (state.n_sites() * fourth_moment(state));
}

double state_linear_entropy(const OneParticleState& state) {
  return 1.0 - fourth_moment(state);
}

double site_entropy(const OneParticleState& state, int site) {
  const double p = state.probability(site);
  return 2.0 * (p - p * p);
}

double block_entropy(const OneParticleState& state,
                     const BlockSelection& block) {
  double s = 0.0;
  for (int site : block.sites()) {
    s += state.probability(site);  // throws if site > N
  }
  return 2.0 * (s - s * s);
}

double average_block_entropy(const OneParticleState& state, int block_size) {
  const int n = state.n_sites();
  check_block_size(n, block_size);
  const double l = static_cast<double>(block_size);
  const double weight = 2.0 * l * (n - l) / (static_cast<double>(n) * (n - 1));
  return weight * state_linear_entropy(state);
}

double average_block_entropy_enumerated(const OneParticleState& state,
                                        int block_size,
                                        std::uint64_t subset_cap) {
  const int n = state.n_sites();
  check_block_size(n, block_size);
  const std::uint64_t count = binomial_capped(n, block_size, subset_cap);
  if (count > subset_cap) {
    throw std::runtime_error("enumeration too large: C(N, L) exceeds cap");
  }
  if (block_size == 0 || block_size == n) return 0.0;

  const std::vector<double>& prob = state.probabilities();
  // lexicographic combination walk; compensated sum keeps the mean exact
  // enough for the 1e-12 comparison against the closed form
  std::vector<int> idx(static_cast<std::size_t>(block_size));
  std::iota(idx.begin(), idx.end(), 0);
  double sum = 0.0, comp = 0.0;
  while (true) {
    double s = 0.0;
    for (int i : idx) s += prob[static_cast<std::size_t>(i)];
    const double term = 2.0 * (s - s * s);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;

    int pos = block_size - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] ==
                           n - block_size + pos) {
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < block_size; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return sum / static_cast<double>(count);
}

double entropy_from_participation(int n_sites, int block_size, double p) {
  if (n_sites < 2) {
    throw std::invalid_argument("too few sites: need at least 2");
  }
  check_block_size(n_sites, block_size);
  const double n = static_cast<double>(n_sites);
  constexpr double kSlack = 1e-9;  // rounding slack on the bounds
  if (p < 1.0 / n - kSlack || p > 1.0 + kSlack) {
    throw std::invalid_argument(
        "participation ratio must lie in [1/N, 1]");
  }
  const double l = static_cast<double>(block_size);
  return 2.0 * l * (n - l) / (n * (n - 1.0)) * (1.0 - 1.0 / (n * p));
}

double mean_square_concurrence(const OneParticleState& state) {
  const double n = static_cast<double>(state.n_sites());
  const double p = participation_ratio(state);
  return 4.0 / (n * (n - 1.0)) * (1.0 - 1.0 / (n * p));
}

double bipartite_from_pairwise(int n_sites, int block_size, double mean_c2) {
  if (n_sites < 2) {
    throw std::invalid_argument("too few sites: need at least 2");
  }
  check_block_size(n_sites, block_size);
  if (mean_c2 < 0.0) {
    throw std::invalid_argument("mean square concurrence must be >= 0");
  }
  const double l = static_cast<double>(block_size);
  return l * (n_sites - l) / 2.0 * mean_c2;
}

std::vector<double> entropy_distribution(const OneParticleState& state) {
  std::vector<double> out;
  out.reserve(state.probabilities().size());
  for (double p : state.probabilities()) {
    out.push_back(2.0 * (p - p * p));
  }
  return out;
}

EntanglementSummary summarize(const OneParticleState& state) {
  const double n = static_cast<double>(state.n_sites());
  EntanglementSummary summary;
  double m4 = 0.0;
  summary.site_entropies.reserve(state.probabilities().size());
  for (double p : state.probabilities()) {
    m4 += p * p;
    summary.site_entropies.push_back(2.0 * (p - p * p));
  }
  summary.e_s = 1.0 - m4;
  summary.p = 1.0 / (n * m4);
  summary.mean_c2 = 4.0 / (n * (n - 1.0)) * summary.e_s;
  return summary;
}

}  // namespace harperent
