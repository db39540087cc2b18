#include "harperent/harper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "harperent/csv.hpp"
#include "harperent/parallel.hpp"

namespace harperent {

std::string to_string(Boundary boundary) {
  return boundary == Boundary::periodic ? "periodic" : "open";
}

Sigma Sigma::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("sigma denominator must be nonzero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);  // >= 1
  Sigma sigma;
  sigma.num_ = num / g;
  sigma.den_ = den / g;
  sigma.real_ = static_cast<double>(sigma.num_) / static_cast<double>(sigma.den_);
  return sigma;
}

Sigma Sigma::real(double value) {
  Sigma sigma;
  sigma.real_ = value;
  return sigma;
}

std::int64_t Sigma::num() const {
  if (!is_rational()) throw std::logic_error("sigma is not rational");
  return num_;
}

std::int64_t Sigma::den() const {
  if (!is_rational()) throw std::logic_error("sigma is not rational");
  return den_;
}

double Sigma::value() const { return real_; }

double Sigma::angle(std::int64_t site) const {
  if (is_rational()) {
    std::int64_t m = (site % den_) * (num_ % den_) % den_;
    if (m < 0) m += den_;
    return 2.0 * std::numbers::pi * static_cast<double>(m) /
           static_cast<double>(den_);
  }
  const double frac = std::fmod(static_cast<double>(site) * real_, 1.0);
  return 2.0 * std::numbers::pi * frac;
}

std::string Sigma::to_string() const {
  if (is_rational()) {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  return csv::format_double(real_);
}

void HarperParams::validate() const {
  if (n_sites < 3) throw std::invalid_argument("n_sites must be >= 3");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
}

double potential(const HarperParams& params, int site) {
  params.validate();
  if (site < 1 || site > params.n_sites) {
    throw std::out_of_range("site index out of range");
  }
  return params.lambda * std::cos(params.sigma.angle(site));
}

std::vector<double> potential_vector(const HarperParams& params) {
  params.validate();
  std::vector<double> v(static_cast<std::size_t>(params.n_sites));
  for (int n = 1; n <= params.n_sites; ++n) {
    v[static_cast<std::size_t>(n - 1)] =
        params.lambda * std::cos(params.sigma.angle(n));
  }
  return v;
}

Eigen::MatrixXd hamiltonian_matrix(const HarperParams& params) {
  params.validate();
  const int n = params.n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const std::vector<double> v = potential_vector(params);
  for (int i = 0; i < n; ++i) {
    h(i, i) = v[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = params.hopping;
    h(i + 1, i) = params.hopping;
  }
  if (params.boundary == Boundary::periodic) {
    h(0, n - 1) = params.hopping;
    h(n - 1, 0) = params.hopping;
  }
  return h;
}

void apply_hamiltonian(const HarperParams& params,
                       const std::vector<double>& site_potential,
                       const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const int n = params.n_sites;
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> acc =
        site_potential[static_cast<std::size_t>(i)] * in(i);
    if (i > 0) acc += params.hopping * in(i - 1);
    if (i + 1 < n) acc += params.hopping * in(i + 1);
    if (params.boundary == Boundary::periodic) {
      if (i == 0) acc += params.hopping * in(n - 1);
      if (i == n - 1) acc += params.hopping * in(0);
    }
    out(i) = acc;
  }
}

namespace {

// largest-magnitude component positive, ties broken by lowest index
void fix_column_sign(Eigen::Ref<Eigen::VectorXd> column) {
  int peak = 0;
  double best = std::abs(column(0));
  for (int i = 1; i < column.size(); ++i) {
    const double mag = std::abs(column(i));
    if (mag > best) {
      best = mag;
      peak = i;
    }
  }
  if (column(peak) < 0.0) column = -column;
}

}  // namespace

SpectrumResult full_spectrum(const HarperParams& params) {
  params.validate();
  if (params.n_sites > kMaxDenseSites) {
    throw std::invalid_argument("dense solver guard: n_sites > 4096");
  }
  const Eigen::MatrixXd h = hamiltonian_matrix(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(
        "eigensolver failed to converge (dense self-adjoint, N = " +
        std::to_string(params.n_sites) + ")");
  }
  SpectrumResult result;
  result.eigenvalues = solver.eigenvalues();
  result.eigenvectors = solver.eigenvectors();
  for (int k = 0; k < result.eigenvectors.cols(); ++k) {
    fix_column_sign(result.eigenvectors.col(k));
  }
  result.ground_index = 0;
  return result;
}

GroundStateResult ground_state(const HarperParams& params) {
  const SpectrumResult spectrum = full_spectrum(params);
  const Eigen::VectorXd column = spectrum.eigenvectors.col(0);
  std::vector<std::complex<double>> amplitudes(
      static_cast<std::size_t>(column.size()));
  for (int i = 0; i < column.size(); ++i) {
    amplitudes[static_cast<std::size_t>(i)] = column(i);
  }
  return GroundStateResult{
      .energy = spectrum.eigenvalues(0),
      .state = OneParticleState(std::move(amplitudes)),
      .degenerate = spectrum.eigenvalues(1) - spectrum.eigenvalues(0) <
                    kDegeneracyGap,
  };
}

Sigma fibonacci_sigma(int n_sites) {
  if (n_sites >= 3) {
    std::int64_t prev = 1, curr = 2;  // F(2), F(3) skipping the repeated 1
    while (curr < n_sites) {
      const std::int64_t next = prev + curr;
      prev = curr;
      curr = next;
    }
    if (curr == n_sites) return Sigma::rational(prev, curr);
  }
  // not Fibonacci: name the neighbors to make the fix obvious
  std::int64_t below = 2, above = 3;
  while (above < n_sites) {
    const std::int64_t next = below + above;
    below = above;
    above = next;
  }
  throw std::invalid_argument(
      "n_sites " + std::to_string(n_sites) +
      " is not a Fibonacci number >= 3 (nearest: " + std::to_string(below) +
      ", " + std::to_string(above) + ")");
}

std::vector<SweepRow> lambda_sweep(const HarperParams& base,
                                   std::span<const double> lambdas,
                                   int block_size) {
  base.validate();
  if (lambdas.empty()) {
    throw std::invalid_argument("lambda grid must be nonempty");
  }
  if (block_size < 0 || block_size > base.n_sites) {
    throw std::invalid_argument("block size must lie in [0, n_sites]");
  }

  std::vector<double> grid(lambdas.begin(), lambdas.end());
  std::sort(grid.begin(), grid.end());

  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    HarperParams params = base;
    params.lambda = grid[i];
    const GroundStateResult ground = ground_state(params);
    const EntanglementSummary summary = summarize(ground.state);
    rows[i] = SweepRow{
        .lambda = grid[i],
        .e_avg = average_block_entropy(ground.state, block_size),
        .e_s = summary.e_s,
        .participation = summary.p,
        .ground_energy = ground.energy,
        .degenerate = ground.degenerate,
    };
  });
  return rows;
}

}  // namespace harperent
