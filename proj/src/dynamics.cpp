#include "harperent/dynamics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace harperent {

std::string to_string(Propagator propagator) {
  return propagator == Propagator::spectral ? "spectral" : "rk4";
}

int EvolutionConfig::resolved_initial_site(int n_sites) const {
  return initial_site.value_or(n_sites / 2);
}

void EvolutionConfig::validate(int n_sites) const {
  if (t_max <= 0.0) throw std::invalid_argument("t_max must be > 0");
  if (dt <= 0.0) throw std::invalid_argument("dt must be > 0");
  if (dt > t_max) throw std::invalid_argument("dt must be <= t_max");
  if (propagator == Propagator::rk4) {
    if (rk4_substep <= 0.0 || rk4_substep > dt) {
      throw std::invalid_argument("rk4_substep must lie in (0, dt]");
    }
  }
  if (boundary_hit_threshold <= 0.0) {
    throw std::invalid_argument("boundary_hit_threshold must be > 0");
  }
  const int site = resolved_initial_site(n_sites);
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("initial site out of range");
  }
}

OneParticleState initial_packet(int n_sites, int site) {
  if (n_sites < 2) {
    throw std::invalid_argument("too few sites: need at least 2");
  }
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("initial site out of range");
  }
  std::vector<std::complex<double>> amplitudes(
      static_cast<std::size_t>(n_sites));
  amplitudes[static_cast<std::size_t>(site - 1)] = 1.0;
  return OneParticleState(std::move(amplitudes));
}

double variance(const OneParticleState& state) {
  const std::vector<double>& prob = state.probabilities();
  double mean = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    mean += static_cast<double>(i + 1) * prob[i];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double d = static_cast<double>(i + 1) - mean;
    var += d * d * prob[i];
  }
  return var;
}

SpectralPropagator::SpectralPropagator(const HarperParams& params) {
  const SpectrumResult spectrum = full_spectrum(params);
  eigenvectors_ = spectrum.eigenvectors;
  eigenvalues_ = spectrum.eigenvalues;
}

Eigen::VectorXcd SpectralPropagator::propagate(const Eigen::VectorXcd& initial,
                                               double t) const {
  const Eigen::VectorXcd coeffs =
      eigenvectors_.transpose() * initial;  // real orthogonal basis
  Eigen::VectorXcd phased(coeffs.size());
  for (int k = 0; k < coeffs.size(); ++k) {
    phased(k) = std::polar(1.0, -eigenvalues_(k) * t) * coeffs(k);
  }
  return eigenvectors_ * phased;
}

namespace {

Eigen::VectorXcd to_vector(const OneParticleState& state) {
  Eigen::VectorXcd v(state.n_sites());
  for (int i = 0; i < state.n_sites(); ++i) {
    v(i) = state.amplitudes()[static_cast<std::size_t>(i)];
  }
  return v;
}

OneParticleState to_state(const Eigen::VectorXcd& v) {
  return OneParticleState(
      std::vector<std::complex<double>>(v.data(), v.data() + v.size()));
}

// classic RK4 on d psi / dt = -i H psi
void rk4_step(const HarperParams& params, const std::vector<double>& v,
              double h, Eigen::VectorXcd& psi, Eigen::VectorXcd& k1,
              Eigen::VectorXcd& k2, Eigen::VectorXcd& k3, Eigen::VectorXcd& k4,
              Eigen::VectorXcd& scratch) {
  const std::complex<double> minus_i(0.0, -1.0);
  apply_hamiltonian(params, v, psi, k1);
  k1 *= minus_i;
  scratch = psi + 0.5 * h * k1;
  apply_hamiltonian(params, v, scratch, k2);
  k2 *= minus_i;
  scratch = psi + 0.5 * h * k2;
  apply_hamiltonian(params, v, scratch, k3);
  k3 *= minus_i;
  scratch = psi + h * k3;
  apply_hamiltonian(params, v, scratch, k4);
  k4 *= minus_i;
  psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

TimeSeries evolve(const HarperParams& params, const EvolutionConfig& config) {
  params.validate();
  config.validate(params.n_sites);
  const int n = params.n_sites;
  const int start = config.resolved_initial_site(n);
  const OneParticleState packet = initial_packet(n, start);
  const Eigen::VectorXcd psi0 = to_vector(packet);

  const std::size_t n_samples =
      static_cast<std::size_t>(std::floor(config.t_max / config.dt + 1e-9)) + 1;

  TimeSeries series;
  series.times.reserve(n_samples);
  series.states.reserve(n_samples);
  series.norms.reserve(n_samples);
  series.variances.reserve(n_samples);
  series.entanglements.reserve(n_samples);

  auto record = [&](double t, const Eigen::VectorXcd& raw) {
    const double norm = raw.norm();
    if (config.propagator == Propagator::rk4 &&
        std::abs(norm - 1.0) > 1e-6) {
      throw std::runtime_error(
          "rk4 norm drift exceeds 1e-6 at t = " + std::to_string(t) +
          "; use a smaller rk4_substep");
    }
    OneParticleState state = to_state(raw);
    const double edge_weight = state.probability(1) + state.probability(n);
    if (!series.boundary_hit_time &&
        edge_weight > config.boundary_hit_threshold) {
      series.boundary_hit_time = t;
    }
    series.times.push_back(t);
    series.norms.push_back(norm);
    series.variances.push_back(variance(state));
    series.entanglements.push_back(average_block_entropy(state, 1));
    series.states.push_back(std::move(state));
  };

  if (config.propagator == Propagator::spectral) {
    const SpectralPropagator propagator(params);
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double t = static_cast<double>(k) * config.dt;
      record(t, propagator.propagate(psi0, t));
    }
  } else {
    const std::vector<double> v = potential_vector(params);
    const int substeps = std::max(
        1, static_cast<int>(std::lround(config.dt / config.rk4_substep)));
    const double h = config.dt / substeps;
    Eigen::VectorXcd psi = psi0, k1, k2, k3, k4, scratch;
    record(0.0, psi);
    for (std::size_t k = 1; k < n_samples; ++k) {
      for (int s = 0; s < substeps; ++s) {
        rk4_step(params, v, h, psi, k1, k2, k3, k4, scratch);
      }
      record(static_cast<double>(k) * config.dt, psi);
    }
  }
  return series;
}

std::vector<double> entanglement_trace(const TimeSeries& series,
                                       int block_size) {
  std::vector<double> trace;
  trace.reserve(series.states.size());
  for (const OneParticleState& state : series.states) {
    trace.push_back(average_block_entropy(state, block_size));
  }
  return trace;
}

ExponentFit diffusion_exponent(const TimeSeries& series, double t_lo,
                               double t_hi) {
  if (series.times.empty()) {
    throw std::invalid_argument("empty time series");
  }
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) {
    throw std::invalid_argument("fit window must satisfy 0 < t_lo < t_hi");
  }
  if (t_lo < series.times.front() - 1e-12 ||
      t_hi > series.times.back() + 1e-12) {
    throw std::invalid_argument("fit window outside recorded range");
  }
  if (series.boundary_hit_time && t_hi >= *series.boundary_hit_time) {
    throw std::invalid_argument(
        "fit window extends past the boundary hit time");
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
    const double var = series.variances[i];
    if (var <= 0.0) {
      throw std::invalid_argument(
          "variance must be positive throughout the fit window");
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(var));
  }
  if (xs.size() < 10) {
    throw std::invalid_argument("fit window must contain at least 10 samples");
  }

  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit = slope * xs[i] + intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  return ExponentFit{
      .alpha = slope,
      .r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0,
  };
}

}  // namespace harperent
