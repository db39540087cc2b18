// dynamics.hpp
// Wave-packet evolution under the Harper chain: i d psi_n / dt
// = hopping * (psi_{n+1} + psi_{n-1}) + V_n psi_n, with periodic wrap.
// Default propagator is spectral (exact up to diagonalization error);
// classic RK4 exists as an independent cross-check. Records norm, variance,
// and entanglement time series and fits spreading exponents.

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "harperent/harper.hpp"
#include "harperent/state.hpp"

namespace harperent {

enum class Propagator { spectral, rk4 };

std::string to_string(Propagator propagator);

struct EvolutionConfig {
  double t_max = 0.0;  ///< in units of inverse hopping
  double dt = 0.0;     ///< recording interval
  Propagator propagator = Propagator::spectral;
  double rk4_substep = 1e-3;           ///< integration step, rk4 only
  std::optional<int> initial_site;     ///< default floor(N/2)
  double boundary_hit_threshold = 1e-6;

  /// Packet start site after applying the default.
  int resolved_initial_site(int n_sites) const;

  /// Throws std::invalid_argument on bad ranges.
  void validate(int n_sites) const;
};

struct TimeSeries {
  std::vector<double> times;  ///< ascending, spaced by dt from 0
  std::vector<OneParticleState> states;
  std::vector<double> norms;         ///< raw propagated norm per sample
  std::vector<double> variances;     ///< sigma^2(t), plain site coordinates
  std::vector<double> entanglements; ///< E_{1,N-1} per sample
  std::optional<double> boundary_hit_time;  ///< first t with edge weight
                                            ///< above the threshold
};

/// Delta packet: psi_site = 1, everything else 0.
OneParticleState initial_packet(int n_sites, int site);

/// sigma^2 = sum_n (n - n_mean)^2 |psi_n|^2 with n_mean = sum_n n |psi_n|^2.
/// Plain site coordinates; meaningful only before boundary_hit_time.
double variance(const OneParticleState& state);

/// Exact evolution in the eigenbasis: psi(t) = sum_k e^{-i E_k t} <v_k|psi0> v_k.
/// Handles negative t (reverse evolution).
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const HarperParams& params);

  /// Raw evolved vector (not renormalized, so norm drift stays observable).
  Eigen::VectorXcd propagate(const Eigen::VectorXcd& initial, double t) const;

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd eigenvalues_;
};

TimeSeries evolve(const HarperParams& params, const EvolutionConfig& config);

/// E_{L,N-L}(t) recomputed from the stored snapshots for any block size.
std::vector<double> entanglement_trace(const TimeSeries& series,
                                       int block_size);

struct ExponentFit {
  double alpha = 0.0;      ///< slope of log sigma^2 vs log t
  double r_squared = 0.0;  ///< goodness of fit
};

/// Least-squares power-law fit of the variance over [t_lo, t_hi]. The
/// window must lie inside the recorded range, before boundary_hit_time,
/// contain at least 10 samples, and have strictly positive variances.
ExponentFit diffusion_exponent(const TimeSeries& series, double t_lo,
                               double t_hi);

}  // namespace harperent
