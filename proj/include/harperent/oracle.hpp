// oracle.hpp
// Brute-force verifier for the closed-form entropies: embeds a one-particle
// state into the full 2^N qubit register, reduces it by explicit partial
// trace, and evaluates 1 - Tr(rho^2) directly. Deliberately naive; exists
// only to cross-check the formulas in state.hpp.

#pragma once

#include <string>

#include <Eigen/Dense>

#include "harperent/state.hpp"

namespace harperent::oracle {

inline constexpr int kMaxEmbedQubits = 14;  // dense 2^N vector stays small
inline constexpr int kMaxKeepQubits = 12;   // dense 2^L x 2^L matrix guard

/// Full register amplitudes over n_qubits two-level systems. Basis index
/// convention: qubit 1 is the most significant bit, and |1> marks the
/// occupied site.
struct FullStateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;
};

/// Reduced density matrix over a kept block of qubits, same bit ordering
/// as FullStateVector restricted to the kept qubits in increasing order.
struct DensityMatrix {
  Eigen::MatrixXcd entries;

  int dimension() const { return static_cast<int>(entries.rows()); }
  double hermiticity_error() const;   // max |rho - rho^dagger|
  double trace_error() const;         // |Tr(rho) - 1|
  double min_eigenvalue() const;      // smallest eigenvalue of (rho+rho^dagger)/2
};

/// Places psi_n on the basis state whose n-th qubit is |1> (all others |0>).
/// Throws "oracle size limit" beyond kMaxEmbedQubits.
FullStateVector embed_one_particle(const OneParticleState& state);

/// rho = Tr_complement(|Psi><Psi|) over the kept qubits, computed by
/// index-partitioned summation over complement bitstrings; the full
/// 2^N x 2^N projector is never materialized.
DensityMatrix partial_trace(const FullStateVector& full,
                            const BlockSelection& keep);

/// 1 - Tr(rho^2).
double linear_entropy(const DensityMatrix& rho);

/// One oracle-vs-closed-form comparison for a concrete state and block.
struct VerificationReport {
  int n_sites = 0;
  BlockSelection block;
  double oracle_value = 0.0;
  double closed_form_value = 0.0;
  double abs_diff = 0.0;
  bool pass = false;
};

inline constexpr double kVerifyTolerance = 1e-10;

/// Runs embed -> partial_trace -> linear_entropy against
/// state.block_entropy; passes iff |difference| < tolerance.
VerificationReport verify_block_formula(const OneParticleState& state,
                                        const BlockSelection& block,
                                        double tolerance = kVerifyTolerance);

/// CSV serialization of verification reports:
/// n_sites, block_spec, oracle_value, closed_form_value, abs_diff, pass
std::string report_csv_header();
std::string report_csv_row(const VerificationReport& report);

}  // namespace harperent::oracle
