#include "harperent/oracle.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "harperent/csv.hpp"

namespace harperent::oracle {

namespace {

// bit position of 1-based qubit q in an n-qubit index (qubit 1 = MSB)
int bit_of(int n_qubits, int qubit) { return n_qubits - qubit; }

}  // namespace

double DensityMatrix::hermiticity_error() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_error() const {
  return std::abs(entries.trace() - std::complex<double>(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

FullStateVector embed_one_particle(const OneParticleState& state) {
  const int n = state.n_sites();
  if (n > kMaxEmbedQubits) {
    throw std::invalid_argument("oracle size limit: n_sites > 14");
  }
  FullStateVector full;
  full.n_qubits = n;
  full.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  for (int site = 1; site <= n; ++site) {
    const std::int64_t index = std::int64_t{1} << bit_of(n, site);
    full.amplitudes(index) = state.amplitude(site);
  }
  return full;
}

DensityMatrix partial_trace(const FullStateVector& full,
                            const BlockSelection& keep) {
  const int n = full.n_qubits;
  if (keep.empty()) {
    throw std::invalid_argument("keep selection must be nonempty");
  }
  if (keep.size() > kMaxKeepQubits) {
    throw std::invalid_argument("oracle size limit: |keep| > 12");
  }
  if (keep.sites().back() > n) {
    throw std::out_of_range("keep site exceeds n_qubits");
  }

  const int l = keep.size();
  const int c = n - l;
  const BlockSelection traced = keep.complement(n);

  // Reshape |Psi> into a 2^L x 2^C matrix M indexed by (kept bits,
  // complement bits); then rho = M M^dagger sums over complement
  // bitstrings column by column.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(std::int64_t{1} << l,
                                              std::int64_t{1} << c);
  const std::int64_t dim = full.amplitudes.size();
  for (std::int64_t i = 0; i < dim; ++i) {
    std::int64_t row = 0;
    for (int j = 0; j < l; ++j) {
      const int bit = bit_of(n, keep.sites()[static_cast<std::size_t>(j)]);
      row |= ((i >> bit) & 1) << (l - 1 - j);
    }
    std::int64_t col = 0;
    for (int j = 0; j < c; ++j) {
      const int bit = bit_of(n, traced.sites()[static_cast<std::size_t>(j)]);
      col |= ((i >> bit) & 1) << (c - 1 - j);
    }
    m(row, col) = full.amplitudes(i);
  }

  DensityMatrix rho;
  rho.entries = m * m.adjoint();
  return rho;
}

double linear_entropy(const DensityMatrix& rho) {
  // Tr(rho^2) = sum_ij rho_ij rho_ji, O(d^2) without forming rho^2
  const std::complex<double> purity =
      rho.entries.cwiseProduct(rho.entries.transpose()).sum();
  return 1.0 - purity.real();
}

VerificationReport verify_block_formula(const OneParticleState& state,
                                        const BlockSelection& block,
                                        double tolerance) {
  VerificationReport report;
  report.n_sites = state.n_sites();
  report.block = block;
  report.oracle_value =
      linear_entropy(partial_trace(embed_one_particle(state), block));
  report.closed_form_value = block_entropy(state, block);
  report.abs_diff = std::abs(report.oracle_value - report.closed_form_value);
  report.pass = report.abs_diff < tolerance;
  return report;
}

std::string report_csv_header() {
  return "n_sites,block_spec,oracle_value,closed_form_value,abs_diff,pass";
}

std::string report_csv_row(const VerificationReport& report) {
  std::string row = std::to_string(report.n_sites);
  row += ',';
  row += report.block.to_string();
  row += ',';
  row += csv::format_double(report.oracle_value);
  row += ',';
  row += csv::format_double(report.closed_form_value);
  row += ',';
  row += csv::format_double(report.abs_diff);
  row += ',';
  row += report.pass ? '1' : '0';
  return row;
}

}  // namespace harperent::oracle
