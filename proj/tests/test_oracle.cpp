#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "harperent/oracle.hpp"
#include "harperent/state.hpp"

using namespace harperent;
using cvec = std::vector<std::complex<double>>;

namespace {

OneParticleState random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  cvec amps(static_cast<std::size_t>(n));
  for (auto& a : amps) a = {gauss(rng), gauss(rng)};
  return OneParticleState(std::move(amps));
}

BlockSelection random_block(std::mt19937_64& rng, int n, int size) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  for (int i = 0; i < size; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(all[static_cast<std::size_t>(i)],
              all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(size));
  std::sort(all.begin(), all.end());
  return BlockSelection(std::move(all));
}

}  // namespace

TEST_CASE("embedding places amplitudes on weight-1 basis states") {
  // qubit 1 is the most significant bit: |10> = index 2, |01> = index 1
  const OneParticleState pair(cvec{0.6, {0.0, 0.8}});
  const oracle::FullStateVector full = oracle::embed_one_particle(pair);
  REQUIRE(full.amplitudes.size() == 4);
  CHECK(full.amplitudes(2) == pair.amplitude(1));
  CHECK(full.amplitudes(1) == pair.amplitude(2));
  CHECK(std::abs(full.amplitudes(0)) == 0.0);
  CHECK(std::abs(full.amplitudes(3)) == 0.0);

  const oracle::FullStateVector w3 = oracle::embed_one_particle(w_state(3));
  const double amp = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(w3.amplitudes(4).real() - amp) < 1e-15);  // |100>
  CHECK(std::abs(w3.amplitudes(2).real() - amp) < 1e-15);  // |010>
  CHECK(std::abs(w3.amplitudes(1).real() - amp) < 1e-15);  // |001>
  int nonzero = 0;
  for (int i = 0; i < 8; ++i) {
    if (std::abs(w3.amplitudes(i)) > 0.0) ++nonzero;
  }
  CHECK(nonzero == 3);
}

TEST_CASE("embedding is an isometry") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    std::uniform_int_distribution<int> size_dist(2, 10);
    const OneParticleState state = random_state(rng, size_dist(rng));
    const oracle::FullStateVector full = oracle::embed_one_particle(state);
    CHECK(std::abs(full.amplitudes.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("embedding size limit") {
  CHECK_THROWS_WITH_AS(oracle::embed_one_particle(w_state(15)),
                       doctest::Contains("oracle size limit"),
                       std::invalid_argument);
}

TEST_CASE("partial trace with nothing traced out is the projector") {
  const OneParticleState state(cvec{0.5, {0.5, 0.5}, {0.0, -0.5}});
  const oracle::FullStateVector full = oracle::embed_one_particle(state);
  const oracle::DensityMatrix rho =
      oracle::partial_trace(full, BlockSelection::leading(3));
  const Eigen::MatrixXcd projector =
      full.amplitudes * full.amplitudes.adjoint();
  CHECK((rho.entries - projector).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(oracle::linear_entropy(rho) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("single-qubit reduction of a two-site state") {
  // rho_1 = diag(1 - |psi_1|^2, |psi_1|^2)
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 25; ++rep) {
    const OneParticleState state = random_state(rng, 2);
    const oracle::DensityMatrix rho = oracle::partial_trace(
        oracle::embed_one_particle(state), BlockSelection::leading(1));
    const double p1 = state.probability(1);
    CHECK(std::abs(rho.entries(0, 0).real() - (1.0 - p1)) < 1e-14);
    CHECK(std::abs(rho.entries(1, 1).real() - p1) < 1e-14);
    CHECK(std::abs(rho.entries(0, 1)) < 1e-14);
    CHECK(std::abs(rho.entries(1, 0)) < 1e-14);
    CHECK(oracle::linear_entropy(rho) ==
          doctest::Approx(2.0 * (p1 - p1 * p1)).epsilon(1e-12));
  }
}

TEST_CASE("unentangled qubit reduces to a pure projector") {
  // |0> (x) |phi> over 3 qubits: qubit 1 empty, arbitrary phi on the rest
  oracle::FullStateVector product;
  product.n_qubits = 3;
  product.amplitudes = Eigen::VectorXcd::Zero(8);
  const cvec phi{0.5, {0.0, 0.5}, {0.5, 0.0}, {0.0, -0.5}};
  for (int i = 0; i < 4; ++i) product.amplitudes(i) = phi[static_cast<std::size_t>(i)];

  const oracle::DensityMatrix rho = oracle::partial_trace(
      product, BlockSelection(std::vector<int>{1}));
  CHECK(std::abs(rho.entries(0, 0).real() - 1.0) < 1e-14);
  CHECK(std::abs(rho.entries(1, 1)) < 1e-14);
  CHECK(oracle::linear_entropy(rho) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("partial trace input validation") {
  const oracle::FullStateVector full =
      oracle::embed_one_particle(w_state(4));
  CHECK_THROWS_AS(oracle::partial_trace(full, BlockSelection{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      oracle::partial_trace(full, BlockSelection(std::vector<int>{5})),
      std::out_of_range);
}

TEST_CASE("reduced density matrices satisfy their invariants") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 60; ++rep) {
    std::uniform_int_distribution<int> size_dist(2, 10);
    const int n = size_dist(rng);
    const OneParticleState state = random_state(rng, n);
    std::uniform_int_distribution<int> block_dist(1, n);
    const BlockSelection keep = random_block(rng, n, block_dist(rng));
    const oracle::DensityMatrix rho =
        oracle::partial_trace(oracle::embed_one_particle(state), keep);

    CHECK(rho.dimension() == (1 << keep.size()));
    CHECK(rho.hermiticity_error() < 1e-12);
    CHECK(rho.trace_error() < 1e-12);
    CHECK(rho.min_eigenvalue() > -1e-12);
  }
}

TEST_CASE("one-particle reductions are block diagonal in excitation number") {
  // scalar entry 1-s on the all-|0> kept index, an L x L one-particle
  // sector on the weight-1 indices, zero elsewhere
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 8;
    const OneParticleState state = random_state(rng, n);
    std::uniform_int_distribution<int> block_dist(1, n - 1);
    const BlockSelection keep = random_block(rng, n, block_dist(rng));
    const oracle::DensityMatrix rho =
        oracle::partial_trace(oracle::embed_one_particle(state), keep);

    double s = 0.0;
    for (int site : keep.sites()) s += state.probability(site);
    CHECK(std::abs(rho.entries(0, 0).real() - (1.0 - s)) < 1e-13);

    double one_particle_weight = 0.0;
    for (int i = 1; i < rho.dimension(); ++i) {
      const int weight = std::popcount(static_cast<unsigned>(i));
      if (weight == 1) {
        one_particle_weight += rho.entries(i, i).real();
      } else {
        // multiply-excited sectors never populate
        for (int j = 0; j < rho.dimension(); ++j) {
          CHECK(std::abs(rho.entries(i, j)) < 1e-14);
        }
      }
    }
    CHECK(std::abs(one_particle_weight - s) < 1e-13);
    CHECK(oracle::linear_entropy(rho) ==
          doctest::Approx(2.0 * (s - s * s)).epsilon(1e-12));
  }
}

TEST_CASE("purity is the same on both sides of a bipartition") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 40; ++rep) {
    std::uniform_int_distribution<int> size_dist(3, 10);
    const int n = size_dist(rng);
    const OneParticleState state = random_state(rng, n);
    std::uniform_int_distribution<int> block_dist(1, n - 1);
    const BlockSelection keep = random_block(rng, n, block_dist(rng));
    const oracle::FullStateVector full = oracle::embed_one_particle(state);
    const double entropy_block =
        oracle::linear_entropy(oracle::partial_trace(full, keep));
    const double entropy_rest = oracle::linear_entropy(
        oracle::partial_trace(full, keep.complement(n)));
    CHECK(std::abs(entropy_block - entropy_rest) < 1e-12);
  }
}

TEST_CASE("maximally mixed qubit has linear entropy 1/2") {
  oracle::DensityMatrix mixed;
  mixed.entries = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK(oracle::linear_entropy(mixed) == doctest::Approx(0.5));
}

TEST_CASE("verify_block_formula agrees on special and random cases") {
  const auto w4_report = oracle::verify_block_formula(
      w_state(4), BlockSelection(std::vector<int>{1, 2}));
  CHECK(w4_report.oracle_value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w4_report.closed_form_value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w4_report.pass);

  cvec delta(6);
  delta[2] = 1.0;
  const auto delta_report = oracle::verify_block_formula(
      OneParticleState(std::move(delta)), BlockSelection(std::vector<int>{2, 5}));
  CHECK(delta_report.oracle_value == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(delta_report.closed_form_value == doctest::Approx(0.0));
  CHECK(delta_report.pass);

  std::mt19937_64 rng(53);
  double max_diff = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const OneParticleState state = random_state(rng, 10);
    std::uniform_int_distribution<int> block_dist(1, 10);
    const BlockSelection block = random_block(rng, 10, block_dist(rng));
    const auto report = oracle::verify_block_formula(state, block);
    CHECK(report.pass);
    max_diff = std::max(max_diff, report.abs_diff);
  }
  CHECK(max_diff < 1e-10);
}

TEST_CASE("verification report CSV round trip") {
  CHECK(oracle::report_csv_header() ==
        "n_sites,block_spec,oracle_value,closed_form_value,abs_diff,pass");
  const auto report = oracle::verify_block_formula(
      w_state(4), BlockSelection(std::vector<int>{1, 2}));
  const std::string row = oracle::report_csv_row(report);
  CHECK(row.substr(0, 6) == "4,1-2,");
  CHECK(row.back() == '1');
}
