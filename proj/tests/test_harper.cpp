#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "harperent/harper.hpp"
#include "harperent/state.hpp"

using namespace harperent;

namespace {

HarperParams params_for(int n, double lambda, Sigma sigma,
                        Boundary boundary = Boundary::periodic) {
  return HarperParams{.n_sites = n, .lambda = lambda, .sigma = sigma,
                      .boundary = boundary};
}

}  // namespace

TEST_CASE("sigma reduces to lowest terms and keeps exact phases") {
  const Sigma half = Sigma::rational(4, 8);
  CHECK(half.num() == 1);
  CHECK(half.den() == 2);
  CHECK(half.value() == doctest::Approx(0.5));

  const Sigma fib = Sigma::rational(89, 144);
  for (int n = 1; n <= 10; ++n) {
    // exact q-periodicity of the reduced angle
    CHECK(fib.angle(n) == fib.angle(n + 144));
  }
  CHECK(fib.to_string() == "89/144");

  const Sigma golden = Sigma::real(0.5 * (std::sqrt(5.0) - 1.0));
  CHECK_FALSE(golden.is_rational());
  CHECK_THROWS_AS(golden.num(), std::logic_error);
  CHECK_THROWS_AS(Sigma::rational(1, 0), std::invalid_argument);
}

TEST_CASE("potential values") {
  const HarperParams free_chain = params_for(5, 0.0, Sigma::rational(1, 3));
  for (int n = 1; n <= 5; ++n) CHECK(potential(free_chain, n) == 0.0);

  const HarperParams half = params_for(4, 1.0, Sigma::rational(1, 2));
  CHECK(potential(half, 1) == doctest::Approx(-1.0).epsilon(1e-15));

  const HarperParams fib = params_for(144, 2.0, Sigma::rational(89, 144));
  CHECK(potential(fib, 144) == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(potential(fib, 0), std::out_of_range);
  CHECK_THROWS_AS(potential(fib, 145), std::out_of_range);
  CHECK_THROWS_AS(potential(params_for(2, 1.0, Sigma::rational(1, 2)), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(potential(params_for(5, -1.0, Sigma::rational(1, 2)), 1),
                  std::invalid_argument);
}

TEST_CASE("potential is exactly q-periodic for rational sigma") {
  const HarperParams params = params_for(144, 1.7, Sigma::rational(34, 55));
  for (int n = 1; n + 55 <= 144; ++n) {
    CHECK(potential(params, n) == potential(params, n + 55));
  }
}

TEST_CASE("hamiltonian matrix structure") {
  const HarperParams open_chain =
      params_for(3, 0.0, Sigma::rational(1, 3), Boundary::open);
  const Eigen::MatrixXd h_open = hamiltonian_matrix(open_chain);
  Eigen::MatrixXd expected(3, 3);
  expected << 0.0, 0.5, 0.0,
              0.5, 0.0, 0.5,
              0.0, 0.5, 0.0;
  CHECK((h_open - expected).cwiseAbs().maxCoeff() == 0.0);

  const HarperParams ring = params_for(3, 0.0, Sigma::rational(1, 3));
  const Eigen::MatrixXd h_ring = hamiltonian_matrix(ring);
  CHECK(h_ring(0, 2) == 0.5);
  CHECK(h_ring(2, 0) == 0.5);
  CHECK(h_ring == h_ring.transpose());

  // 3-cycle eigenvalues: cos(2 pi m / 3) -> {1, -1/2, -1/2}
  const SpectrumResult spectrum = full_spectrum(ring);
  CHECK(spectrum.eigenvalues(0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(spectrum.eigenvalues(1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(spectrum.eigenvalues(2) == doctest::Approx(1.0).epsilon(1e-12));

  const HarperParams quasi = params_for(21, 0.8, fibonacci_sigma(21));
  const Eigen::MatrixXd h = hamiltonian_matrix(quasi);
  CHECK(h == h.transpose());
  for (int i = 0; i < 21; ++i) {
    CHECK(h(i, i) == potential(quasi, i + 1));
  }
}

TEST_CASE("apply_hamiltonian matches the dense matrix") {
  for (Boundary boundary : {Boundary::periodic, Boundary::open}) {
    const HarperParams params = params_for(13, 1.3, fibonacci_sigma(13), boundary);
    const Eigen::MatrixXd h = hamiltonian_matrix(params);
    const std::vector<double> v = potential_vector(params);
    Eigen::VectorXcd x(13);
    for (int i = 0; i < 13; ++i) x(i) = std::complex<double>(std::sin(i + 1.0), std::cos(2.0 * i));
    Eigen::VectorXcd out;
    apply_hamiltonian(params, v, x, out);
    CHECK((out - h * x).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("free periodic ring reproduces the circulant spectrum") {
  const int n = 16;
  const SpectrumResult spectrum =
      full_spectrum(params_for(n, 0.0, Sigma::rational(1, 2)));

  std::vector<double> analytic;
  for (int m = 0; m < n; ++m) {
    analytic.push_back(std::cos(2.0 * std::numbers::pi * m / n));
  }
  std::sort(analytic.begin(), analytic.end());
  for (int k = 0; k < n; ++k) {
    CHECK(std::abs(spectrum.eigenvalues(k) - analytic[static_cast<std::size_t>(k)]) <
          1e-10);
  }
  CHECK(spectrum.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
  // minimum at m = N/2 is simple for even N
  CHECK(spectrum.eigenvalues(1) - spectrum.eigenvalues(0) > 1e-3);
}

TEST_CASE("spectrum invariants: residuals, orthonormality, determinism") {
  const HarperParams params = params_for(144, 1.0, Sigma::rational(89, 144));
  const SpectrumResult spectrum = full_spectrum(params);
  const Eigen::MatrixXd h = hamiltonian_matrix(params);

  CHECK(std::is_sorted(spectrum.eigenvalues.data(),
                       spectrum.eigenvalues.data() + spectrum.eigenvalues.size()));
  for (int k = 0; k < params.n_sites; ++k) {
    const double residual =
        (h * spectrum.eigenvectors.col(k) -
         spectrum.eigenvalues(k) * spectrum.eigenvectors.col(k))
            .norm();
    CHECK(residual < 1e-9);
  }
  const Eigen::MatrixXd gram =
      spectrum.eigenvectors.transpose() * spectrum.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(144, 144)).cwiseAbs().maxCoeff() <
        1e-10);

  const SpectrumResult again = full_spectrum(params);
  CHECK(spectrum.eigenvalues == again.eigenvalues);
  CHECK(spectrum.eigenvectors == again.eigenvectors);

  CHECK_THROWS_AS(full_spectrum(params_for(5000, 0.0, Sigma::rational(1, 2))),
                  std::invalid_argument);
}

TEST_CASE("deep wells pin the spectrum to the sorted potential") {
  // even q keeps the mirror-degenerate wells non-adjacent, so only the
  // second-order O(hopping^2/gap) shifts survive at large lambda
  const HarperParams params = params_for(8, 1e3, fibonacci_sigma(8));
  const SpectrumResult spectrum = full_spectrum(params);
  std::vector<double> wells = potential_vector(params);
  std::sort(wells.begin(), wells.end());
  for (int k = 0; k < 8; ++k) {
    CHECK(std::abs(spectrum.eigenvalues(k) - wells[static_cast<std::size_t>(k)]) <
          0.05);
  }

  // odd q has adjacent equal wells; Weyl still bounds every shift by the
  // hopping norm
  const SpectrumResult odd = full_spectrum(params_for(13, 1e3, fibonacci_sigma(13)));
  std::vector<double> odd_wells = potential_vector(params_for(13, 1e3, fibonacci_sigma(13)));
  std::sort(odd_wells.begin(), odd_wells.end());
  for (int k = 0; k < 13; ++k) {
    CHECK(std::abs(odd.eigenvalues(k) - odd_wells[static_cast<std::size_t>(k)]) <=
          1.0 + 1e-9);
  }
}

TEST_CASE("ground state of the free even ring is uniform") {
  const GroundStateResult ground =
      ground_state(params_for(16, 0.0, Sigma::rational(1, 2)));
  CHECK(ground.energy == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_FALSE(ground.degenerate);
  for (int site = 1; site <= 16; ++site) {
    CHECK(std::abs(ground.state.probability(site) - 1.0 / 16.0) < 1e-10);
  }
  CHECK(participation_ratio(ground.state) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("free odd ring reports its degenerate ground pair") {
  const GroundStateResult ground =
      ground_state(params_for(5, 0.0, Sigma::rational(1, 2)));
  CHECK(ground.degenerate);
}

TEST_CASE("deep-well ground state localizes at the potential minimum") {
  const HarperParams params = params_for(144, 1e3, Sigma::rational(89, 144));
  const std::vector<double> v = potential_vector(params);
  const auto min_it = std::min_element(v.begin(), v.end());
  const int min_site = static_cast<int>(min_it - v.begin()) + 1;

  const GroundStateResult ground = ground_state(params);
  CHECK(ground.state.probability(min_site) > 0.99);
  CHECK(ground.energy <= *min_it + 1.0);           // variational bound
  CHECK(ground.energy >= *min_it - 1.0 - 1e-9);    // Gershgorin
}

TEST_CASE("fibonacci sigma") {
  CHECK(fibonacci_sigma(144).num() == 89);
  CHECK(fibonacci_sigma(144).den() == 144);
  CHECK(fibonacci_sigma(55).num() == 34);
  CHECK(fibonacci_sigma(55).den() == 55);
  CHECK(fibonacci_sigma(3).num() == 2);
  CHECK(fibonacci_sigma(3).den() == 3);
  CHECK(fibonacci_sigma(8).num() == 5);

  CHECK_THROWS_WITH_AS(fibonacci_sigma(100),
                       doctest::Contains("nearest: 89, 144"),
                       std::invalid_argument);
  CHECK_THROWS_AS(fibonacci_sigma(2), std::invalid_argument);
  CHECK_THROWS_AS(fibonacci_sigma(4), std::invalid_argument);
}

TEST_CASE("lambda sweep crosses the localization transition") {
  const HarperParams base = params_for(144, 0.0, fibonacci_sigma(144));
  std::vector<double> grid;
  for (double lambda = 0.0; lambda <= 2.0 + 1e-9; lambda += 0.1) {
    grid.push_back(lambda);
  }
  const std::vector<SweepRow> rows = lambda_sweep(base, grid, 1);
  REQUIRE(rows.size() == grid.size());
  CHECK(std::is_sorted(rows.begin(), rows.end(),
                       [](const SweepRow& a, const SweepRow& b) {
                         return a.lambda < b.lambda;
                       }));

  // free ring row: uniform ground state -> (2/N)(1 - 1/N)
  const double uniform_value = 2.0 / 144.0 * (1.0 - 1.0 / 144.0);
  CHECK(rows.front().e_avg == doctest::Approx(uniform_value).epsilon(1e-10));

  double extended_mean = 0.0, localized_mean = 0.0;
  int n_ext = 0, n_loc = 0;
  for (const SweepRow& row : rows) {
    if (row.lambda <= 0.9) {
      extended_mean += row.e_avg;
      ++n_ext;
    } else if (row.lambda >= 1.1) {
      localized_mean += row.e_avg;
      ++n_loc;
    }
  }
  extended_mean /= n_ext;
  localized_mean /= n_loc;
  CHECK(extended_mean > 5.0 * localized_mean);

  CHECK_THROWS_AS(lambda_sweep(base, std::vector<double>{}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(lambda_sweep(base, grid, 200), std::invalid_argument);
}

TEST_CASE("site entropies collapse onto a few sites past the transition") {
  const GroundStateResult ground =
      ground_state(params_for(144, 2.0, Sigma::rational(89, 144)));
  std::vector<double> dist = entropy_distribution(ground.state);
  double total = 0.0;
  for (double e : dist) total += e;
  std::sort(dist.begin(), dist.end(), std::greater<>());
  double top5 = 0.0;
  for (int i = 0; i < 5; ++i) top5 += dist[static_cast<std::size_t>(i)];
  CHECK(top5 > 0.9 * total);
}
