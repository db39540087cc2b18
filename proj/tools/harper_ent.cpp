// harper-ent: reproducible experiment runner for one-particle entanglement
// on the Harper chain. Subcommands: verify (randomized oracle suite),
// ground-sweep (entropy vs lambda), distribution (per-site entropy of the
// ground state), dynamics (wave-packet time series and spreading exponents).
// All outputs are CSV with '#' comment headers carrying the full parameter
// set; identical invocations produce byte-identical files.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harperent/csv.hpp"
#include "harperent/dynamics.hpp"
#include "harperent/harper.hpp"
#include "harperent/oracle.hpp"
#include "harperent/parallel.hpp"
#include "harperent/state.hpp"
#include "harperent/version.hpp"

namespace {

using namespace harperent;

constexpr int kExitSuccess = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

std::string version_line() {
  return std::string(kToolName) + " " + std::string(kToolVersion);
}

Sigma parse_sigma(const std::string& text) {
  const std::size_t slash = text.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == text.size()) {
    throw std::invalid_argument("sigma must be a rational P/Q, e.g. 89/144");
  }
  try {
    const std::int64_t num = std::stoll(text.substr(0, slash));
    const std::int64_t den = std::stoll(text.substr(slash + 1));
    return Sigma::rational(num, den);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("sigma must be a rational P/Q, e.g. 89/144");
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("sigma P/Q out of integer range");
  }
}

Boundary parse_boundary(const std::string& text) {
  if (text == "periodic") return Boundary::periodic;
  if (text == "open") return Boundary::open;
  throw std::invalid_argument("boundary must be 'periodic' or 'open'");
}

Sigma sigma_for(int n_sites, const std::string& sigma_flag) {
  if (sigma_flag.empty()) return fibonacci_sigma(n_sites);
  return parse_sigma(sigma_flag);
}

OneParticleState random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::complex<double>> amps(static_cast<std::size_t>(n));
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

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::uint64_t seed = 42;
  int max_n = 12;
  std::string out = ".";
  double tolerance = 1e-10;
  int states_per_size = 100;
};

struct IdentityCheck {
  std::string name;
  int n_sites = 0;
  int block_size = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

int run_verify(const VerifyOptions& opt) {
  if (opt.tolerance <= 0.0) {
    throw std::invalid_argument("tolerance must be > 0");
  }
  if (opt.max_n < 2 || opt.max_n > 12) {
    throw std::invalid_argument("max-n must lie in [2, 12]");
  }

  // generate every case up front with the seeded stream, then fan out
  std::mt19937_64 rng(opt.seed);
  struct Case {
    OneParticleState state;
    BlockSelection block;
    int identity_block = 0;
  };
  std::vector<Case> cases;
  for (int n = 2; n <= opt.max_n; ++n) {
    for (int rep = 0; rep < opt.states_per_size; ++rep) {
      OneParticleState state = random_state(rng, n);
      std::uniform_int_distribution<int> block_dist(1, n - 1);
      BlockSelection block = random_block(rng, n, block_dist(rng));
      std::uniform_int_distribution<int> any_size(0, n);
      cases.push_back(Case{std::move(state), std::move(block), any_size(rng)});
    }
  }

  constexpr double kIdentityTolerance = 1e-12;
  std::vector<oracle::VerificationReport> reports(cases.size());
  std::vector<std::array<IdentityCheck, 4>> identities(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const Case& c = cases[i];
    reports[i] = oracle::verify_block_formula(c.state, c.block, opt.tolerance);

    const int n = c.state.n_sites();
    const int l = c.identity_block;
    const EntanglementSummary s = summarize(c.state);
    auto check = [&](const std::string& name, int block_size, double lhs,
                     double rhs) {
      return IdentityCheck{name, n, block_size, lhs, rhs,
                           std::abs(lhs - rhs) < kIdentityTolerance};
    };
    identities[i] = {
        check("enumerated_vs_closed", l,
              average_block_entropy_enumerated(c.state, l),
              average_block_entropy(c.state, l)),
        check("entropy_vs_participation", 0, s.e_s, 1.0 - 1.0 / (n * s.p)),
        check("concurrence_vs_entropy", 0, s.mean_c2,
              4.0 / (static_cast<double>(n) * (n - 1)) * s.e_s),
        check("pairwise_route", l, bipartite_from_pairwise(n, l, s.mean_c2),
              average_block_entropy(c.state, l)),
    };
  });

  namespace fs = std::filesystem;
  const fs::path out_dir(opt.out);

  std::string oracle_csv;
  oracle_csv += "# " + version_line() + " verify\n";
  oracle_csv += "# seed=" + std::to_string(opt.seed) +
                " max_n=" + std::to_string(opt.max_n) +
                " states_per_size=" + std::to_string(opt.states_per_size) +
                " tolerance=" + csv::format_double(opt.tolerance) + "\n";
  oracle_csv += oracle::report_csv_header() + "\n";
  std::size_t oracle_failures = 0;
  double max_diff = 0.0;
  for (const auto& report : reports) {
    oracle_csv += oracle::report_csv_row(report) + "\n";
    max_diff = std::max(max_diff, report.abs_diff);
    if (!report.pass) ++oracle_failures;
  }
  csv::atomic_write(out_dir / "oracle_checks.csv", oracle_csv);

  csv::Table identity_table(out_dir / "identity_checks.csv");
  identity_table.comment(version_line() + " verify");
  identity_table.comment(
      "seed=" + std::to_string(opt.seed) + " max_n=" +
      std::to_string(opt.max_n) +
      " tolerance=" + csv::format_double(kIdentityTolerance));
  identity_table.row("check", "n_sites", "block_size", "lhs", "rhs",
                     "abs_diff", "pass");
  std::size_t identity_failures = 0;
  for (const auto& group : identities) {
    for (const IdentityCheck& c : group) {
      identity_table.row(c.name, c.n_sites, c.block_size, c.lhs, c.rhs,
                         std::abs(c.lhs - c.rhs), c.pass);
      if (!c.pass) ++identity_failures;
    }
  }
  identity_table.write();

  std::cout << "oracle checks: " << reports.size() - oracle_failures << "/"
            << reports.size()
            << " pass, max |diff| = " << csv::format_double(max_diff) << "\n";
  std::cout << "identity checks: " << 4 * identities.size() - identity_failures
            << "/" << 4 * identities.size() << " pass\n";
  std::cout << "reports: " << (out_dir / "oracle_checks.csv").string() << ", "
            << (out_dir / "identity_checks.csv").string() << "\n";

  return (oracle_failures + identity_failures) == 0 ? kExitSuccess
                                                    : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// ground-sweep

struct SweepOptions {
  std::vector<int> n_sites;
  double lambda_min = 0.0;
  double lambda_max = 2.0;
  double lambda_step = 0.02;
  std::string sigma;
  int block_size = 1;
  std::string boundary = "periodic";
  std::string out = ".";
  bool plot_script = false;
};

std::vector<double> lambda_grid(double min, double max, double step) {
  if (step <= 0.0) throw std::invalid_argument("lambda-step must be > 0");
  if (max < min) throw std::invalid_argument("lambda-max must be >= lambda-min");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double lambda = min + k * step;
    if (lambda > max + step * 1e-9) break;
    grid.push_back(lambda);
  }
  return grid;
}

int run_ground_sweep(const SweepOptions& opt) {
  if (opt.n_sites.empty()) {
    throw std::invalid_argument("at least one --n-sites value is required");
  }
  const Boundary boundary = parse_boundary(opt.boundary);
  const std::vector<double> grid =
      lambda_grid(opt.lambda_min, opt.lambda_max, opt.lambda_step);
  namespace fs = std::filesystem;
  const fs::path out_dir(opt.out);

  std::vector<std::string> csv_names;
  for (const int n : opt.n_sites) {
    const Sigma sigma = sigma_for(n, opt.sigma);
    const HarperParams base{.n_sites = n, .lambda = 0.0, .sigma = sigma,
                            .boundary = boundary};
    const std::vector<SweepRow> rows = lambda_sweep(base, grid, opt.block_size);

    const std::string name = "sweep_N" + std::to_string(n) + ".csv";
    csv::Table table(out_dir / name);
    table.comment(version_line() + " ground-sweep");
    table.comment("n_sites=" + std::to_string(n) + " sigma=" +
                  sigma.to_string() + " block_size=" +
                  std::to_string(opt.block_size) + " boundary=" +
                  to_string(boundary));
    table.comment("lambda_min=" + csv::format_double(opt.lambda_min) +
                  " lambda_max=" + csv::format_double(opt.lambda_max) +
                  " lambda_step=" + csv::format_double(opt.lambda_step));
    table.row("lambda", "n_sites", "sigma_num", "sigma_den", "block_size",
              "e_avg", "e_s", "participation", "ground_energy",
              "degenerate_flag");
    for (const SweepRow& row : rows) {
      table.row(row.lambda, n, sigma.num(), sigma.den(), opt.block_size,
                row.e_avg, row.e_s, row.participation, row.ground_energy,
                row.degenerate);
    }
    table.write();
    csv_names.push_back(name);
    std::cout << "wrote " << (out_dir / name).string() << " (" << rows.size()
              << " rows)\n";
  }

  if (opt.plot_script) {
    std::string script;
    script += "# gnuplot script: average linear entropy vs lambda\n";
    script += "set xlabel 'lambda'\n";
    script += "set ylabel 'E_{L,N-L}'\n";
    script += "set key top right\n";
    script += "plot \\\n";
    for (std::size_t i = 0; i < csv_names.size(); ++i) {
      script += "  '" + csv_names[i] + "' using 1:6 with lines title 'N=" +
                std::to_string(opt.n_sites[i]) + "'";
      script += i + 1 < csv_names.size() ? ", \\\n" : "\n";
    }
    csv::atomic_write(out_dir / "ground_sweep.gnuplot", script);
    std::cout << "wrote " << (out_dir / "ground_sweep.gnuplot").string()
              << "\n";
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// distribution

struct DistributionOptions {
  int n_sites = 0;
  double lambda = 0.0;
  std::string sigma;
  std::string boundary = "periodic";
  std::string out = ".";
};

int run_distribution(const DistributionOptions& opt) {
  const Sigma sigma = sigma_for(opt.n_sites, opt.sigma);
  const HarperParams params{.n_sites = opt.n_sites, .lambda = opt.lambda,
                            .sigma = sigma,
                            .boundary = parse_boundary(opt.boundary)};
  const GroundStateResult ground = ground_state(params);
  const std::vector<double> entropies = entropy_distribution(ground.state);

  namespace fs = std::filesystem;
  const std::string name = "distribution_N" + std::to_string(opt.n_sites) +
                           "_lambda" + csv::format_double(opt.lambda) + ".csv";
  csv::Table table(fs::path(opt.out) / name);
  table.comment(version_line() + " distribution");
  table.comment("n_sites=" + std::to_string(opt.n_sites) + " lambda=" +
                csv::format_double(opt.lambda) + " sigma=" + sigma.to_string() +
                " boundary=" + to_string(params.boundary));
  table.comment("ground_energy=" + csv::format_double(ground.energy) +
                " degenerate=" + std::string(ground.degenerate ? "1" : "0"));
  table.row("site", "site_entropy", "abs_psi_sq");
  for (int site = 1; site <= opt.n_sites; ++site) {
    table.row(site, entropies[static_cast<std::size_t>(site - 1)],
              ground.state.probability(site));
  }
  table.write();
  std::cout << "wrote " << (fs::path(opt.out) / name).string() << " ("
            << opt.n_sites << " rows)\n";
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// dynamics

struct DynamicsOptions {
  int n_sites = 0;
  std::vector<double> lambdas;
  std::string sigma;
  std::string boundary = "periodic";
  double t_max = 0.0;
  double dt = 0.0;
  std::string propagator = "spectral";
  double rk4_substep = 1e-3;
  std::optional<int> initial_site;
  std::vector<double> exponent_window;
  std::string out = ".";
};

int run_dynamics(const DynamicsOptions& opt) {
  if (opt.lambdas.empty()) {
    throw std::invalid_argument("at least one --lambda value is required");
  }
  if (!opt.exponent_window.empty() && opt.exponent_window.size() != 2) {
    throw std::invalid_argument("--exponent-window needs exactly LO,HI");
  }
  const Sigma sigma = sigma_for(opt.n_sites, opt.sigma);
  const Boundary boundary = parse_boundary(opt.boundary);

  Propagator propagator = Propagator::spectral;
  if (opt.propagator == "rk4") {
    propagator = Propagator::rk4;
  } else if (opt.propagator != "spectral") {
    throw std::invalid_argument("propagator must be 'spectral' or 'rk4'");
  }

  std::vector<double> lambdas = opt.lambdas;
  std::sort(lambdas.begin(), lambdas.end());

  struct RunResult {
    TimeSeries series;
    std::optional<ExponentFit> fit;
  };
  std::vector<RunResult> results(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const HarperParams params{.n_sites = opt.n_sites, .lambda = lambdas[i],
                              .sigma = sigma, .boundary = boundary};
    const EvolutionConfig config{.t_max = opt.t_max, .dt = opt.dt,
                                 .propagator = propagator,
                                 .rk4_substep = opt.rk4_substep,
                                 .initial_site = opt.initial_site};
    results[i].series = evolve(params, config);
    if (!opt.exponent_window.empty()) {
      results[i].fit = diffusion_exponent(
          results[i].series, opt.exponent_window[0], opt.exponent_window[1]);
    }
  });

  namespace fs = std::filesystem;
  const fs::path out_dir(opt.out);
  const int start_site =
      EvolutionConfig{.initial_site = opt.initial_site}.resolved_initial_site(
          opt.n_sites);

  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const TimeSeries& series = results[i].series;
    const std::string name =
        "dynamics_lambda" + csv::format_double(lambdas[i]) + ".csv";
    csv::Table table(out_dir / name);
    table.comment(version_line() + " dynamics");
    table.comment("n_sites=" + std::to_string(opt.n_sites) + " lambda=" +
                  csv::format_double(lambdas[i]) + " sigma=" +
                  sigma.to_string() + " boundary=" + to_string(boundary));
    std::string run_line = "t_max=" + csv::format_double(opt.t_max) + " dt=" +
                           csv::format_double(opt.dt) + " propagator=" +
                           to_string(propagator) + " initial_site=" +
                           std::to_string(start_site);
    if (propagator == Propagator::rk4) {
      run_line += " rk4_substep=" + csv::format_double(opt.rk4_substep);
    }
    table.comment(run_line);
    table.comment("boundary_hit_threshold=" +
                  csv::format_double(EvolutionConfig{}.boundary_hit_threshold) +
                  " boundary_hit_time=" +
                  (series.boundary_hit_time
                       ? csv::format_double(*series.boundary_hit_time)
                       : std::string("none")));
    table.row("t", "norm", "variance", "e_avg", "e_s", "participation",
              "boundary_hit");
    for (std::size_t k = 0; k < series.times.size(); ++k) {
      const EntanglementSummary s = summarize(series.states[k]);
      const bool hit = series.boundary_hit_time &&
                       series.times[k] >= *series.boundary_hit_time;
      table.row(series.times[k], series.norms[k], series.variances[k],
                series.entanglements[k], s.e_s, s.p, hit);
    }
    table.write();
    std::cout << "wrote " << (out_dir / name).string() << " ("
              << series.times.size() << " samples)\n";
  }

  if (!opt.exponent_window.empty()) {
    csv::Table table(out_dir / "exponents.csv");
    table.comment(version_line() + " dynamics exponent fits");
    table.comment("n_sites=" + std::to_string(opt.n_sites) + " sigma=" +
                  sigma.to_string() + " window=[" +
                  csv::format_double(opt.exponent_window[0]) + "," +
                  csv::format_double(opt.exponent_window[1]) + "]");
    table.row("lambda", "t_lo", "t_hi", "alpha", "r_squared",
              "confident_flag");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const ExponentFit& fit = *results[i].fit;
      table.row(lambdas[i], opt.exponent_window[0], opt.exponent_window[1],
                fit.alpha, fit.r_squared, fit.r_squared >= 0.9);
    }
    table.write();
    std::cout << "wrote " << (out_dir / "exponents.csv").string() << "\n";
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{version_line() +
               " - entanglement and localization of one-particle states on "
               "the Harper chain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_line());

  VerifyOptions verify_opt;
  CLI::App* verify = app.add_subcommand(
      "verify", "randomized oracle and identity verification suite");
  verify->add_option("--seed", verify_opt.seed, "RNG seed")
      ->capture_default_str();
  verify->add_option("--max-n", verify_opt.max_n, "largest lattice size")
      ->capture_default_str();
  verify->add_option("--out", verify_opt.out, "output directory")
      ->capture_default_str();
  verify->add_option("--tolerance", verify_opt.tolerance,
                     "oracle pass threshold")
      ->capture_default_str();

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand(
      "ground-sweep", "ground-state entanglement across a lambda grid");
  sweep->add_option("--n-sites", sweep_opt.n_sites, "lattice sizes")
      ->required()
      ->delimiter(',');
  sweep->add_option("--lambda-min", sweep_opt.lambda_min, "grid start")
      ->required();
  sweep->add_option("--lambda-max", sweep_opt.lambda_max, "grid end")
      ->required();
  sweep->add_option("--lambda-step", sweep_opt.lambda_step, "grid step")
      ->required();
  sweep->add_option("--sigma", sweep_opt.sigma,
                    "potential frequency P/Q (default: Fibonacci for N)");
  sweep->add_option("--block-size", sweep_opt.block_size, "block size L")
      ->capture_default_str();
  sweep->add_option("--boundary", sweep_opt.boundary, "periodic|open")
      ->capture_default_str();
  sweep->add_option("--out", sweep_opt.out, "output directory")
      ->capture_default_str();
  sweep->add_flag("--plot-script", sweep_opt.plot_script,
                  "emit a gnuplot script next to the CSVs");

  DistributionOptions dist_opt;
  CLI::App* dist = app.add_subcommand(
      "distribution", "per-site entropy distribution of the ground state");
  dist->add_option("--n-sites", dist_opt.n_sites, "lattice size")->required();
  dist->add_option("--lambda", dist_opt.lambda, "potential amplitude")
      ->required();
  dist->add_option("--sigma", dist_opt.sigma,
                   "potential frequency P/Q (default: Fibonacci for N)");
  dist->add_option("--boundary", dist_opt.boundary, "periodic|open")
      ->capture_default_str();
  dist->add_option("--out", dist_opt.out, "output directory")
      ->capture_default_str();

  DynamicsOptions dyn_opt;
  CLI::App* dyn = app.add_subcommand(
      "dynamics", "wave-packet evolution time series per lambda");
  dyn->add_option("--n-sites", dyn_opt.n_sites, "lattice size")->required();
  dyn->add_option("--lambda", dyn_opt.lambdas, "potential amplitudes")
      ->required()
      ->delimiter(',');
  dyn->add_option("--sigma", dyn_opt.sigma,
                  "potential frequency P/Q (default: Fibonacci for N)");
  dyn->add_option("--boundary", dyn_opt.boundary, "periodic|open")
      ->capture_default_str();
  dyn->add_option("--t-max", dyn_opt.t_max, "evolution time")->required();
  dyn->add_option("--dt", dyn_opt.dt, "recording interval")->required();
  dyn->add_option("--propagator", dyn_opt.propagator, "spectral|rk4")
      ->capture_default_str();
  dyn->add_option("--rk4-substep", dyn_opt.rk4_substep,
                  "integration step for rk4")
      ->capture_default_str();
  int initial_site_flag = 0;
  CLI::Option* site_option = dyn->add_option(
      "--initial-site", initial_site_flag, "packet start site (default: N/2)");
  dyn->add_option("--exponent-window", dyn_opt.exponent_window,
                  "LO,HI window for the diffusion exponent fit")
      ->delimiter(',');
  dyn->add_option("--out", dyn_opt.out, "output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }
  if (site_option->count() > 0) dyn_opt.initial_site = initial_site_flag;

  try {
    if (app.got_subcommand(verify)) return run_verify(verify_opt);
    if (app.got_subcommand(sweep)) return run_ground_sweep(sweep_opt);
    if (app.got_subcommand(dist)) return run_distribution(dist_opt);
    if (app.got_subcommand(dyn)) return run_dynamics(dyn_opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}
