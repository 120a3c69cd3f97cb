// Command-line surface: discriminant curves, eigenvalue tables, stability
// bands, Bloch solutions and Darboux partner data, emitted as plot-ready
// CSV (or JSON for tables).  Exit codes: 0 success, 1 usage error,
// 2 numerical or validation failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hillspps/darboux.hpp"
#include "hillspps/pipeline.hpp"
#include "hillspps/spectrum.hpp"

namespace {

using hill::Real;

struct ProblemChoice {
  std::optional<double> mathieu_r;
  bool free_problem = false;
  std::string config_path;
  long grid_points = long(hill::defaults::grid_points);
  int order = hill::defaults::series_order;
  bool json_output = false;

  hill::SLProblem build() const {
    const hill::Index n = grid_points;
    if (mathieu_r) return hill::mathieu(Real(*mathieu_r), n);
    if (free_problem) return hill::free_problem(n);
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return hill::from_config(buffer.str(), n);
  }
};

void add_common_options(CLI::App* cmd, ProblemChoice& choice) {
  auto* m = cmd->add_option("--mathieu", choice.mathieu_r, "Mathieu problem with parameter r");
  auto* f = cmd->add_flag("--free", choice.free_problem, "free problem p=1, q=0, T=pi");
  auto* c = cmd->add_option("--config", choice.config_path, "problem config file (JSON)");
  m->excludes(f)->excludes(c);
  f->excludes(c);
  cmd->add_option("--grid", choice.grid_points, "grid nodes (odd)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--order", choice.order, "series truncation order N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--json", choice.json_output, "emit JSON instead of a text table");
  cmd->callback([&choice, m, f, c]() {
    if ((m->count() == 0) && (f->count() == 0) && (c->count() == 0))
      throw CLI::RequiredError("one of --mathieu / --free / --config");
  });
}

std::pair<Real, Real> parse_range(const std::string& text) {
  const auto colon = text.find(':', 1);  // skip a leading minus sign
  if (colon == std::string::npos)
    throw CLI::ValidationError("--range", "expected <min>:<max>");
  try {
    const Real lo = std::stold(text.substr(0, colon));
    const Real hi = std::stold(text.substr(colon + 1));
    return {lo, hi};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--range", "expected numeric <min>:<max>");
  }
}

void print_header(std::ostream& os, const ProblemChoice& choice,
                  const hill::BandEdgeData& data) {
  os << "# problem: " << data.problem.name << "\n";
  os << "# grid: " << choice.grid_points << "  order: " << choice.order << "\n";
  os << "# lambda0: " << double(data.lambda0) << "\n";
}

int run_discriminant(const ProblemChoice& choice, const std::string& range, long samples) {
  const auto [lo, hi] = parse_range(range);
  if (!(lo < hi)) throw std::runtime_error("empty lambda range");
  const auto data = hill::analyze_band_edge(choice.build(), choice.order);

  std::ostringstream out;
  out.precision(15);
  print_header(out, choice, data);
  out << "lambda,D\n";
  for (long i = 0; i < samples; ++i) {
    const Real lam = lo + (hi - lo) * Real(i) / Real(samples - 1);
    if (!hill::within_budget(data.series, lam)) {
      std::cout << out.str();
      std::cerr << "series budget exceeded at lambda = " << double(lam) << "\n";
      return 2;
    }
    out << double(lam) << "," << double(hill::eval(data.series, lam)) << "\n";
  }
  std::cout << out.str();
  return 0;
}

int run_eigenvalues(const ProblemChoice& choice, int count) {
  const auto data = hill::analyze_band_edge(choice.build(), choice.order);

  std::vector<hill::Eigenvalue> values;
  int exit_code = 0;
  try {
    values = hill::eigenvalues(data.series, count);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    exit_code = 2;  // emit the partial table below
    for (int c = count - 1; c >= 1 && values.empty(); --c) {
      try {
        values = hill::eigenvalues(data.series, c);
      } catch (const std::exception&) {
      }
    }
  }

  auto residual = [&data](const hill::Eigenvalue& e) {
    const Real target = e.boundary == hill::Boundary::periodic ? Real(2) : Real(-2);
    return std::abs(hill::eval(data.series, e.value) - target);
  };

  if (choice.json_output) {
    nlohmann::json params;
    params["grid"] = choice.grid_points;
    params["order"] = choice.order;
    params["lambda0"] = double(data.lambda0);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : values) {
      rows.push_back({{"problem", data.problem.name},
                      {"params", params},
                      {"n", e.index},
                      {"lambda", double(e.value)},
                      {"boundary", hill::to_string(e.boundary)},
                      {"residual", double(residual(e))}});
    }
    std::cout << rows.dump(2) << "\n";
  } else {
    std::cout.precision(15);
    print_header(std::cout, choice, data);
    std::cout << "n,lambda,boundary,residual\n";
    for (const auto& e : values) {
      std::cout << e.index << "," << double(e.value) << "," << hill::to_string(e.boundary)
                << "," << double(residual(e)) << "\n";
    }
  }
  return exit_code;
}

int run_bands(const ProblemChoice& choice, const std::string& range) {
  const auto [lo, hi] = parse_range(range);
  const auto data = hill::analyze_band_edge(choice.build(), choice.order);
  const auto bands = hill::band_structure(data.series, lo, hi);

  std::cout.precision(15);
  print_header(std::cout, choice, data);
  std::cout << "type,lambda_lo,lambda_hi\n";
  std::size_t si = 0, ui = 0;
  // interleave by position to keep the output ordered in lambda
  while (si < bands.stable.size() || ui < bands.unstable.size()) {
    const bool take_stable =
        ui >= bands.unstable.size() ||
        (si < bands.stable.size() && bands.stable[si].lo < bands.unstable[ui].lo);
    const auto& iv = take_stable ? bands.stable[si++] : bands.unstable[ui++];
    std::cout << (take_stable ? "stable" : "unstable") << "," << double(iv.lo) << ","
              << double(iv.hi) << "\n";
  }
  return 0;
}

int run_bloch(const ProblemChoice& choice, double lambda, double x_max) {
  const auto data = hill::analyze_band_edge(choice.build(), choice.order);
  const auto pair = hill::fundamental_solutions(data.coefficients, data.problem, Real(lambda));
  const auto bloch = hill::self_matching(pair, data.problem);

  std::cout.precision(15);
  print_header(std::cout, choice, data);
  std::cout << "# lambda: " << lambda << "  D: " << double(hill::eval(data.series, Real(lambda)))
            << "\n";
  std::cout << "x,re_f_plus,im_f_plus,re_f_minus,im_f_minus\n";
  const Real h = data.problem.grid.spacing();
  for (Real x = 0; x <= Real(x_max); x += h) {
    const auto fp = hill::bloch_solution(bloch, pair, x, +1);
    const auto fm = hill::bloch_solution(bloch, pair, x, -1);
    std::cout << double(x) << "," << double(fp.real()) << "," << double(fp.imag()) << ","
              << double(fm.real()) << "," << double(fm.imag()) << "\n";
  }
  return 0;
}

int run_darboux(const ProblemChoice& choice) {
  const auto data = hill::analyze_band_edge(choice.build(), choice.order);
  const auto partner =
      hill::factorize(data.problem, data.ground.f, data.ground.f_prime);

  Real max_dev = 0;
  constexpr int probes = 50;
  for (int i = 0; i < probes; ++i) {
    const Real lam = data.lambda0 - 1 + 31 * Real(i) / Real(probes - 1);
    const auto pair = hill::partner_solutions(partner, data.coefficients, lam);
    const Real direct = pair.f1.back() + pair.f2_prime.back();
    max_dev = std::max(max_dev, std::abs(direct - hill::eval(data.series, lam)));
  }

  std::cout.precision(15);
  print_header(std::cout, choice, data);
  std::cout << "# max |D - D_partner| over " << probes << " probes: " << double(max_dev)
            << "\n";
  std::cout << "x,phi,q_tilde,f0_tilde\n";
  const auto& grid = data.problem.grid;
  for (hill::Index i = 0; i < grid.n_points; ++i) {
    std::cout << double(grid.node(i)) << "," << double(partner.phi.values[i]) << ","
              << double(partner.q_tilde.values[i]) << ","
              << double(partner.f0_tilde.values[i]) << "\n";
  }
  if (max_dev > Real(1e-5L)) {
    std::cerr << "discriminant invariance check failed: max deviation " << double(max_dev)
              << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band spectra of periodic Sturm-Liouville problems via spectral "
               "parameter power series"};
  app.require_subcommand(1);

  ProblemChoice choice;
  std::string range = "0:10";
  long samples = 500;
  int count = 11;
  double lambda = 0, x_max = 10;

  auto* disc = app.add_subcommand("discriminant", "sample D_N(lambda) as CSV");
  add_common_options(disc, choice);
  disc->add_option("--range", range, "lambda range <min>:<max>")->required();
  disc->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* eig = app.add_subcommand("eigenvalues", "band-edge eigenvalue table");
  add_common_options(eig, choice);
  eig->add_option("--count", count, "number of eigenvalues")->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* bands = app.add_subcommand("bands", "stability intervals as CSV");
  add_common_options(bands, choice);
  bands->add_option("--range", range, "lambda range <min>:<max>")->required();

  auto* bloch = app.add_subcommand("bloch", "quasiperiodic Bloch solutions as CSV");
  add_common_options(bloch, choice);
  bloch->add_option("--lambda", lambda, "spectral parameter")->required();
  bloch->add_option("--xmax", x_max, "sample x in [0, xmax]")->capture_default_str();

  auto* darboux = app.add_subcommand("darboux", "partner potential and invariance report");
  add_common_options(darboux, choice);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (disc->parsed()) return run_discriminant(choice, range, samples);
    if (eig->parsed()) return run_eigenvalues(choice, count);
    if (bands->parsed()) return run_bands(choice, range);
    if (bloch->parsed()) return run_bloch(choice, lambda, x_max);
    if (darboux->parsed()) return run_darboux(choice);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
