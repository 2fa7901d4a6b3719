#include <CLI11.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fdrisk/bounds.hpp"
#include "fdrisk/cli/sweep.hpp"
#include "fdrisk/divergences.hpp"
#include "fdrisk/numerics.hpp"
#include "fdrisk/quadrature.hpp"
#include "fdrisk/simulation.hpp"
#include "oracles.hpp"

using namespace fdrisk;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out.empty() ? "none" : out;
}

constexpr double kSigmaWSq = 1.0;
constexpr double kSigmaSq = 2.0;

Outcome chi_squared_bernoulli_bound() {
  DivergenceCache cache;
  double worst = 0.0;
  std::vector<int> below_floor;
  for (int n = 1; n <= 50; ++n) {
    const Model model = BernoulliModel(n);
    const auto bound = fixed_bound(model, Generator::chi_squared(), cache);
    worst = std::max(worst, rel(bound.value, 2.0 / 27.0 / oracle::chi_squared_plus_one(n)));
    if (bound.value < 7.0 / (72.0 * std::sqrt(std::numbers::pi * n))) below_floor.push_back(n);
  }
  return {worst <= 1e-12 && below_floor.empty(),
          "max rel err " + fmt(worst) + " (tol 1e-12); n below 7/(72 sqrt(pi n)): " + join_ints(below_floor)};
}

Outcome gaussian_three_halves_bound() {
  DivergenceCache cache;
  double worst_gap = 0.0;
  std::vector<int> below_floor;
  const double root_two_pi = std::sqrt(2.0 * std::numbers::pi);
  for (int n = 1; n <= 50; ++n) {
    const Model model = GaussianModel(n, kSigmaWSq, kSigmaSq);
    const auto bound = fixed_bound(model, Generator::hellinger(1.5), cache);
    const double r = n * kSigmaWSq / kSigmaSq;
    const double floor = 81.0 * root_two_pi / 2048.0 * std::sqrt(kSigmaWSq / (1.0 + r));
    const double gap = 27.0 * std::sqrt(2.0 * std::numbers::pi * kSigmaWSq) / 2048.0 / std::pow(1.0 + r, 1.5);
    if (bound.value < floor) below_floor.push_back(n);
    worst_gap = std::max(worst_gap, rel(bound.value - floor, gap));
  }
  return {worst_gap <= 1e-10 && below_floor.empty(),
          "gap to 81 sqrt(2 pi)/2048 sqrt(sW2/(1+r)) vs 27 sqrt(2 pi sW2)/2048 (1+r)^-3/2: max rel err " +
              fmt(worst_gap) + " (tol 1e-10); n below floor: " + join_ints(below_floor)};
}

Outcome quadrature_vs_closed_forms() {
  double worst_bernoulli = 0.0;
  for (int n = 1; n <= 10; ++n) {
    for (double p : {1.5, 2.0, 3.0}) {
      const auto numeric = f_mi_numeric(Model{BernoulliModel(n)}, Generator::hellinger(p));
      worst_bernoulli =
          std::max(worst_bernoulli, rel(numeric.value, hellinger_bernoulli_closed_form(BernoulliModel(n), p).value));
    }
  }
  double worst_gaussian = 0.0;
  for (double p : {1.5, 2.0}) {
    for (double ratio : {0.5, 1.0, 2.0}) {
      const auto numeric = f_mi_numeric(Model{GaussianModel(1, ratio, 1.0)}, Generator::hellinger(p));
      worst_gaussian = std::max(worst_gaussian, rel(numeric.value, hellinger_gaussian_closed_form(ratio, 1.0, p).value));
    }
  }
  return {worst_bernoulli <= 1e-8 && worst_gaussian <= 1e-6,
          "Bernoulli n<=10, p in {1.5,2,3}: " + fmt(worst_bernoulli) + " (tol 1e-8); Gaussian p in {1.5,2}, " +
              "sW2/s2 in {0.5,1,2}: " + fmt(worst_gaussian) + " (tol 1e-6)"};
}

Outcome hockey_stick_instances() {
  DivergenceCache cache;
  const Generator g = Generator::hockey_stick(0.75, 2.2);
  double worst_formula = 0.0;
  for (int n = 1; n <= 50; ++n) {
    for (const Model model : {Model{BernoulliModel(n)}, Model{GaussianModel(n, kSigmaWSq, kSigmaSq)}}) {
      const double e = e_beta_gamma_numeric(model, 0.75, 2.2).value;
      const double scale =
          std::holds_alternative<BernoulliModel>(model) ? 1.0 : std::sqrt(2.0 * std::numbers::pi * kSigmaWSq);
      const double expected = 5.0 * scale * (0.75 - e) * (0.75 - e) / 66.0;
      worst_formula = std::max(worst_formula, rel(fixed_bound(model, g, cache).value, expected));
    }
  }
  double worst_z = 0.0;
  for (int n : {1, 5, 10}) {
    for (const Model model : {Model{BernoulliModel(n)}, Model{GaussianModel(n, kSigmaWSq, kSigmaSq)}}) {
      const double e = e_beta_gamma_numeric(model, 0.75, 2.2).value;
      const auto mc = simulate_f_divergence(model, g, 10'000'000, cli::seed_for(cli::kDefaultSeed, n));
      worst_z = std::max(worst_z, std::fabs(e - mc.mean) / mc.std_error);
    }
  }
  return {worst_formula <= 1e-10 && worst_z <= 3.0,
          "bound vs 5 c' (0.75-E)^2/66: max rel err " + fmt(worst_formula) +
              " (tol 1e-10); E vs 1e7-sample MC: max |z| " + fmt(worst_z) + " (tol 3)"};
}

Outcome soundness() {
  std::size_t checked = 0;
  std::vector<std::string> violations;
  double worst_margin = -1e300;
  for (auto kind : {cli::ModelKind::bernoulli, cli::ModelKind::gaussian}) {
    for (auto mode : {cli::ParameterMode::fixed, cli::ParameterMode::optimized}) {
      cli::SweepConfig config;
      config.model.kind = kind;
      config.mode = mode;
      config.oracle = true;
      config.samples = 1'000'000;
      for (const auto& row : cli::run_sweep(config).rows) {
        const double limit = row.oracle->value + 3.0 * row.oracle->std_error;
        for (const auto* bound : {&row.hellinger, &row.hockey_stick}) {
          ++checked;
          worst_margin = std::max(worst_margin, (*bound)->value - limit);
          if ((*bound)->value > limit) {
            violations.push_back((*bound)->generator.describe() + " n=" + std::to_string(row.n));
          }
        }
      }
    }
  }
  std::string detail = std::to_string(checked) + " bounds checked, max(bound - (risk + 3 se)) = " + fmt(worst_margin);
  if (!violations.empty()) detail += "; violations: " + violations.front() + " and " + std::to_string(violations.size() - 1) + " more";
  return {violations.empty() && checked == 400, detail};
}

Outcome appendix_identities() {
  std::vector<int> identity_failures;
  for (unsigned n = 0; n <= 50; ++n) {
    if (!combinatorial_identity_check(n)) identity_failures.push_back(static_cast<int>(n));
  }
  const auto chi_plus_one = [](int n) {
    return (n + 1.0) / (2.0 * n + 1.0) * std::exp(n * std::log(4.0) - log_binomial(2.0 * n, n));
  };
  std::vector<int> upper_failures;
  int literal_failures = 0;
  int corrected_failures = 0;
  for (int n = 1; n <= 10'000; ++n) {
    if (chi_plus_one(n) > 16.0 * std::sqrt(std::numbers::pi * n) / 21.0) upper_failures.push_back(n);
    const double log_ratio = log_binomial(2.0 * n, n) - n * std::log(4.0) + 0.5 * std::log(std::numbers::pi * n);
    if (log_ratio < std::log(8.0 / 7.0)) ++literal_failures;
    if (log_ratio < std::log(7.0 / 8.0)) ++corrected_failures;
  }
  const double engine = chi_squared_bernoulli(BernoulliModel(10'000)).value;
  const double consistency = rel(engine, chi_plus_one(10'000));
  const double ratio = engine / (std::sqrt(std::numbers::pi * 10'000.0) / 2.0);
  const bool pass = identity_failures.empty() && upper_failures.empty() && consistency <= 1e-10 &&
                    std::fabs(ratio - 1.0) <= 1e-3 && literal_failures == 0;
  return {pass, "sum_k C(2k,k)C(2n-2k,n-k) = 4^n failures n<=50: " + join_ints(identity_failures) +
                    "; chi^2+1 > 16 sqrt(pi n)/21 for n<=1e4: " + std::to_string(upper_failures.size()) +
                    "; engine vs closed form at n=1e4: " + fmt(consistency) +
                    "; (chi^2+1)/(sqrt(pi n)/2) at n=1e4: " + std::to_string(ratio) +
                    "; C(2n,n) < (8/7) 4^n/sqrt(pi n) for " + std::to_string(literal_failures) +
                    " of 1e4 n (with 7/8: " + std::to_string(corrected_failures) + ")"};
}

Outcome rho_optimizer() {
  using Quad = boost::multiprecision::cpp_bin_float_quad;
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> log_c(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> t_dist(0.1, 4.0);
  std::uniform_real_distribution<double> b_dist(0.0, 0.95);
  double worst_value = 0.0;
  double worst_rho = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double c = std::exp(log_c(rng));
    const double t = t_dist(rng);
    const double b = b_dist(rng);
    const auto h = [&](const Quad& rho) { return rho * (1 - Quad(c) * pow(rho, Quad(t)) - Quad(b)); };
    const Quad vacuous = pow(Quad(1 - b) / Quad(c), 1 / Quad(t));
    const auto golden = golden_section_maximize<Quad>(h, Quad(0), vacuous, Quad(1e-25), 4000);
    const auto closed = optimize_rho_closed_form(c, t, b);
    worst_value = std::max(worst_value, rel(closed.value, static_cast<double>(golden.value)));
    worst_rho = std::max(worst_rho, rel(closed.rho_star, static_cast<double>(golden.argmax)));
  }
  return {worst_value <= 1e-10 && worst_rho <= 1e-10,
          "1000 random (c,t,b): max rel err value " + fmt(worst_value) + ", rho* " + fmt(worst_rho) + " (tol 1e-10)"};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream fields(line);
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

Outcome figure_ordering() {
  cli::SweepConfig config;
  const auto rows = parse_csv(cli::to_csv(cli::run_sweep(config)));
  if (rows.size() != 51 || rows.front().at(1) != "hellinger_bound" || rows.front().at(2) != "hockey_stick_bound") {
    return {false, "unexpected sweep CSV shape"};
  }
  std::vector<int> order_failures;
  std::vector<int> monotone_failures;
  double prev_h = INFINITY;
  double prev_hs = INFINITY;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int n = std::stoi(rows[i].at(0));
    const double h = std::stod(rows[i].at(1));
    const double hs = std::stod(rows[i].at(2));
    if (hs < h) order_failures.push_back(n);
    if (!(h < prev_h) || !(hs < prev_hs)) monotone_failures.push_back(n);
    prev_h = h;
    prev_hs = hs;
  }
  return {order_failures.empty() && monotone_failures.empty(),
          "hockey-stick(0.75,2.2) < Hellinger(p=2) at n: " + join_ints(order_failures) +
              "; non-decreasing at n: " + join_ints(monotone_failures)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism(const std::string& cli_path) {
  cli::SweepConfig config;
  config.model.kind = cli::ModelKind::gaussian;
  config.n_range = {1, 10};
  config.oracle = true;
  config.samples = 100'000;
  bool same = cli::to_csv(cli::run_sweep(config)) == cli::to_csv(cli::run_sweep(config));
  config.model.kind = cli::ModelKind::bernoulli;
  same = same && cli::to_csv(cli::run_sweep(config)) == cli::to_csv(cli::run_sweep(config));
  const auto v1 = cli::run_validation(config);
  const auto v2 = cli::run_validation(config);
  same = same && cli::reports_to_csv(v1.reports) == cli::reports_to_csv(v2.reports) && v1.all_pass() == v2.all_pass();
  std::string detail = std::string("in-process sweep/validate ") + (same ? "identical" : "differ");
  if (cli_path.empty()) return {same, detail + "; CLI not exercised"};

  const auto dir = std::filesystem::temp_directory_path() / "fdrisk_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> commands{
      "sweep --model bernoulli --n-range 1..10 --oracle --samples 100000 --seed 11",
      "sweep --model gaussian --n-range 1..10 --optimize --oracle --samples 100000 --seed 11",
      "validate --model bernoulli --n-range 1..4 --samples 100000 --seed 11",
      "validate --model bernoulli --n-range 1..2 --samples 100000 --seed 11 --self-test-negate",
  };
  bool cli_same = true;
  std::string codes;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outputs[2];
    int exit_codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto csv = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".csv");
      std::filesystem::remove(csv);
      exit_codes[rep] = run_command("'" + cli_path + "' " + commands[i] + " --csv '" + csv.string() + "' > /dev/null");
      outputs[rep] = slurp(csv);
    }
    cli_same = cli_same && !outputs[0].empty() && outputs[0] == outputs[1] && exit_codes[0] == exit_codes[1];
    codes += (i ? "," : "") + std::to_string(exit_codes[0]);
  }
  const bool expected_codes = codes == "0,0,0,1";
  return {same && cli_same && expected_codes,
          detail + "; CLI CSV " + (cli_same ? "byte-identical" : "differs") + ", exit codes " + codes};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the fdrisk engine"};
  int only = 0;
  std::string cli_path;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--cli", cli_path, "Path to the fdrisk executable, for the determinism check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "Bernoulli p=2 bound = (2/27)/(chi^2+1) and >= 7/(72 sqrt(pi n)), n=1..50", 1.0,
       chi_squared_bernoulli_bound},
      {2, "Gaussian p=3/2 bound >= 81 sqrt(2 pi)/2048 sqrt(sW2/(1+n sW2/s2)) with exact gap", 1.0,
       gaussian_three_halves_bound},
      {3, "Hellinger closed forms agree with generic quadrature", 30.0, quadrature_vs_closed_forms},
      {4, "hockey-stick(0.75,2.2) bound = 5 c'(0.75-E)^2/66, E certified by Monte Carlo", 120.0,
       hockey_stick_instances},
      {5, "every fixed and optimized bound <= oracle Bayes risk, both models, n=1..50", 120.0, soundness},
      {6, "central-binomial identity and inequalities", 5.0, appendix_identities},
      {7, "closed-form rho maximizer agrees with extended-precision golden section", 5.0, rho_optimizer},
      {8, "sweep CSV: hockey-stick >= Hellinger(p=2), both decreasing in n", 120.0, figure_ordering},
      {9, "repeated sweep/validate runs are byte-identical", 600.0, [&] { return determinism(cli_path); }},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= criterion.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failures;
    std::cout << (pass ? "PASS" : "FAIL") << " C" << criterion.id << " " << criterion.title << " | "
              << outcome.detail << " | " << fmt(seconds) << " s of " << fmt(criterion.budget_seconds) << " s"
              << (in_budget ? "" : " (over budget)") << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
