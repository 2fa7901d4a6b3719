#include "fdrisk/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "fdrisk/cli/sweep.hpp"
#include "fdrisk/errors.hpp"

namespace fdrisk::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << content;
  file.flush();
  if (!file) throw IoError("failed writing " + path.string());
}

struct Options {
  std::string model = "bernoulli";
  std::optional<int> n;
  std::optional<std::string> n_range;
  double sigma_w_sq = 1.0;
  double sigma_sq = 2.0;
  std::vector<std::string> families;
  double p = 2.0;
  double beta = 0.75;
  double gamma = 2.2;
  bool optimize = false;
  bool oracle = false;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  std::string csv;
  std::string svg;
  bool negate = false;
};

Family parse_family(const std::string& name) {
  return name == "hellinger" ? Family::hellinger : Family::hockey_stick;
}

SweepConfig make_config(const Options& o, const std::string& command) {
  SweepConfig c;
  c.model.kind = o.model == "gaussian" ? ModelKind::gaussian : ModelKind::bernoulli;
  c.model.sigma_w_sq = o.sigma_w_sq;
  c.model.sigma_sq = o.sigma_sq;
  if (o.n_range) {
    c.n_range = parse_n_range(*o.n_range);
  } else if (o.n) {
    c.n_range = parse_n_range(std::to_string(*o.n));
  }
  if (command == "bound") {
    c.n_range = parse_n_range(std::to_string(o.n.value_or(1)));
    c.families = {parse_family(o.families.empty() ? "hellinger" : o.families.back())};
  } else if (command == "sweep" && !o.families.empty()) {
    c.families.clear();
    for (const auto& f : o.families) {
      if (!c.has(parse_family(f))) c.families.push_back(parse_family(f));
    }
  }
  c.mode = o.optimize ? ParameterMode::optimized : ParameterMode::fixed;
  c.fixed = {o.p, o.beta, o.gamma};
  c.oracle = o.oracle;
  c.samples = o.samples;
  c.seed = o.seed;
  if (!o.csv.empty()) c.csv = o.csv;
  if (!o.svg.empty()) c.svg = o.svg;
  return c;
}

int cmd_bound(const SweepConfig& config, std::ostream& out) {
  config.validate();
  DivergenceCache cache;
  const int n = config.n_range.first;
  const Model model = config.model.at(n);
  const Family family = config.families.front();
  const BoundResult r = family_bound(model, family, config, cache);
  const auto line = [&](const std::string& key, const std::string& value) {
    out << std::left << std::setw(14) << key << value << '\n';
  };
  line("model", describe(model));
  line("family", std::string(to_string(family)));
  line("generator", r.generator.describe() + (config.mode == ParameterMode::optimized ? " (optimized)" : ""));
  line("bound", format_number(r.value));
  line("rho*", format_number(r.rho_star));
  line("divergence", format_number(r.divergence.value) + " (" + std::string(to_string(r.divergence.method)) +
                         (r.divergence.hellinger_order ? ", stored as (p-1)H_p+1" : "") + ")");
  line("vacuous", r.vacuous ? "yes" : "no");
  if (config.csv) {
    RiskCurve curve;
    RiskRow row{n, std::nullopt, std::nullopt, std::nullopt};
    (family == Family::hellinger ? row.hellinger : row.hockey_stick) = r;
    curve.rows.push_back(row);
    write_file(*config.csv, to_csv(curve));
  }
  return kOk;
}

int cmd_sweep(const SweepConfig& config, std::ostream& out) {
  const RiskCurve curve = run_sweep(config);
  const std::string csv = to_csv(curve);
  if (config.csv) {
    write_file(*config.csv, csv);
  } else {
    out << csv;
  }
  if (config.svg) {
    std::string title = config.model.kind == ModelKind::bernoulli ? "Bernoulli model" : "Gaussian model";
    title += config.mode == ParameterMode::optimized ? ", optimized parameters" : ", fixed parameters";
    write_file(*config.svg, to_svg(curve, title));
  }
  return kOk;
}

int cmd_validate(const SweepConfig& config, bool negate, std::ostream& out) {
  const ValidationRun run = run_validation(config, negate);
  out << reports_to_table(run.reports);
  const auto failures = std::count_if(run.reports.begin(), run.reports.end(), [](const auto& r) { return !r.pass; });
  out << run.reports.size() - failures << " passed, " << failures << " failed\n";
  if (config.csv) write_file(*config.csv, reports_to_csv(run.reports));
  return run.all_pass() ? kOk : kValidationFailure;
}

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian risk lower bounds from f-divergences", "fdrisk"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file mirroring the flags; flags given on the command line win");

  Options o;
  app.add_option("--model", o.model, "bernoulli or gaussian")->check(CLI::IsMember({"bernoulli", "gaussian"}));
  app.add_option("--n", o.n, "sample size");
  app.add_option("--n-range", o.n_range, "inclusive range A..B");
  app.add_option("--sigma-w-sq", o.sigma_w_sq, "prior variance (gaussian)");
  app.add_option("--sigma-sq", o.sigma_sq, "noise variance (gaussian)");
  app.add_option("--family", o.families, "hellinger or hockey-stick; repeatable for sweep")
      ->check(CLI::IsMember({"hellinger", "hockey-stick"}));
  app.add_option("--p", o.p, "Hellinger order");
  app.add_option("--beta", o.beta, "hockey-stick beta");
  app.add_option("--gamma", o.gamma, "hockey-stick gamma");
  app.add_flag("--optimize", o.optimize, "optimize the family parameters instead of fixing them");
  app.add_flag("--oracle", o.oracle, "add the reference Bayes risk to sweeps");
  app.add_option("--samples", o.samples, "Monte-Carlo samples per n");
  app.add_option("--seed", o.seed, "Monte-Carlo seed");
  app.add_option("--csv", o.csv, "CSV output path");
  app.add_option("--svg", o.svg, "SVG output path (sweep)");
  app.add_flag("--self-test-negate", o.negate, "inject one violating bound (validate)");

  auto* bound = app.add_subcommand("bound", "one bound for one n");
  auto* sweep = app.add_subcommand("sweep", "bounds over an n-range");
  auto* compare = app.add_subcommand("compare", "sweep with both families");
  auto* validate = app.add_subcommand("validate", "certify bounds against oracle risks");
  for (auto* sub : {bound, sweep, compare, validate}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kArgumentError;
  }

  try {
    if (*bound) return cmd_bound(make_config(o, "bound"), out);
    if (*sweep) return cmd_sweep(make_config(o, "sweep"), out);
    if (*compare) return cmd_sweep(make_config(o, "compare"), out);
    return cmd_validate(make_config(o, "validate"), o.negate, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const DivergenceInfinite& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace fdrisk::cli
