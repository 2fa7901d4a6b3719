#include "fdrisk/cli/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fdrisk/errors.hpp"

namespace fdrisk::cli {

Model ModelSpec::at(int n) const {
  if (kind == ModelKind::bernoulli) return BernoulliModel(n);
  return GaussianModel(n, sigma_w_sq, sigma_sq);
}

NRange parse_n_range(const std::string& text) {
  const auto parse_int = [&](std::string_view part) {
    int value = 0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || end != part.data() + part.size() || part.empty()) {
      throw ConfigError("n-range must look like A..B, got '" + text + "'");
    }
    return value;
  };
  const auto dots = text.find("..");
  NRange range;
  if (dots == std::string::npos) {
    range.first = range.last = parse_int(text);
  } else {
    range.first = parse_int(std::string_view(text).substr(0, dots));
    range.last = parse_int(std::string_view(text).substr(dots + 2));
  }
  if (range.first < 1) throw ConfigError("n-range must start at 1 or above");
  if (range.last < range.first) throw ConfigError("n-range is empty");
  return range;
}

bool SweepConfig::has(Family family) const {
  return std::find(families.begin(), families.end(), family) != families.end();
}

void SweepConfig::validate() const {
  if (n_range.first < 1) throw ConfigError("n-range must start at 1 or above");
  if (n_range.last < n_range.first) throw ConfigError("n-range is empty");
  if (families.empty()) throw ConfigError("at least one family is required");
  (void)model.at(n_range.first);
  if (mode == ParameterMode::fixed) {
    for (Family family : families) (void)fixed_generator(family, fixed);
  }
  if (oracle && samples < 10'000) throw ConfigError("samples must be at least 10000");
}

std::uint64_t seed_for(std::uint64_t seed, int n) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Generator fixed_generator(Family family, const FixedParameters& fixed) {
  return family == Family::hellinger ? Generator::hellinger(fixed.p)
                                     : Generator::hockey_stick(fixed.beta, fixed.gamma);
}

BoundResult family_bound(const Model& model, Family family, const SweepConfig& config, DivergenceCache& cache) {
  if (config.mode == ParameterMode::optimized) return optimize_parameters(model, family, config.search, cache);
  return fixed_bound(model, fixed_generator(family, config.fixed), cache, config.search.quadrature);
}

RiskRow compute_row(const SweepConfig& config, int n, DivergenceCache& cache) {
  const Model model = config.model.at(n);
  RiskRow row{n, std::nullopt, std::nullopt, std::nullopt};
  if (config.has(Family::hellinger)) row.hellinger = family_bound(model, Family::hellinger, config, cache);
  if (config.has(Family::hockey_stick)) row.hockey_stick = family_bound(model, Family::hockey_stick, config, cache);
  if (config.oracle) row.oracle = bayes_risk_reference(model, {config.samples, seed_for(config.seed, n)});
  return row;
}

RiskCurve run_sweep(const SweepConfig& config) {
  config.validate();
  DivergenceCache cache;
  RiskCurve curve;
  for (int n = config.n_range.first; n <= config.n_range.last; ++n) curve.rows.push_back(compute_row(config, n, cache));
  return curve;
}

std::string format_number(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                       std::chars_format::general, 17);
  return std::string(buffer.data(), ec == std::errc{} ? end : buffer.data());
}

std::string to_csv(const RiskCurve& curve) {
  std::string out = "n,hellinger_bound,hockey_stick_bound,oracle_risk,oracle_stderr\n";
  for (const auto& row : curve.rows) {
    out += std::to_string(row.n);
    out += ',';
    if (row.hellinger) out += format_number(row.hellinger->value);
    out += ',';
    if (row.hockey_stick) out += format_number(row.hockey_stick->value);
    out += ',';
    if (row.oracle) out += format_number(row.oracle->value);
    out += ',';
    if (row.oracle) out += format_number(row.oracle->std_error);
    out += '\n';
  }
  return out;
}

namespace {

std::string fixed2(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                       std::chars_format::fixed, 2);
  return std::string(buffer.data(), ec == std::errc{} ? end : buffer.data());
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  std::string colour;
  std::vector<std::pair<int, double>> points;
};

}  // namespace

std::string to_svg(const RiskCurve& curve, const std::string& title) {
  constexpr double kWidth = 800.0, kHeight = 500.0;
  constexpr double kLeft = 80.0, kRight = 190.0, kTop = 40.0, kBottom = 60.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::vector<Series> series{{"Hellinger bound", "#1f77b4", {}},
                             {"hockey-stick bound", "#d62728", {}},
                             {"oracle Bayes risk", "#2ca02c", {}}};
  for (const auto& row : curve.rows) {
    if (row.hellinger && row.hellinger->value > 0.0) series[0].points.emplace_back(row.n, row.hellinger->value);
    if (row.hockey_stick && row.hockey_stick->value > 0.0) {
      series[1].points.emplace_back(row.n, row.hockey_stick->value);
    }
    if (row.oracle && row.oracle->value > 0.0) series[2].points.emplace_back(row.n, row.oracle->value);
  }
  const int n_lo = curve.rows.empty() ? 1 : curve.rows.front().n;
  const int n_hi = curve.rows.empty() ? 1 : curve.rows.back().n;
  double y_min = INFINITY, y_max = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [n, v] : s.points) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (!(y_min <= y_max)) y_min = y_max = 1.0;
  const int decade_lo = static_cast<int>(std::floor(std::log10(y_min)));
  int decade_hi = static_cast<int>(std::ceil(std::log10(y_max)));
  if (decade_hi == decade_lo) ++decade_hi;

  const auto px = [&](int n) {
    return n_hi == n_lo ? kLeft + plot_w / 2.0 : kLeft + plot_w * (n - n_lo) / static_cast<double>(n_hi - n_lo);
  };
  const auto py = [&](double v) {
    return kTop + plot_h * (decade_hi - std::log10(v)) / static_cast<double>(decade_hi - decade_lo);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fixed2(kLeft + plot_w / 2.0) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape_xml(title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << fixed2(plot_w) << "\" height=\""
     << fixed2(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = decade_lo; d <= decade_hi; ++d) {
    const std::string y = fixed2(py(std::pow(10.0, d)));
    os << "<line x1=\"" << kLeft << "\" x2=\"" << fixed2(kLeft + plot_w) << "\" y1=\"" << y << "\" y2=\"" << y
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << y << "\" text-anchor=\"end\" dominant-baseline=\"middle\">1e"
       << d << "</text>\n";
  }
  const int span = std::max(1, n_hi - n_lo);
  const int step = span <= 10 ? 1 : span <= 25 ? 5 : 10;
  for (int n = n_lo; n <= n_hi; n += step) {
    const std::string x = fixed2(px(n));
    os << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << fixed2(kTop + plot_h) << "\" y2=\""
       << fixed2(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << fixed2(kTop + plot_h + 20) << "\" text-anchor=\"middle\">" << n
       << "</text>\n";
  }
  os << "<text x=\"" << fixed2(kLeft + plot_w / 2.0) << "\" y=\"" << fixed2(kHeight - 15)
     << "\" text-anchor=\"middle\">n</text>\n";
  os << "<text x=\"20\" y=\"" << fixed2(kTop + plot_h / 2.0) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << fixed2(kTop + plot_h / 2.0) << ")\">risk lower bound</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) os << ' ';
      os << fixed2(px(s.points[i].first)) << ',' << fixed2(py(s.points[i].second));
    }
    os << "\"/>\n";
    const double ly = kTop + 10.0 + 20.0 * legend_row++;
    os << "<line x1=\"" << fixed2(kLeft + plot_w + 15) << "\" x2=\"" << fixed2(kLeft + plot_w + 40) << "\" y1=\""
       << fixed2(ly) << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << s.colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed2(kLeft + plot_w + 46) << "\" y=\"" << fixed2(ly)
       << "\" dominant-baseline=\"middle\">" << escape_xml(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

bool ValidationRun::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const OracleReport& r) { return r.pass; });
}

ValidationRun run_validation(const SweepConfig& config, bool negate) {
  config.validate();
  DivergenceCache cache;
  ValidationRun run;
  for (int n = config.n_range.first; n <= config.n_range.last; ++n) {
    const Model model = config.model.at(n);
    const std::uint64_t seed = seed_for(config.seed, n);
    OracleReport reference;
    if (const auto* gauss = std::get_if<GaussianModel>(&model)) {
      run.reports.push_back(monte_carlo_risk(model, Estimator::posterior_mean, config.samples, seed));
      const double exact = std::sqrt(2.0 / std::numbers::pi) * gauss->posterior_sd();
      run.reports.push_back(compare_upper("exact risk within posterior-mean bound " + describe(model), exact,
                                          posterior_mean_risk_upper_bound(*gauss), 0.0, 0.0));
      reference = compare_two_sided("exact risk " + describe(model), exact, exact, 0.0, 0.0);
    } else {
      reference = monte_carlo_risk(model, Estimator::posterior_median, config.samples, seed);
      run.reports.push_back(reference);
    }

    std::vector<BoundResult> bounds;
    for (Family family : config.families) {
      bounds.push_back(fixed_bound(model, fixed_generator(family, config.fixed), cache, config.search.quadrature));
      bounds.push_back(optimize_parameters(model, family, config.search, cache));
    }
    if (negate && n == config.n_range.first) {
      BoundResult broken = bounds.front();
      broken.value = reference.oracle + 3.0 * reference.oracle_std_err + 1.0;
      bounds.push_back(broken);
    }
    for (auto& report : certify_bounds(model, bounds, reference)) run.reports.push_back(std::move(report));
  }
  return run;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string reports_to_csv(const std::vector<OracleReport>& reports) {
  std::string out = "quantity,analytic,oracle,oracle_stderr,tolerance,comparison,pass\n";
  for (const auto& r : reports) {
    out += csv_field(r.quantity) + ',' + format_number(r.analytic) + ',' + format_number(r.oracle) + ',' +
           format_number(r.oracle_std_err) + ',' + format_number(r.tolerance_used) + ',' +
           (r.one_sided ? "upper" : "two-sided") + ',' + (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

std::string reports_to_table(const std::vector<OracleReport>& reports) {
  std::size_t width = 8;
  for (const auto& r : reports) width = std::max(width, r.quantity.size());
  std::ostringstream os;
  const auto pad = [](std::string text, std::size_t w) {
    if (text.size() < w) text.append(w - text.size(), ' ');
    return text;
  };
  os << pad("status", 7) << pad("quantity", width + 2) << pad("analytic", 25) << pad("oracle", 25) << "stderr\n";
  for (const auto& r : reports) {
    os << pad(r.pass ? "PASS" : "FAIL", 7) << pad(r.quantity, width + 2) << pad(format_number(r.analytic), 25)
       << pad(format_number(r.oracle), 25) << format_number(r.oracle_std_err) << '\n';
  }
  return os.str();
}

}  // namespace fdrisk::cli
