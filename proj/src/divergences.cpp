#include "fdrisk/divergences.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "fdrisk/errors.hpp"
#include "fdrisk/numerics.hpp"

namespace fdrisk {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::closed_form:
      return "closed_form";
    case Method::quadrature:
      return "quadrature";
    case Method::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

double DivergenceValue::raw() const {
  if (hellinger_order) return (value - 1.0) / (*hellinger_order - 1.0);
  return value;
}

DivergenceValue DivergenceValue::hellinger_scaled(double scaled, double p, Method method, double error) {
  return {scaled, method, error, p};
}

DivergenceValue DivergenceValue::plain(double value, Method method, double error) {
  return {value, method, error, std::nullopt};
}

DivergenceValue hellinger_bernoulli_closed_form(const BernoulliModel& model, double p) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  const int n = model.n();
  std::vector<double> log_terms;
  log_terms.reserve(n + 1);
  const double log_norm = (p - 1.0) * std::log(n + 1.0) - log_gamma(n * p + 2.0);
  for (int k = 0; k <= n; ++k) {
    log_terms.push_back(log_norm + p * log_binomial(n, k) + log_gamma(k * p + 1.0) +
                        log_gamma((n - k) * p + 1.0));
  }
  return DivergenceValue::hellinger_scaled(std::exp(log_sum_exp(log_terms)), p);
}

DivergenceValue chi_squared_bernoulli(const BernoulliModel& model) {
  const int n = model.n();
  const double log_value =
      std::log(n + 1.0) - std::log(2.0 * n + 1.0) + n * std::log(4.0) - log_binomial(2.0 * n, n);
  return DivergenceValue::hellinger_scaled(std::exp(log_value), 2.0);
}

double chi_squared_bernoulli_upper_bound(int n) {
  return 16.0 * std::sqrt(std::numbers::pi * n) / 21.0;
}

DivergenceValue hellinger_gaussian_closed_form(double sigma_w_sq, double sigma_sq, double p, int d) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (!(sigma_w_sq > 0.0) || !(sigma_sq > 0.0)) throw DomainError("variances must be positive");
  if (d < 1) throw DomainError("dimension must be positive");
  const double r = sigma_w_sq / sigma_sq;
  const double denom = 1.0 + (2.0 - p) * p * r;
  if (!(denom > 0.0)) {
    throw DivergenceInfinite("Hellinger integral diverges: 1 + (2 - p) p sigma_w^2 / sigma^2 <= 0");
  }
  const double log_value = 0.5 * d * (p * std::log1p(r) - std::log(denom));
  return DivergenceValue::hellinger_scaled(std::exp(log_value), p);
}

DivergenceValue hellinger_gaussian(const GaussianModel& model, double p) {
  return hellinger_gaussian_closed_form(model.sigma_w_sq(), model.mean_noise_variance(), p, 1);
}

double renyi_from_hellinger(const DivergenceValue& scaled, double p) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (!(scaled.value > 0.0)) throw DomainError("scaled Hellinger value must be positive");
  return std::log(scaled.value) / (p - 1.0);
}

namespace {

/// Wraps a raw f-MI estimate in the canonical convention for the generator.
DivergenceValue package(const Generator& g, double integral, double error) {
  if (const auto* h = std::get_if<Hellinger>(&g.kind())) {
    return DivergenceValue::hellinger_scaled((h->p - 1.0) * integral + 1.0, h->p, Method::quadrature,
                                             (h->p - 1.0) * error);
  }
  return DivergenceValue::plain(integral, Method::quadrature, error);
}

/// Visit order k = n/2, n/2 + 1, n/2 - 1, ... so the largest posterior masses come first.
std::vector<int> centre_out_order(int n) {
  std::vector<int> order;
  order.reserve(n + 1);
  const int mid = n / 2;
  order.push_back(mid);
  for (int step = 1; static_cast<int>(order.size()) <= n; ++step) {
    if (mid + step <= n) order.push_back(mid + step);
    if (mid - step >= 0) order.push_back(mid - step);
  }
  return order;
}

DivergenceValue f_mi_bernoulli(const BernoulliModel& model, const Generator& g,
                               const QuadratureOptions& options) {
  const int n = model.n();
  const auto kinks = g.kinks();
  CompensatedSum total;
  double error = 0.0;
  double unconverged = 0.0;
  for (int k : centre_out_order(n)) {
    const double log_const = std::log(n + 1.0) + log_binomial(n, k);
    const auto log_ratio = [&](double w) { return log_const + xlogy(k, w) + xlogy(n - k, 1.0 - w); };
    // w^k (1-w)^{n-k} is log-concave with its peak at k/n: each level set has at
    // most one point on either side of the peak.
    const double mode = static_cast<double>(k) / n;
    std::vector<double> breaks{mode};
    const double peak = log_ratio(mode);
    for (double kink : kinks) {
      const double level = std::log(kink);
      if (!(peak > level)) continue;
      const auto shifted = [&](double w) { return log_ratio(w) - level; };
      if (k > 0 && log_ratio(0.0) < level) breaks.push_back(bisect_root(shifted, 0.0, mode));
      if (k < n && log_ratio(1.0) < level) breaks.push_back(bisect_root(shifted, mode, 1.0));
    }
    const auto integrand = [&](double w) { return g.evaluate(std::exp(log_ratio(w))); };
    QuadratureResult piece;
    try {
      piece = integrate_piecewise(integrand, 0.0, 1.0, breaks, options);
    } catch (const AccuracyError& e) {
      // A term whose support is a sliver around the kink can sit below the roundoff of
      // f there; it is accepted if its error still fits the budget of the whole sum.
      if (!std::isfinite(e.estimate())) throw;
      piece = {e.estimate(), e.error()};
      unconverged += e.error() / (n + 1.0);
    }
    total += piece.value / (n + 1.0);
    error += piece.error / (n + 1.0);
  }
  if (unconverged > std::max(options.abs_tol, options.rel_tol * std::fabs(total.value()))) {
    throw AccuracyError("quadrature missed its tolerance budget", total.value(), error);
  }
  return package(g, total.value(), error);
}

/// Integration over (w, x_bar): outer in w, inner in x_bar. Along a slice of fixed w
/// the log density ratio is a concave quadratic in x_bar, so its level sets are
/// found in closed form and the set of w whose slice reaches a level is |w| >= w0.
class GaussianIntegrator {
 public:
  GaussianIntegrator(const GaussianModel& model, const Generator& g, const QuadratureSettings& settings)
      : model_(model), g_(g), settings_(settings) {
    s2_ = model.mean_noise_variance();
    m2_ = model.marginal_variance();
    curvature_ = 0.5 / s2_ - 0.5 / m2_;
    log_scale_ = 0.5 * std::log(m2_ / s2_);
    log_norm_w_ = -0.5 * std::log(2.0 * std::numbers::pi * model.sigma_w_sq());
    log_norm_x_ = -0.5 * std::log(2.0 * std::numbers::pi * m2_);
    w_half_ = settings.box_sds * std::sqrt(model.sigma_w_sq());
    x_half_ = settings.box_sds * std::sqrt(m2_);
    for (double kink : g.kinks()) levels_.push_back(std::log(kink));
    if (const auto* h = std::get_if<Hellinger>(&g.kind())) widen_for_hellinger(h->p);
  }

  DivergenceValue run() {
    check_growth();
    std::vector<double> outer_breaks{0.0};
    for (double level : levels_) {
      const double w0_sq = 4.0 * curvature_ * s2_ * m2_ * (level - log_scale_);
      if (w0_sq > 0.0) {
        outer_breaks.push_back(std::sqrt(w0_sq));
        outer_breaks.push_back(-std::sqrt(w0_sq));
      }
    }
    const auto outer = integrate_piecewise([this](double w) { return slice(w); }, -w_half_, w_half_,
                                           outer_breaks, settings_.gaussian_outer);
    const double error = outer.error + max_inner_error_ * 2.0 * w_half_;
    return package(g_, outer.value, error);
  }

 private:
  double log_ratio(double w, double x) const {
    const double d = x - w;
    return log_scale_ - d * d / (2.0 * s2_) + x * x / (2.0 * m2_);
  }

  /// The Hellinger integrand is a Gaussian with precision (1 - p) * product + p * joint,
  /// which can be much wider than either measure; the box has to cover it.
  void widen_for_hellinger(double p) {
    const double a = model_.sigma_w_sq();
    const double lww = (1.0 - p) / a + p * (1.0 / a + 1.0 / s2_);
    const double lxx = (1.0 - p) / m2_ + p / s2_;
    const double lwx = -p / s2_;
    const double det = lww * lxx - lwx * lwx;
    if (!(lww > 0.0) || !(det > 0.0)) return;
    w_half_ = std::max(w_half_, settings_.box_sds * std::sqrt(lxx / det));
    x_half_ = std::max(x_half_, settings_.box_sds * std::sqrt(lww / det));
  }

  double log_prior(double w) const { return log_norm_w_ - w * w / (2.0 * model_.sigma_w_sq()); }
  double log_marginal(double x) const { return log_norm_x_ - x * x / (2.0 * m2_); }
  double density(double w, double x) const { return std::exp(log_prior(w) + log_marginal(x)); }

  /// Inner integral over x_bar at fixed w, times the prior density of w.
  double slice(double w) {
    std::vector<double> breaks{std::clamp(w, -x_half_, x_half_)};
    for (double level : levels_) {
      // curvature x^2 - (w / s2) x + (w^2 / (2 s2) - log_scale + level) = 0
      const double b = -w / s2_;
      const double c = w * w / (2.0 * s2_) - log_scale_ + level;
      const double disc = b * b - 4.0 * curvature_ * c;
      if (disc <= 0.0) continue;
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b == 0.0 ? 1.0 : b));
      breaks.push_back(q / curvature_);
      if (q != 0.0) breaks.push_back(c / q);
    }
    const auto integrand = [&](double x) {
      return std::exp(log_marginal(x)) * g_.evaluate(std::exp(log_ratio(w, x)));
    };
    const auto inner = integrate_piecewise(integrand, -x_half_, x_half_, breaks, settings_.gaussian_inner);
    const double prior = std::exp(log_prior(w));
    max_inner_error_ = std::max(max_inner_error_, prior * inner.error);
    return prior * inner.value;
  }

  /// The integrand must decay towards the box boundary; growth means the defining
  /// integral diverges (e.g. Hellinger with 1 + (2 - p) p sigma_w^2 / sigma^2 <= 0).
  void check_growth() const {
    const auto magnitude = [&](double radius, double angle) {
      const double w = radius * w_half_ * std::cos(angle);
      const double x = radius * x_half_ * std::sin(angle);
      return density(w, x) * std::fabs(g_.evaluate(std::exp(log_ratio(w, x))));
    };
    constexpr int kDirections = 256;
    constexpr std::array<double, 5> kInteriorRadii{0.0, 0.25, 0.5, 0.75, 0.9};
    double interior = 0.0;
    for (int i = 0; i < kDirections; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / kDirections;
      for (double radius : kInteriorRadii) interior = std::max(interior, magnitude(radius, angle));
    }
    for (int i = 0; i < kDirections; ++i) {
      const double edge = magnitude(1.0, 2.0 * std::numbers::pi * i / kDirections);
      if (!std::isfinite(edge) || (interior > 0.0 && edge > interior)) {
        throw DivergenceInfinite("f-divergence integrand grows towards the integration boundary");
      }
    }
  }

  const GaussianModel& model_;
  const Generator& g_;
  const QuadratureSettings& settings_;
  double s2_, m2_, curvature_, log_scale_, log_norm_w_, log_norm_x_, w_half_, x_half_;
  std::vector<double> levels_;
  double max_inner_error_ = 0.0;
};

}  // namespace

DivergenceValue f_mi_numeric(const Model& model, const Generator& g, const QuadratureSettings& settings) {
  if (const auto* bern = std::get_if<BernoulliModel>(&model)) return f_mi_bernoulli(*bern, g, settings.bernoulli);
  return GaussianIntegrator(std::get<GaussianModel>(model), g, settings).run();
}

DivergenceValue e_beta_gamma_numeric(const Model& model, double beta, double gamma,
                                     const QuadratureSettings& settings) {
  return f_mi_numeric(model, Generator::hockey_stick(beta, gamma), settings);
}

bool combinatorial_identity_check(unsigned n) {
  using boost::multiprecision::cpp_int;
  // central[j] = C(2j, j), via C(2j, j) = C(2j-2, j-1) * (2j)(2j-1) / j^2.
  std::vector<cpp_int> central(n + 1);
  central[0] = 1;
  for (unsigned j = 1; j <= n; ++j) {
    central[j] = central[j - 1] * (2 * j) * (2 * j - 1) / (cpp_int(j) * j);
  }
  cpp_int lhs = 0;
  for (unsigned k = 0; k <= n; ++k) lhs += central[k] * central[n - k];
  const cpp_int rhs = cpp_int(1) << (2 * n);
  return lhs == rhs;
}

}  // namespace fdrisk
