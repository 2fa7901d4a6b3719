#include "fdrisk/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fdrisk/errors.hpp"
#include "fdrisk/numerics.hpp"
#include "fdrisk/quadrature.hpp"

namespace fdrisk {

OracleReport compare_two_sided(std::string quantity, double analytic, double oracle, double oracle_std_err,
                               double tolerance) {
  const bool pass = std::fabs(analytic - oracle) <= std::max(tolerance, 3.0 * oracle_std_err);
  return {std::move(quantity), analytic, oracle, oracle_std_err, pass, tolerance, false};
}

OracleReport compare_upper(std::string quantity, double analytic, double oracle, double oracle_std_err,
                           double tolerance) {
  const bool pass = analytic <= oracle + std::max(tolerance, 3.0 * oracle_std_err);
  return {std::move(quantity), analytic, oracle, oracle_std_err, pass, tolerance, true};
}

double brute_force_divergence(const Model& model, const Generator& g, std::size_t grid_points) {
  if (grid_points < 1000) throw DomainError("brute force needs at least 1000 grid points");
  CompensatedSum total;
  if (const auto* bern = std::get_if<BernoulliModel>(&model)) {
    const int n = bern->n();
    const double h = 1.0 / static_cast<double>(grid_points);
    for (int k = 0; k <= n; ++k) {
      CompensatedSum row;
      for (std::size_t i = 0; i < grid_points; ++i) {
        row += g.evaluate(density_ratio(*bern, (i + 0.5) * h, k));
      }
      total += row.value() * h * marginal_mass(*bern, k);
    }
    return total.value();
  }
  const auto& gauss = std::get<GaussianModel>(model);
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(grid_points))));
  const double w_half = 8.0 * std::sqrt(gauss.sigma_w_sq());
  const double x_half = 8.0 * std::sqrt(gauss.marginal_variance());
  const double hw = 2.0 * w_half / side;
  const double hx = 2.0 * x_half / side;
  for (std::size_t i = 0; i < side; ++i) {
    const double w = -w_half + (i + 0.5) * hw;
    const double prior = normal_pdf(w, 0.0, gauss.sigma_w_sq());
    CompensatedSum row;
    for (std::size_t j = 0; j < side; ++j) {
      const double x = -x_half + (j + 0.5) * hx;
      row += marginal_mass(gauss, x) * g.evaluate(density_ratio(gauss, w, x));
    }
    total += prior * row.value();
  }
  return total.value() * hw * hx;
}

double exact_bernoulli_risk(const BernoulliModel& model, Estimator estimator) {
  const int n = model.n();
  CompensatedSum total;
  for (int k = 0; k <= n; ++k) {
    const double a = k + 1.0;
    const double b = n - k + 1.0;
    const double estimate = estimator == Estimator::posterior_median ? beta_median(a, b) : a / (a + b);
    const auto integrand = [&](double w) { return std::fabs(w - estimate) * density_ratio(model, w, k); };
    const std::array<double, 2> breaks{estimate, static_cast<double>(k) / n};
    total += integrate_piecewise(integrand, 0.0, 1.0, breaks, {1e-12, 0.0, 20}).value * marginal_mass(model, k);
  }
  return total.value();
}

OracleReport monte_carlo_risk(const Model& model, Estimator estimator, std::uint64_t samples,
                              std::uint64_t seed) {
  if (samples < 10'000) throw DomainError("Monte-Carlo risk needs at least 1e4 samples");
  const auto est = simulate_absolute_error(model, estimator, samples, seed);
  const std::string name = std::string(estimator == Estimator::posterior_median ? "median" : "mean") +
                           " risk " + describe(model);
  double exact = 0.0;
  if (const auto* bern = std::get_if<BernoulliModel>(&model)) {
    exact = exact_bernoulli_risk(*bern, estimator);
  } else {
    exact = std::sqrt(2.0 / std::numbers::pi) * std::get<GaussianModel>(model).posterior_sd();
  }
  return compare_two_sided(name, exact, est.mean, est.std_error, 0.0);
}

std::vector<OracleReport> certify_bounds(const Model& model, std::span<const BoundResult> bounds,
                                         const OracleReport& risk) {
  if (bounds.empty()) throw DomainError("certify_bounds needs at least one bound");
  std::vector<OracleReport> reports;
  reports.reserve(bounds.size());
  for (const auto& bound : bounds) {
    reports.push_back(compare_upper(bound.generator.describe() + " bound " + describe(model), bound.value,
                                    risk.oracle, risk.oracle_std_err, 0.0));
  }
  return reports;
}

}  // namespace fdrisk
