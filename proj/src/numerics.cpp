#include "fdrisk/numerics.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <limits>
#include <numbers>
#include <vector>

#include "fdrisk/errors.hpp"

namespace fdrisk {

double log_gamma(double x) { return boost::math::lgamma(x); }

double log_binomial(double n, double k) {
  if (k < 0.0 || k > n) throw DomainError("log_binomial: k outside [0, n]");
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

double log_sum_exp(std::span<const double> log_terms) {
  if (log_terms.empty()) return -std::numeric_limits<double>::infinity();
  std::vector<double> sorted(log_terms.begin(), log_terms.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double top = sorted.front();
  if (!std::isfinite(top)) return top;
  CompensatedSum acc;
  for (double t : sorted) acc += std::exp(t - top);
  return top + std::log(acc.value());
}

double normal_log_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (d * d / variance + std::log(2.0 * std::numbers::pi * variance));
}

double normal_pdf(double x, double mean, double variance) {
  return std::exp(normal_log_pdf(x, mean, variance));
}

double normal_cdf(double z) { return 0.5 * boost::math::erfc(-z / std::numbers::sqrt2); }

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double beta_median(double a, double b, double tol) {
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_incomplete_beta(a, b, mid) < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fdrisk
