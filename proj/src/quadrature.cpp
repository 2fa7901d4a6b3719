#include "fdrisk/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "fdrisk/errors.hpp"
#include "fdrisk/numerics.hpp"

namespace fdrisk {

namespace {

struct Interval {
  double a, b, value, error, l1;
  unsigned depth;
  bool operator<(const Interval& other) const { return error < other.error; }
};

Interval kronrod15(const std::function<double(double)>& f, double a, double b, unsigned depth) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  static const auto& nodes = Kronrod::abscissa();
  static const auto& kronrod_weights = Kronrod::weights();
  static const auto& gauss_weights = Gauss::weights();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(centre);
  double kronrod = f0 * kronrod_weights[0];
  double gauss = f0 * gauss_weights[0];
  double l1 = std::fabs(f0) * kronrod_weights[0];
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double lo = f(centre - half * nodes[i]);
    const double hi = f(centre + half * nodes[i]);
    kronrod += (lo + hi) * kronrod_weights[i];
    l1 += (std::fabs(lo) + std::fabs(hi)) * kronrod_weights[i];
    if (i % 2 == 0) gauss += (lo + hi) * gauss_weights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  l1 *= std::fabs(half);
  const double error = std::max(std::fabs(kronrod - gauss), 50.0 * std::numeric_limits<double>::epsilon() * l1);
  return {a, b, kronrod, error, l1, depth};
}

}  // namespace

QuadratureResult integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                                     std::span<const double> breakpoints,
                                     const QuadratureOptions& options) {
  if (!(b >= a)) throw DomainError("integration bounds must satisfy a <= b");
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Global adaptive refinement: always split the interval with the largest error.
  std::priority_queue<Interval> queue;
  double error = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Interval piece = kronrod15(f, cuts[i], cuts[i + 1], 0);
    error += piece.error;
    l1 += piece.l1;
    queue.push(piece);
  }
  const auto budget = [&] { return std::max(options.abs_tol, options.rel_tol * l1); };
  while (error > budget() && !queue.empty() && queue.top().depth < options.max_depth) {
    const Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Interval left = kronrod15(f, worst.a, mid, worst.depth + 1);
    const Interval right = kronrod15(f, mid, worst.b, worst.depth + 1);
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
  }

  CompensatedSum value;
  error = 0.0;
  for (; !queue.empty(); queue.pop()) {
    value += queue.top().value;
    error += queue.top().error;
  }
  if (!std::isfinite(value.value())) {
    throw AccuracyError("quadrature produced a non-finite value", value.value(), error);
  }
  if (error > budget()) {
    throw AccuracyError("quadrature missed its tolerance budget", value.value(), error);
  }
  return {value.value(), error};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  if ((f_lo < 0.0) == (f(hi) < 0.0)) throw DomainError("bisect_root: no sign change on bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fdrisk
