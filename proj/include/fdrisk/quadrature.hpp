#pragma once

#include <cmath>
#include <functional>
#include <span>

namespace fdrisk {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  unsigned max_depth = 20;
};

struct QuadratureResult {
  double value;
  double error;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b], split at every breakpoint
/// strictly inside (a, b). Each piece must be smooth; the caller supplies the kinks.
/// Refinement is global: the interval with the largest error estimate is bisected until
/// the summed error is within max(abs_tol, rel_tol * L1) or an interval reaches max_depth,
/// in which case AccuracyError is thrown.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                                     std::span<const double> breakpoints,
                                     const QuadratureOptions& options = {});

/// Root of a continuous f with a sign change on [lo, hi], by bisection to tol.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13);

template <class Real>
struct ScalarMaximum {
  Real argmax;
  Real value;
};

/// Golden-section maximization of a unimodal h on [lo, hi]; stops once the bracket
/// is narrower than tol relative to its location. Templated so callers can run the
/// search in extended precision, where the flat top of h does not limit the argmax.
template <class Real, class F>
ScalarMaximum<Real> golden_section_maximize(F&& h, Real lo, Real hi, Real tol, int max_iterations = 2000) {
  using std::abs;
  using std::sqrt;
  const Real inv_phi = (sqrt(Real(5)) - Real(1)) / Real(2);
  Real c = hi - inv_phi * (hi - lo);
  Real d = lo + inv_phi * (hi - lo);
  Real hc = h(c);
  Real hd = h(d);
  for (int i = 0; i < max_iterations && (hi - lo) > tol * (abs(c) + abs(d)); ++i) {
    if (hc > hd) {
      hi = d;
      d = c;
      hd = hc;
      c = hi - inv_phi * (hi - lo);
      hc = h(c);
    } else {
      lo = c;
      c = d;
      hc = hd;
      d = lo + inv_phi * (hi - lo);
      hd = h(d);
    }
  }
  const Real x = (lo + hi) / Real(2);
  const Real hx = h(x);
  if (hx >= hc && hx >= hd) return {x, hx};
  return hc >= hd ? ScalarMaximum<Real>{c, hc} : ScalarMaximum<Real>{d, hd};
}

}  // namespace fdrisk
