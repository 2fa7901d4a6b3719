#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace fdrisk {

/// f_p(t) = (t^p - 1) / (p - 1), p > 1. p = 2 is the chi-squared generator.
struct Hellinger {
  double p;
};

/// f(t) = max{0, beta * t - gamma}, gamma >= beta > 0. (1, 1) is total variation.
struct HockeyStick {
  double beta;
  double gamma;
};

/// A convex generator f with f(1) = 0, together with the two derived quantities
/// the risk bounds consume: the conjugate at zero and the generalized inverse.
///
/// Values are immutable once constructed; the named constructors validate
/// parameters and throw DomainError.
class Generator {
 public:
  using Kind = std::variant<Hellinger, HockeyStick>;

  static Generator hellinger(double p);
  static Generator hockey_stick(double beta, double gamma);
  static Generator chi_squared() { return hellinger(2.0); }
  static Generator total_variation() { return hockey_stick(1.0, 1.0); }

  const Kind& kind() const noexcept { return kind_; }
  bool is_hellinger() const noexcept { return std::holds_alternative<Hellinger>(kind_); }
  bool is_hockey_stick() const noexcept { return std::holds_alternative<HockeyStick>(kind_); }

  /// f(t) for t >= 0. Hellinger at t = 0 is the finite limit -1/(p-1).
  double evaluate(double t) const;

  /// f*(0) = sup_{x >= 0} -f(x).
  double conjugate_at_zero() const;

  /// inf{t >= 0 : f(t) > y}; y below f(0) is a domain error.
  double generalized_inverse(double y) const;

  /// f(0), the infimum of f over [0, inf) for the increasing kinds.
  double range_infimum() const;

  /// Arguments t at which f is not differentiable (integration breakpoints).
  std::vector<double> kinks() const;

  std::string describe() const;

 private:
  explicit Generator(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// Generalized inverse of an arbitrary non-decreasing f on [0, inf): interval
/// doubling to bracket, then bisection to 1e-14 absolute.
double generalized_inverse_numeric(const std::function<double(double)>& f, double y,
                                   double tol = 1e-14);

}  // namespace fdrisk
