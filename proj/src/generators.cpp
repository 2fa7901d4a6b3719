#include "fdrisk/generators.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "fdrisk/errors.hpp"

namespace fdrisk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Generator Generator::hellinger(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must exceed 1");
  return Generator(Hellinger{p});
}

Generator Generator::hockey_stick(double beta, double gamma) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (!(gamma >= beta) || !std::isfinite(gamma)) throw DomainError("gamma must be at least beta");
  return Generator(HockeyStick{beta, gamma});
}

double Generator::evaluate(double t) const {
  if (!(t >= 0.0)) throw DomainError("generator argument must be non-negative");
  return std::visit(overloaded{
                        [t](const Hellinger& h) {
                          if (t == 0.0) return -1.0 / (h.p - 1.0);
                          // expm1 keeps f(1) exactly 0 and is accurate near t = 1.
                          return std::expm1(h.p * std::log(t)) / (h.p - 1.0);
                        },
                        [t](const HockeyStick& hs) { return std::max(0.0, hs.beta * t - hs.gamma); },
                    },
                    kind_);
}

double Generator::conjugate_at_zero() const {
  return std::visit(overloaded{
                        [](const Hellinger& h) { return 1.0 / (h.p - 1.0); },
                        [](const HockeyStick&) { return 0.0; },
                    },
                    kind_);
}

double Generator::range_infimum() const {
  return std::visit(overloaded{
                        [](const Hellinger& h) { return -1.0 / (h.p - 1.0); },
                        [](const HockeyStick&) { return 0.0; },
                    },
                    kind_);
}

double Generator::generalized_inverse(double y) const {
  if (std::isnan(y) || y < range_infimum()) {
    throw DomainError("generalized inverse argument below the generator's range");
  }
  return std::visit(overloaded{
                        [y](const Hellinger& h) {
                          return std::pow(std::max(0.0, (h.p - 1.0) * y + 1.0), 1.0 / h.p);
                        },
                        [y](const HockeyStick& hs) { return (y + hs.gamma) / hs.beta; },
                    },
                    kind_);
}

std::vector<double> Generator::kinks() const {
  return std::visit(overloaded{
                        [](const Hellinger&) { return std::vector<double>{}; },
                        [](const HockeyStick& hs) { return std::vector<double>{hs.gamma / hs.beta}; },
                    },
                    kind_);
}

namespace {

std::string shortest(double value) {
  std::array<char, 32> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ec == std::errc{} ? end : buffer.data());
}

}  // namespace

std::string Generator::describe() const {
  return std::visit(overloaded{
                        [](const Hellinger& h) { return "hellinger(p=" + shortest(h.p) + ")"; },
                        [](const HockeyStick& hs) {
                          return "hockey-stick(beta=" + shortest(hs.beta) + ", gamma=" + shortest(hs.gamma) + ")";
                        },
                    },
                    kind_);
}

double generalized_inverse_numeric(const std::function<double(double)>& f, double y, double tol) {
  if (f(0.0) > y) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (!(f(hi) > y)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("generalized inverse: f never exceeds y");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > y) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace fdrisk
