#pragma once

#include <cmath>
#include <span>

namespace fdrisk {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// x * log(y) with the convention 0 * log(0) = 0.
inline double xlogy(double x, double y) noexcept { return x == 0.0 ? 0.0 : x * std::log(y); }

double log_gamma(double x);

/// log C(n, k) via log-gamma differences.
double log_binomial(double n, double k);

/// log(sum(exp(terms))) summed largest-first with compensation.
double log_sum_exp(std::span<const double> log_terms);

/// Standard normal density and log density.
double normal_pdf(double x, double mean, double variance);
double normal_log_pdf(double x, double mean, double variance);

/// Standard normal CDF.
double normal_cdf(double z);

/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// Median of Beta(a, b), found by bisection on the regularized incomplete beta.
double beta_median(double a, double b, double tol = 1e-12);

}  // namespace fdrisk
