#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace fdrisk {

/// W ~ U[0,1], X_i | W = w ~ Ber(w), i = 1..n, loss |w - w_hat|.
/// The Hamming weight k is the sufficient statistic.
class BernoulliModel {
 public:
  explicit BernoulliModel(int n);
  int n() const noexcept { return n_; }

 private:
  int n_;
};

/// W ~ N(0, sigma_w^2), X_i = W + Z_i with Z_i ~ N(0, sigma^2), loss |w - w_hat|.
/// The sample mean x_bar ~ N(w, sigma^2 / n) is the sufficient statistic.
class GaussianModel {
 public:
  GaussianModel(int n, double sigma_w_sq, double sigma_sq);

  int n() const noexcept { return n_; }
  double sigma_w_sq() const noexcept { return sigma_w_sq_; }
  double sigma_sq() const noexcept { return sigma_sq_; }
  /// Variance of x_bar given W.
  double mean_noise_variance() const noexcept { return sigma_sq_ / n_; }
  /// Variance of x_bar under the marginal.
  double marginal_variance() const noexcept { return sigma_w_sq_ + mean_noise_variance(); }
  /// n * sigma_w^2 / sigma^2.
  double snr() const noexcept { return n_ * sigma_w_sq_ / sigma_sq_; }
  /// Posterior standard deviation sqrt(sigma_w^2 / (1 + n sigma_w^2 / sigma^2)).
  double posterior_sd() const;

 private:
  int n_;
  double sigma_w_sq_;
  double sigma_sq_;
};

using Model = std::variant<BernoulliModel, GaussianModel>;

std::string describe(const Model& model);
int sample_count(const Model& model);

/// Linear upper bound L_W(rho) <= coefficient * rho on the small-ball probability.
struct SmallBallBound {
  double coefficient;
  /// The bound evaluated at rho, capped at 1.
  double at(double rho) const noexcept;
};

SmallBallBound small_ball_coefficient(const Model& model);

/// Exact small-ball probability sup_w_hat P(|W - w_hat| <= rho).
double small_ball_exact(const Model& model, double rho);

/// dP_{W,S} / d(P_W P_S) at (w, k), S the Hamming weight; equals the Beta(k+1, n-k+1) density.
double density_ratio(const BernoulliModel& model, double w, int k);
double log_density_ratio(const BernoulliModel& model, double w, int k);

/// dP_{W,S} / d(P_W P_S) at (w, x_bar), computed in log space.
double density_ratio(const GaussianModel& model, double w, double x_bar);
double log_density_ratio(const GaussianModel& model, double w, double x_bar);

/// P(Hamming weight = k) = 1 / (n + 1).
double marginal_mass(const BernoulliModel& model, int k);
/// Marginal density of x_bar.
double marginal_mass(const GaussianModel& model, double x_bar);

/// Reference Bayes risk under absolute loss.
struct RiskReference {
  double value;
  double std_error;  // 0 when exact
  bool stochastic;
};

struct ReferenceOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240531;
};

/// Gaussian: exact sqrt(2/pi) * posterior_sd. Bernoulli: Monte-Carlo risk of the
/// posterior median estimator.
RiskReference bayes_risk_reference(const Model& model, const ReferenceOptions& options = {});

/// The upper bound sqrt(sigma_w^2 / (1 + n sigma_w^2 / sigma^2)) attained by the posterior mean.
double posterior_mean_risk_upper_bound(const GaussianModel& model);

}  // namespace fdrisk
