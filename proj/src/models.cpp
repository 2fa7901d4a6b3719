#include "fdrisk/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fdrisk/errors.hpp"
#include "fdrisk/numerics.hpp"
#include "fdrisk/simulation.hpp"

namespace fdrisk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_bernoulli_args(const BernoulliModel& model, double w, int k) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("w must lie in [0, 1]");
  if (k < 0 || k > model.n()) throw DomainError("Hamming weight k must lie in [0, n]");
}

}  // namespace

BernoulliModel::BernoulliModel(int n) : n_(n) {
  if (n < 1) throw DomainError("n must be at least 1");
}

GaussianModel::GaussianModel(int n, double sigma_w_sq, double sigma_sq)
    : n_(n), sigma_w_sq_(sigma_w_sq), sigma_sq_(sigma_sq) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (!(sigma_w_sq > 0.0) || !std::isfinite(sigma_w_sq)) throw DomainError("sigma_w_sq must be positive");
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw DomainError("sigma_sq must be positive");
}

double GaussianModel::posterior_sd() const { return std::sqrt(sigma_w_sq_ / (1.0 + snr())); }

std::string describe(const Model& model) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&os](const BernoulliModel& m) { os << "bernoulli(n=" << m.n() << ")"; },
                 [&os](const GaussianModel& m) {
                   os << "gaussian(n=" << m.n() << ", sigma_w_sq=" << m.sigma_w_sq()
                      << ", sigma_sq=" << m.sigma_sq() << ")";
                 },
             },
             model);
  return os.str();
}

int sample_count(const Model& model) {
  return std::visit([](const auto& m) { return m.n(); }, model);
}

double SmallBallBound::at(double rho) const noexcept { return std::min(1.0, coefficient * rho); }

SmallBallBound small_ball_coefficient(const Model& model) {
  return std::visit(overloaded{
                        [](const BernoulliModel&) { return SmallBallBound{2.0}; },
                        [](const GaussianModel& m) {
                          return SmallBallBound{2.0 / std::sqrt(2.0 * std::numbers::pi * m.sigma_w_sq())};
                        },
                    },
                    model);
}

double small_ball_exact(const Model& model, double rho) {
  if (!(rho >= 0.0)) throw DomainError("rho must be non-negative");
  return std::visit(overloaded{
                        // Uniform prior: any interval of length 2 rho inside [0, 1].
                        [rho](const BernoulliModel&) { return std::min(1.0, 2.0 * rho); },
                        // Symmetric unimodal prior: the interval centred at 0 is optimal.
                        [rho](const GaussianModel& m) {
                          const double z = rho / std::sqrt(m.sigma_w_sq());
                          return 2.0 * normal_cdf(z) - 1.0;
                        },
                    },
                    model);
}

double log_density_ratio(const BernoulliModel& model, double w, int k) {
  check_bernoulli_args(model, w, k);
  const int n = model.n();
  return std::log(n + 1.0) + log_binomial(n, k) + xlogy(k, w) + xlogy(n - k, 1.0 - w);
}

double density_ratio(const BernoulliModel& model, double w, int k) {
  return std::exp(log_density_ratio(model, w, k));
}

double log_density_ratio(const GaussianModel& model, double w, double x_bar) {
  return normal_log_pdf(x_bar, w, model.mean_noise_variance()) -
         normal_log_pdf(x_bar, 0.0, model.marginal_variance());
}

double density_ratio(const GaussianModel& model, double w, double x_bar) {
  return std::exp(log_density_ratio(model, w, x_bar));
}

double marginal_mass(const BernoulliModel& model, int k) {
  if (k < 0 || k > model.n()) throw DomainError("Hamming weight k must lie in [0, n]");
  return 1.0 / (model.n() + 1.0);
}

double marginal_mass(const GaussianModel& model, double x_bar) {
  return normal_pdf(x_bar, 0.0, model.marginal_variance());
}

double posterior_mean_risk_upper_bound(const GaussianModel& model) { return model.posterior_sd(); }

RiskReference bayes_risk_reference(const Model& model, const ReferenceOptions& options) {
  return std::visit(
      overloaded{
          [](const GaussianModel& m) {
            // Posterior is N(., sigma_post^2); E|N(0, s^2)| = sqrt(2/pi) s.
            return RiskReference{std::sqrt(2.0 / std::numbers::pi) * m.posterior_sd(), 0.0, false};
          },
          [&](const BernoulliModel& m) {
            const auto est = simulate_absolute_error(Model{m}, Estimator::posterior_median,
                                                     options.samples, options.seed);
            return RiskReference{est.mean, est.std_error, true};
          },
      },
      model);
}

}  // namespace fdrisk
