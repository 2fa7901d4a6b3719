#pragma once

#include <optional>
#include <string_view>

#include "fdrisk/generators.hpp"
#include "fdrisk/models.hpp"
#include "fdrisk/quadrature.hpp"

namespace fdrisk {

enum class Method { closed_form, quadrature, monte_carlo };

std::string_view to_string(Method method);

/// An f-mutual-information value I_f(W, X^n) with its provenance.
///
/// Hellinger values are stored in the scaled convention (p - 1) H_p + 1, which is
/// what the Hellinger risk bound consumes; `hellinger_order` is set for those and
/// `raw()` recovers H_p. Every other value is stored as-is.
struct DivergenceValue {
  double value = 0.0;
  Method method = Method::closed_form;
  double error_estimate = 0.0;
  std::optional<double> hellinger_order;

  /// The divergence itself: (value - 1) / (p - 1) for Hellinger values, value otherwise.
  double raw() const;

  static DivergenceValue hellinger_scaled(double scaled, double p, Method method = Method::closed_form,
                                          double error = 0.0);
  static DivergenceValue plain(double value, Method method = Method::closed_form, double error = 0.0);
};

/// Closed form for the Bernoulli setting:
/// (n+1)^{p-1} sum_k C(n,k)^p Gamma(kp+1) Gamma((n-k)p+1) / Gamma(np+2).
DivergenceValue hellinger_bernoulli_closed_form(const BernoulliModel& model, double p);

/// chi^2(W, X^n) + 1 = (n+1)/(2n+1) * 4^n / C(2n, n).
DivergenceValue chi_squared_bernoulli(const BernoulliModel& model);

/// The bound chi^2 + 1 <= 16 sqrt(pi n) / 21.
double chi_squared_bernoulli_upper_bound(int n);

/// ((1 + r)^p / (1 + (2 - p) p r))^{d/2} with r = sigma_w_sq / sigma_sq, for X = W + Z.
/// Throws DivergenceInfinite when 1 + (2 - p) p r <= 0.
DivergenceValue hellinger_gaussian_closed_form(double sigma_w_sq, double sigma_sq, double p, int d = 1);

/// The n-sample Gaussian value, through the sufficient statistic (sigma^2 -> sigma^2 / n).
DivergenceValue hellinger_gaussian(const GaussianModel& model, double p);

/// Renyi divergence of order p from the scaled Hellinger value: log(scaled) / (p - 1).
double renyi_from_hellinger(const DivergenceValue& scaled, double p);

/// Quadrature tolerances for the f-mutual-information engine.
struct QuadratureSettings {
  QuadratureOptions bernoulli{1e-10, 0.0, 20};
  QuadratureOptions gaussian_inner{1e-10, 0.0, 18};
  QuadratureOptions gaussian_outer{1e-8, 0.0, 18};
  /// Half-width of the Gaussian integration box, in marginal standard deviations.
  double box_sds = 8.0;
};

/// E_{P_W P_S}[f(dP_{WS} / dP_W P_S)] by kink-aware adaptive quadrature.
/// Throws AccuracyError when the tolerance budget is missed and DivergenceInfinite
/// when the Gaussian integrand grows towards the edge of the integration box.
DivergenceValue f_mi_numeric(const Model& model, const Generator& g, const QuadratureSettings& settings = {});

/// E_{beta,gamma}(W, X^n); a thin wrapper over f_mi_numeric.
DivergenceValue e_beta_gamma_numeric(const Model& model, double beta, double gamma,
                                     const QuadratureSettings& settings = {});

/// sum_k C(2k, k) C(2(n-k), n-k) == 4^n, both sides in exact integer arithmetic.
bool combinatorial_identity_check(unsigned n);

}  // namespace fdrisk
