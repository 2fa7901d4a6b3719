#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "fdrisk/divergences.hpp"
#include "fdrisk/generators.hpp"
#include "fdrisk/models.hpp"

namespace fdrisk {

enum class RhoMethod { closed_form_rho, golden_section_rho };

/// A lower bound on the Bayes risk, with the rho and divergence that produced it.
/// A vacuous bound (inner parenthesis non-positive at every rho) has value 0.
struct BoundResult {
  double value;
  double rho_star;
  Generator generator;
  DivergenceValue divergence;
  RhoMethod method;
  bool vacuous;
};

/// rho * (1 - L f^{-1}((I_f + (1 - L) f*(0)) / L)), clamped at 0.
/// small_ball is L in (0, 1]; i_f is read through DivergenceValue::raw().
double master_bound(const Generator& g, const DivergenceValue& i_f, double small_ball, double rho);

struct RhoOptimum {
  double rho_star;
  double value;
  bool vacuous;
};

/// Exact maximizer of h(rho) = rho (1 - c rho^t - b) over rho > 0:
/// rho* = ((1 - b) / ((t + 1) c))^{1/t}, h(rho*) = t / c^{1/t} ((1 - b) / (t + 1))^{1 + 1/t}.
/// b >= 1 is vacuous.
RhoOptimum optimize_rho_closed_form(double c, double t, double b);

/// Hellinger bound for a linear small-ball bound L_W(rho) <= c rho; `scaled` holds (p - 1) H_p + 1.
BoundResult hellinger_bound(double p, const DivergenceValue& scaled, double small_ball_coeff);

/// Hockey-stick bound for a linear small-ball bound; vacuous when E >= beta.
BoundResult hockey_stick_bound(double beta, double gamma, const DivergenceValue& e_value,
                               double small_ball_coeff);

/// Maximizes master_bound over rho by golden-section search, for small-ball bounds
/// that are not linear in rho. The bracket is (0, rho_vacuous).
BoundResult optimize_bound_numeric(const Generator& g, const DivergenceValue& i_f,
                                   const std::function<double(double)>& small_ball, double tol = 1e-12);

enum class Family { hellinger, hockey_stick };

std::string_view to_string(Family family);

struct SearchSpec {
  int p_points = 33;
  double p_min_offset = 1.0 / 64.0;  // smallest p - 1
  double p_max = 8.0;
  int beta_points = 32;
  double beta_min = 0.05;
  double beta_max = 4.0;
  int gamma_points = 32;
  double gamma_max = 8.0;
  /// Evaluations spent refining the best grid point.
  int refinement_budget = 64;
  /// Extra (beta, gamma) pairs always evaluated alongside the grid.
  std::vector<std::pair<double, double>> hockey_stick_seeds{{1.0, 1.0}, {0.75, 2.2}};
  QuadratureSettings quadrature;
};

/// Divergence values keyed by exact (model, generator) parameters. Safe for
/// concurrent get-or-compute.
class DivergenceCache {
 public:
  DivergenceValue get_or_compute(const Model& model, const Generator& g,
                                 const std::function<DivergenceValue()>& compute);
  std::size_t size() const;

 private:
  using Key = std::tuple<int, int, double, double, int, double, double>;
  static Key make_key(const Model& model, const Generator& g);

  mutable std::mutex mutex_;
  std::map<Key, DivergenceValue> values_;
};

/// Divergence for a Hellinger generator (closed form) or hockey-stick generator
/// (quadrature), going through the cache.
DivergenceValue model_divergence(const Model& model, const Generator& g, DivergenceCache& cache,
                                 const QuadratureSettings& settings = {});

/// The bound for one fixed generator on a model, rho by closed form.
BoundResult fixed_bound(const Model& model, const Generator& g, DivergenceCache& cache,
                        const QuadratureSettings& settings = {});

/// Supremum of the family's bound over its parameters: grid search, then a
/// golden-section (p) or coordinate-descent (beta, gamma) refinement.
BoundResult optimize_parameters(const Model& model, Family family, const SearchSpec& spec,
                                DivergenceCache& cache);

}  // namespace fdrisk
