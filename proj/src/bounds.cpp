#include "fdrisk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <optional>
#include <utility>

#include "fdrisk/errors.hpp"
#include "fdrisk/quadrature.hpp"

namespace fdrisk {

double master_bound(const Generator& g, const DivergenceValue& i_f, double small_ball, double rho) {
  if (!(small_ball > 0.0)) throw DomainError("small-ball probability must be positive");
  if (small_ball > 1.0) throw DomainError("small-ball probability cannot exceed 1");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const double info = i_f.raw();
  const double conj = g.conjugate_at_zero();
  // With f*(0) <= 0 the conjugate term is dropped (the simplified form of the bound).
  const double arg = conj <= 0.0 ? info / small_ball : (info + (1.0 - small_ball) * conj) / small_ball;
  const double value = rho * (1.0 - small_ball * g.generalized_inverse(arg));
  return std::max(0.0, value);
}

RhoOptimum optimize_rho_closed_form(double c, double t, double b) {
  if (!(c > 0.0)) throw DomainError("c must be positive");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  if (!(b >= 0.0)) throw DomainError("b must be non-negative");
  if (b >= 1.0) return {0.0, 0.0, true};
  const double rho_star = std::pow((1.0 - b) / ((t + 1.0) * c), 1.0 / t);
  const double value = t / std::pow(c, 1.0 / t) * std::pow((1.0 - b) / (t + 1.0), 1.0 + 1.0 / t);
  return {rho_star, value, false};
}

BoundResult hellinger_bound(double p, const DivergenceValue& scaled, double small_ball_coeff) {
  const auto g = Generator::hellinger(p);
  if (!(small_ball_coeff > 0.0)) throw DomainError("small-ball coefficient must be positive");
  if (!(scaled.value >= 1.0 - 1e-9)) throw DomainError("scaled Hellinger value must be at least 1");
  // rho (1 - (c rho)^{(p-1)/p} scaled^{1/p}) has the form rho (1 - c' rho^t).
  const double t = (p - 1.0) / p;
  const double c = std::pow(small_ball_coeff, t) * std::pow(scaled.value, 1.0 / p);
  const auto opt = optimize_rho_closed_form(c, t, 0.0);
  return {opt.value, opt.rho_star, g, scaled, RhoMethod::closed_form_rho, opt.vacuous};
}

BoundResult hockey_stick_bound(double beta, double gamma, const DivergenceValue& e_value,
                               double small_ball_coeff) {
  const auto g = Generator::hockey_stick(beta, gamma);
  if (!(small_ball_coeff > 0.0)) throw DomainError("small-ball coefficient must be positive");
  if (!(e_value.value >= 0.0)) throw DomainError("hockey-stick divergence must be non-negative");
  if (e_value.value >= beta) return {0.0, 0.0, g, e_value, RhoMethod::closed_form_rho, true};
  // rho (1 - (E + gamma c rho) / beta) = rho (1 - (gamma c / beta) rho - E / beta).
  const auto opt = optimize_rho_closed_form(gamma * small_ball_coeff / beta, 1.0, e_value.value / beta);
  return {opt.value, opt.rho_star, g, e_value, RhoMethod::closed_form_rho, opt.vacuous};
}

BoundResult optimize_bound_numeric(const Generator& g, const DivergenceValue& i_f,
                                   const std::function<double(double)>& small_ball, double tol) {
  const auto h = [&](double rho) {
    const double mass = std::min(1.0, small_ball(rho));
    if (!(mass > 0.0)) return 0.0;
    return master_bound(g, i_f, mass, rho);
  };
  // h is positive on (0, rho_vacuous) and zero beyond; golden-section needs that bracket
  // exactly, since a flat zero stretch breaks unimodality.
  double hi = 1.0;
  for (int i = 0; i < 200 && h(hi) > 0.0; ++i) hi *= 2.0;
  double lo = hi;
  for (int i = 0; i < 1100 && !(h(lo) > 0.0); ++i) lo *= 0.5;
  if (!(h(lo) > 0.0)) return {0.0, 0.0, g, i_f, RhoMethod::golden_section_rho, true};
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  const auto best = golden_section_maximize<double>(h, 0.0, hi, tol);
  const bool vacuous = !(best.value > 0.0);
  return {vacuous ? 0.0 : best.value, vacuous ? 0.0 : best.argmax, g, i_f, RhoMethod::golden_section_rho,
          vacuous};
}

std::string_view to_string(Family family) {
  return family == Family::hellinger ? "hellinger" : "hockey-stick";
}

DivergenceCache::Key DivergenceCache::make_key(const Model& model, const Generator& g) {
  Key key{};
  if (const auto* b = std::get_if<BernoulliModel>(&model)) {
    std::get<0>(key) = 0;
    std::get<1>(key) = b->n();
  } else {
    const auto& m = std::get<GaussianModel>(model);
    key = Key{1, m.n(), m.sigma_w_sq(), m.sigma_sq(), 0, 0.0, 0.0};
  }
  if (const auto* h = std::get_if<Hellinger>(&g.kind())) {
    std::get<4>(key) = 0;
    std::get<5>(key) = h->p;
  } else {
    const auto& hs = std::get<HockeyStick>(g.kind());
    std::get<4>(key) = 1;
    std::get<5>(key) = hs.beta;
    std::get<6>(key) = hs.gamma;
  }
  return key;
}

DivergenceValue DivergenceCache::get_or_compute(const Model& model, const Generator& g,
                                                const std::function<DivergenceValue()>& compute) {
  const Key key = make_key(model, g);
  {
    std::lock_guard lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
  }
  // Computed outside the lock; a concurrent duplicate computes the same value.
  DivergenceValue value = compute();
  std::lock_guard lock(mutex_);
  return values_.try_emplace(key, value).first->second;
}

std::size_t DivergenceCache::size() const {
  std::lock_guard lock(mutex_);
  return values_.size();
}

DivergenceValue model_divergence(const Model& model, const Generator& g, DivergenceCache& cache,
                                 const QuadratureSettings& settings) {
  return cache.get_or_compute(model, g, [&]() -> DivergenceValue {
    if (const auto* h = std::get_if<Hellinger>(&g.kind())) {
      if (const auto* b = std::get_if<BernoulliModel>(&model)) {
        return h->p == 2.0 ? chi_squared_bernoulli(*b) : hellinger_bernoulli_closed_form(*b, h->p);
      }
      return hellinger_gaussian(std::get<GaussianModel>(model), h->p);
    }
    return f_mi_numeric(model, g, settings);
  });
}

BoundResult fixed_bound(const Model& model, const Generator& g, DivergenceCache& cache,
                        const QuadratureSettings& settings) {
  const double c = small_ball_coefficient(model).coefficient;
  const auto div = model_divergence(model, g, cache, settings);
  if (const auto* h = std::get_if<Hellinger>(&g.kind())) return hellinger_bound(h->p, div, c);
  const auto& hs = std::get<HockeyStick>(g.kind());
  return hockey_stick_bound(hs.beta, hs.gamma, div, c);
}

namespace {

constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

BoundResult optimize_hellinger(const Model& model, const SearchSpec& spec, DivergenceCache& cache) {
  if (spec.p_points < 2 || !(spec.p_min_offset > 0.0) || !(spec.p_max > 1.0 + spec.p_min_offset)) {
    throw ConfigError("empty feasible grid for the Hellinger family");
  }
  // Grid is log-spaced in p - 1.
  const double lo = std::log(spec.p_min_offset);
  const double hi = std::log(spec.p_max - 1.0);
  const auto p_at = [&](double u) { return 1.0 + std::exp(u); };
  std::optional<BoundResult> best;
  const auto score = [&](double u) {
    try {
      auto r = fixed_bound(model, Generator::hellinger(p_at(u)), cache, spec.quadrature);
      if (!best || r.value > best->value) best = r;
      return r.value;
    } catch (const DivergenceInfinite&) {
      return kInfeasible;
    }
  };
  std::vector<double> grid(spec.p_points);
  int best_index = -1;
  double best_value = kInfeasible;
  for (int i = 0; i < spec.p_points; ++i) {
    grid[i] = lo + (hi - lo) * i / (spec.p_points - 1);
    const double v = score(grid[i]);
    if (v > best_value) {
      best_value = v;
      best_index = i;
    }
  }
  if (best_index < 0) throw ConfigError("empty feasible grid for the Hellinger family");
  if (spec.refinement_budget > 3) {
    const double a = grid[std::max(0, best_index - 1)];
    const double b = grid[std::min(spec.p_points - 1, best_index + 1)];
    golden_section_maximize<double>(score, a, b, 1e-12, spec.refinement_budget - 3);
  }
  return *best;
}

BoundResult optimize_hockey_stick(const Model& model, const SearchSpec& spec, DivergenceCache& cache) {
  if (spec.beta_points < 1 || spec.gamma_points < 1 || !(spec.beta_min > 0.0) ||
      !(spec.beta_max >= spec.beta_min) || !(spec.gamma_max >= spec.beta_min)) {
    throw ConfigError("empty feasible grid for the hockey-stick family");
  }
  std::optional<BoundResult> best;
  double best_beta = 0.0;
  double best_gamma = 0.0;
  const auto score = [&](double beta, double gamma) {
    if (!(beta > 0.0) || !(gamma >= beta)) return kInfeasible;
    auto r = fixed_bound(model, Generator::hockey_stick(beta, gamma), cache, spec.quadrature);
    if (!best || r.value > best->value) {
      best = r;
      best_beta = beta;
      best_gamma = gamma;
    }
    return r.value;
  };
  const auto step = [](double a, double b, int points, int i) {
    return points == 1 ? a : a + (b - a) * i / (points - 1);
  };
  for (int i = 0; i < spec.beta_points; ++i) {
    const double beta = step(spec.beta_min, spec.beta_max, spec.beta_points, i);
    if (beta > spec.gamma_max) continue;
    for (int j = 0; j < spec.gamma_points; ++j) score(beta, step(beta, spec.gamma_max, spec.gamma_points, j));
  }
  for (const auto& [beta, gamma] : spec.hockey_stick_seeds) score(beta, gamma);
  if (!best) throw ConfigError("empty feasible grid for the hockey-stick family");

  double d_beta = spec.beta_points > 1 ? (spec.beta_max - spec.beta_min) / (spec.beta_points - 1) : 0.1;
  double d_gamma = spec.gamma_points > 1 ? (spec.gamma_max - spec.beta_min) / (spec.gamma_points - 1) : 0.1;
  int budget = spec.refinement_budget;
  while (budget > 0 && (d_beta > 1e-9 || d_gamma > 1e-9)) {
    const double current = best->value;
    const double beta = best_beta;
    const double gamma = best_gamma;
    bool improved = false;
    const std::array<std::pair<double, double>, 4> moves{
        {{d_beta, 0.0}, {-d_beta, 0.0}, {0.0, d_gamma}, {0.0, -d_gamma}}};
    for (const auto& [db, dg] : moves) {
      if (budget <= 0) break;
      --budget;
      if (score(beta + db, gamma + dg) > current) {
        improved = true;
        break;
      }
    }
    if (!improved) {
      d_beta *= 0.5;
      d_gamma *= 0.5;
    }
  }
  return *best;
}

}  // namespace

BoundResult optimize_parameters(const Model& model, Family family, const SearchSpec& spec,
                                DivergenceCache& cache) {
  return family == Family::hellinger ? optimize_hellinger(model, spec, cache)
                                     : optimize_hockey_stick(model, spec, cache);
}

}  // namespace fdrisk
