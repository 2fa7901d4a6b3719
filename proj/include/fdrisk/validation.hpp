#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fdrisk/bounds.hpp"
#include "fdrisk/generators.hpp"
#include "fdrisk/models.hpp"
#include "fdrisk/simulation.hpp"

namespace fdrisk {

/// One analytic-vs-oracle comparison.
///
/// Two-sided reports pass iff |analytic - oracle| <= max(tolerance_used, 3 oracle_std_err).
/// One-sided reports (bound certification) pass iff
/// analytic <= oracle + max(tolerance_used, 3 oracle_std_err).
struct OracleReport {
  std::string quantity;
  double analytic;
  double oracle;
  double oracle_std_err;
  bool pass;
  double tolerance_used;
  bool one_sided = false;
};

OracleReport compare_two_sided(std::string quantity, double analytic, double oracle, double oracle_std_err,
                               double tolerance);
OracleReport compare_upper(std::string quantity, double analytic, double oracle, double oracle_std_err,
                           double tolerance);

/// Midpoint-rule E_{P_W P_S}[f(ratio)] with no adaptivity. Bernoulli: grid_points
/// nodes in w for each Hamming weight. Gaussian: a sqrt(grid_points)-square grid
/// on the +-8 standard deviation box.
double brute_force_divergence(const Model& model, const Generator& g, std::size_t grid_points);

/// Risk of a concrete estimator by simulation; `oracle` holds the Monte-Carlo mean.
/// `analytic` is the exact risk where one is known (Gaussian posterior mean/median,
/// Bernoulli via exact enumeration) and the report compares the two.
OracleReport monte_carlo_risk(const Model& model, Estimator estimator, std::uint64_t samples,
                              std::uint64_t seed);

/// Bernoulli risk of the posterior median or mean by exact enumeration over the
/// Hamming weight with 1-D quadrature over w.
double exact_bernoulli_risk(const BernoulliModel& model, Estimator estimator);

/// One report per bound: bound.value <= risk.oracle + 3 risk.oracle_std_err.
std::vector<OracleReport> certify_bounds(const Model& model, std::span<const BoundResult> bounds,
                                         const OracleReport& risk);

}  // namespace fdrisk
