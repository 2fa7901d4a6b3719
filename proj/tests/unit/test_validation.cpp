#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fdrisk/bounds.hpp"
#include "fdrisk/errors.hpp"
#include "fdrisk/validation.hpp"

using namespace fdrisk;

TEST_CASE("report comparisons") {
  auto r = compare_two_sided("x", 1.0, 1.05, 0.02, 0.0);
  CHECK(r.pass);
  r = compare_two_sided("x", 1.0, 1.07, 0.02, 0.0);
  CHECK_FALSE(r.pass);
  r = compare_two_sided("x", 1.0, 1.07, 0.0, 0.1);
  CHECK(r.pass);
  CHECK(r.tolerance_used == 0.1);
  r = compare_upper("x", 0.9, 0.5, 0.0, 0.0);
  CHECK_FALSE(r.pass);
  CHECK(r.one_sided);
  CHECK(compare_upper("x", 0.1, 0.5, 0.0, 0.0).pass);
}

TEST_CASE("brute-force divergence: Bernoulli") {
  const Model m{BernoulliModel(1)};
  const double chi = brute_force_divergence(m, Generator::hellinger(2.0), 1'000'000);
  CHECK(std::fabs(chi - chi_squared_bernoulli(BernoulliModel(1)).raw()) <= 1e-5 * (1.0 / 3.0));
  CHECK(brute_force_divergence(m, Generator::hockey_stick(1.0, 3.0), 1000) == 0.0);
  const Model six{BernoulliModel(6)};
  const double hs = brute_force_divergence(six, Generator::hockey_stick(0.75, 2.2), 1'000'000);
  CHECK(std::fabs(hs - e_beta_gamma_numeric(six, 0.75, 2.2).value) <= 1e-6);
  const double h15 = brute_force_divergence(six, Generator::hellinger(1.5), 1'000'000);
  CHECK(std::fabs(h15 - hellinger_bernoulli_closed_form(BernoulliModel(6), 1.5).raw()) <= 1e-6);
  CHECK_THROWS_AS(brute_force_divergence(m, Generator::hellinger(2.0), 10), DomainError);
}

TEST_CASE("brute-force divergence: Gaussian") {
  const Model m{GaussianModel(1, 1.0, 1.0)};
  const double chi = brute_force_divergence(m, Generator::hellinger(2.0), 4'000'000);
  // The chi^2 integrand is wider than the box for larger ratios; at sigma_w = sigma the box still holds it.
  CHECK(std::fabs(chi - hellinger_gaussian_closed_form(1.0, 1.0, 2.0).raw()) <= 1e-4);
  const double hs = brute_force_divergence(m, Generator::hockey_stick(1.0, 1.0), 4'000'000);
  CHECK(std::fabs(hs - e_beta_gamma_numeric(m, 1.0, 1.0).value) <= 1e-4 * hs);
}

TEST_CASE("exact Bernoulli risk") {
  CHECK(exact_bernoulli_risk(BernoulliModel(1), Estimator::posterior_median) ==
        doctest::Approx(0.19526214587563498).epsilon(1e-12));
  // Posterior mean for n = 1 is 1/3 or 2/3; under the 2(1 - w) posterior, E|W - 1/3| = 8/81 + 8/81.
  const double mean_risk = 16.0 / 81.0;
  CHECK(exact_bernoulli_risk(BernoulliModel(1), Estimator::posterior_mean) ==
        doctest::Approx(mean_risk).epsilon(1e-12));
  for (int n : {2, 5, 10, 50}) {
    CHECK(exact_bernoulli_risk(BernoulliModel(n), Estimator::posterior_median) <=
          exact_bernoulli_risk(BernoulliModel(n), Estimator::posterior_mean));
  }
}

TEST_CASE("Monte-Carlo risk") {
  const auto g = monte_carlo_risk(Model{GaussianModel(2, 1.0, 2.0)}, Estimator::posterior_mean, 1'000'000, 11);
  CHECK(g.analytic == doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::sqrt(0.5)).epsilon(1e-14));
  CHECK(g.pass);
  CHECK(g.oracle <= std::sqrt(0.5) + 3.0 * g.oracle_std_err);
  const auto b = monte_carlo_risk(Model{BernoulliModel(1)}, Estimator::posterior_median, 1'000'000, 12);
  CHECK(b.pass);
  CHECK(b.oracle_std_err > 0.0);
  CHECK(monte_carlo_risk(Model{BernoulliModel(7)}, Estimator::posterior_mean, 400'000, 13).pass);
  CHECK_THROWS_AS(monte_carlo_risk(Model{BernoulliModel(1)}, Estimator::posterior_mean, 100, 1), DomainError);
}

TEST_CASE("Monte-Carlo estimates are reproducible") {
  const Model m{BernoulliModel(9)};
  const auto a = monte_carlo_risk(m, Estimator::posterior_median, 200'000, 99);
  const auto b = monte_carlo_risk(m, Estimator::posterior_median, 200'000, 99);
  CHECK(a.oracle == b.oracle);
  CHECK(a.oracle_std_err == b.oracle_std_err);
  const auto c = monte_carlo_risk(m, Estimator::posterior_median, 200'000, 100);
  CHECK(a.oracle != c.oracle);
}

TEST_CASE("bound certification") {
  const Model five{BernoulliModel(5)};
  const auto risk = monte_carlo_risk(five, Estimator::posterior_median, 1'000'000, 3);
  const auto chi = chi_squared_bernoulli(BernoulliModel(5));
  const std::vector<BoundResult> bounds{hellinger_bound(2.0, chi, 2.0),
                                        hockey_stick_bound(0.75, 2.2, DivergenceValue::plain(0.75), 2.0)};
  CHECK(bounds[0].value >= 7.0 / (72.0 * std::sqrt(5.0 * std::numbers::pi)));
  const auto reports = certify_bounds(five, bounds, risk);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].pass);
  CHECK(reports[1].pass);
  CHECK(reports[1].analytic == 0.0);

  const GaussianModel g(10, 1.0, 2.0);
  const auto exact = monte_carlo_risk(Model{g}, Estimator::posterior_mean, 100'000, 4);
  const std::vector<BoundResult> gaussian{
      hellinger_bound(1.5, hellinger_gaussian(g, 1.5), small_ball_coefficient(g).coefficient)};
  CHECK(certify_bounds(Model{g}, gaussian, exact)[0].pass);

  const std::vector<BoundResult> broken{hellinger_bound(2.0, DivergenceValue::hellinger_scaled(1.0, 2.0), 0.01)};
  CHECK_FALSE(certify_bounds(five, broken, risk)[0].pass);
  CHECK_THROWS_AS(certify_bounds(five, std::vector<BoundResult>{}, risk), DomainError);
}
