#include "fdrisk/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fdrisk/errors.hpp"
#include "fdrisk/numerics.hpp"

namespace fdrisk {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Running sums of x and x^2 for one batch.
struct Moments {
  CompensatedSum sum;
  CompensatedSum sum_sq;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
};

/// Runs `draw(rng)` samples times over fixed-size batches and merges in batch order.
template <class Draw>
MonteCarloEstimate run_batches(std::uint64_t samples, std::uint64_t seed, Draw&& draw) {
  if (samples < 2) throw DomainError("Monte Carlo needs at least two samples");
  CompensatedSum total;
  CompensatedSum total_sq;
  for (std::uint64_t start = 0, batch = 0; start < samples; start += kMonteCarloBatch, ++batch) {
    const std::uint64_t count = std::min(kMonteCarloBatch, samples - start);
    CounterRng rng(seed, batch);
    Moments m;
    for (std::uint64_t i = 0; i < count; ++i) m.add(draw(rng));
    total += m.sum.value();
    total_sq += m.sum_sq.value();
  }
  const double n = static_cast<double>(samples);
  const double mean = total.value() / n;
  const double var = std::max(0.0, (total_sq.value() - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), samples};
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ull)) {}

std::uint64_t CounterRng::next_u64() noexcept { return mix64(key_ + kGolden * ++counter_); }

double CounterRng::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

MonteCarloEstimate simulate_absolute_error(const Model& model, Estimator estimator,
                                           std::uint64_t samples, std::uint64_t seed) {
  if (const auto* bern = std::get_if<BernoulliModel>(&model)) {
    const int n = bern->n();
    // Posterior given k is Beta(k + 1, n - k + 1).
    std::vector<double> estimate(n + 1);
    for (int k = 0; k <= n; ++k) {
      estimate[k] = estimator == Estimator::posterior_median ? beta_median(k + 1.0, n - k + 1.0)
                                                             : (k + 1.0) / (n + 2.0);
    }
    return run_batches(samples, seed, [&](CounterRng& rng) {
      const double w = rng.uniform();
      int k = 0;
      for (int i = 0; i < n; ++i) k += rng.uniform() < w ? 1 : 0;
      return std::fabs(w - estimate[k]);
    });
  }
  const auto& gauss = std::get<GaussianModel>(model);
  const double sd_w = std::sqrt(gauss.sigma_w_sq());
  const double sd_noise = std::sqrt(gauss.mean_noise_variance());
  // Gaussian posterior: mean and median coincide.
  const double shrink = gauss.sigma_w_sq() / gauss.marginal_variance();
  return run_batches(samples, seed, [&](CounterRng& rng) {
    const double w = sd_w * rng.normal();
    const double x_bar = w + sd_noise * rng.normal();
    return std::fabs(w - shrink * x_bar);
  });
}

MonteCarloEstimate simulate_f_divergence(const Model& model, const Generator& g,
                                         std::uint64_t samples, std::uint64_t seed) {
  if (const auto* bern = std::get_if<BernoulliModel>(&model)) {
    const int n = bern->n();
    std::vector<double> log_const(n + 1);
    for (int k = 0; k <= n; ++k) log_const[k] = std::log(n + 1.0) + log_binomial(n, k);
    return run_batches(samples, seed, [&](CounterRng& rng) {
      const double w = rng.uniform();
      // Marginal of the Hamming weight is uniform on {0, ..., n}.
      const int k = std::min(n, static_cast<int>(rng.uniform() * (n + 1)));
      return g.evaluate(std::exp(log_const[k] + k * std::log(w) + (n - k) * std::log1p(-w)));
    });
  }
  const auto& gauss = std::get<GaussianModel>(model);
  const double sd_w = std::sqrt(gauss.sigma_w_sq());
  const double sd_x = std::sqrt(gauss.marginal_variance());
  return run_batches(samples, seed, [&](CounterRng& rng) {
    const double w = sd_w * rng.normal();
    const double x_bar = sd_x * rng.normal();
    return g.evaluate(density_ratio(gauss, w, x_bar));
  });
}

}  // namespace fdrisk
