#pragma once

#include <cstdint>

#include "fdrisk/generators.hpp"
#include "fdrisk/models.hpp"

namespace fdrisk {

/// Counter-based generator: output i of stream s under seed is a pure function of
/// (seed, s, i), so batches can be generated independently and in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class Estimator { posterior_median, posterior_mean };

/// Mean and standard error of a Monte-Carlo average.
struct MonteCarloEstimate {
  double mean;
  double std_error;
  std::uint64_t samples;
};

/// Samples per independently seeded batch; batch b uses stream b.
inline constexpr std::uint64_t kMonteCarloBatch = 1u << 16;

/// E|W - estimator(X^n)| with W drawn from the prior and X^n from the likelihood.
MonteCarloEstimate simulate_absolute_error(const Model& model, Estimator estimator,
                                           std::uint64_t samples, std::uint64_t seed);

/// E[f(ratio)] with (W, S) drawn from the product of the marginals.
MonteCarloEstimate simulate_f_divergence(const Model& model, const Generator& g,
                                         std::uint64_t samples, std::uint64_t seed);

}  // namespace fdrisk
