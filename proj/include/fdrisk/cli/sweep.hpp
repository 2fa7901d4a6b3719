#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fdrisk/bounds.hpp"
#include "fdrisk/models.hpp"
#include "fdrisk/validation.hpp"

namespace fdrisk::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240531;

enum class ModelKind { bernoulli, gaussian };

struct ModelSpec {
  ModelKind kind = ModelKind::bernoulli;
  double sigma_w_sq = 1.0;
  double sigma_sq = 2.0;

  Model at(int n) const;
};

struct NRange {
  int first = 1;
  int last = 50;
};

/// Parses "A..B" (or a single integer) into an inclusive range.
NRange parse_n_range(const std::string& text);

enum class ParameterMode { fixed, optimized };

struct FixedParameters {
  double p = 2.0;
  double beta = 0.75;
  double gamma = 2.2;
};

struct SweepConfig {
  ModelSpec model;
  NRange n_range;
  std::vector<Family> families{Family::hellinger, Family::hockey_stick};
  ParameterMode mode = ParameterMode::fixed;
  FixedParameters fixed;
  SearchSpec search;
  bool oracle = false;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> svg;

  /// Throws ConfigError or DomainError naming the violated precondition.
  void validate() const;
  bool has(Family family) const;
};

struct RiskRow {
  int n;
  std::optional<BoundResult> hellinger;
  std::optional<BoundResult> hockey_stick;
  std::optional<RiskReference> oracle;
};

struct RiskCurve {
  std::vector<RiskRow> rows;
};

/// Seed for the oracle at sample size n; distinct n get unrelated streams.
std::uint64_t seed_for(std::uint64_t seed, int n);

/// The generator a family resolves to under fixed parameters.
Generator fixed_generator(Family family, const FixedParameters& fixed);

BoundResult family_bound(const Model& model, Family family, const SweepConfig& config, DivergenceCache& cache);

RiskRow compute_row(const SweepConfig& config, int n, DivergenceCache& cache);
RiskCurve run_sweep(const SweepConfig& config);

/// `n,hellinger_bound,hockey_stick_bound,oracle_risk,oracle_stderr`, 17 significant digits,
/// empty cells for columns that were not requested.
std::string to_csv(const RiskCurve& curve);

/// Log-scale line plot of every populated column against n.
std::string to_svg(const RiskCurve& curve, const std::string& title);

/// 17 significant digits, independent of the global locale.
std::string format_number(double value);

struct ValidationRun {
  std::vector<OracleReport> reports;
  bool all_pass() const;
};

/// Certification suite over the configured model and n-range: Monte-Carlo risk against
/// exact risk, and every fixed and optimized bound against the reference risk.
/// `negate` injects one violating bound, to prove the harness can fail.
ValidationRun run_validation(const SweepConfig& config, bool negate = false);

std::string reports_to_csv(const std::vector<OracleReport>& reports);
std::string reports_to_table(const std::vector<OracleReport>& reports);

}  // namespace fdrisk::cli
