#pragma once

// Repeated-trial experiments that measure how often the certified
// tolerances are exceeded in practice.
//
// Seeding: trial t of row r uses Rng(derive_seed(master, r, t)). The nu
// estimate of a comparison experiment uses derive_seed(master, 0, ~0) for
// every ambient dimension, so padded variants see the same gradient stream.
// Trials may run on several threads; results are reduced in trial order, so
// reports do not depend on the thread count.

#include "activesub/bounds.hpp"
#include "activesub/stats.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace activesub {

enum class ExperimentKind { coverage, tightness, comparison };

std::string_view to_string(ExperimentKind kind) noexcept;

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::coverage;
  /// Builtin specification, see function_from_json.
  nlohmann::json function;
  std::size_t trials = 1;
  /// Explicit sample counts; ignored when `plan` is set.
  std::vector<std::uint64_t> samples;
  /// Use the planner's n for (epsilon, delta) as the single row.
  bool plan = false;
  double epsilon = 0.5;
  double delta = 0.1;
  std::optional<std::size_t> k;
  /// Ambient dimensions for comparison experiments.
  std::vector<std::size_t> dims;
  std::size_t nu_samples = 10000;
  unsigned threads = 1;
  std::uint64_t master_seed = 0;
};

/// Parses the JSON config. Field names match ExperimentConfig, plus
/// "experiment" for the kind and "samples": "plan" for plan mode. The master
/// seed is supplied separately and a "seed" field is rejected. Errors are
/// ParseError messages prefixed with the offending field.
ExperimentConfig experiment_config_from_json(const nlohmann::json& config,
                                             std::uint64_t master_seed);

/// Canonical JSON of the fields that determine the results (threads excluded).
nlohmann::ordered_json canonical_json(const ExperimentConfig& cfg);

/// FNV-1a 64-bit hash of canonical_json(cfg).dump().
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct AngleStats {
  double bound = 0.0;
  bool bound_assumptions_ok = false;
  std::size_t exceedances = 0;
  double rate = 0.0;
  BinomialInterval interval;
  double mean_sin = 0.0;
  double quantile_sin = 0.0;
  double max_sin = 0.0;
  std::size_t ill_defined = 0;
  std::size_t ill_defined_without_exceedance = 0;
};

struct CoverageRow {
  std::uint64_t n = 0;
  /// Tolerance tested: epsilon in plan mode, the certified relative error at n otherwise.
  double tolerance = 0.0;
  double certified_rel_error = 0.0;
  std::size_t trials = 0;
  std::size_t exceedances = 0;
  double rate = 0.0;
  BinomialInterval interval;
  double mean_rel_error = 0.0;
  double median_rel_error = 0.0;
  /// Empirical (1 - delta)-quantile of the relative error.
  double quantile_rel_error = 0.0;
  double max_rel_error = 0.0;
  std::optional<AngleStats> angle;
};

struct TightnessRow {
  std::uint64_t n = 0;
  double bernstein_eps = 0.0;
  double markov_eps = 0.0;
  bool markov_assumptions_ok = false;
  double observed_quantile = 0.0;
  double bernstein_slack = 0.0;
  double markov_slack = 0.0;
};

struct ComparisonRow {
  std::size_t m = 0;
  double lambda1 = 0.0;
  double intdim = 0.0;
  double smoothness_ratio = 0.0;
  double lipschitz_L = 0.0;
  std::uint64_t planner_n = 0;
  double nu = 0.0;
  double nu_std_error = 0.0;
  double prior_max_term = 0.0;
  double prior_log_factor = 0.0;
  double prior_samples = 0.0;
};

struct SoundnessCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::uint64_t hash = 0;
  nlohmann::ordered_json function;
  ProblemParams params;
  std::vector<CoverageRow> coverage;
  std::vector<TightnessRow> tightness;
  std::vector<ComparisonRow> comparison;
  /// Log-log slope of the observed quantile against n (tightness only).
  std::optional<double> fitted_exponent;
  std::vector<SoundnessCheck> checks;

  bool all_checks_passed() const noexcept;
};

/// Coverage: for each n, T batches; counts ||E_hat - E||_2 / ||E||_2 > tolerance
/// and, with k set, sin angle > the angle certificate. Requires analytic E.
ExperimentReport run_coverage(const ExperimentConfig& cfg);

/// Tightness: certified relative errors (Bernstein and expectation/Markov)
/// against the observed (1 - delta)-quantile for each n.
ExperimentReport run_tightness_sweep(const ExperimentConfig& cfg);

/// Planner comparison across zero-padded embeddings of the same function.
ExperimentReport run_comparison(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

nlohmann::ordered_json to_json(const ExperimentReport& report);
void write_csv(std::ostream& out, const ExperimentReport& report);

struct OutputFiles {
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes <name>_<kind>.csv and <name>_summary.json into `dir` (created if needed).
OutputFiles write_outputs(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace activesub
