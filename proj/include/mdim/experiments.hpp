#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdim/metric_dimension.hpp"

namespace mdim {

enum class Model { UniformTree, UniformForest, Gnp };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Model model);
Model parse_model(std::string_view name);
std::string_view to_string(OutputFormat format);
OutputFormat parse_format(std::string_view name);

struct ExperimentConfig {
  Model model = Model::UniformTree;
  std::size_t n = 0;
  std::optional<double> c;           // gnp: p = c / n
  std::optional<double> p_exponent;  // gnp: p = n^(-a)
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  std::string output;
  OutputFormat format = OutputFormat::Csv;
  std::size_t workers = 0;  // 0: MDIM_WORKERS or hardware concurrency
  GraphBetaOptions beta_options;

  // Throws std::invalid_argument on invariant violations.
  void validate() const;
  double edge_probability() const;
};

// How integer-valued samples are compared with the normal CDF.
enum class KsMode {
  Continuous,  // classical one-sample statistic
  Lattice,     // integer data: ECDF at each integer k vs Phi((k + 1/2 - mean) / sd)
};

struct NormalityStats {
  double mean = 0;
  double variance = 0;  // unbiased
  double skewness = 0;
  double excess_kurtosis = 0;
  double ks = 0;
};

// Moments of the standardized sample and its Kolmogorov–Smirnov distance to
// the standard normal. Needs >= 100 samples; throws std::domain_error on
// fewer or on zero variance.
NormalityStats normality_stats(std::span<const double> samples, KsMode mode = KsMode::Continuous);

inline constexpr std::size_t kMinNormalitySamples = 100;

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::optional<std::size_t>> betas;  // nullopt: replicate excluded
  std::size_t included = 0;
  std::size_t excluded = 0;
  double exclusion_rate = 0;
  std::size_t non_tree_components = 0;
  std::size_t non_tree_vertices = 0;

  double mean = 0;
  double variance = 0;  // unbiased, 0 with fewer than two samples
  double mean_over_n = 0;
  double variance_over_n = 0;
  std::optional<NormalityStats> normality;  // present with >= 100 included replicates

  std::optional<double> predicted_mean_constant;
  std::optional<double> predicted_variance_constant;
};

// Replicate i draws from Rng(seed, i). Replicates run on worker threads and are
// reduced in replicate order, so the result does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Fills the statistics of `result` from result.betas.
void summarize(ExperimentResult& result);

std::string format_csv(const ExperimentResult& result);
std::string format_json(const ExperimentResult& result);

// Writes format_csv / format_json to cfg.output; throws std::runtime_error if unwritable.
void emit(const ExperimentResult& result, const std::string& path, OutputFormat format);

// Per-replicate values read back from format_csv output (nullopt for excluded rows).
std::vector<std::optional<std::size_t>> parse_csv_betas(std::string_view csv);

struct ToleranceCheck {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
};

// Desk-scale acceptance tolerances for a finished experiment: relative mean
// error < 3%, relative variance error < 25% (tree and forest models), KS < 0.05,
// |skewness| < 0.15 (tree and forest), and beta/n > 0.99 for p = n^(-a), a > 1.
std::vector<ToleranceCheck> check_tolerances(const ExperimentResult& result);

std::size_t default_worker_count();

}  // namespace mdim
