#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "mdim/asymptotics.hpp"
#include "mdim/experiments.hpp"
#include "mdim/random.hpp"
#include "mdim/series.hpp"

using namespace mdim;

namespace {

ExperimentConfig tree_config(std::size_t n, std::size_t replicates, std::uint64_t seed = 1) {
  ExperimentConfig cfg;
  cfg.model = Model::UniformTree;
  cfg.n = n;
  cfg.replicates = replicates;
  cfg.seed = seed;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, Validation) {
  ExperimentConfig cfg = tree_config(10, 1);
  EXPECT_NO_THROW(cfg.validate());
  cfg.replicates = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.replicates = 1;
  cfg.c = 0.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.model = Model::Gnp;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_DOUBLE_EQ(cfg.edge_probability(), 0.05);
  cfg.p_exponent = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.c.reset();
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_NEAR(cfg.edge_probability(), std::pow(10.0, -1.5), 1e-15);
  cfg.p_exponent.reset();
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
}

TEST(Config, NamesRoundTrip) {
  for (Model m : {Model::UniformTree, Model::UniformForest, Model::Gnp}) EXPECT_EQ(parse_model(to_string(m)), m);
  EXPECT_EQ(parse_format("json"), OutputFormat::Json);
  EXPECT_THROW(parse_model("planar"), std::invalid_argument);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(Normality, StandardNormalCalibration) {
  std::mt19937_64 gen(123);
  std::normal_distribution<double> normal;
  std::vector<double> x(100000);
  for (auto& v : x) v = normal(gen);
  const auto s = normality_stats(x);
  EXPECT_LT(std::abs(s.skewness), 0.03);
  EXPECT_LT(std::abs(s.excess_kurtosis), 0.06);
  EXPECT_LT(s.ks, 0.005);
}

TEST(Normality, RoundedNormalNeedsLatticeMode) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal(50.0, 4.0);
  std::vector<double> x(20000);
  for (auto& v : x) v = std::round(normal(gen));
  EXPECT_LT(normality_stats(x, KsMode::Lattice).ks, 0.02);
  EXPECT_GT(normality_stats(x, KsMode::Continuous).ks, 0.04);
}

TEST(Normality, Degenerate) {
  EXPECT_THROW(normality_stats(std::vector<double>(200, 3.0)), std::domain_error);
  EXPECT_THROW(normality_stats(std::vector<double>(99, 1.0)), std::domain_error);
}

TEST(Normality, ClassicalKsOnUniformSample) {
  // Evenly spaced normal quantiles give the minimum possible distance 1/(2n).
  std::vector<double> x;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double p = (i + 0.5) / n;
    x.push_back(std::sqrt(2.0) * boost::math::erf_inv(2 * p - 1));
  }
  const auto s = normality_stats(x);
  EXPECT_LT(s.ks, 0.002);
}

TEST(Experiment, DeterministicAcrossWorkerCounts) {
  auto cfg = tree_config(200, 64, 11);
  cfg.workers = 1;
  const auto a = run_experiment(cfg);
  cfg.workers = 4;
  const auto b = run_experiment(cfg);
  EXPECT_EQ(a.betas, b.betas);
  EXPECT_EQ(format_csv(a), format_csv(b));
  EXPECT_EQ(format_json(a), format_json(b));
}

TEST(Experiment, GnpDeterministicAcrossWorkerCounts) {
  ExperimentConfig cfg;
  cfg.model = Model::Gnp;
  cfg.n = 2000;
  cfg.c = 0.8;
  cfg.replicates = 12;
  cfg.seed = 3;
  cfg.workers = 1;
  const auto a = run_experiment(cfg);
  cfg.workers = 3;
  EXPECT_EQ(format_json(a), format_json(run_experiment(cfg)));
}

TEST(Experiment, ReplicateUsesItsOwnStream) {
  const auto r = run_experiment(tree_config(50, 5, 9));
  for (std::size_t i = 0; i < 5; ++i) {
    Rng rng(9, i);
    EXPECT_EQ(r.betas[i], forest_beta(sample_uniform_tree(50, rng)).beta);
  }
}

TEST(Experiment, ExactLawAgreementForSmallTrees) {
  const auto sys = solve_series_system(8);
  for (std::size_t n : {5u, 8u}) {
    const auto exact = beta_distribution(sys.trees, n);
    const auto r = run_experiment(tree_config(n, 100000, 100 + n));
    std::map<int, double> counts;
    for (const auto& b : r.betas) counts[static_cast<int>(*b)] += 1;
    double stat = 0;
    for (const auto& [beta, p] : exact.pmf) {
      const double e = 100000 * p.get_d();
      stat += (counts[beta] - e) * (counts[beta] - e) / e;
      counts.erase(beta);
    }
    EXPECT_TRUE(counts.empty());
    boost::math::chi_squared dist(static_cast<double>(exact.pmf.size() - 1));
    EXPECT_LT(stat, boost::math::quantile(boost::math::complement(dist, 0.01))) << n;
  }
}

TEST(Experiment, ForestModelSmall) {
  ExperimentConfig cfg;
  cfg.model = Model::UniformForest;
  cfg.n = 3;
  cfg.replicates = 70000;
  cfg.seed = 4;
  const auto r = run_experiment(cfg);
  std::size_t twos = 0;
  for (const auto& b : r.betas) twos += *b == 2;
  const double p = 1.0 / 7;
  EXPECT_NEAR(twos / 70000.0, p, 4 * std::sqrt(p * (1 - p) / 70000));
  EXPECT_DOUBLE_EQ(*r.predicted_mean_constant, tree_constants<double>().mu);
}

TEST(Experiment, SummaryRecomputableFromCsv) {
  const auto r = run_experiment(tree_config(300, 150, 5));
  ASSERT_TRUE(r.normality.has_value());
  const std::string csv = format_csv(r);
  ExperimentResult back;
  back.config = r.config;
  back.betas = parse_csv_betas(csv);
  back.predicted_mean_constant = r.predicted_mean_constant;
  back.predicted_variance_constant = r.predicted_variance_constant;
  summarize(back);
  EXPECT_EQ(back.betas, r.betas);
  EXPECT_EQ(back.mean, r.mean);
  EXPECT_EQ(back.variance, r.variance);
  EXPECT_EQ(back.normality->ks, r.normality->ks);
  EXPECT_EQ(format_csv(back), csv);
}

TEST(Experiment, ExcludedReplicatesAreReported) {
  ExperimentResult r;
  r.config = tree_config(10, 4);
  r.betas = {3, std::nullopt, 5, std::nullopt};
  summarize(r);
  EXPECT_EQ(r.included, 2u);
  EXPECT_EQ(r.excluded, 2u);
  EXPECT_DOUBLE_EQ(r.exclusion_rate, 0.5);
  EXPECT_DOUBLE_EQ(r.mean, 4.0);
  EXPECT_DOUBLE_EQ(r.variance, 2.0);
  EXPECT_FALSE(r.normality.has_value());
  const std::string csv = format_csv(r);
  EXPECT_NE(csv.find("1,NA\n"), std::string::npos);
  EXPECT_EQ(parse_csv_betas(csv), r.betas);
}

TEST(Experiment, JsonEchoesConfig) {
  auto cfg = tree_config(40, 3, 77);
  const auto j = nlohmann::json::parse(format_json(run_experiment(cfg)));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["config"]["seed"], 77);
  EXPECT_EQ(j["config"]["model"], "uniform-tree");
  EXPECT_EQ(j["config"]["n"], 40);
  EXPECT_EQ(j["betas"].size(), 3u);
  EXPECT_TRUE(j["config"]["c"].is_null());
}

TEST(Experiment, EmitWritesIdenticalBytes) {
  const auto r = run_experiment(tree_config(100, 120, 6));
  const std::string a = ::testing::TempDir() + "mdim_emit_a.csv";
  const std::string b = ::testing::TempDir() + "mdim_emit_b.csv";
  emit(r, a, OutputFormat::Csv);
  emit(run_experiment(tree_config(100, 120, 6)), b, OutputFormat::Csv);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), format_csv(r));
  EXPECT_THROW(emit(r, "/nonexistent-dir/out.csv", OutputFormat::Json), std::runtime_error);
}

TEST(Experiment, GnpSparseRegime) {
  ExperimentConfig cfg;
  cfg.model = Model::Gnp;
  cfg.n = 3000;
  cfg.p_exponent = 1.5;
  cfg.replicates = 5;
  const auto r = run_experiment(cfg);
  EXPECT_GT(r.mean_over_n, 0.98);
  EXPECT_EQ(*r.predicted_mean_constant, 1.0);
  const auto checks = check_tolerances(r);
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_EQ(checks[0].name, "mean_over_n");
}

TEST(Experiment, GnpExclusionRateSmall) {
  ExperimentConfig cfg;
  cfg.model = Model::Gnp;
  cfg.n = 3000;
  cfg.c = 0.9;
  cfg.replicates = 100;
  cfg.seed = 8;
  const auto r = run_experiment(cfg);
  EXPECT_LT(r.exclusion_rate, 0.01);
  EXPECT_GT(r.non_tree_components, 0u);
  EXPECT_NEAR(*r.predicted_mean_constant, gnp_constant_closed(0.9), 1e-15);
}

TEST(Experiment, ToleranceChecksFlagBreaches) {
  ExperimentResult r;
  r.config = tree_config(100, 1);
  r.mean_over_n = 0.2;
  r.variance_over_n = 0.0637;
  r.predicted_mean_constant = 0.14076941;
  r.predicted_variance_constant = 0.06374815;
  r.normality = NormalityStats{0, 0, 0.01, 0, 0.01};
  const auto checks = check_tolerances(r);
  ASSERT_EQ(checks.size(), 4u);
  EXPECT_FALSE(checks[0].pass);
  EXPECT_TRUE(checks[1].pass);
  EXPECT_TRUE(checks[2].pass);
  EXPECT_TRUE(checks[3].pass);
}

TEST(Workers, EnvironmentOverride) {
  setenv("MDIM_WORKERS", "3", 1);
  EXPECT_EQ(default_worker_count(), 3u);
  setenv("MDIM_WORKERS", "zero", 1);
  EXPECT_GE(default_worker_count(), 1u);
  unsetenv("MDIM_WORKERS");
}
