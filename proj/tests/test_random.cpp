#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "builders.hpp"
#include "mdim/random.hpp"
#include "mdim/series.hpp"
#include "oracles.hpp"

using namespace mdim;

namespace {

// Pearson statistic against expected probabilities; true if below the
// 1 - alpha quantile.
bool chi_square_passes(const std::vector<double>& observed, const std::vector<double>& probs, double alpha = 0.01) {
  double total = 0;
  for (double o : observed) total += o;
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * probs[i];
    stat += (observed[i] - e) * (observed[i] - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return stat < boost::math::quantile(boost::math::complement(dist, alpha));
}

std::size_t smallest_component_size(const Graph& g) {
  const auto p = connected_components(g);
  return p.components[p.assignment[0]].size();
}

}  // namespace

TEST(Rng, Deterministic) {
  Rng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs_stream |= x != c.next();
    differs_seed |= x != d.next();
  }
  EXPECT_TRUE(differs_stream);
  EXPECT_TRUE(differs_seed);
}

TEST(Rng, BoundedDraws) {
  Rng rng(1, 0);
  std::vector<double> counts(6, 0);
  for (int i = 0; i < 60000; ++i) ++counts[rng.below(6)];
  EXPECT_TRUE(chi_square_passes(counts, std::vector<double>(6, 1.0 / 6)));
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_THROW(rng.below(std::uint64_t{0}), std::invalid_argument);
}

TEST(Rng, BigIntegerDraws) {
  Rng rng(2, 0);
  const mpz_class bound("100000000000000000000000000000");
  std::vector<double> deciles(10, 0);
  for (int i = 0; i < 20000; ++i) {
    const mpz_class x = rng.below(bound);
    ASSERT_GE(x, 0);
    ASSERT_LT(x, bound);
    const mpz_class bucket = x * 10 / bound;
    ++deciles[bucket.get_ui()];
  }
  EXPECT_TRUE(chi_square_passes(deciles, std::vector<double>(10, 0.1)));
  const mpz_class three(3);
  std::vector<double> small(3, 0);
  for (int i = 0; i < 30000; ++i) ++small[rng.below(three).get_ui()];
  EXPECT_TRUE(chi_square_passes(small, std::vector<double>(3, 1.0 / 3)));
}

TEST(Prufer, SmallCases) {
  const std::vector<Vertex> seq{0};
  EXPECT_EQ(prufer_decode(3, seq), build::star(2));
  EXPECT_EQ(prufer_decode(2, {}), build::path(2));
  const std::vector<Vertex> bad{3};
  EXPECT_THROW(prufer_decode(3, bad), std::out_of_range);
  EXPECT_THROW(prufer_decode(1, {}), std::invalid_argument);
}

TEST(Prufer, AgreesWithQuadraticDecoder) {
  Rng rng(3, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<Vertex> seq(n - 2);
    for (auto& s : seq) s = static_cast<Vertex>(rng.below(n));
    ASSERT_EQ(prufer_decode(n, seq), oracle::naive_prufer(n, seq));
  }
}

TEST(Prufer, BijectiveOnFourVertices) {
  std::set<std::vector<Edge>> trees;
  for (Vertex a = 0; a < 4; ++a) {
    for (Vertex b = 0; b < 4; ++b) {
      const std::vector<Vertex> seq{a, b};
      const Graph t = prufer_decode(4, seq);
      EXPECT_TRUE(is_tree(t));
      trees.insert(t.edges());
    }
  }
  EXPECT_EQ(trees.size(), 16u);
}

TEST(Enumerate, Counts) {
  for (auto [n, expected] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {4, 16}, {6, 1296}, {7, 16807}}) {
    std::set<std::vector<Edge>> seen;
    for_each_labelled_tree(n, [&](const Graph& t) {
      ASSERT_TRUE(is_tree(t));
      seen.insert(t.edges());
    });
    EXPECT_EQ(seen.size(), expected);
  }
  EXPECT_THROW(for_each_labelled_tree(9, [](const Graph&) {}), std::invalid_argument);
  EXPECT_THROW(for_each_labelled_tree(1, [](const Graph&) {}), std::invalid_argument);
}

TEST(UniformTree, SingleVertex) {
  Rng rng(0, 0);
  EXPECT_EQ(sample_uniform_tree(1, rng), Graph(1));
}

TEST(UniformTree, ChiSquareOverAllTrees) {
  for (std::size_t n : {3u, 4u}) {
    std::map<std::vector<Edge>, std::size_t> index;
    for_each_labelled_tree(n, [&](const Graph& t) { index.emplace(t.edges(), index.size()); });
    std::vector<double> counts(index.size(), 0);
    Rng rng(10 + n, 0);
    for (int i = 0; i < 100000; ++i) ++counts[index.at(sample_uniform_tree(n, rng).edges())];
    EXPECT_TRUE(chi_square_passes(counts, std::vector<double>(index.size(), 1.0 / static_cast<double>(index.size()))));
  }
}

TEST(UniformTree, StarFrequencyOnFourVertices) {
  Rng rng(12, 0);
  const int samples = 100000;
  int stars = 0;
  for (int i = 0; i < samples; ++i) {
    const Graph t = sample_uniform_tree(4, rng);
    for (Vertex v = 0; v < 4; ++v) stars += t.degree(v) == 3;
  }
  const double p = 0.25;
  EXPECT_NEAR(stars / double(samples), p, 3 * std::sqrt(p * (1 - p) / samples));
}

TEST(ForestCounts, SmallValues) {
  const auto t = forest_counts(20);
  EXPECT_EQ(t.forests[0], 1);
  EXPECT_EQ(t.forests[1], 1);
  EXPECT_EQ(t.forests[2], 2);
  EXPECT_EQ(t.forests[3], 7);
  EXPECT_EQ(t.forests[4], 38);
  EXPECT_EQ(t.forests[5], 291);
  EXPECT_EQ(t.trees[1], 1);
  EXPECT_EQ(t.trees[5], 125);
  EXPECT_EQ(t.max_n(), 20u);
  std::size_t brute = 0;
  oracle::all_forests(5, [&](const Graph&) { ++brute; });
  EXPECT_EQ(t.forests[5], static_cast<unsigned long>(brute));
}

TEST(ForestCounts, Recurrence) {
  const auto t = forest_counts(40);
  for (std::size_t n = 1; n <= 40; ++n) {
    mpz_class tk;
    mpz_ui_pow_ui(tk.get_mpz_t(), n, n >= 2 ? n - 2 : 0);
    EXPECT_EQ(t.trees[n], tk);
    mpz_class sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), n - 1, k - 1);
      sum += binom * t.trees[k] * t.forests[n - k];
    }
    EXPECT_EQ(t.forests[n], sum);
  }
}

TEST(ForestCounts, MatchExponentialOfTreeSeries) {
  const std::size_t order = 20;
  const auto table = forest_counts(order);
  const auto trees = solve_series_system(order).trees;
  TruncatedSeries at_one(order);
  const auto unit = trees.at_unit();
  for (std::size_t n = 1; n <= order; ++n) at_one.coeff(n) = UVPoly::constant(unit[n]);
  const auto forests = at_one.exp().at_unit();
  mpz_class factorial = 1;
  for (std::size_t n = 1; n <= order; ++n) {
    factorial *= static_cast<unsigned long>(n);
    EXPECT_EQ(mpq_class(table.forests[n]) / factorial, forests[n]) << n;
  }
}

TEST(UniformForest, TwoVertices) {
  const auto table = forest_counts(3);
  Rng rng(20, 0);
  const int samples = 100000;
  int empty = 0;
  for (int i = 0; i < samples; ++i) empty += sample_uniform_forest(2, table, rng).edge_count() == 0;
  EXPECT_NEAR(empty / double(samples), 0.5, 3 * std::sqrt(0.25 / samples));
}

TEST(UniformForest, ThreeVertices) {
  const auto table = forest_counts(3);
  Rng rng(21, 0);
  const int samples = 100000;
  int empty = 0;
  for (int i = 0; i < samples; ++i) empty += sample_uniform_forest(3, table, rng).edge_count() == 0;
  const double p = 1.0 / 7;
  EXPECT_NEAR(empty / double(samples), p, 3 * std::sqrt(p * (1 - p) / samples));
}

TEST(UniformForest, AllForestsOnFiveVerticesEquallyLikely) {
  const auto table = forest_counts(5);
  std::map<std::vector<Edge>, std::size_t> index;
  oracle::all_forests(5, [&](const Graph& f) { index.emplace(f.edges(), index.size()); });
  ASSERT_EQ(index.size(), 291u);
  std::vector<double> counts(index.size(), 0);
  Rng rng(22, 0);
  for (int i = 0; i < 200000; ++i) ++counts[index.at(sample_uniform_forest(5, table, rng).edges())];
  EXPECT_TRUE(chi_square_passes(counts, std::vector<double>(index.size(), 1.0 / 291)));
}

TEST(UniformForest, ComponentSizeLawOnSixVertices) {
  const std::size_t n = 6;
  const auto table = forest_counts(n);
  std::vector<double> probs(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), n - 1, k - 1);
    probs[k - 1] = mpq_class(binom * table.trees[k] * table.forests[n - k], table.forests[n]).get_d();
  }
  std::vector<double> counts(n, 0);
  Rng rng(23, 0);
  for (int i = 0; i < 100000; ++i) ++counts[smallest_component_size(sample_uniform_forest(n, table, rng)) - 1];
  EXPECT_TRUE(chi_square_passes(counts, probs));
}

TEST(UniformForest, VertexZeroIsolated) {
  const auto table = forest_counts(10);
  for (std::size_t n = 2; n <= 10; ++n) {
    Rng rng(30 + n, 0);
    const int samples = 40000;
    int isolated = 0;
    for (int i = 0; i < samples; ++i) isolated += sample_uniform_forest(n, table, rng).degree(0) == 0;
    const double p = mpq_class(table.forests[n - 1], table.forests[n]).get_d();
    EXPECT_NEAR(isolated / double(samples), p, 4 * std::sqrt(p * (1 - p) / samples)) << n;
  }
}

TEST(UniformForest, Errors) {
  const auto table = forest_counts(4);
  Rng rng(0, 0);
  EXPECT_THROW(sample_uniform_forest(5, table, rng), std::invalid_argument);
  EXPECT_THROW(sample_uniform_forest(0, table, rng), std::invalid_argument);
}

TEST(UniformForest, LargeSampleIsAForest) {
  const auto table = forest_counts(2000);
  Rng rng(24, 0);
  const Graph f = sample_uniform_forest(2000, table, rng);
  EXPECT_EQ(f.vertex_count(), 2000u);
  EXPECT_TRUE(is_forest(f));
}

TEST(Gnp, Extremes) {
  Rng rng(40, 0);
  EXPECT_EQ(sample_gnp(30, 0.0, rng).edge_count(), 0u);
  EXPECT_EQ(sample_gnp(30, 1.0, rng), build::complete(30));
  EXPECT_EQ(sample_gnp(0, 0.5, rng).vertex_count(), 0u);
  EXPECT_THROW(sample_gnp(5, 1.5, rng), std::invalid_argument);
  EXPECT_THROW(sample_gnp(5, -0.1, rng), std::invalid_argument);
}

TEST(Gnp, MeanEdgeCount) {
  const std::size_t n = 10000;
  const double c = 0.5, p = c / n;
  const double pairs = n * (n - 1) / 2.0;
  double total = 0;
  const int reps = 30;
  for (int i = 0; i < reps; ++i) {
    Rng rng(41, i);
    total += static_cast<double>(sample_gnp(n, p, rng).edge_count());
  }
  const double mean = total / reps;
  EXPECT_NEAR(mean, c * (n - 1) / 2, 3 * std::sqrt(pairs * p * (1 - p) / reps));
}

TEST(Gnp, PairFrequencies) {
  const std::size_t n = 6;
  const double p = 0.3;
  std::map<Edge, int> hits;
  const int samples = 40000;
  Rng rng(42, 0);
  for (int i = 0; i < samples; ++i) {
    for (auto e : sample_gnp(n, p, rng).edges()) ++hits[e];
  }
  ASSERT_EQ(hits.size(), 15u);
  for (const auto& [e, h] : hits) EXPECT_NEAR(h / double(samples), p, 4 * std::sqrt(p * (1 - p) / samples));
}

TEST(Gnp, Deterministic) {
  Rng a(43, 5), b(43, 5);
  EXPECT_EQ(sample_gnp(500, 0.01, a), sample_gnp(500, 0.01, b));
  auto table = forest_counts(50);
  Rng c(44, 1), d(44, 1);
  EXPECT_EQ(sample_uniform_forest(50, table, c), sample_uniform_forest(50, table, d));
  Rng e(45, 2), f(45, 2);
  EXPECT_EQ(sample_uniform_tree(80, e), sample_uniform_tree(80, f));
}
