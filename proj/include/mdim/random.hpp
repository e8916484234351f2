#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "mdim/graph.hpp"

namespace mdim {

// Seedable, splittable generator: a std::mt19937_64 keyed by (seed, stream)
// through std::seed_seq. Bounded integers and doubles are derived here rather
// than through <random> distributions, whose output is implementation-defined.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform big integer on [0, bound); bound > 0.
  mpz_class below(const mpz_class& bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// Tree on n >= 2 vertices from its Prüfer sequence (length n - 2, entries < n).
Graph prufer_decode(std::size_t n, std::span<const Vertex> sequence);

Graph sample_uniform_tree(std::size_t n, Rng& rng);

inline constexpr std::size_t kMaxEnumeratedTreeSize = 8;

// Calls visit once for each of the n^(n-2) labelled trees on n vertices, in
// lexicographic Prüfer order. 2 <= n <= 8.
void for_each_labelled_tree(std::size_t n, const std::function<void(const Graph&)>& visit);

// Exact counts: trees[k] = k^(k-2) (trees[1] = 1) and forests[n], the number of
// labelled forests on n vertices (forests[0] = 1).
struct ForestCountTable {
  std::vector<mpz_class> trees;
  std::vector<mpz_class> forests;

  std::size_t max_n() const { return forests.size() - 1; }
};

ForestCountTable forest_counts(std::size_t max_n);

// Uniform labelled forest on n vertices: the component of the smallest unused
// label gets size k with probability C(m-1, k-1) t_k f_(m-k) / f_m, then a
// uniform tree is placed on it.
Graph sample_uniform_forest(std::size_t n, const ForestCountTable& table, Rng& rng);

// Erdős–Rényi G(n, p) via geometric edge skipping.
Graph sample_gnp(std::size_t n, double p, Rng& rng);

}  // namespace mdim
