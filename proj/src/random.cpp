#include "mdim/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdim {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

mpz_class Rng::below(const mpz_class& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const std::size_t top_bits = bits - 64 * (words - 1);
  const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << top_bits) - 1;
  std::vector<std::uint64_t> buf(words);
  mpz_class candidate;
  do {
    for (auto& w : buf) w = next();
    buf.back() &= top_mask;  // most significant word last
    mpz_import(candidate.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
  } while (candidate >= bound);
  return candidate;
}

Graph prufer_decode(std::size_t n, std::span<const Vertex> sequence) {
  if (n < 2) throw std::invalid_argument("Prüfer decoding needs n >= 2");
  if (sequence.size() != n - 2) throw std::invalid_argument("Prüfer sequence must have length n - 2");
  std::vector<std::size_t> degree(n, 1);
  for (Vertex s : sequence) {
    if (s >= n) throw std::out_of_range("Prüfer entry " + std::to_string(s) + " out of range");
    ++degree[s];
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  // Linear-time decode: `ptr` scans for the smallest leaf, `leaf` follows newly created leaves.
  std::size_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  std::size_t leaf = ptr;
  for (Vertex s : sequence) {
    edges.emplace_back(static_cast<Vertex>(leaf), s);
    if (--degree[s] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(static_cast<Vertex>(leaf), static_cast<Vertex>(n - 1));
  return Graph(n, edges);
}

Graph sample_uniform_tree(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("tree size must be >= 1");
  if (n == 1) return Graph(1);
  std::vector<Vertex> seq(n - 2);
  for (auto& s : seq) s = static_cast<Vertex>(rng.below(n));
  return prufer_decode(n, seq);
}

void for_each_labelled_tree(std::size_t n, const std::function<void(const Graph&)>& visit) {
  if (n < 2 || n > kMaxEnumeratedTreeSize) {
    throw std::invalid_argument("tree enumeration supports 2 <= n <= " + std::to_string(kMaxEnumeratedTreeSize));
  }
  std::vector<Vertex> seq(n - 2, 0);
  while (true) {
    visit(prufer_decode(n, seq));
    std::size_t i = seq.size();
    while (i > 0 && seq[i - 1] == n - 1) seq[--i] = 0;
    if (i == 0) break;
    ++seq[i - 1];
  }
}

ForestCountTable forest_counts(std::size_t max_n) {
  ForestCountTable table;
  table.trees.resize(max_n + 1);
  table.forests.resize(max_n + 1);
  table.trees[0] = 0;
  for (std::size_t k = 1; k <= max_n; ++k) {
    if (k <= 2) {
      table.trees[k] = 1;
    } else {
      mpz_ui_pow_ui(table.trees[k].get_mpz_t(), k, k - 2);
    }
  }
  table.forests[0] = 1;
  mpz_class binom;
  for (std::size_t n = 1; n <= max_n; ++n) {
    mpz_class total = 0;
    binom = 1;  // C(n-1, k-1) for k = 1
    for (std::size_t k = 1; k <= n; ++k) {
      total += binom * table.trees[k] * table.forests[n - k];
      binom *= static_cast<unsigned long>(n - k);
      binom /= static_cast<unsigned long>(k);
    }
    table.forests[n] = total;
  }
  return table;
}

Graph sample_uniform_forest(std::size_t n, const ForestCountTable& table, Rng& rng) {
  if (n == 0) throw std::invalid_argument("forest size must be >= 1");
  if (n > table.max_n()) {
    throw std::invalid_argument("forest size " + std::to_string(n) + " exceeds count table size " +
                                std::to_string(table.max_n()));
  }
  std::vector<Vertex> unused(n);
  std::iota(unused.begin(), unused.end(), Vertex{0});
  std::vector<Edge> edges;
  std::vector<Vertex> local_seq;
  mpz_class weight;
  mpz_class binom;
  while (!unused.empty()) {
    const std::size_t m = unused.size();
    mpz_class r = rng.below(table.forests[m]);
    // Scan sizes from k = m down; large components carry most of the mass.
    std::size_t k = m;
    binom = 1;  // C(m-1, k-1)
    while (true) {
      weight = binom * table.trees[k] * table.forests[m - k];
      if (r < weight) break;
      r -= weight;
      binom *= static_cast<unsigned long>(k - 1);
      binom /= static_cast<unsigned long>(m - k + 1);
      --k;
      if (k == 0) throw std::logic_error("forest size sampling fell off the table");
    }

    // Smallest unused label plus k-1 uniformly chosen others.
    std::vector<Vertex> members{unused.front()};
    std::vector<Vertex> rest(unused.begin() + 1, unused.end());
    for (std::size_t i = 0; i + 1 < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(rest.size() - i));
      std::swap(rest[i], rest[j]);
      members.push_back(rest[i]);
    }
    if (k >= 2) {
      local_seq.resize(k - 2);
      for (auto& s : local_seq) s = static_cast<Vertex>(rng.below(k));
      Graph tree = prufer_decode(k, local_seq);
      for (const auto& [a, b] : tree.edges()) edges.emplace_back(members[a], members[b]);
    }
    std::sort(members.begin(), members.end());
    std::vector<Vertex> remaining;
    remaining.reserve(m - k);
    std::set_difference(unused.begin(), unused.end(), members.begin(), members.end(), std::back_inserter(remaining));
    unused = std::move(remaining);
  }
  return Graph(n, edges);
}

Graph sample_gnp(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  std::vector<Edge> edges;
  if (n < 2 || p == 0.0) return Graph(n);
  if (p == 1.0) {
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b) edges.emplace_back(a, b);
    return Graph(n, edges);
  }
  // Batagelj–Brandes: skip over the lower triangle (v, w), w < v, geometrically.
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = rng.uniform();
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
  }
  return Graph(n, edges);
}

}  // namespace mdim
