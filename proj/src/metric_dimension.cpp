#include "mdim/metric_dimension.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mdim {

namespace {

// Follows the thin path starting at `leaf` until it reaches a vertex whose
// degree is not 2: an important vertex, or the far end of a path component.
Vertex walk_leg(const Graph& g, Vertex leaf) {
  Vertex prev = leaf;
  Vertex cur = g.neighbors(leaf)[0];
  while (g.degree(cur) == 2) {
    auto nbrs = g.neighbors(cur);
    Vertex next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
    prev = cur;
    cur = next;
  }
  return cur;
}

// Leaf ends of the legs of every important vertex in the tree components of g.
std::map<Vertex, std::vector<Vertex>> collect_legs(const Graph& g, const ComponentPartition& part) {
  std::map<Vertex, std::vector<Vertex>> legs;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) != 1 || part.kinds[part.assignment[v]] != ComponentKind::NonPathTree) continue;
    legs[walk_leg(g, v)].push_back(v);
  }
  for (auto& [center, leaves] : legs) std::sort(leaves.begin(), leaves.end());
  return legs;
}

// Slater witness for every tree component of g; non-tree components are skipped.
// Returns the per-component witness lists indexed like part.components.
std::vector<std::vector<Vertex>> tree_component_witnesses(const Graph& g, const ComponentPartition& part) {
  std::vector<std::vector<Vertex>> out(part.size());
  const auto legs = collect_legs(g, part);
  for (std::size_t c = 0; c < part.size(); ++c) {
    const auto& members = part.components[c];
    switch (part.kinds[c]) {
      case ComponentKind::IsolatedVertex:
        out[c] = {members.front()};
        break;
      case ComponentKind::Path: {
        auto end = std::find_if(members.begin(), members.end(), [&](Vertex v) { return g.degree(v) == 1; });
        out[c] = {*end};
        break;
      }
      case ComponentKind::NonPathTree:
      case ComponentKind::NonTree:
        break;
    }
  }
  for (const auto& [center, leaves] : legs) {
    auto& w = out[part.assignment[center]];
    w.insert(w.end(), leaves.begin() + 1, leaves.end());
  }
  return out;
}

bool rows_distinct(const std::vector<std::vector<Distance>>& dist, std::span<const Vertex> landmarks) {
  const std::size_t n = dist.size();
  std::vector<std::vector<Distance>> rows(n, std::vector<Distance>(landmarks.size()));
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    const auto& from = dist[landmarks[i]];
    for (std::size_t v = 0; v < n; ++v) rows[v][i] = from[v];
  }
  std::sort(rows.begin(), rows.end());
  return std::adjacent_find(rows.begin(), rows.end()) == rows.end();
}

void require_tree(const Graph& t) {
  if (!is_tree(t)) throw std::invalid_argument("input graph is not a tree");
}

}  // namespace

TreeDecoration decorate_tree(const Graph& t) {
  require_tree(t);
  if (t.vertex_count() < 2) throw std::invalid_argument("tree decoration needs at least 2 vertices");
  const auto part = connected_components(t);
  TreeDecoration deco;
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    if (t.degree(v) == 1) deco.leaves.push_back(v);
  }
  deco.leg_leaves = collect_legs(t, part);
  for (const auto& [center, leaves] : deco.leg_leaves) {
    deco.important.push_back(center);
    deco.legs[center] = leaves.size();
  }
  return deco;
}

ResolvingWitness slater_tree_beta(const Graph& t) {
  require_tree(t);
  return forest_beta(t);
}

ResolvingWitness forest_beta(const Graph& f) {
  if (f.vertex_count() == 0) throw std::invalid_argument("forest_beta needs at least one vertex");
  const auto part = connected_components(f);
  if (f.edge_count() + part.size() != f.vertex_count()) throw std::invalid_argument("input graph contains a cycle");
  if (f.vertex_count() == 1) return {1, {0}};

  auto per_component = tree_component_witnesses(f, part);
  ResolvingWitness out;
  bool dropped_isolated = false;
  for (std::size_t c = 0; c < part.size(); ++c) {
    if (part.kinds[c] == ComponentKind::IsolatedVertex && !dropped_isolated) {
      dropped_isolated = true;
      continue;
    }
    out.witness.insert(out.witness.end(), per_component[c].begin(), per_component[c].end());
  }
  std::sort(out.witness.begin(), out.witness.end());
  out.beta = out.witness.size();
  return out;
}

bool is_resolving(const Graph& g, std::span<const Vertex> landmarks) {
  const auto profile = distance_profile(g, landmarks);
  auto rows = profile.rows;
  std::sort(rows.begin(), rows.end());
  return std::adjacent_find(rows.begin(), rows.end()) == rows.end();
}

ResolvingWitness brute_force_beta(const Graph& g, std::size_t size_cap) {
  const std::size_t n = g.vertex_count();
  if (n > size_cap) {
    throw std::invalid_argument("brute force limited to " + std::to_string(size_cap) + " vertices, got " +
                                std::to_string(n));
  }
  if (n == 0) return {0, {}};
  if (n == 1) return {1, {0}};

  const auto dist = all_pairs_distances(g);
  const auto part = connected_components(g);
  std::vector<std::size_t> needs_landmark;
  for (std::size_t c = 0; c < part.size(); ++c) {
    if (part.kinds[c] != ComponentKind::IsolatedVertex) needs_landmark.push_back(c);
  }

  std::vector<Vertex> subset;
  std::vector<bool> hit(part.size());
  for (std::size_t size = 1; size <= n; ++size) {
    if (size < needs_landmark.size()) continue;
    subset.resize(size);
    std::iota(subset.begin(), subset.end(), Vertex{0});
    while (true) {
      std::fill(hit.begin(), hit.end(), false);
      for (Vertex v : subset) hit[part.assignment[v]] = true;
      bool covered = std::all_of(needs_landmark.begin(), needs_landmark.end(), [&](std::size_t c) { return hit[c]; });
      if (covered && rows_distinct(dist, subset)) return {size, subset};

      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && subset[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  throw std::logic_error("no resolving set found");  // unreachable: V itself resolves
}

namespace {

// Pendant paths ("legs") can be normalized before searching. A landmark inside
// a leg separates no more pairs than the leaf at its end, and every vertex with
// k >= 2 legs needs landmarks on k - 1 of them; leaving out a shortest leg is
// never worse than leaving out a longer one. So some minimum resolving set
// contains the leaf ends of all legs but one shortest at each such vertex, and
// uses no interior leg vertex.
struct LegReduction {
  std::vector<Vertex> forced;
  std::vector<bool> candidate;
};

LegReduction reduce_legs(const Graph& g) {
  const std::size_t n = g.vertex_count();
  LegReduction out;
  out.candidate.assign(n, true);
  std::map<Vertex, std::vector<std::pair<std::size_t, Vertex>>> legs;  // center -> (length, leaf)
  for (Vertex leaf = 0; leaf < n; ++leaf) {
    if (g.degree(leaf) != 1) continue;
    Vertex prev = leaf;
    Vertex cur = g.neighbors(leaf)[0];
    std::vector<Vertex> interior;
    while (g.degree(cur) == 2) {
      interior.push_back(cur);
      auto nbrs = g.neighbors(cur);
      const Vertex next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
      prev = cur;
      cur = next;
    }
    if (g.degree(cur) < 3) continue;  // path component
    for (Vertex v : interior) out.candidate[v] = false;
    legs[cur].push_back({interior.size() + 1, leaf});
  }
  for (auto& [center, list] : legs) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 1; i < list.size(); ++i) out.forced.push_back(list[i].second);
  }
  for (Vertex v : out.forced) out.candidate[v] = false;
  std::sort(out.forced.begin(), out.forced.end());
  return out;
}

// Minimum hitting set of the pair separators {w : d(w, a) != d(w, b)} by
// iterative deepening, branching on the unresolved pair with fewest separators.
class HittingSetSearch {
 public:
  HittingSetSearch(const Graph& g, const LegReduction& reduction, std::uint64_t budget)
      : n_(g.vertex_count()), dist_(all_pairs_distances(g)), forced_(reduction.forced), budget_(budget) {
    baseline_.resize(n_);
    for (Vertex w = 0; w < n_; ++w) baseline_[w] = !reduction.candidate[w];
    std::vector<std::pair<std::size_t, std::pair<Vertex, Vertex>>> keyed;
    for (Vertex a = 0; a < n_; ++a) {
      for (Vertex b = a + 1; b < n_; ++b) {
        bool resolved = false;
        for (Vertex f : forced_) resolved = resolved || dist_[f][a] != dist_[f][b];
        if (resolved) continue;
        std::size_t sep = 0;
        for (Vertex w = 0; w < n_; ++w) sep += !baseline_[w] && dist_[w][a] != dist_[w][b];
        keyed.push_back({sep, {a, b}});
      }
    }
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [sep, pair] : keyed) pairs_.push_back(pair);
    forbidden_ = baseline_;
  }

  std::optional<ResolvingWitness> solve() {
    std::vector<std::uint32_t> all(pairs_.size());
    std::iota(all.begin(), all.end(), 0u);
    const std::size_t floor = forced_.empty() ? 1 : 0;
    for (std::size_t k = std::max(floor, packing_bound(all)); k <= n_; ++k) {
      chosen_ = forced_;
      forbidden_ = baseline_;
      if (search(all, k)) {
        ResolvingWitness out{chosen_.size(), chosen_};
        std::sort(out.witness.begin(), out.witness.end());
        return out;
      }
      if (exhausted_) return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  bool separates(Vertex w, std::uint32_t pair) const {
    const auto [a, b] = pairs_[pair];
    return dist_[w][a] != dist_[w][b];
  }

  // Size of a greedy family of unresolved pairs with pairwise disjoint allowed separators.
  std::size_t packing_bound(const std::vector<std::uint32_t>& unresolved) {
    std::vector<bool> used(n_, false);
    std::size_t count = 0;
    const std::size_t scan = std::min<std::size_t>(unresolved.size(), 96);
    std::vector<Vertex> sep;
    for (std::size_t i = 0; i < scan; ++i) {
      sep.clear();
      bool disjoint = true;
      for (Vertex w = 0; w < n_ && disjoint; ++w) {
        if (forbidden_[w] || !separates(w, unresolved[i])) continue;
        if (used[w]) disjoint = false;
        sep.push_back(w);
      }
      if (!disjoint) continue;
      if (sep.empty()) return n_ + 1;  // pair cannot be separated any more
      for (Vertex w : sep) used[w] = true;
      ++count;
    }
    return count;
  }

  bool search(const std::vector<std::uint32_t>& unresolved, std::size_t remaining) {
    if (unresolved.empty()) return true;
    if (remaining == 0) return false;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    if (packing_bound(unresolved) > remaining) return false;

    const std::uint32_t pivot = unresolved.front();
    std::vector<Vertex> newly_forbidden;
    bool found = false;
    std::vector<std::uint32_t> next;
    for (Vertex w = 0; w < n_ && !found && !exhausted_; ++w) {
      if (forbidden_[w] || !separates(w, pivot)) continue;
      next.clear();
      for (std::uint32_t p : unresolved) {
        if (!separates(w, p)) next.push_back(p);
      }
      chosen_.push_back(w);
      found = search(next, remaining - 1);
      if (found) break;
      chosen_.pop_back();
      forbidden_[w] = true;
      newly_forbidden.push_back(w);
    }
    for (Vertex w : newly_forbidden) forbidden_[w] = false;
    return found;
  }

  std::size_t n_;
  std::vector<std::vector<Distance>> dist_;
  std::vector<Vertex> forced_;
  std::vector<std::pair<Vertex, Vertex>> pairs_;  // unresolved by forced_, ascending separator count
  std::vector<bool> baseline_;                    // vertices never branched on
  std::vector<bool> forbidden_;
  std::vector<Vertex> chosen_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

std::optional<ResolvingWitness> hitting_set_beta(const Graph& g, std::uint64_t node_budget) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return ResolvingWitness{0, {}};
  if (n == 1) return ResolvingWitness{1, {0}};
  HittingSetSearch search(g, reduce_legs(g), node_budget);
  return search.solve();
}

GraphBeta graph_beta(const Graph& g, const GraphBetaOptions& options) {
  GraphBeta out;
  const std::size_t n = g.vertex_count();
  if (n == 0) return out;
  if (n == 1) {
    out.beta = 1;
    return out;
  }
  const auto part = connected_components(g);

  std::vector<std::size_t> leaves(part.size(), 0);
  std::vector<std::size_t> important(part.size(), 0);
  for (const auto& [center, leg_ends] : collect_legs(g, part)) {
    leaves[part.assignment[center]] += leg_ends.size();
    ++important[part.assignment[center]];
  }

  bool any_isolated = false;
  for (std::size_t c = 0; c < part.size(); ++c) {
    switch (part.kinds[c]) {
      case ComponentKind::IsolatedVertex:
        any_isolated = true;
        out.beta += 1;
        break;
      case ComponentKind::Path:
        out.beta += 1;
        break;
      case ComponentKind::NonPathTree:
        out.beta += leaves[c] - important[c];
        break;
      case ComponentKind::NonTree: {
        const auto& members = part.components[c];
        ++out.non_tree_components;
        out.non_tree_vertices += members.size();
        Graph sub = induced_subgraph(g, members);
        if (members.size() <= options.brute_force_cap) {
          out.beta += brute_force_beta(sub, options.brute_force_cap).beta;
        } else if (options.search_budget > 0) {
          if (auto found = hitting_set_beta(sub, options.search_budget)) {
            out.beta += found->beta;
          } else {
            ++out.unresolved_components;
          }
        } else {
          ++out.unresolved_components;
        }
        break;
      }
    }
  }
  if (any_isolated) out.beta -= 1;
  return out;
}

}  // namespace mdim
