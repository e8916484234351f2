#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mdim/graph.hpp"

namespace mdim {

// Slater's leaf / important-vertex data for a tree. A vertex is important when
// it has degree >= 3 and reaches a leaf through a path of degree-2 vertices;
// each such path is a leg.
struct TreeDecoration {
  std::vector<Vertex> leaves;
  std::vector<Vertex> important;
  std::map<Vertex, std::size_t> legs;  // vertex -> number of legs, only entries >= 1
  std::map<Vertex, std::vector<Vertex>> leg_leaves;  // important vertex -> leaf ends of its legs, sorted
};

struct ResolvingWitness {
  std::size_t beta = 0;
  std::vector<Vertex> witness;  // sorted
};

// Requires a tree on >= 2 vertices; throws std::invalid_argument otherwise.
TreeDecoration decorate_tree(const Graph& t);

// Metric dimension of a tree. A single vertex has beta 1, paths have beta 1 and
// otherwise beta = |L| - |K| with the smallest leaf of each important vertex dropped.
ResolvingWitness slater_tree_beta(const Graph& t);

// Metric dimension of a forest: component betas summed, minus one when at least
// one component is an isolated vertex (unless the forest is that single vertex).
ResolvingWitness forest_beta(const Graph& f);

bool is_resolving(const Graph& g, std::span<const Vertex> landmarks);

inline constexpr std::size_t kDefaultBruteForceCap = 12;

// Exhaustive minimum resolving set: subsets by increasing size, lexicographic
// within a size. Throws std::invalid_argument if g has more than size_cap vertices.
ResolvingWitness brute_force_beta(const Graph& g, std::size_t size_cap = kDefaultBruteForceCap);

// Exact metric dimension of a connected graph as a minimum hitting set of the
// vertex-pair separators, by depth-first branch and bound. Returns nullopt when
// the search visits more than node_budget nodes.
std::optional<ResolvingWitness> hitting_set_beta(const Graph& g, std::uint64_t node_budget);

struct GraphBetaOptions {
  // Non-tree components up to this many vertices are solved by brute_force_beta.
  std::size_t brute_force_cap = kDefaultBruteForceCap;
  // Larger non-tree components go to hitting_set_beta with this budget; 0 disables it.
  std::uint64_t search_budget = 2'000'000;
};

struct GraphBeta {
  std::size_t beta = 0;           // valid only when unresolved_components == 0
  std::size_t unresolved_components = 0;
  std::size_t non_tree_components = 0;
  std::size_t non_tree_vertices = 0;
};

// Metric dimension of an arbitrary graph through the component rule: trees via
// Slater, non-tree components exactly within the configured limits.
GraphBeta graph_beta(const Graph& g, const GraphBetaOptions& options = {});

}  // namespace mdim
