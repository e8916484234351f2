#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdim {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Hop count between two vertices, or the unreachable sentinel when they lie in
// different components. Unreachable compares equal only to itself and orders
// after every finite distance.
class Distance {
 public:
  constexpr Distance() = default;
  constexpr explicit Distance(std::uint32_t hops) : value_(hops) {
    if (hops == kSentinel) throw std::overflow_error("distance overflow");
  }

  static constexpr Distance unreachable() {
    Distance d;
    d.value_ = kSentinel;
    return d;
  }

  constexpr bool reachable() const { return value_ != kSentinel; }

  std::uint32_t hops() const {
    if (!reachable()) throw std::logic_error("unreachable distance has no hop count");
    return value_;
  }

  constexpr auto operator<=>(const Distance&) const = default;

 private:
  static constexpr std::uint32_t kSentinel = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t value_ = kSentinel;
};

std::string to_string(Distance d);

// Simple undirected graph on the dense label set 0..n-1. Immutable once built.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);
  // Throws std::invalid_argument on self-loops, duplicate edges or ids >= n.
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  bool has_edge(Vertex a, Vertex b) const;

  // Edges as (min, max) pairs in lexicographic order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph& other) const { return adjacency_ == other.adjacency_; }

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

std::vector<Distance> bfs_distances(const Graph& g, Vertex source);

// Row v holds the distances from v to every vertex.
std::vector<std::vector<Distance>> all_pairs_distances(const Graph& g);

struct DistanceProfile {
  std::vector<Vertex> landmarks;
  std::vector<std::vector<Distance>> rows;  // rows[v][i] = dist(v, landmarks[i])
};

DistanceProfile distance_profile(const Graph& g, std::span<const Vertex> landmarks);

enum class ComponentKind { IsolatedVertex, Path, NonPathTree, NonTree };

std::string_view to_string(ComponentKind kind);

struct ComponentPartition {
  std::vector<std::size_t> assignment;         // vertex -> component id
  std::vector<std::vector<Vertex>> components;  // sorted vertex lists, ordered by smallest vertex
  std::vector<ComponentKind> kinds;
  std::vector<std::size_t> edge_counts;

  std::size_t size() const { return components.size(); }
};

ComponentPartition connected_components(const Graph& g);

bool is_forest(const Graph& g);
bool is_tree(const Graph& g);

// Subgraph induced by `vertices`, relabelled to 0..k-1 in the given order.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

class GraphFormatError : public std::runtime_error {
 public:
  GraphFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Edge-list text: header "n m" followed by m lines "u v".
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& g);

Graph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace mdim
