#include "mdim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

namespace mdim {

std::string to_string(Distance d) {
  return d.reachable() ? std::to_string(d.hops()) : std::string("inf");
}

Graph::Graph(std::size_t n) : adjacency_(n) {}

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adjacency_(n) {
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") references a vertex >= " + std::to_string(n));
    }
    if (a == b) throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto& adj = adjacency_[v];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      auto dup = *std::adjacent_find(adj.begin(), adj.end());
      throw std::invalid_argument("duplicate edge (" + std::to_string(std::min<std::size_t>(v, dup)) +
                                  ", " + std::to_string(std::max<std::size_t>(v, dup)) + ")");
    }
  }
  edge_count_ = edges.size();
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  const auto& adj = adjacency_.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex v = 0; v < adjacency_.size(); ++v) {
    for (Vertex w : adjacency_[v]) {
      if (v < w) out.emplace_back(v, w);
    }
  }
  return out;
}

std::vector<Distance> bfs_distances(const Graph& g, Vertex source) {
  const std::size_t n = g.vertex_count();
  if (source >= n) throw std::out_of_range("bfs source " + std::to_string(source) + " out of range");
  std::vector<Distance> dist(n, Distance::unreachable());
  std::vector<Vertex> queue;
  queue.reserve(n);
  queue.push_back(source);
  dist[source] = Distance(0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    const auto next = Distance(dist[v].hops() + 1);
    for (Vertex w : g.neighbors(v)) {
      if (!dist[w].reachable()) {
        dist[w] = next;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<std::vector<Distance>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<Distance>> out;
  out.reserve(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) out.push_back(bfs_distances(g, v));
  return out;
}

DistanceProfile distance_profile(const Graph& g, std::span<const Vertex> landmarks) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> seen(n, false);
  for (Vertex l : landmarks) {
    if (l >= n) throw std::out_of_range("landmark " + std::to_string(l) + " out of range");
    if (seen[l]) throw std::invalid_argument("duplicate landmark " + std::to_string(l));
    seen[l] = true;
  }
  DistanceProfile profile;
  profile.landmarks.assign(landmarks.begin(), landmarks.end());
  profile.rows.assign(n, std::vector<Distance>(landmarks.size()));
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    auto dist = bfs_distances(g, landmarks[i]);
    for (std::size_t v = 0; v < n; ++v) profile.rows[v][i] = dist[v];
  }
  return profile;
}

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::IsolatedVertex: return "isolated-vertex";
    case ComponentKind::Path: return "path";
    case ComponentKind::NonPathTree: return "non-path-tree";
    case ComponentKind::NonTree: return "non-tree";
  }
  return "unknown";
}

ComponentPartition connected_components(const Graph& g) {
  const std::size_t n = g.vertex_count();
  constexpr auto kUnassigned = static_cast<std::size_t>(-1);
  ComponentPartition part;
  part.assignment.assign(n, kUnassigned);
  std::vector<Vertex> stack;
  for (Vertex root = 0; root < n; ++root) {
    if (part.assignment[root] != kUnassigned) continue;
    const std::size_t id = part.components.size();
    std::vector<Vertex> members;
    std::size_t degree_sum = 0;
    bool max_degree_two = true;
    stack.push_back(root);
    part.assignment[root] = id;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      members.push_back(v);
      degree_sum += g.degree(v);
      if (g.degree(v) > 2) max_degree_two = false;
      for (Vertex w : g.neighbors(v)) {
        if (part.assignment[w] == kUnassigned) {
          part.assignment[w] = id;
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    const std::size_t edges = degree_sum / 2;
    ComponentKind kind;
    if (members.size() == 1) {
      kind = ComponentKind::IsolatedVertex;
    } else if (edges >= members.size()) {
      kind = ComponentKind::NonTree;
    } else {
      kind = max_degree_two ? ComponentKind::Path : ComponentKind::NonPathTree;
    }
    part.components.push_back(std::move(members));
    part.kinds.push_back(kind);
    part.edge_counts.push_back(edges);
  }
  return part;
}

bool is_forest(const Graph& g) {
  const auto part = connected_components(g);
  return g.edge_count() + part.size() == g.vertex_count();
}

bool is_tree(const Graph& g) {
  return g.vertex_count() >= 1 && g.edge_count() + 1 == g.vertex_count() &&
         connected_components(g).size() == 1;
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<Vertex> local(g.vertex_count(), static_cast<Vertex>(-1));
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex w : g.neighbors(vertices[i])) {
      Vertex j = local[w];
      if (j != static_cast<Vertex>(-1) && i < j) edges.emplace_back(static_cast<Vertex>(i), j);
    }
  }
  return Graph(vertices.size(), edges);
}

namespace {

bool parse_fields(std::string_view line, std::size_t expected, std::vector<std::uint64_t>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos >= line.size()) break;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
    if (ec != std::errc()) return false;
    pos = static_cast<std::size_t>(ptr - line.data());
    if (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') return false;
    out.push_back(value);
  }
  return out.size() == expected;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  auto blank = [](std::string_view s) {
    return s.find_first_not_of(" \t\r") == std::string_view::npos;
  };

  std::size_t idx = 0;
  while (idx < lines.size() && blank(lines[idx])) ++idx;
  if (idx == lines.size()) throw GraphFormatError(1, "missing header \"n m\"");

  std::vector<std::uint64_t> fields;
  if (!parse_fields(lines[idx], 2, fields)) throw GraphFormatError(idx + 1, "malformed header, expected \"n m\"");
  const std::uint64_t n = fields[0];
  const std::uint64_t m = fields[1];
  if (n > std::numeric_limits<Vertex>::max()) throw GraphFormatError(idx + 1, "vertex count too large");
  ++idx;

  std::vector<Edge> edges;
  edges.reserve(m);
  std::vector<std::pair<Edge, std::size_t>> seen;
  seen.reserve(m);
  for (; idx < lines.size(); ++idx) {
    if (blank(lines[idx])) continue;
    if (!parse_fields(lines[idx], 2, fields)) throw GraphFormatError(idx + 1, "malformed edge line, expected \"u v\"");
    if (fields[0] >= n || fields[1] >= n) throw GraphFormatError(idx + 1, "vertex id >= n");
    if (fields[0] == fields[1]) throw GraphFormatError(idx + 1, "self-loop");
    auto a = static_cast<Vertex>(fields[0]);
    auto b = static_cast<Vertex>(fields[1]);
    edges.emplace_back(a, b);
    seen.push_back({{std::min(a, b), std::max(a, b)}, idx + 1});
  }
  if (edges.size() != m) {
    throw GraphFormatError(idx, "header declares " + std::to_string(m) + " edges, found " +
                                    std::to_string(edges.size()));
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i].first == seen[i - 1].first) throw GraphFormatError(seen[i].second, "duplicate edge");
  }
  return Graph(static_cast<std::size_t>(n), edges);
}

std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
  return out.str();
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write graph file " + path);
  out << serialize_graph(g);
}

}  // namespace mdim
