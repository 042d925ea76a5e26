#pragma once

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "vertex_set.hpp"

namespace rgood {

// Undirected simple graph on vertices 0..n-1 with bitset adjacency rows.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n)) {
    if (n < 0 || n > kMaxVertices)
      throw PreconditionError("graph order " + std::to_string(n) + " outside [0, " +
                              std::to_string(kMaxVertices) + "]");
  }

  int order() const { return n_; }
  VertexSet vertices() const { return VertexSet::prefix(n_); }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw PreconditionError("self-loop at " + std::to_string(u));
    adj_[u].set(v);
    adj_[v].set(u);
  }
  void remove_edge(int u, int v) {
    adj_[u].reset(v);
    adj_[v].reset(u);
  }
  bool adjacent(int u, int v) const { return adj_[u].test(v); }
  const VertexSet& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return adj_[v].count(); }

  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  long edge_count() const {
    long twice = 0;
    for (int v = 0; v < n_; ++v) twice += degree(v);
    return twice / 2;
  }

  // Edges (u, v) with u < v, sorted.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
      for (int v = adj_[u].next(u); v >= 0; v = adj_[u].next(v)) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n_) throw PreconditionError("vertex " + std::to_string(v) + " out of range");
  }

  int n_ = 0;
  std::vector<VertexSet> adj_;
};

inline Graph complement(const Graph& g) {
  Graph c(g.order());
  for (int u = 0; u < g.order(); ++u)
    for (int v = u + 1; v < g.order(); ++v)
      if (!g.adjacent(u, v)) c.add_edge(u, v);
  return c;
}

// `open` is N(S) = (union of N(x)) \ S; `gamma` is the union without removing S.
enum class NeighborhoodMode { open, gamma };

inline VertexSet neighborhood(const Graph& g, const VertexSet& s, NeighborhoodMode mode = NeighborhoodMode::open) {
  VertexSet out;
  s.for_each([&](int x) { out |= g.neighbors(x); });
  if (mode == NeighborhoodMode::open) out -= s;
  return out;
}

inline VertexSet gamma(const Graph& g, const VertexSet& s) { return neighborhood(g, s, NeighborhoodMode::gamma); }

// Vertices of the connected component containing v.
inline VertexSet component_of(const Graph& g, int v) {
  VertexSet seen;
  seen.set(v);
  VertexSet frontier = seen;
  while (frontier.any()) {
    VertexSet next = neighborhood(g, frontier, NeighborhoodMode::gamma) - seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

// Induced subgraph on `keep`; vertex i of the result is to_parent[i].
struct InducedSubgraph {
  Graph graph;
  std::vector<int> to_parent;

  VertexSet lift(const VertexSet& s) const {
    VertexSet out;
    s.for_each([&](int v) { out.set(to_parent[v]); });
    return out;
  }
  std::vector<int> lift(const std::vector<int>& vs) const {
    std::vector<int> out;
    out.reserve(vs.size());
    for (int v : vs) out.push_back(to_parent[v]);
    return out;
  }
  // Parent-graph set restricted to the subgraph, in local ids.
  VertexSet restrict(const VertexSet& parent_set) const {
    VertexSet out;
    for (int i = 0; i < static_cast<int>(to_parent.size()); ++i)
      if (parent_set.test(to_parent[i])) out.set(i);
    return out;
  }
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& keep) {
  InducedSubgraph sub;
  sub.to_parent = keep.to_vector();
  std::vector<int> local(static_cast<std::size_t>(g.order()), -1);
  for (int i = 0; i < static_cast<int>(sub.to_parent.size()); ++i) local[sub.to_parent[i]] = i;
  sub.graph = Graph(static_cast<int>(sub.to_parent.size()));
  for (int i = 0; i < static_cast<int>(sub.to_parent.size()); ++i) {
    int u = sub.to_parent[i];
    (g.neighbors(u) & keep).for_each([&](int v) {
      if (local[v] > i) sub.graph.add_edge(i, local[v]);
    });
  }
  return sub;
}

namespace graphs {

inline Graph empty(int n) { return Graph(n); }

inline Graph complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline Graph path(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

inline Graph cycle(int n) {
  Graph g = path(n);
  if (n >= 3) g.add_edge(n - 1, 0);
  return g;
}

inline Graph star(int leaves) {
  Graph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

// Parts are consecutive id blocks in the given order.
inline Graph complete_multipartite(const std::vector<int>& sizes) {
  int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  Graph g(n);
  std::vector<int> part(static_cast<std::size_t>(n));
  int v = 0;
  for (int p = 0; p < static_cast<int>(sizes.size()); ++p)
    for (int i = 0; i < sizes[p]; ++i) part[v++] = p;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (part[a] != part[b]) g.add_edge(a, b);
  return g;
}

// Triangular prism C_3 x K_2.
inline Graph prism() {
  Graph g(6);
  for (auto [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}})
    g.add_edge(u, v);
  return g;
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph g(a.order() + b.order());
  for (auto [u, v] : a.edges()) g.add_edge(u, v);
  for (auto [u, v] : b.edges()) g.add_edge(a.order() + u, a.order() + v);
  return g;
}

inline Graph gnp(int n, double p, Rng& rng) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

// Uniform-ish random d-regular graph by the pairing model with restarts.
inline Graph random_regular(int n, int d, Rng& rng) {
  if (d >= n || (static_cast<long>(n) * d) % 2 != 0)
    throw PreconditionError("no " + std::to_string(d) + "-regular graph on " + std::to_string(n) + " vertices");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> points;
    points.reserve(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < d; ++i) points.push_back(v);
    Graph g(n);
    bool ok = true;
    // Pair points one at a time, avoiding loops and multi-edges where possible.
    while (!points.empty() && ok) {
      std::size_t i = rng.below(points.size());
      std::swap(points[i], points.back());
      int u = points.back();
      points.pop_back();
      std::vector<std::size_t> options;
      for (std::size_t j = 0; j < points.size(); ++j)
        if (points[j] != u && !g.adjacent(u, points[j])) options.push_back(j);
      if (options.empty()) {
        ok = false;
        break;
      }
      std::size_t j = options[rng.below(options.size())];
      g.add_edge(u, points[j]);
      std::swap(points[j], points.back());
      points.pop_back();
    }
    if (ok) return g;
  }
  throw Error("random_regular: pairing failed repeatedly");
}

}  // namespace graphs

// Text format: "n m" then m lines "u v"; blank lines and '#' comments ignored.
inline Graph read_graph_text(std::istream& in) {
  std::vector<long> nums;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long x;
    while (ls >> x) nums.push_back(x);
  }
  if (nums.size() < 2) throw PreconditionError("graph text: missing header 'n m'");
  long n = nums[0];
  long m = nums[1];
  if (static_cast<long>(nums.size()) != 2 + 2 * m)
    throw PreconditionError("graph text: expected " + std::to_string(m) + " edges");
  Graph g(static_cast<int>(n));
  for (long i = 0; i < m; ++i) {
    int u = static_cast<int>(nums[2 + 2 * i]);
    int v = static_cast<int>(nums[3 + 2 * i]);
    if (g.adjacent(u, v)) throw PreconditionError("graph text: duplicate edge");
    g.add_edge(u, v);
  }
  return g;
}

inline void write_graph_text(std::ostream& out, const Graph& g) {
  auto es = g.edges();
  out << g.order() << ' ' << es.size() << '\n';
  for (auto [u, v] : es) out << u << ' ' << v << '\n';
}

}  // namespace rgood
