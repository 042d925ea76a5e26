#pragma once

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "graph.hpp"

namespace rgood {

// Forest of rooted trees on labels 0..size-1 given by a parent array
// (-1 marks a root), with a declared maximum degree.
class RootedForest {
 public:
  RootedForest() = default;
  RootedForest(std::vector<int> parent, int max_degree) : parent_(std::move(parent)), max_degree_(max_degree) {
    int n = size();
    children_.assign(static_cast<std::size_t>(n), {});
    for (int v = 0; v < n; ++v) {
      int p = parent_[v];
      if (p == -1) {
        roots_.push_back(v);
      } else {
        if (p < 0 || p >= n || p == v) throw PreconditionError("forest: bad parent of " + std::to_string(v));
        children_[p].push_back(v);
      }
    }
    // Every vertex must reach a root: a BFS from the roots has to cover everything.
    if (static_cast<int>(bfs_order().size()) != n) throw PreconditionError("forest: parent array has a cycle");
    if (actual_max_degree() > max_degree_)
      throw PreconditionError("forest: degree " + std::to_string(actual_max_degree()) + " exceeds declared " +
                              std::to_string(max_degree_));
  }

  // Builds a forest from an undirected edge list; each component is rooted at
  // the first listed preferred root inside it, else at its smallest label.
  static RootedForest from_edges(int n, const std::vector<std::pair<int, int>>& edges, int max_degree,
                                 const std::vector<int>& preferred_roots = {}) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw PreconditionError("forest: bad edge");
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<int> parent(static_cast<std::size_t>(n), -2);
    auto grow = [&](int root) {
      parent[root] = -1;
      std::deque<int> queue{root};
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj[v]) {
          if (w == parent[v]) continue;
          if (parent[w] != -2) throw PreconditionError("forest: edge list has a cycle");
          parent[w] = v;
          queue.push_back(w);
        }
      }
    };
    for (int r : preferred_roots)
      if (parent[r] == -2) grow(r);
    for (int v = 0; v < n; ++v)
      if (parent[v] == -2) grow(v);
    return RootedForest(std::move(parent), max_degree);
  }

  int size() const { return static_cast<int>(parent_.size()); }
  int declared_max_degree() const { return max_degree_; }
  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& parents() const { return parent_; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  const std::vector<int>& roots() const { return roots_; }
  bool is_tree() const { return roots_.size() == 1; }
  int edge_count() const { return size() - static_cast<int>(roots_.size()); }

  int degree(int v) const { return static_cast<int>(children_[v].size()) + (parent_[v] >= 0 ? 1 : 0); }
  int actual_max_degree() const {
    int d = 0;
    for (int v = 0; v < size(); ++v) d = std::max(d, degree(v));
    return d;
  }

  std::vector<int> neighbors(int v) const {
    std::vector<int> out = children_[v];
    if (parent_[v] >= 0) out.push_back(parent_[v]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < size(); ++v)
      if (parent_[v] >= 0) out.emplace_back(std::min(v, parent_[v]), std::max(v, parent_[v]));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Roots in order, each tree breadth-first; parents precede children.
  std::vector<int> bfs_order() const {
    std::vector<int> order;
    order.reserve(parent_.size());
    for (int r : roots_) {
      std::size_t head = order.size();
      order.push_back(r);
      while (head < order.size()) {
        int v = order[head++];
        for (int c : children_[v]) order.push_back(c);
        if (order.size() > parent_.size()) return order;
      }
    }
    return order;
  }

  // Vertices of the tree rooted at `root`, breadth-first.
  std::vector<int> tree_of_root(int root) const {
    std::vector<int> order{root};
    for (std::size_t head = 0; head < order.size(); ++head)
      for (int c : children_[order[head]]) order.push_back(c);
    return order;
  }

  // Subtree sizes (vertex counts) with respect to the rooting.
  std::vector<int> subtree_sizes() const {
    std::vector<int> sz(parent_.size(), 1);
    auto order = bfs_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      if (parent_[*it] >= 0) sz[parent_[*it]] += sz[*it];
    return sz;
  }

  Graph to_graph() const {
    Graph g(size());
    for (auto [u, v] : edges()) g.add_edge(u, v);
    return g;
  }

  friend bool operator==(const RootedForest& a, const RootedForest& b) {
    return a.parent_ == b.parent_ && a.max_degree_ == b.max_degree_;
  }

 private:
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> roots_;
  int max_degree_ = 0;
};

// A forest carved out of a larger one; vertex i is to_original[i].
struct SubForest {
  RootedForest forest;
  std::vector<int> to_original;
};

// Forest induced on the vertices with keep[v] != 0.
inline SubForest induced_subforest(const RootedForest& t, const std::vector<char>& keep,
                                   const std::vector<int>& preferred_roots = {}) {
  SubForest out;
  std::vector<int> local(static_cast<std::size_t>(t.size()), -1);
  for (int v = 0; v < t.size(); ++v)
    if (keep[v]) {
      local[v] = static_cast<int>(out.to_original.size());
      out.to_original.push_back(v);
    }
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : t.edges())
    if (keep[u] && keep[v]) edges.emplace_back(local[u], local[v]);
  std::vector<int> roots;
  for (int r : preferred_roots)
    if (keep[r]) roots.push_back(local[r]);
  out.forest = RootedForest::from_edges(static_cast<int>(out.to_original.size()), edges, t.declared_max_degree(), roots);
  return out;
}

namespace trees {

inline RootedForest single_vertex(int max_degree = 0) { return RootedForest({-1}, max_degree); }

// Path 0-1-...-(n-1) rooted at 0.
inline RootedForest path(int n, int max_degree = 2) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) p[v] = v - 1;
  return RootedForest(std::move(p), std::max(max_degree, std::min(n - 1, 2)));
}

// Star on n vertices centred at 0.
inline RootedForest star(int n) {
  std::vector<int> p(static_cast<std::size_t>(n), 0);
  p[0] = -1;
  return RootedForest(std::move(p), std::max(n - 1, 0));
}

// Centre 0 with `legs` paths of `leg_length` edges.
inline RootedForest spider(int legs, int leg_length) {
  std::vector<int> p{-1};
  for (int l = 0; l < legs; ++l) {
    int prev = 0;
    for (int i = 0; i < leg_length; ++i) {
      p.push_back(prev);
      prev = static_cast<int>(p.size()) - 1;
    }
  }
  return RootedForest(std::move(p), std::max(legs, 2));
}

// Random tree with maximum degree <= max_degree.  leaf_bias 0 always extends
// the newest vertex (a path); larger values attach more often to a random
// vertex with spare degree, which branches.
inline RootedForest random_bounded(int n, int max_degree, double leaf_bias, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("random tree needs n >= 1");
  if (max_degree < 2 && n > 2) throw PreconditionError("random tree needs max degree >= 2");
  Rng rng(seed);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  std::vector<int> open;  // vertices with spare degree
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  auto add_open = [&](int v) {
    pos[v] = static_cast<int>(open.size());
    open.push_back(v);
  };
  auto drop_open = [&](int v) {
    int i = pos[v];
    open[i] = open.back();
    pos[open[i]] = i;
    open.pop_back();
    pos[v] = -1;
  };
  add_open(0);
  for (int v = 1; v < n; ++v) {
    int p = v - 1;
    if (pos[p] < 0 || rng.bernoulli(leaf_bias)) p = open[rng.below(open.size())];
    parent[v] = p;
    ++deg[p];
    deg[v] = 1;
    if (deg[p] >= max_degree) drop_open(p);
    if (deg[v] < max_degree) add_open(v);
  }
  return RootedForest(std::move(parent), std::max(max_degree, std::min(n - 1, 2)));
}

}  // namespace trees

// Disjoint union; b's labels are shifted by a.size().
inline RootedForest forest_union(const RootedForest& a, const RootedForest& b) {
  std::vector<int> parent = a.parents();
  for (int p : b.parents()) parent.push_back(p < 0 ? -1 : p + a.size());
  return RootedForest(std::move(parent), std::max(a.declared_max_degree(), b.declared_max_degree()));
}

// Vertices of degree <= 1 (an isolated vertex counts as a leaf).
inline std::vector<int> leaves(const RootedForest& t) {
  std::vector<int> out;
  for (int v = 0; v < t.size(); ++v)
    if (t.degree(v) <= 1) out.push_back(v);
  return out;
}

struct BarePathCollection {
  std::vector<std::vector<int>> paths;
  int r = 0;  // common length in edges
};

// Throws InvalidPaths unless every path is a bare path of exactly r edges and
// the paths are vertex-disjoint.
inline void validate_bare_paths(const RootedForest& t, const BarePathCollection& c) {
  std::vector<char> used(static_cast<std::size_t>(t.size()), 0);
  auto adjacent = [&](int a, int b) { return t.parent(a) == b || t.parent(b) == a; };
  for (std::size_t i = 0; i < c.paths.size(); ++i) {
    const auto& p = c.paths[i];
    std::string where = "path " + std::to_string(i);
    if (static_cast<int>(p.size()) != c.r + 1) throw InvalidPaths(where + " does not have " + std::to_string(c.r) + " edges");
    for (std::size_t j = 0; j < p.size(); ++j) {
      int v = p[j];
      if (v < 0 || v >= t.size()) throw InvalidPaths(where + " has an out-of-range vertex");
      if (used[v]) throw InvalidPaths(where + " reuses vertex " + std::to_string(v));
      used[v] = 1;
      if (j > 0 && !adjacent(p[j - 1], v)) throw InvalidPaths(where + " is not a path in the tree");
      if (j > 0 && j + 1 < p.size() && t.degree(v) != 2)
        throw InvalidPaths(where + " has interior vertex " + std::to_string(v) + " of degree " + std::to_string(t.degree(v)));
    }
  }
}

// Maximal bare paths: walks between vertices of degree != 2 whose interior
// vertices all have degree 2, ordered by (start, second vertex).
inline std::vector<std::vector<int>> maximal_bare_paths(const RootedForest& t) {
  std::vector<std::vector<int>> chains;
  for (int s = 0; s < t.size(); ++s) {
    if (t.degree(s) == 2) continue;
    for (int w : t.neighbors(s)) {
      std::vector<int> chain{s};
      int prev = s;
      int cur = w;
      while (t.degree(cur) == 2) {
        chain.push_back(cur);
        auto nb = t.neighbors(cur);
        int next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
      }
      chain.push_back(cur);
      if (s < cur) chains.push_back(std::move(chain));
    }
  }
  return chains;
}

// Cuts every maximal bare path into consecutive windows of r edges, starting
// from the chain's first end.  Chain ends can be shared between chains, so a
// window whose end is already taken is shifted by one.
inline BarePathCollection harvest_bare_paths(const RootedForest& t, int r) {
  BarePathCollection out;
  out.r = r;
  std::vector<char> used(static_cast<std::size_t>(t.size()), 0);
  for (const auto& chain : maximal_bare_paths(t)) {
    std::size_t start = 0;
    while (start + static_cast<std::size_t>(r) < chain.size()) {
      std::size_t end = start + static_cast<std::size_t>(r);
      if (used[chain[start]]) {
        ++start;
        continue;
      }
      if (used[chain[end]]) break;
      out.paths.emplace_back(chain.begin() + static_cast<long>(start), chain.begin() + static_cast<long>(end) + 1);
      for (std::size_t j = start; j <= end; ++j) used[chain[j]] = 1;
      start = end + 1;
    }
  }
  return out;
}

enum class Branch { leaves, paths };
enum class BranchPreference { leaves_first, paths_first };

struct LeavesOrPaths {
  Branch branch = Branch::leaves;
  int required = 0;  // ceil(n / 4r)
  std::vector<int> leaves;
  BarePathCollection paths;
};

// A tree on n > 2 vertices has ceil(n/4r) leaves or ceil(n/4r) disjoint bare
// paths of length r.  With paths_first the path branch is tried first.
inline LeavesOrPaths leaves_or_bare_paths(const RootedForest& t, int r,
                                          BranchPreference pref = BranchPreference::leaves_first) {
  if (!t.is_tree()) throw PreconditionError("leaves_or_bare_paths: input must be a single tree");
  int n = t.size();
  if (n <= 2 || r <= 2) throw PreconditionError("leaves_or_bare_paths: needs n > 2 and r > 2");
  LeavesOrPaths out;
  out.required = (n + 4 * r - 1) / (4 * r);
  auto lv = leaves(t);
  auto ps = harvest_bare_paths(t, r);
  bool leaves_ok = static_cast<int>(lv.size()) >= out.required;
  bool paths_ok = static_cast<int>(ps.paths.size()) >= out.required;
  if (leaves_ok && (pref == BranchPreference::leaves_first || !paths_ok)) {
    out.branch = Branch::leaves;
    out.leaves = std::move(lv);
  } else if (paths_ok) {
    out.branch = Branch::paths;
    out.paths = std::move(ps);
  } else {
    throw LemmaViolation("tree on " + std::to_string(n) + " vertices has " + std::to_string(lv.size()) +
                         " leaves and " + std::to_string(ps.paths.size()) + " bare paths of length " +
                         std::to_string(r) + ", need " + std::to_string(out.required));
  }
  return out;
}

struct CentroidSplit {
  int u = -1;
  std::vector<int> a, b;
};

// Separator vertex u and a two-way binning of the components of t - u with
// both sides at most floor(2n/3).
inline CentroidSplit centroid_split(const RootedForest& t) {
  if (!t.is_tree()) throw PreconditionError("centroid_split: input must be a single tree");
  int n = t.size();
  if (n < 2) throw PreconditionError("centroid_split: needs n >= 2");
  auto sz = t.subtree_sizes();
  int u = t.roots()[0];
  while (true) {
    int heavy = -1;
    for (int c : t.children(u))
      if (2 * sz[c] > n) heavy = c;
    if (heavy < 0) break;
    u = heavy;
  }
  // Components of t - u, indexed by ascending neighbour id.
  auto nb = t.neighbors(u);
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[u] = 1;
  for (int w : nb) {
    std::vector<int> comp{w};
    seen[w] = 1;
    for (std::size_t h = 0; h < comp.size(); ++h) {
      int x = comp[h];
      auto visit = [&](int y) {
        if (y >= 0 && !seen[y]) {
          seen[y] = 1;
          comp.push_back(y);
        }
      };
      visit(t.parent(x));
      for (int c : t.children(x)) visit(c);
    }
    comps.push_back(std::move(comp));
  }
  std::vector<std::size_t> idx(comps.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return comps[x].size() > comps[y].size(); });
  CentroidSplit out;
  out.u = u;
  for (std::size_t i : idx) {
    auto& bin = out.a.size() <= out.b.size() ? out.a : out.b;
    bin.insert(bin.end(), comps[i].begin(), comps[i].end());
  }
  std::sort(out.a.begin(), out.a.end());
  std::sort(out.b.begin(), out.b.end());
  return out;
}

struct StrippedPaths {
  SubForest rest;                                 // t minus path interiors
  std::vector<std::pair<int, int>> endpoint_pairs;  // original ids, to be rejoined
  std::vector<std::vector<int>> interiors;        // original ids, in path order
  int r = 0;
};

inline StrippedPaths strip_bare_path_interiors(const RootedForest& t, const BarePathCollection& paths) {
  validate_bare_paths(t, paths);
  std::vector<char> keep(static_cast<std::size_t>(t.size()), 1);
  StrippedPaths out;
  out.r = paths.r;
  for (const auto& p : paths.paths) {
    out.endpoint_pairs.emplace_back(p.front(), p.back());
    out.interiors.emplace_back(p.begin() + 1, p.end() - 1);
    for (std::size_t j = 1; j + 1 < p.size(); ++j) keep[p[j]] = 0;
  }
  out.rest = induced_subforest(t, keep, t.roots());
  return out;
}

struct StrippedLeaves {
  SubForest core;                  // t minus its leaves
  std::map<int, int> demands;      // original id -> number of removed leaves
  std::map<int, int> leaf_anchor;  // removed leaf -> its neighbour in the core
};

// Removes all leaves.  For n = 2 both vertices are leaves; the root is kept.
inline StrippedLeaves strip_leaves(const RootedForest& t) {
  if (!t.is_tree()) throw PreconditionError("strip_leaves: input must be a single tree");
  if (t.size() < 2) throw PreconditionError("strip_leaves: needs n >= 2");
  std::vector<char> keep(static_cast<std::size_t>(t.size()), 0);
  for (int v = 0; v < t.size(); ++v) keep[v] = t.degree(v) > 1;
  if (t.size() == 2) keep[t.roots()[0]] = 1;
  StrippedLeaves out;
  for (int v = 0; v < t.size(); ++v) {
    if (keep[v]) continue;
    int anchor = t.neighbors(v)[0];
    out.leaf_anchor[v] = anchor;
    ++out.demands[anchor];
  }
  int root = t.roots()[0];
  if (!keep[root]) root = out.leaf_anchor.at(root);
  out.core = induced_subforest(t, keep, {root});
  return out;
}

// "n; p_1 ... p_{n-1}" with vertex 0 the root.
inline RootedForest read_tree_text(std::istream& in, int max_degree = -1) {
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  for (char& c : all)
    if (c == ';' || c == ',') c = ' ';
  std::istringstream ss(all);
  int n = 0;
  if (!(ss >> n) || n < 1) throw PreconditionError("tree text: missing vertex count");
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  for (int v = 1; v < n; ++v)
    if (!(ss >> parent[v])) throw PreconditionError("tree text: expected " + std::to_string(n - 1) + " parents");
  RootedForest probe(parent, n);
  return RootedForest(std::move(parent), max_degree < 0 ? probe.actual_max_degree() : max_degree);
}

// Single trees only, rooted at 0 after relabelling in BFS order.
inline void write_tree_text(std::ostream& out, const RootedForest& t) {
  if (!t.is_tree()) throw PreconditionError("tree text format holds a single tree");
  auto order = t.bfs_order();
  std::vector<int> label(static_cast<std::size_t>(t.size()));
  for (int i = 0; i < t.size(); ++i) label[order[i]] = i;
  std::vector<int> parent(static_cast<std::size_t>(t.size()), -1);
  for (int v = 0; v < t.size(); ++v)
    if (t.parent(v) >= 0) parent[label[v]] = label[t.parent(v)];
  out << t.size() << ';';
  for (int i = 1; i < t.size(); ++i) out << ' ' << parent[i];
  out << '\n';
}

}  // namespace rgood
