#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "tree.hpp"
#include "vertex_set.hpp"

namespace rgood {

// Injective map from pattern (forest) vertices to host vertices.
struct Embedding {
  std::vector<int> map;

  VertexSet image() const { return VertexSet::from(map); }
};

// Empty string when `e` is a valid embedding of f into g; otherwise the reason.
inline std::string embedding_error(const Graph& g, const RootedForest& f, const Embedding& e,
                                   const std::vector<int>& root_hosts = {}) {
  if (static_cast<int>(e.map.size()) != f.size()) return "map size differs from forest size";
  std::vector<char> used(static_cast<std::size_t>(g.order()), 0);
  for (int v = 0; v < f.size(); ++v) {
    int h = e.map[v];
    if (h < 0 || h >= g.order()) return "vertex " + std::to_string(v) + " mapped outside the host";
    if (used[h]) return "host vertex " + std::to_string(h) + " used twice";
    used[h] = 1;
  }
  for (auto [a, b] : f.edges())
    if (!g.adjacent(e.map[a], e.map[b]))
      return "edge " + std::to_string(a) + "-" + std::to_string(b) + " not mapped to a host edge";
  for (std::size_t i = 0; i < root_hosts.size() && i < f.roots().size(); ++i)
    if (e.map[f.roots()[i]] != root_hosts[i]) return "root " + std::to_string(i) + " not at its prescribed host";
  return {};
}

inline bool valid_embedding(const Graph& g, const RootedForest& f, const Embedding& e,
                            const std::vector<int>& root_hosts = {}) {
  return embedding_error(g, f, e, root_hosts).empty();
}

// Pattern graph as adjacency lists, shared by forest and general searches.
struct Pattern {
  int n = 0;
  std::vector<std::vector<int>> adj;

  static Pattern of(const RootedForest& f) {
    Pattern p;
    p.n = f.size();
    p.adj.resize(static_cast<std::size_t>(p.n));
    for (auto [a, b] : f.edges()) {
      p.adj[a].push_back(b);
      p.adj[b].push_back(a);
    }
    return p;
  }
  static Pattern of(const Graph& h) {
    Pattern p;
    p.n = h.order();
    p.adj.resize(static_cast<std::size_t>(p.n));
    for (auto [a, b] : h.edges()) {
      p.adj[a].push_back(b);
      p.adj[b].push_back(a);
    }
    return p;
  }
};

struct MonomorphismOptions {
  std::vector<std::pair<int, int>> fixed;  // (pattern vertex, host vertex)
  std::optional<VertexSet> allowed;        // hosts usable; default all
};

namespace detail {

class MonoSearch {
 public:
  MonoSearch(const Pattern& p, const Graph& g, const MonomorphismOptions& opt, Budget& budget)
      : p_(p), g_(g), budget_(budget), fixed_(static_cast<std::size_t>(p.n), -1) {
    allowed_ = opt.allowed ? *opt.allowed & g.vertices() : g.vertices();
    for (auto [pv, hv] : opt.fixed) {
      fixed_[pv] = hv;
      fixed_hosts_.set(hv);
    }
    build_order();
    map_.assign(static_cast<std::size_t>(p.n), -1);
  }

  Search<std::vector<int>> run() {
    if (p_.n > allowed_.count()) return Search<std::vector<int>>::make_absent(0);
    std::uint64_t start = budget_.used;
    bool ok = extend(0);
    std::uint64_t nodes = budget_.used - start;
    if (ok) return Search<std::vector<int>>::make_found(map_, nodes);
    if (budget_.exhausted()) return Search<std::vector<int>>::make_unknown(nodes);
    return Search<std::vector<int>>::make_absent(nodes);
  }

 private:
  void build_order() {
    std::vector<char> seen(static_cast<std::size_t>(p_.n), 0);
    std::vector<std::vector<int>> comps;
    auto bfs = [&](int s) {
      std::vector<int> comp{s};
      seen[s] = 1;
      for (std::size_t h = 0; h < comp.size(); ++h)
        for (int w : p_.adj[comp[h]])
          if (!seen[w]) {
            seen[w] = 1;
            comp.push_back(w);
          }
      return comp;
    };
    std::vector<std::vector<int>> fixed_comps;
    for (int v = 0; v < p_.n; ++v)
      if (fixed_[v] >= 0 && !seen[v]) fixed_comps.push_back(bfs(v));
    // Remaining components start from a maximum-degree vertex.
    std::vector<int> starts;
    std::vector<char> probe = seen;
    for (int v = 0; v < p_.n; ++v) {
      if (probe[v]) continue;
      std::vector<int> comp{v};
      probe[v] = 1;
      for (std::size_t h = 0; h < comp.size(); ++h)
        for (int w : p_.adj[comp[h]])
          if (!probe[w]) {
            probe[w] = 1;
            comp.push_back(w);
          }
      int best = comp[0];
      for (int w : comp)
        if (p_.adj[w].size() > p_.adj[best].size() || (p_.adj[w].size() == p_.adj[best].size() && w < best)) best = w;
      starts.push_back(best);
    }
    for (int s : starts) comps.push_back(bfs(s));
    std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    comps.insert(comps.begin(), fixed_comps.begin(), fixed_comps.end());
    std::vector<int> pos(static_cast<std::size_t>(p_.n), -1);
    for (const auto& c : comps) {
      for (int v : c) {
        pos[v] = static_cast<int>(order_.size());
        order_.push_back(v);
        comp_size_.push_back(c.front() == v ? static_cast<int>(c.size()) : 0);
      }
    }
    back_.resize(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i)
      for (int w : p_.adj[order_[i]])
        if (pos[w] < static_cast<int>(i)) back_[i].push_back(w);
  }

  // Host vertices reachable from h inside the currently free allowed set.
  int free_component_size(int h, const VertexSet& free) const {
    VertexSet seen;
    seen.set(h);
    VertexSet frontier = seen;
    while (frontier.any()) {
      VertexSet next;
      frontier.for_each([&](int x) { next |= g_.neighbors(x); });
      next &= free;
      next -= seen;
      seen |= next;
      frontier = next;
    }
    return seen.count();
  }

  bool extend(std::size_t i) {
    if (i == order_.size()) return true;
    int pv = order_[i];
    VertexSet cand = allowed_ - used_;
    for (int q : back_[i]) cand &= g_.neighbors(map_[q]);
    if (fixed_[pv] >= 0) {
      bool ok = cand.test(fixed_[pv]);
      cand = VertexSet{};
      if (ok) cand.set(fixed_[pv]);
    } else {
      cand -= fixed_hosts_;
    }
    int need_deg = static_cast<int>(p_.adj[pv].size());
    for (int h = cand.first(); h >= 0; h = cand.next(h)) {
      if (!budget_.tick()) return false;
      if (g_.neighbors(h).intersection_count(allowed_) < need_deg) continue;
      if (comp_size_[i] > 1 && free_component_size(h, allowed_ - used_) < comp_size_[i]) continue;
      map_[pv] = h;
      used_.set(h);
      if (extend(i + 1)) return true;
      used_.reset(h);
      map_[pv] = -1;
      if (budget_.exhausted()) return false;
    }
    return false;
  }

  const Pattern& p_;
  const Graph& g_;
  Budget& budget_;
  std::vector<int> fixed_;
  VertexSet allowed_;
  VertexSet fixed_hosts_;
  VertexSet used_;
  std::vector<int> order_;
  std::vector<int> comp_size_;
  std::vector<std::vector<int>> back_;
  std::vector<int> map_;
};

}  // namespace detail

// Not-necessarily-induced copy of pattern p in g.  Candidates are tried in
// ascending host id, so the result is deterministic.
inline Search<std::vector<int>> find_monomorphism(const Pattern& p, const Graph& g, Budget& budget,
                                                  const MonomorphismOptions& opt = {}) {
  return detail::MonoSearch(p, g, opt, budget).run();
}

inline Search<Embedding> contains_forest_copy(const Graph& g, const RootedForest& f, Budget& budget,
                                              const MonomorphismOptions& opt = {}) {
  auto r = find_monomorphism(Pattern::of(f), g, budget, opt);
  Search<Embedding> out{r.status, std::nullopt, r.nodes};
  if (r.value) out.value = Embedding{*r.value};
  return out;
}

inline Search<std::vector<int>> find_subgraph(const Graph& g, const Graph& h, Budget& budget) {
  return find_monomorphism(Pattern::of(h), g, budget);
}

inline bool valid_subgraph_map(const Graph& g, const Graph& h, const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != h.order()) return false;
  VertexSet used;
  for (int h_v : map) {
    if (h_v < 0 || h_v >= g.order() || used.test(h_v)) return false;
    used.set(h_v);
  }
  for (auto [a, b] : h.edges())
    if (!g.adjacent(map[a], map[b])) return false;
  return true;
}

using Parts = std::vector<std::vector<int>>;

// Parts are disjoint, sized as requested, and every cross-part pair is an edge of g.
inline bool valid_multipartite(const Graph& g, const Parts& parts, const std::vector<int>& sizes) {
  if (parts.size() != sizes.size()) return false;
  VertexSet used;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (static_cast<int>(parts[i].size()) != sizes[i]) return false;
    for (int v : parts[i]) {
      if (v < 0 || v >= g.order() || used.test(v)) return false;
      used.set(v);
    }
  }
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      for (int a : parts[i])
        for (int b : parts[j])
          if (!g.adjacent(a, b)) return false;
  return true;
}

// Copy of K_{sizes} as a subgraph of g (run it on a complement to look for
// an independent-set structure in the original).
inline Search<Parts> find_multipartite(const Graph& g, std::vector<int> sizes, Budget& budget) {
  for (int s : sizes)
    if (s < 1) throw PreconditionError("find_multipartite: part sizes must be positive");
  if (sizes.empty()) throw PreconditionError("find_multipartite: needs at least one part");
  std::sort(sizes.begin(), sizes.end());
  int k = static_cast<int>(sizes.size());
  int total = std::accumulate(sizes.begin(), sizes.end(), 0);
  std::uint64_t start = budget.used;
  if (total > g.order()) return Search<Parts>::make_absent(0);

  std::vector<int> suffix(static_cast<std::size_t>(k) + 1, 0);
  for (int i = k - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + sizes[i];
  Parts parts(static_cast<std::size_t>(k));
  bool stop = false;

  // common: vertices adjacent to everything already placed in earlier parts.
  std::function<bool(int, const VertexSet&, const VertexSet&, int)> place =
      [&](int part, const VertexSet& common, const VertexSet& inside, int from) -> bool {
    if (part == k) return true;
    auto& cur = parts[part];
    if (static_cast<int>(cur.size()) == sizes[part]) {
      // Part complete: vertices of later parts must see all of it.
      VertexSet next = common;
      for (int v : cur) next &= g.neighbors(v);
      if (next.count() < suffix[part + 1]) return false;
      int lo = 0;
      if (part + 1 < k && sizes[part + 1] == sizes[part]) lo = cur.front() + 1;
      return place(part + 1, next, VertexSet{}, lo);
    }
    VertexSet cand = common - inside;
    int need = sizes[part] - static_cast<int>(cur.size());
    for (int v = cand.next(from - 1); v >= 0; v = cand.next(v)) {
      if (!budget.tick()) {
        stop = true;
        return false;
      }
      // Enough candidates left to finish this part.
      int rest = 0;
      for (int u = v; u >= 0 && rest < need; u = cand.next(u)) ++rest;
      if (rest < need) break;
      cur.push_back(v);
      VertexSet in2 = inside;
      in2.set(v);
      VertexSet common2 = common;
      common2.reset(v);
      if (place(part, common2, in2, v + 1)) return true;
      cur.pop_back();
      if (stop) return false;
    }
    return false;
  };
  bool ok = place(0, g.vertices(), VertexSet{}, 0);
  std::uint64_t nodes = budget.used - start;
  if (ok) return Search<Parts>::make_found(parts, nodes);
  if (stop) return Search<Parts>::make_unknown(nodes);
  return Search<Parts>::make_absent(nodes);
}

}  // namespace rgood
