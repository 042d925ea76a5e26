#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "expander.hpp"
#include "graph.hpp"
#include "vertex_set.hpp"

namespace rgood {

// Path lengths are edge counts; a path of length d has d - 1 interior vertices.
struct LinkedSpec {
  int s = 0;
  int d_min = 1;
  int d_max = 1;
};

struct LinkageRequest {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> lengths;
};

struct Routing {
  std::vector<std::vector<int>> paths;
};

// A request that a system claiming to be linked could not route.
class NotLinked : public Error {
 public:
  NotLinked(std::string what, LinkageRequest req) : Error(std::move(what)), request_(std::move(req)) {}
  const LinkageRequest& request() const { return request_; }

 private:
  LinkageRequest request_;
};

inline void check_request_shape(const Graph& g, const LinkageRequest& req) {
  if (req.pairs.size() != req.lengths.size()) throw PreconditionError("request: one length per pair");
  VertexSet ends;
  for (auto [x, y] : req.pairs) {
    for (int v : {x, y}) {
      if (v < 0 || v >= g.order()) throw PreconditionError("request: endpoint out of range");
      if (ends.test(v)) throw PreconditionError("request: endpoints must be distinct");
      ends.set(v);
    }
  }
  for (int d : req.lengths)
    if (d < 1) throw PreconditionError("request: lengths must be positive");
}

inline VertexSet request_endpoints(const LinkageRequest& req) {
  VertexSet e;
  for (auto [x, y] : req.pairs) {
    e.set(x);
    e.set(y);
  }
  return e;
}

// Empty when path i joins x_i to y_i with exactly d_i edges of g, the paths
// are vertex-disjoint, and every interior vertex lies in W.
inline std::string routing_error(const Graph& g, const LinkageRequest& req, const VertexSet& w, const Routing& r) {
  if (r.paths.size() != req.pairs.size()) return "routing has the wrong number of paths";
  VertexSet used;
  for (std::size_t i = 0; i < r.paths.size(); ++i) {
    const auto& p = r.paths[i];
    std::string tag = "path " + std::to_string(i);
    if (static_cast<int>(p.size()) != req.lengths[i] + 1) return tag + " has the wrong length";
    if (p.front() != req.pairs[i].first || p.back() != req.pairs[i].second) return tag + " has the wrong endpoints";
    for (std::size_t j = 0; j < p.size(); ++j) {
      int v = p[j];
      if (v < 0 || v >= g.order()) return tag + " leaves the graph";
      if (used.test(v)) return tag + " reuses vertex " + std::to_string(v);
      used.set(v);
      if (j > 0 && !g.adjacent(p[j - 1], v)) return tag + " uses a non-edge";
      if (j > 0 && j + 1 < p.size() && !w.test(v)) return tag + " has interior vertex " + std::to_string(v) + " outside W";
    }
  }
  return {};
}

namespace detail {

// Vertices within distance <= radius of `target` along paths whose vertices
// other than the target lie in `free`.
inline VertexSet ball_through(const Graph& g, int target, const VertexSet& free, int radius) {
  VertexSet seen;
  seen.set(target);
  VertexSet frontier = seen;
  for (int r = 0; r < radius && frontier.any(); ++r) {
    VertexSet next;
    frontier.for_each([&](int x) { next |= g.neighbors(x); });
    next &= free;
    next -= seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

}  // namespace detail

// Vertex-disjoint paths of the requested exact lengths with interiors in W
// (request endpoints are never used as interiors).  Backtracking over path
// extensions, pruned by distance to the target through free vertices and by
// the number of free interior vertices left.
inline Search<Routing> find_disjoint_paths(const Graph& g, const LinkageRequest& req, const VertexSet& w, Budget& budget) {
  check_request_shape(g, req);
  std::uint64_t start = budget.used;
  VertexSet ends = request_endpoints(req);
  VertexSet pool = (w & g.vertices()) - ends;
  std::size_t k = req.pairs.size();
  std::vector<long> need_after(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) need_after[i] = need_after[i + 1] + req.lengths[i] - 1;
  if (need_after[0] > pool.count()) return Search<Routing>::make_absent(0);

  Routing routing;
  routing.paths.resize(k);
  VertexSet used;
  bool stop = false;

  std::function<bool(std::size_t)> route_pair;
  std::function<bool(std::size_t, int, int)> grow = [&](std::size_t i, int cur, int left) -> bool {
    int target = req.pairs[i].second;
    if (left == 1) {
      if (!g.adjacent(cur, target)) return false;
      routing.paths[i].push_back(target);
      if (route_pair(i + 1)) return true;
      routing.paths[i].pop_back();
      return false;
    }
    VertexSet free = pool - used;
    if (free.count() < left - 1 + need_after[i + 1]) return false;
    VertexSet reach = detail::ball_through(g, target, free, left - 1);
    VertexSet cand = g.neighbors(cur) & free & reach;
    for (int v = cand.first(); v >= 0; v = cand.next(v)) {
      if (!budget.tick()) {
        stop = true;
        return false;
      }
      used.set(v);
      routing.paths[i].push_back(v);
      if (grow(i, v, left - 1)) return true;
      routing.paths[i].pop_back();
      used.reset(v);
      if (stop) return false;
    }
    return false;
  };
  route_pair = [&](std::size_t i) -> bool {
    if (i == k) return true;
    routing.paths[i] = {req.pairs[i].first};
    if (grow(i, req.pairs[i].first, req.lengths[i])) return true;
    routing.paths[i].clear();
    return false;
  };
  bool ok = route_pair(0);
  std::uint64_t nodes = budget.used - start;
  if (ok) return Search<Routing>::make_found(routing, nodes);
  if (stop) return Search<Routing>::make_unknown(nodes);
  return Search<Routing>::make_absent(nodes);
}

// Number of requests a linked-system check enumerates: sets of
// min(s, |X|/2) disjoint pairs times length vectors.
inline double count_requests(int x_size, const LinkedSpec& spec) {
  int t = std::min(spec.s, x_size / 2);
  double pairs = 1;
  for (int j = 0; j < t; ++j) pairs *= static_cast<double>(x_size - 2 * j) * (x_size - 2 * j - 1) / 2;
  for (int j = 1; j <= t; ++j) pairs /= j;
  double lens = 1;
  for (int j = 0; j < t; ++j) lens *= (spec.d_max - spec.d_min + 1);
  return pairs * lens;
}

// Calls f on every request with min(s, |X|/2) disjoint pairs from X (pairs
// listed with ascending first elements) and every length vector in
// [d_min, d_max].  Routability of these implies routability of every request
// with fewer pairs: extra pairs can always be added and their paths dropped.
template <class F>
bool for_each_request(const VertexSet& x, const LinkedSpec& spec, F&& f) {
  std::vector<int> xs = x.to_vector();
  int t = std::min(spec.s, static_cast<int>(xs.size()) / 2);
  LinkageRequest req;
  std::vector<char> taken(xs.size(), 0);
  std::function<bool(int, std::size_t)> lens = [&](int j, std::size_t) -> bool {
    if (j == t) return f(static_cast<const LinkageRequest&>(req));
    for (int d = spec.d_min; d <= spec.d_max; ++d) {
      req.lengths[j] = d;
      if (!lens(j + 1, 0)) return false;
    }
    return true;
  };
  std::function<bool(int, std::size_t)> pick = [&](int j, std::size_t from) -> bool {
    if (j == t) {
      req.lengths.assign(static_cast<std::size_t>(t), spec.d_min);
      return lens(0, 0);
    }
    for (std::size_t a = from; a < xs.size(); ++a) {
      if (taken[a]) continue;
      taken[a] = 1;
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        if (taken[b]) continue;
        taken[b] = 1;
        req.pairs.emplace_back(xs[a], xs[b]);
        bool go = pick(j + 1, a + 1);
        req.pairs.pop_back();
        taken[b] = 0;
        if (!go) {
          taken[a] = 0;
          return false;
        }
      }
      taken[a] = 0;
    }
    return true;
  };
  if (spec.d_min > spec.d_max) return true;
  return pick(0, 0);
}

struct LinkCheck {
  Verdict verdict = Verdict::unknown;
  std::optional<LinkageRequest> counterexample;
  long requests = 0;
};

inline constexpr double kDefaultRequestCap = 2e5;

// Is (X, W) an (s, d-, d+)-linked system in g?  Every admissible request is
// handed to the exact path solver.
inline LinkCheck check_linked_system(const Graph& g, const VertexSet& x, const VertexSet& w, const LinkedSpec& spec,
                                     Budget& budget, double cap = kDefaultRequestCap) {
  LinkCheck out;
  if (count_requests(x.count(), spec) > cap) return out;
  bool unknown = false;
  for_each_request(x, spec, [&](const LinkageRequest& req) {
    ++out.requests;
    auto r = find_disjoint_paths(g, req, w, budget);
    if (r.unknown()) {
      unknown = true;
      return false;
    }
    if (r.absent()) {
      out.counterexample = req;
      return false;
    }
    return true;
  });
  if (unknown) return out;
  out.verdict = out.counterexample ? Verdict::fails : Verdict::holds;
  return out;
}

// A claimed linked system together with a procedure producing routings for
// admissible requests.  `route` throws NotLinked when it cannot.
struct LinkedSystem {
  VertexSet x;
  VertexSet w;
  LinkedSpec spec;
  std::function<Routing(const LinkageRequest&)> route;
};

inline void check_admissible(const LinkedSystem& sys, const LinkageRequest& req) {
  if (static_cast<int>(req.pairs.size()) > sys.spec.s) throw PreconditionError("request has more than s pairs");
  for (auto [a, b] : req.pairs)
    if (!sys.x.test(a) || !sys.x.test(b)) throw PreconditionError("request endpoint outside X");
  for (int d : req.lengths)
    if (d < sys.spec.d_min || d > sys.spec.d_max) throw PreconditionError("request length outside [d-, d+]");
}

// System whose routings come from the exact solver on g.
inline LinkedSystem solver_system(const Graph& g, const VertexSet& x, const VertexSet& w, const LinkedSpec& spec,
                                  std::uint64_t budget_per_request = 5'000'000) {
  auto host = std::make_shared<const Graph>(g);
  LinkedSystem sys{x, w, spec, {}};
  sys.route = [host, x, w, spec, budget_per_request](const LinkageRequest& req) {
    check_admissible(LinkedSystem{x, w, spec, {}}, req);
    Budget b{budget_per_request, 0};
    auto r = find_disjoint_paths(*host, req, w, b);
    if (r.found()) return *r.value;
    if (r.unknown()) throw SearchBudgetExceeded("routing search ran out of budget");
    throw NotLinked("request is not routable inside W", req);
  };
  return sys;
}

// Runs the system's router on every admissible request and validates each
// routing against g.
inline LinkCheck check_router(const Graph& g, const LinkedSystem& sys, double cap = kDefaultRequestCap) {
  LinkCheck out;
  if (count_requests(sys.x.count(), sys.spec) > cap) return out;
  for_each_request(sys.x, sys.spec, [&](const LinkageRequest& req) {
    ++out.requests;
    try {
      Routing r = sys.route(req);
      if (!routing_error(g, req, sys.w, r).empty()) {
        out.counterexample = req;
        return false;
      }
    } catch (const NotLinked&) {
      out.counterexample = req;
      return false;
    }
    return true;
  });
  out.verdict = out.counterexample ? Verdict::fails : Verdict::holds;
  return out;
}

// Joins two linked systems through disjoint connector paths of length <= 3
// from X1 to X2.  The result has s = min(s1, s2, t/3), d- = d1- + d2- + 3
// and d+ = min(d1+, d2+), and W grows by every connector vertex.  Cross
// requests are split: x -> connector start inside system 1 with length d1-,
// the connector, then connector end -> y inside system 2.
inline LinkedSystem join_two(const Graph& g, const LinkedSystem& a, const LinkedSystem& b,
                             std::vector<std::vector<int>> connectors) {
  VertexSet side_a = a.x | a.w;
  VertexSet side_b = b.x | b.w;
  if (side_a.intersects(side_b)) {
    auto both = (side_a & side_b).to_vector();
    throw PreconditionError("joined systems overlap at vertex " + std::to_string(both.front()));
  }
  VertexSet seen;
  for (std::size_t i = 0; i < connectors.size(); ++i) {
    auto& p = connectors[i];
    std::string tag = "connector " + std::to_string(i);
    if (p.size() < 2 || p.size() > 4) throw PreconditionError(tag + " must have 1 to 3 edges");
    if (a.x.test(p.back()) && b.x.test(p.front())) std::reverse(p.begin(), p.end());
    if (!a.x.test(p.front()) || !b.x.test(p.back())) throw PreconditionError(tag + " does not run from X1 to X2");
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (seen.test(p[j])) throw PreconditionError(tag + " meets another connector");
      seen.set(p[j]);
      if (j > 0 && !g.adjacent(p[j - 1], p[j])) throw PreconditionError(tag + " uses a non-edge");
      if (j > 0 && j + 1 < p.size() && (side_a.test(p[j]) || side_b.test(p[j])))
        throw PreconditionError(tag + " has an interior vertex inside a system");
    }
  }
  LinkedSystem out;
  out.x = a.x | b.x;
  out.w = a.w | b.w | seen;
  out.spec.s = std::min({a.spec.s, b.spec.s, static_cast<int>(connectors.size()) / 3});
  out.spec.d_min = a.spec.d_min + b.spec.d_min + 3;
  out.spec.d_max = std::min(a.spec.d_max, b.spec.d_max);
  int d1_min = a.spec.d_min;
  auto route = [a, b, connectors, d1_min, spec = out.spec, x = out.x](const LinkageRequest& req) {
    LinkedSystem probe{x, {}, spec, {}};
    check_admissible(probe, req);
    LinkageRequest r1, r2;
    struct Cross {
      std::size_t index;
      std::size_t connector;
      std::size_t slot1, slot2;
    };
    std::vector<Cross> cross;
    std::vector<std::pair<int, std::size_t>> direct;  // (side, slot) per same-side pair
    std::vector<int> where(req.pairs.size(), 0);
    std::vector<std::size_t> slot(req.pairs.size(), 0);
    VertexSet ends = request_endpoints(req);
    std::size_t next_connector = 0;
    for (std::size_t i = 0; i < req.pairs.size(); ++i) {
      auto [p, q] = req.pairs[i];
      bool pa = a.x.test(p), qa = a.x.test(q);
      if (pa && qa) {
        where[i] = 1;
        slot[i] = r1.pairs.size();
        r1.pairs.emplace_back(p, q);
        r1.lengths.push_back(req.lengths[i]);
      } else if (!pa && !qa) {
        where[i] = 2;
        slot[i] = r2.pairs.size();
        r2.pairs.emplace_back(p, q);
        r2.lengths.push_back(req.lengths[i]);
      } else {
        // Connectors touching a requested endpoint are skipped; at most 2s
        // of the 3s connectors can be touched.
        while (next_connector < connectors.size()) {
          const auto& c = connectors[next_connector];
          bool touched = false;
          for (int v : c) touched = touched || ends.test(v);
          if (!touched) break;
          ++next_connector;
        }
        if (next_connector == connectors.size()) throw NotLinked("ran out of free connectors", req);
        const auto& c = connectors[next_connector];
        int xa = pa ? p : q;
        int yb = pa ? q : p;
        int second = req.lengths[i] - d1_min - static_cast<int>(c.size() - 1);
        Cross cr{i, next_connector, r1.pairs.size(), r2.pairs.size()};
        r1.pairs.emplace_back(xa, c.front());
        r1.lengths.push_back(d1_min);
        r2.pairs.emplace_back(c.back(), yb);
        r2.lengths.push_back(second);
        where[i] = pa ? 3 : 4;  // 4: the request pair runs from X2 to X1
        cross.push_back(cr);
        ++next_connector;
      }
    }
    Routing p1 = r1.pairs.empty() ? Routing{} : a.route(r1);
    Routing p2 = r2.pairs.empty() ? Routing{} : b.route(r2);
    Routing out;
    out.paths.resize(req.pairs.size());
    for (std::size_t i = 0; i < req.pairs.size(); ++i) {
      if (where[i] == 1) out.paths[i] = p1.paths[slot[i]];
      if (where[i] == 2) out.paths[i] = p2.paths[slot[i]];
    }
    for (const auto& cr : cross) {
      std::vector<int> path = p1.paths[cr.slot1];
      const auto& c = connectors[cr.connector];
      path.insert(path.end(), c.begin() + 1, c.end());
      const auto& tail = p2.paths[cr.slot2];
      path.insert(path.end(), tail.begin() + 1, tail.end());
      if (where[cr.index] == 4) std::reverse(path.begin(), path.end());
      out.paths[cr.index] = std::move(path);
    }
    return out;
  };
  out.route = route;
  return out;
}

struct JoinedSystem {
  LinkedSystem system;                // d- reported as k (d- + 3) when k >= 2
  int tight_d_min = 0;                // the d- the iterated joins actually give
  std::vector<int> order;             // systems in joining order
  std::vector<std::vector<std::vector<int>>> chosen;  // connectors used per step
};

// Joins k linked systems along a connected auxiliary graph F on [k]: a
// breadth-first spanning tree fixes the order, 3s disjoint connectors are
// picked per tree edge one by one avoiding earlier picks, then join_two is
// applied step by step.  With `require_family_size` each family must hold
// at least 15ks paths.  Step i yields d- <= i (d- + 3); the looser bound
// k (d- + 3) is what the result reports.
inline JoinedSystem join_many(const Graph& g, const std::vector<LinkedSystem>& systems,
                              const std::vector<std::pair<int, int>>& f_edges,
                              const std::map<std::pair<int, int>, std::vector<std::vector<int>>>& families,
                              bool require_family_size = true) {
  int k = static_cast<int>(systems.size());
  if (k == 0) throw PreconditionError("join_many needs at least one system");
  int s = systems[0].spec.s;
  int dmin = systems[0].spec.d_min;
  for (const auto& sys : systems) {
    s = std::min(s, sys.spec.s);
    dmin = std::max(dmin, sys.spec.d_min);
  }
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(k));
  for (auto [u, v] : f_edges) {
    if (u < 0 || v < 0 || u >= k || v >= k || u == v) throw PreconditionError("auxiliary graph edge out of range");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& l : adj) std::sort(l.begin(), l.end());
  std::vector<int> parent(static_cast<std::size_t>(k), -2);
  std::vector<int> order{0};
  parent[0] = -1;
  for (std::size_t h = 0; h < order.size(); ++h)
    for (int v : adj[order[h]])
      if (parent[v] == -2) {
        parent[v] = order[h];
        order.push_back(v);
      }
  if (static_cast<int>(order.size()) != k) throw PreconditionError("auxiliary graph is not connected");

  auto family_of = [&](int u, int v) -> const std::vector<std::vector<int>>& {
    auto it = families.find({std::min(u, v), std::max(u, v)});
    if (it == families.end()) throw PreconditionError("no path family for an auxiliary edge");
    return it->second;
  };
  VertexSet inside;
  for (const auto& sys : systems) inside |= sys.x | sys.w;

  JoinedSystem out;
  out.order = order;
  out.system = systems[order[0]];
  VertexSet picked;
  for (int i = 1; i < k; ++i) {
    int v = order[i];
    int u = parent[v];
    const auto& fam = family_of(u, v);
    if (require_family_size && static_cast<long>(fam.size()) < 15L * k * s)
      throw PreconditionError("path family has fewer than 15ks paths");
    std::vector<std::vector<int>> chosen;
    for (const auto& p : fam) {
      if (static_cast<int>(chosen.size()) == 3 * s) break;
      for (std::size_t j = 1; j + 1 < p.size(); ++j)
        if (inside.test(p[j])) throw PreconditionError("family path has an interior vertex inside a system");
      VertexSet pv = VertexSet::from(p);
      if (pv.intersects(picked)) continue;
      chosen.push_back(p);
      picked |= pv;
    }
    if (static_cast<int>(chosen.size()) < 3 * s) throw PreconditionError("not enough disjoint family paths");
    out.system = join_two(g, out.system, systems[v], chosen);
    out.chosen.push_back(std::move(chosen));
  }
  out.tight_d_min = out.system.spec.d_min;
  if (k >= 2) out.system.spec.d_min = k * (dmin + 3);
  return out;
}

struct PathFamily {
  std::vector<std::vector<int>> paths;
  bool maximal = false;  // no further disjoint short path exists
};

namespace detail {

// First path of exactly `len` edges (1..3) from `from` to `to`, vertex-disjoint
// from `blocked`, interiors in `interior_ok`; sources and steps ascending.
inline std::optional<std::vector<int>> short_path(const Graph& g, const VertexSet& from, const VertexSet& to,
                                                  const VertexSet& blocked, const VertexSet& interior_ok, int len) {
  VertexSet src = from - blocked;
  VertexSet dst = to - blocked;
  VertexSet mid = interior_ok - blocked;
  for (int a = src.first(); a >= 0; a = src.next(a)) {
    if (len == 1) {
      VertexSet hit = g.neighbors(a) & dst;
      if (hit.any()) return std::vector<int>{a, hit.first()};
      continue;
    }
    VertexSet first = g.neighbors(a) & mid;
    for (int c = first.first(); c >= 0; c = first.next(c)) {
      if (len == 2) {
        VertexSet hit = (g.neighbors(c) & dst) - VertexSet{a};
        if (hit.any()) return std::vector<int>{a, c, hit.first()};
        continue;
      }
      VertexSet second = (g.neighbors(c) & mid) - VertexSet{a};
      for (int e = second.first(); e >= 0; e = second.next(e)) {
        VertexSet hit = (g.neighbors(e) & dst) - VertexSet{a};
        if (hit.any()) return std::vector<int>{a, c, e, hit.first()};
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline bool has_short_path(const Graph& g, const VertexSet& from, const VertexSet& to, const VertexSet& blocked,
                           const VertexSet& interior_ok) {
  for (int len = 1; len <= 3; ++len)
    if (detail::short_path(g, from, to, blocked, interior_ok, len)) return true;
  return false;
}

// For each pair i < j, a greedy family of vertex-disjoint paths of length
// <= 3 from M_i to M_j whose interiors avoid `forbidden` and every M set.
// Shorter paths are taken first; families stop at `cap` paths.
inline std::map<std::pair<int, int>, PathFamily> collect_short_path_families(const Graph& g,
                                                                             const std::vector<VertexSet>& m,
                                                                             const VertexSet& forbidden, int cap) {
  VertexSet all_m;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].intersects(all_m)) throw PreconditionError("the M sets must be disjoint");
    all_m |= m[i];
  }
  VertexSet interior_ok = g.vertices() - forbidden - all_m;
  std::map<std::pair<int, int>, PathFamily> out;
  for (int i = 0; i < static_cast<int>(m.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(m.size()); ++j) {
      PathFamily fam;
      VertexSet used;
      for (int len = 1; len <= 3; ++len) {
        while (static_cast<int>(fam.paths.size()) < cap) {
          auto p = detail::short_path(g, m[i], m[j], used, interior_ok, len);
          if (!p) break;
          for (int v : *p) used.set(v);
          fam.paths.push_back(*p);
        }
      }
      fam.maximal = !has_short_path(g, m[i], m[j], used, interior_ok);
      out[{i, j}] = std::move(fam);
    }
  return out;
}

// Paths of exactly l edges joining each pair and together covering all of W.
// Requires |pairs| (l + 1) = |W| + 2 |pairs|.
inline Search<Routing> cover_with_paths(const Graph& g, const std::vector<std::pair<int, int>>& pairs, int l,
                                        const VertexSet& w, Budget& budget) {
  long p = static_cast<long>(pairs.size());
  if (l < 1) throw PreconditionError("path length must be positive");
  if (p * (l + 1) != w.count() + 2 * p)
    throw PreconditionError("cover needs |pairs| (l + 1) = |W| + 2 |pairs|");
  LinkageRequest req{pairs, std::vector<int>(pairs.size(), l)};
  VertexSet ends = request_endpoints(req);
  if (ends.intersects(w)) throw PreconditionError("pair endpoints must lie outside W");
  return find_disjoint_paths(g, req, w, budget);
}

}  // namespace rgood
