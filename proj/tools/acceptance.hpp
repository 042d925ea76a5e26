#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rgood/rgood.hpp"

namespace rgood::acceptance {

// ---------------------------------------------------------------- oracles

// All unlabelled trees on n vertices, from Prüfer codes deduplicated by an
// AHU encoding rooted at the centre(s).
inline std::string ahu(const std::vector<std::vector<int>>& adj, int v, int from) {
  std::vector<std::string> kids;
  for (int w : adj[v])
    if (w != from) kids.push_back(ahu(adj, w, v));
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (auto& k : kids) s += k;
  return s + ")";
}

inline std::string tree_code(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  // Centres by peeling leaves.
  std::vector<int> deg(static_cast<std::size_t>(n));
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(adj[v].size());
    if (deg[v] <= 1) layer.push_back(v);
  }
  int left = n;
  while (left > 2) {
    left -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer)
      for (int w : adj[v])
        if (--deg[w] == 1) next.push_back(w);
    layer = next;
  }
  std::string best;
  for (int c : layer) {
    auto s = ahu(adj, c, -1);
    if (best.empty() || s < best) best = s;
  }
  if (layer.size() == 2) {
    // Root at the central edge.
    auto a = ahu(adj, layer[0], layer[1]), b = ahu(adj, layer[1], layer[0]);
    best = "E" + std::min(a, b) + std::max(a, b);
  }
  return best;
}

inline std::vector<RootedForest> all_trees(int n) {
  if (n == 1) return {trees::single_vertex()};
  if (n == 2) return {trees::path(2)};
  std::map<std::string, RootedForest> seen;
  std::vector<int> code(static_cast<std::size_t>(n - 2), 0);
  while (true) {
    std::vector<int> d(static_cast<std::size_t>(n), 1);
    for (int c : code) ++d[c];
    std::vector<std::pair<int, int>> edges;
    std::set<int> leaves_now;
    for (int v = 0; v < n; ++v)
      if (d[v] == 1) leaves_now.insert(v);
    for (int c : code) {
      int leaf = *leaves_now.begin();
      leaves_now.erase(leaves_now.begin());
      edges.emplace_back(leaf, c);
      if (--d[c] == 1) leaves_now.insert(c);
    }
    edges.emplace_back(*leaves_now.begin(), *std::next(leaves_now.begin()));
    auto key = tree_code(n, edges);
    if (!seen.count(key)) seen.emplace(key, RootedForest::from_edges(n, edges, n - 1));
    int i = 0;
    while (i < n - 2 && ++code[i] == n) code[i++] = 0;
    if (i == n - 2) break;
  }
  std::vector<RootedForest> out;
  for (auto& [k, t] : seen) out.push_back(t);
  return out;
}

// Hall's condition with demands over every subset of A.
inline bool hall_holds(const DemandedBipartite& db) {
  std::size_t na = db.a.size();
  std::map<int, std::set<int>> nb;
  for (auto [a, b] : db.edges) nb[a].insert(b);
  for (unsigned mask = 1; mask < (1U << na); ++mask) {
    std::set<int> n;
    long need = 0;
    for (std::size_t i = 0; i < na; ++i)
      if (mask >> i & 1U) {
        need += db.demand(db.a[i]);
        n.insert(nb[db.a[i]].begin(), nb[db.a[i]].end());
      }
    if (static_cast<long>(n.size()) < need) return false;
  }
  return true;
}

inline bool assignment_ok(const DemandedBipartite& db, const std::map<int, std::vector<int>>& asg) {
  std::set<std::pair<int, int>> edges(db.edges.begin(), db.edges.end());
  std::set<int> used;
  for (int a : db.a) {
    auto it = asg.find(a);
    std::size_t got = it == asg.end() ? 0 : it->second.size();
    if (static_cast<int>(got) != db.demand(a)) return false;
    if (it == asg.end()) continue;
    for (int b : it->second)
      if (!edges.count({a, b}) || !used.insert(b).second) return false;
  }
  return true;
}

// d-expansion straight from the definition over bitmasks, n <= 12.
inline bool expands_bruteforce(const Graph& g, unsigned w, const Rational& d) {
  int n = g.order();
  int wsize = __builtin_popcount(w);
  if (d == Rational(0)) return true;
  if (wsize == 0) return false;
  int k = static_cast<int>(ceil_div(Rational(wsize), 2 * d));
  std::vector<unsigned> nb(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g.adjacent(u, v)) nb[u] |= 1U << v;
  for (unsigned x = 1; x < (1U << n); ++x) {
    int sz = __builtin_popcount(x);
    unsigned nx = 0;
    for (int u = 0; u < n; ++u)
      if (x >> u & 1U) nx |= nb[u];
    nx &= ~x;
    if (sz < k && Rational(__builtin_popcount(nx & w)) < d * sz) return false;
    if (sz == k && __builtin_popcount(((1U << n) - 1) & ~x & ~nx) >= k) return false;
  }
  return true;
}

inline unsigned mask_of(const VertexSet& s) {
  unsigned m = 0;
  s.for_each([&](int v) { m |= 1U << v; });
  return m;
}

inline VertexSet random_subset(int n, double p, Rng& rng) {
  VertexSet s;
  for (int v = 0; v < n; ++v)
    if (rng.bernoulli(p)) s.set(v);
  return s;
}

// |Γ(S) \ X| - 4Δ|S \ X| - Σ_{h ∈ S∩X} (pend(h) + Δ), recomputed from scratch.
inline long slack_direct(const Graph& g, const VertexSet& s, const VertexSet& x, const std::vector<int>& pend,
                         int delta) {
  VertexSet gs;
  long outside = 0, inside = 0;
  s.for_each([&](int v) {
    gs |= g.neighbors(v);
    if (x.test(v))
      inside += pend[v] + delta;
    else
      ++outside;
  });
  return static_cast<long>((gs - x).count()) - 4L * delta * outside - inside;
}

// Every S with |S| <= m (m <= 3): fn(S) must hold.
template <class F>
bool all_small_sets(int n, int m, F&& fn) {
  for (int a = 0; a < n; ++a) {
    if (!fn(VertexSet{a})) return false;
    for (int b = a + 1; m >= 2 && b < n; ++b) {
      if (!fn(VertexSet{a, b})) return false;
      for (int c = b + 1; m >= 3 && c < n; ++c)
        if (!fn(VertexSet{a, b, c})) return false;
    }
  }
  return true;
}

// The certified mode's hypotheses: every m-set has |Γ(S)| >= M + 10Δm, and
// the roots satisfy the extension inequality.
inline bool fp_hypotheses(const Graph& g, const std::vector<int>& roots, const RootedForest& f, const FPParams& p) {
  long threshold = p.big_m + 10L * p.delta * p.m;
  int n = g.order();
  auto gamma_ok = [&](const VertexSet& s) {
    if (s.count() != p.m) return true;
    return gamma(g, s).count() >= threshold;
  };
  if (!all_small_sets(n, p.m, gamma_ok)) return false;
  VertexSet x = VertexSet::from(roots);
  std::vector<int> pend(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < roots.size(); ++i) pend[roots[i]] = static_cast<int>(f.children(f.roots()[i]).size());
  return all_small_sets(n, p.m, [&](const VertexSet& s) { return slack_direct(g, s, x, pend, p.delta) >= 0; });
}

inline bool e2_direct(const Graph& g, const VertexSet& img, int delta, int m) {
  return all_small_sets(g.order(), m, [&](const VertexSet& s) {
    return (gamma(g, s) - img).count() >= static_cast<long>(delta) * s.count();
  });
}

inline bool same_colouring_free(const Graph& red, const RootedForest& t) {
  Budget b = Budget::unlimited();
  return contains_forest_copy(red, t, b).absent();
}

inline Graph complete_blocks(int n, const std::vector<VertexSet>& blocks) {
  Graph g(n);
  for (const auto& b : blocks) {
    auto vs = b.to_vector();
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) g.add_edge(vs[i], vs[j]);
  }
  return g;
}

inline VertexSet range_set(int lo, int hi) {
  VertexSet s;
  for (int v = lo; v < hi; ++v) s.set(v);
  return s;
}

// ---------------------------------------------------------------- battery

struct Scale {
  double factor = 1.0;  // instance counts are multiplied by this
  int count(int full) const { return std::max(1, static_cast<int>(full * factor)); }
};

class Battery {
 public:
  Battery(std::uint64_t seed, Scale scale) : seed_(seed), scale_(scale) {}

  Rng rng_for(int id) const { return Rng(seed_ * 1000003ULL + static_cast<std::uint64_t>(id)); }

  Json run(int id) {
    switch (id) {
      case 1: return c1();
      case 2: return c2();
      case 3: return c3();
      case 4: return c4();
      case 5: return c5();
      case 6: return c6();
      case 7: return c7();
      case 8: return c8();
      case 9: return c9();
      case 10: return c10();
      case 11: return c11();
      case 12: return c12();
    }
    throw PreconditionError("no criterion " + std::to_string(id));
  }

  // 1: R(P_n, K_m) = (n-1)(m-1)+1.
  Json c1() {
    Json rows = Json::array();
    bool pass = true;
    for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {4, 3}, {3, 4}}) {
      auto t = trees::path(n);
      auto h = graphs::complete(m);
      auto r = ramsey_number(t, h, 12);
      int want = (n - 1) * (m - 1) + 1;
      bool cert = coloring_contains(r.lower, t, h).kind == ContainsKind::neither && r.lower.size() == r.value - 1;
      bool ok = r.value == want && cert;
      pass = pass && ok;
      rows.push_back({{"n", n}, {"m", m}, {"R", r.value}, {"expected", want}, {"certificate", cert}});
    }
    return {{"pass", pass}, {"rows", rows}};
  }

  // 2: every tree on <= 5 vertices is K_3-good.
  Json c2() {
    Json rows = Json::array();
    bool pass = true;
    const int expected_counts[] = {0, 1, 1, 1, 2, 3};
    for (int n = 1; n <= 5; ++n) {
      auto ts = all_trees(n);
      pass = pass && static_cast<int>(ts.size()) == expected_counts[n];
      for (const auto& t : ts) {
        auto g = goodness_check(t, graphs::complete(3), 12);
        bool ok = g.verdict == Goodness::good;
        pass = pass && ok;
        rows.push_back({{"n", n}, {"tree", to_json(t)["parent"]}, {"verdict", to_string(g.verdict)},
                        {"R", g.r ? *g.r : -1}, {"bound", g.bound}});
      }
    }
    return {{"pass", pass}, {"trees", rows.size()}, {"rows", rows}};
  }

  // 3: P_3 against K_{3,3}: bound 5, tightness colouring on 6 vertices avoids both.
  Json c3() {
    auto h = graphs::complete_multipartite({3, 3});
    auto t = trees::path(3);
    auto cd = chromatic_data(h);
    long bound = burr_bound(t.size(), cd.chi, cd.sigma);
    auto c = clique_blowup_coloring({2, 2, 2});
    auto res = coloring_contains(c, t, h);
    bool pass = bound == 5 && c.size() == 6 && res.kind == ContainsKind::neither && c.size() + 1 > bound;
    return {{"pass", pass}, {"bound", bound}, {"coloring_size", c.size()}, {"result", to_string(res.kind)},
            {"R_at_least", c.size() + 1}};
  }

  // 4: Burr colourings avoid red t and blue H.
  Json c4() {
    Rng rng = rng_for(4);
    std::vector<std::pair<std::string, Graph>> hs{{"K3", graphs::complete(3)},
                                                  {"K1,2", graphs::complete_multipartite({1, 2})},
                                                  {"C4", graphs::cycle(4)},
                                                  {"K2,2", graphs::complete_multipartite({2, 2})}};
    int total = scale_.count(50), violations = 0;
    Json rows = Json::array();
    for (int i = 0; i < total; ++i) {
      int n = 2 + static_cast<int>(rng.below(5));
      auto t = trees::random_bounded(n, std::max(2, std::min(5, n - 1)), rng.uniform01(), rng());
      const auto& [name, h] = hs[rng.below(hs.size())];
      auto cd = chromatic_data(h);
      auto c = clique_blowup_coloring(burr_sizes(n, cd.chi, cd.sigma));
      auto res = coloring_contains(c, t, h);
      if (res.kind != ContainsKind::neither) ++violations;
      rows.push_back({{"n", n}, {"H", name}, {"N", c.size()}, {"result", to_string(res.kind)}});
    }
    return {{"pass", violations == 0}, {"instances", total}, {"violations", violations}, {"rows", rows}};
  }

  // 5: leaves_or_bare_paths branch invariants.
  Json c5() {
    Rng rng = rng_for(5);
    int total = scale_.count(10000), violations = 0, leaf_branch = 0;
    for (int i = 0; i < total; ++i) {
      int n = 3 + static_cast<int>(rng.below(198));
      int delta = 2 + static_cast<int>(rng.below(4));
      const int rs[] = {3, 4, 6};
      int r = rs[rng.below(3)];
      auto t = trees::random_bounded(n, delta, rng.uniform01(), rng());
      auto pref = rng.bernoulli(0.5) ? BranchPreference::leaves_first : BranchPreference::paths_first;
      int need = (n + 4 * r - 1) / (4 * r);
      bool ok = true;
      try {
        auto res = leaves_or_bare_paths(t, r, pref);
        ok = res.required == need;
        if (res.branch == Branch::leaves) {
          ++leaf_branch;
          std::set<int> ls(res.leaves.begin(), res.leaves.end());
          ok = ok && static_cast<int>(ls.size()) >= need && ls.size() == res.leaves.size();
          for (int v : ls) ok = ok && t.degree(v) == 1;
        } else {
          ok = ok && static_cast<int>(res.paths.paths.size()) >= need && res.paths.r == r;
          std::set<int> used;
          for (const auto& p : res.paths.paths) {
            ok = ok && static_cast<int>(p.size()) == r + 1;
            for (std::size_t j = 0; j < p.size(); ++j) {
              ok = ok && used.insert(p[j]).second;
              if (j + 1 < p.size()) ok = ok && (t.parent(p[j]) == p[j + 1] || t.parent(p[j + 1]) == p[j]);
              if (j > 0 && j + 1 < p.size()) ok = ok && t.degree(p[j]) == 2;
            }
          }
        }
      } catch (const LemmaViolation&) {
        ok = false;
      }
      if (!ok) ++violations;
    }
    return {{"pass", violations == 0}, {"instances", total}, {"violations", violations}, {"leaf_branch", leaf_branch}};
  }

  // 6: centroid_split sizes and separation, up to n = 10^5.
  Json c6() {
    Rng rng = rng_for(6);
    int total = scale_.count(10000), violations = 0, largest = 0;
    for (int i = 0; i < total; ++i) {
      int n = i == 0 ? 100000 : 2 + static_cast<int>(std::exp(rng.uniform01() * std::log(99999.0)));
      largest = std::max(largest, n);
      auto t = trees::random_bounded(n, 2 + static_cast<int>(rng.below(5)), rng.uniform01(), rng());
      auto s = centroid_split(t);
      std::vector<int> side(static_cast<std::size_t>(n), 0);
      bool ok = s.u >= 0 && s.u < n;
      if (ok) side[s.u] = 3;
      for (int v : s.a) side[v] += 1;
      for (int v : s.b) side[v] += 2;
      for (int v = 0; v < n && ok; ++v) ok = side[v] == 1 || side[v] == 2 || (v == s.u && side[v] == 3);
      ok = ok && static_cast<int>(s.a.size() + s.b.size()) == n - 1;
      ok = ok && static_cast<int>(s.a.size()) <= 2 * n / 3 && static_cast<int>(s.b.size()) <= 2 * n / 3;
      for (int v = 0; v < n && ok; ++v) {
        int p = t.parent(v);
        if (p >= 0) ok = side[v] + side[p] != 3;
      }
      if (!ok) ++violations;
    }
    return {{"pass", violations == 0}, {"instances", total}, {"violations", violations}, {"largest_n", largest}};
  }

  // 7: hall_extension_forest against the subset oracle.
  Json c7() {
    Rng rng = rng_for(7);
    int total = scale_.count(2000), violations = 0, forests = 0;
    for (int i = 0; i < total; ++i) {
      int na = 1 + static_cast<int>(rng.below(10));
      int nb = 1 + static_cast<int>(rng.below(10));
      DemandedBipartite db;
      for (int v = 0; v < na; ++v) db.a.push_back(v);
      for (int v = 0; v < nb; ++v) db.b.push_back(100 + v);
      double p = rng.uniform01();
      for (int a : db.a)
        for (int b : db.b)
          if (rng.bernoulli(p)) db.edges.emplace_back(a, b);
      for (int a : db.a) db.demands[a] = static_cast<int>(rng.below(3));
      auto r = hall_extension_forest(db);
      bool oracle = hall_holds(db);
      bool ok = r.forest == oracle;
      if (ok && r.forest) {
        ++forests;
        ok = assignment_ok(db, r.assignment);
      } else if (ok) {
        ok = !r.deficiency.empty() && is_deficient(db, r.deficiency);
      }
      if (!ok) ++violations;
    }
    return {{"pass", violations == 0}, {"instances", total}, {"violations", violations}, {"forests", forests}};
  }

  // 8: certified FP embedding on random regular hosts.  Logs critical sets for 9.
  Json c8() {
    Rng rng = rng_for(8);
    int total = scale_.count(200), violations = 0, hypothesis_failures = 0, skipped = 0;
    int done = 0;
    while (done < total) {
      int degree = 60 + static_cast<int>(rng.below(41));
      auto g = graphs::random_regular(200, degree, rng);
      int delta = 2 + static_cast<int>(rng.below(2));
      int m = 1 + static_cast<int>(rng.below(3));
      int first = 4 + static_cast<int>(rng.below(17));
      RootedForest f = trees::random_bounded(first, delta, rng.uniform01(), rng());
      if (first <= 20 && rng.bernoulli(0.5)) {
        int second = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(24 - first)));
        f = forest_union(f, trees::random_bounded(second, delta, rng.uniform01(), rng()));
      }
      std::vector<int> roots;
      while (roots.size() < f.roots().size()) {
        int h = static_cast<int>(rng.below(200));
        if (std::find(roots.begin(), roots.end(), h) == roots.end()) roots.push_back(h);
      }
      FPParams p{delta, m, 24};
      if (!fp_hypotheses(g, roots, f, p)) {
        ++skipped;
        continue;
      }
      ++done;
      bool ok = true;
      try {
        auto r = fp_embed_forest(g, roots, f, p, {FPMode::certified});
        ok = r.mode_used == FPMode::certified && valid_embedding(g, f, r.embedding, roots) && r.e2_verified &&
             e2_direct(g, r.embedding.image(), delta, m);
        absorb_critical(g, r, delta, m);
      } catch (const HypothesisViolated&) {
        ++hypothesis_failures;
        ok = false;
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) ++violations;
    }
    ran8_ = true;
    return {{"pass", violations == 0 && hypothesis_failures == 0},
            {"instances", total},
            {"violations", violations},
            {"hypothesis_violated", hypothesis_failures},
            {"skipped_precheck", skipped},
            {"critical_pairs", pairs8_}};
  }

  // 9: unions of logged critical pairs are critical; planted weak vertices add pairs.
  Json c9() {
    if (!ran8_) c8();
    long from8 = pairs8_;
    int bad8 = bad_pairs_;
    Rng rng = rng_for(9);
    int runs = scale_.count(20), violations = 0;
    for (int trial = 0; trial < runs; ++trial) {
      int delta = 3;
      int m = trial % 2 == 0 ? 3 : 2;
      int weak = m - 1;
      auto base = graphs::gnp(200, 0.8, rng);
      Graph g(200 + weak);
      for (auto [u, v] : base.edges()) g.add_edge(u, v);
      std::vector<int> pool(200);
      for (int i = 0; i < 200; ++i) pool[i] = i;
      rng.shuffle(pool);
      std::size_t next = 0;
      for (int w = 0; w < weak; ++w)
        for (int i = 0; i < 4 * delta; ++i) g.add_edge(200 + w, pool[next++]);
      auto f = trees::random_bounded(24, delta, 0.4, rng());
      VertexSet avoid;
      for (int w = 200; w < 200 + weak; ++w) {
        avoid.set(w);
        avoid |= g.neighbors(w);
      }
      int root = (g.vertices() - avoid).first();
      try {
        auto r = fp_embed_forest(g, {root}, f, {delta, m, 24}, {FPMode::certified});
        absorb_critical(g, r, delta, m);
      } catch (const Error&) {
        ++violations;
      }
    }
    long total = pairs8_;
    int bad = bad_pairs_;
    return {{"pass", bad == 0 && violations == 0 && total > 0},
            {"pairs_from_8", from8},
            {"pairs_total", total},
            {"violations", bad + violations},
            {"violations_from_8", bad8},
            {"unions_beyond_m", oversized_}};
  }

  // 10: closure properties of expansion where the premise holds.
  Json c10() {
    Rng rng = rng_for(10);
    int total = scale_.count(500), premises = 0, violations = 0, attempts = 0, applied = 0;
    while (premises < total && attempts < 200 * total) {
      ++attempts;
      int n = 4 + static_cast<int>(rng.below(6));
      auto g = graphs::gnp(n, 0.5 + 0.45 * rng.uniform01(), rng);
      auto w = random_subset(n, 0.5, rng);
      auto z = w | random_subset(n, 0.5, rng);
      Rational d(2 + static_cast<int>(rng.below(5)), 1 + static_cast<int>(rng.below(2)));
      Rational lo = d > Rational(1) ? d / (d - Rational(1)) : d;
      Rational c = lo + (d - lo) * Rational(static_cast<int>(rng.below(3)), 2);
      Budget b;
      auto rep = subset_expansion_closure(g, w, z, d, c, b);
      if (!rep.premise.holds()) continue;
      if (!expands_bruteforce(g, mask_of(w), d)) {
        ++violations;
        continue;
      }
      ++premises;
      // Conclusions checked by the definition too.
      auto sub = induced_subgraph(g, z);
      bool ok = rep.restrict_host == Conclusion::holds && expands_bruteforce(sub.graph, mask_of(sub.restrict(w)), d);
      ++applied;
      if (d >= Rational(2)) {
        ++applied;
        ok = ok && rep.enlarge_target == Conclusion::holds && expands_bruteforce(g, mask_of(z), d);
      }
      if (d > Rational(1) && lo <= c && c <= d) {
        ++applied;
        ok = ok && rep.weaken_factor == Conclusion::holds && expands_bruteforce(g, mask_of(w), c);
      }
      if (!ok) ++violations;
    }
    return {{"pass", violations == 0 && premises == total},
            {"instances", premises},
            {"conclusions_checked", applied},
            {"violations", violations}};
  }

  // 11: join_two / join_many results are linked systems by full enumeration.
  // Blocks are complete inside; connectors run through fresh vertices.  Base
  // ranges are wide enough that every joined range [d-, d+] is nonempty.
  Json c11() {
    Rng rng = rng_for(11);
    int total = scale_.count(100), violations = 0, vacuous = 0;
    long requests = 0;
    for (int i = 0; i < total; ++i) {
      int k = 2 + static_cast<int>(rng.below(2));
      int s = k == 2 && i % 5 == 0 ? 2 : 1;
      int dmin = 1 + static_cast<int>(rng.below(2));
      int joined_min = k == 2 ? 2 * dmin + 3 : k * (dmin + 3);
      // s paths of length d+ need s(d+ - 1) interior vertices of W.
      int dmax = joined_min + static_cast<int>(rng.below(2));
      int ws = s * (dmax - 1) + static_cast<int>(rng.below(2));
      int xs = (k == 2 ? 3 : 6) * s;
      int block = xs + ws;
      int conn_len = 1 + static_cast<int>(rng.below(3));
      int n = k * block + (k - 1) * 3 * s * (conn_len - 1);
      std::vector<VertexSet> x, w, blocks;
      for (int j = 0; j < k; ++j) {
        x.push_back(range_set(j * block, j * block + xs));
        w.push_back(range_set(j * block + xs, (j + 1) * block));
        blocks.push_back(x.back() | w.back());
      }
      Graph g = complete_blocks(n, blocks);
      std::map<std::pair<int, int>, std::vector<std::vector<int>>> fams;
      int fresh = k * block;
      for (int j = 0; j + 1 < k; ++j)
        for (int c = 0; c < 3 * s; ++c) {
          // Leave block j from the back of its X, enter block j+1 at the front.
          std::vector<int> p{j * block + xs - 1 - c};
          for (int e = 1; e < conn_len; ++e) p.push_back(fresh++);
          p.push_back((j + 1) * block + c);
          for (std::size_t e = 0; e + 1 < p.size(); ++e) g.add_edge(p[e], p[e + 1]);
          fams[{j, j + 1}].push_back(p);
        }
      LinkedSpec spec{s, dmin, dmax};
      std::vector<LinkedSystem> systems;
      bool ok = true;
      for (int j = 0; j < k; ++j) {
        Budget b;
        ok = ok && check_linked_system(g, x[j], w[j], spec, b).verdict == Verdict::holds;
        systems.push_back(solver_system(g, x[j], w[j], spec));
      }
      std::vector<std::pair<int, int>> f_edges;
      for (int j = 0; j + 1 < k; ++j) f_edges.emplace_back(j, j + 1);
      try {
        LinkedSystem joined = k == 2 ? join_two(g, systems[0], systems[1], fams[{0, 1}])
                                     : join_many(g, systems, f_edges, fams, false).system;
        if (joined.spec.d_min > joined.spec.d_max || joined.spec.s < 1) ++vacuous;
        Budget b;
        auto check = check_linked_system(g, joined.x, joined.w, joined.spec, b);
        auto routed = check_router(g, joined);
        requests += check.requests;
        ok = ok && check.verdict == Verdict::holds && routed.verdict == Verdict::holds;
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) ++violations;
    }
    return {{"pass", violations == 0 && vacuous == 0},
            {"instances", total},
            {"violations", violations},
            {"vacuous", vacuous},
            {"requests", requests}};
  }

  // 12: pipeline on Burr red graphs one vertex below the threshold.
  Json c12() {
    Rng rng = rng_for(12);
    int total = scale_.count(20), violations = 0;
    Json rows = Json::array();
    for (int i = 0; i < total; ++i) {
      int n = 3 + static_cast<int>(rng.below(4));
      int k = 2 + static_cast<int>(rng.below(2));
      std::vector<int> sizes;
      for (int j = 0; j < k; ++j) sizes.push_back(1 + static_cast<int>(rng.below(3)));
      std::sort(sizes.begin(), sizes.end());
      int delta = std::max(2, std::min(n - 1, 1 + static_cast<int>(rng.below(3))));
      auto t = trees::random_bounded(n, delta, rng.uniform01(), rng());
      auto red = clique_blowup_coloring(burr_sizes(n, k, sizes[0])).red;
      PipelineConstants c;
      c.d = Rational(1 + static_cast<int>(rng.below(3)));
      c.r = 3;
      Budget b;
      auto r = goodness_pipeline(red, t, t.actual_max_degree(), sizes, c, b);
      bool no_copy = same_colouring_free(red, t);
      Budget e = Budget::unlimited();
      bool no_blue = find_multipartite(complement(red), sizes, e).absent();
      bool ok = !r.embedding && r.status != PipelineStatus::embedded && no_copy && no_blue;
      if (!ok) ++violations;
      rows.push_back({{"n", n}, {"sizes", sizes}, {"N", red.order()}, {"status", to_string(r.status)}, {"stage", r.stage}});
    }
    return {{"pass", violations == 0}, {"instances", total}, {"violations", violations}, {"rows", rows}};
  }

 private:
  void absorb_critical(const Graph& g, const FPResult& r, int delta, int m) {
    for (const auto& snap : r.critical_log) {
      for (const auto& c : snap.critical)
        if (c.count() > m || slack_direct(g, c, snap.x, snap.pend, delta) != 0) ++bad_pairs_;
      for (std::size_t i = 0; i < snap.critical.size(); ++i)
        for (std::size_t j = i + 1; j < snap.critical.size(); ++j) {
          ++pairs8_;
          VertexSet u = snap.critical[i] | snap.critical[j];
          if (u.count() > m)
            ++oversized_;
          else if (slack_direct(g, u, snap.x, snap.pend, delta) != 0)
            ++bad_pairs_;
        }
    }
  }

  std::uint64_t seed_;
  Scale scale_;
  bool ran8_ = false;
  long pairs8_ = 0;
  int bad_pairs_ = 0;
  long oversized_ = 0;
};

struct CriterionInfo {
  int id;
  const char* name;
  double limit_seconds;
};

inline const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list{
      {1, "ramsey exactness", 300},       {2, "goodness positives", 600},
      {3, "goodness negative", 10},       {4, "burr construction soundness", 300},
      {5, "leaves or bare paths", 120},   {6, "centroid split", 120},
      {7, "hall oracle equivalence", 60}, {8, "certified fp embedding", 900},
      {9, "critical-set unions", 900},    {10, "subset expansion closure", 300},
      {11, "linked-system joins", 600},   {12, "pipeline lower-bound consistency", 600},
  };
  return list;
}

// Suite output: every criterion's detail, no timings, so reruns compare byte for byte.
inline Json run_suite(std::uint64_t seed, Scale scale, const std::vector<int>& only = {}) {
  Battery battery(seed, scale);
  Json out{{"seed", seed}, {"scale", scale.factor}};
  Json results = Json::array();
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Json r = battery.run(c.id);
    r["id"] = c.id;
    r["name"] = c.name;
    results.push_back(r);
  }
  out["criteria"] = results;
  return out;
}

}  // namespace rgood::acceptance
