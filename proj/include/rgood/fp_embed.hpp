#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "subgraph.hpp"
#include "subsets.hpp"
#include "tree.hpp"

namespace rgood {

// Exhaustive search proved that the forest has no copy with the given roots.
class NotEmbeddable : public Error {
 public:
  using Error::Error;
};

enum class FPMode { certified, heuristic, automatic };

inline const char* to_string(FPMode m) {
  switch (m) {
    case FPMode::certified: return "certified";
    case FPMode::heuristic: return "heuristic";
    case FPMode::automatic: return "automatic";
  }
  return "?";
}

struct FPParams {
  int delta = 0;  // degree bound
  int m = 0;      // small-set size
  int big_m = 0;  // total size bound on the forest
};

struct FPOptions {
  FPMode mode = FPMode::automatic;
  int max_m = 3;
  int max_forest = 24;
  bool log_critical = true;
};

// State seen at one extension step.  pend[h] is the number of children of
// the forest vertex sitting on host h that are still unplaced; x is every
// host vertex used so far.
struct CriticalSnapshot {
  int step = 0;
  VertexSet x;
  std::vector<int> pend;
  std::vector<VertexSet> critical;
};

struct FPResult {
  Embedding embedding;
  FPMode mode_used = FPMode::certified;
  bool e2_verified = false;
  int steps = 0;
  std::uint64_t nodes = 0;
  std::vector<CriticalSnapshot> critical_log;
  std::string note;
};

// |Γ(S)∖X| − 4Δ|S∖X| − Σ_{h∈S∩X} (pend(h) + Δ).  Non-negative for every
// small S is the invariant kept by the certified mode; zero means critical.
inline long e1_slack(const Graph& g, const VertexSet& s, const VertexSet& x, const std::vector<int>& pend, int delta) {
  long slack = (gamma(g, s) - x).count();
  slack -= 4L * delta * (s - x).count();
  (s & x).for_each([&](int h) { slack -= pend[h] + delta; });
  return slack;
}

inline bool is_critical(const Graph& g, const CriticalSnapshot& snap, const VertexSet& s, int delta, int m) {
  return !s.empty() && s.count() <= m && e1_slack(g, s, snap.x, snap.pend, delta) == 0;
}

namespace detail {

inline void check_fp_input(const Graph& g, const std::vector<int>& roots, const RootedForest& f, const FPParams& p) {
  if (p.delta < 1 || p.m < 1) throw PreconditionError("fp_embed: needs Δ >= 1 and m >= 1");
  if (roots.size() != f.roots().size())
    throw PreconditionError("fp_embed: " + std::to_string(roots.size()) + " root hosts for " +
                            std::to_string(f.roots().size()) + " trees");
  if (f.size() > p.big_m) throw PreconditionError("fp_embed: forest larger than M");
  if (f.actual_max_degree() > p.delta) throw PreconditionError("fp_embed: forest degree exceeds Δ");
  VertexSet seen;
  for (int h : roots) {
    if (h < 0 || h >= g.order()) throw PreconditionError("fp_embed: root host out of range");
    if (seen.test(h)) throw PreconditionError("fp_embed: root hosts must be distinct");
    seen.set(h);
  }
}

// All sets of size <= m with slack 0.  A negative slack is reported through
// `broken`.  Adding a vertex lowers the slack by at most 4Δ, which bounds
// the search.
inline std::vector<VertexSet> critical_sets(const Graph& g, const VertexSet& x, const std::vector<int>& pend,
                                            int delta, int m, Budget& budget, std::vector<int>& broken) {
  std::vector<VertexSet> out;
  auto end = walk_subsets(g.vertices(), m, budget, [&](const std::vector<int>& c) {
    VertexSet s = VertexSet::from(c);
    long slack = e1_slack(g, s, x, pend, delta);
    if (slack < 0) {
      broken = c;
      return Visit::stop;
    }
    if (slack == 0) out.push_back(s);
    return slack > 4L * delta * (m - static_cast<long>(c.size())) ? Visit::prune : Visit::descend;
  });
  if (end == EnumerationEnd::budget) throw SearchBudgetExceeded("fp_embed: critical-set enumeration budget");
  return out;
}

// First m-set with |Γ(S)| below the threshold; empty when none.  Γ is
// monotone, so sets of size m cover the whole range m..2m.
inline std::vector<int> small_gamma_set(const Graph& g, int m, long threshold, Budget& budget) {
  std::vector<int> found;
  auto end = walk_subsets(g.vertices(), m, budget, [&](const std::vector<int>& c) {
    long gs = gamma(g, VertexSet::from(c)).count();
    if (gs >= threshold) return Visit::prune;
    if (static_cast<int>(c.size()) == m) {
      found = c;
      return Visit::stop;
    }
    return Visit::descend;
  });
  if (end == EnumerationEnd::budget) throw SearchBudgetExceeded("fp_embed: hypothesis check budget");
  return found;
}

// First S with |S| <= m and |Γ(S)∖img| < Δ|S|; empty when (e2) holds.
inline std::vector<int> e2_violation(const Graph& g, const VertexSet& img, int delta, int m, Budget& budget) {
  std::vector<int> bad;
  auto end = walk_subsets(g.vertices(), m, budget, [&](const std::vector<int>& c) {
    long slack = (gamma(g, VertexSet::from(c)) - img).count() - static_cast<long>(delta) * c.size();
    if (slack < 0) {
      bad = c;
      return Visit::stop;
    }
    return slack >= static_cast<long>(delta) * (m - static_cast<long>(c.size())) ? Visit::prune : Visit::descend;
  });
  if (end == EnumerationEnd::budget) throw SearchBudgetExceeded("fp_embed: (e2) check budget");
  return bad;
}

inline FPResult fp_certified(const Graph& g, const std::vector<int>& roots, const RootedForest& f, const FPParams& p,
                             const FPOptions& opt, Budget& budget) {
  std::uint64_t start = budget.used;
  int n = g.order();
  long threshold = p.big_m + 10L * p.delta * p.m;
  if (n >= p.m) {
    auto weak = small_gamma_set(g, p.m, threshold, budget);
    if (!weak.empty())
      throw HypothesisViolated("fp_embed: an " + std::to_string(p.m) + "-set has |Γ(S)| below M + 10Δm", weak);
  }

  FPResult res;
  res.mode_used = FPMode::certified;
  res.embedding.map.assign(static_cast<std::size_t>(f.size()), -1);
  std::vector<int> pend(static_cast<std::size_t>(n), 0);
  std::vector<int> next_child(static_cast<std::size_t>(f.size()), 0);
  VertexSet x;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    int r = f.roots()[i];
    res.embedding.map[r] = roots[i];
    pend[roots[i]] = static_cast<int>(f.children(r).size());
    x.set(roots[i]);
  }
  std::vector<int> order = f.bfs_order();
  {
    std::vector<int> broken;
    detail::critical_sets(g, x, pend, p.delta, p.m, budget, broken);
    if (!broken.empty()) throw HypothesisViolated("fp_embed: the extension inequality fails for the roots", broken);
  }

  for (;;) {
    // x1: the earliest placed forest vertex with a child still to place.
    int parent = -1;
    for (int v : order)
      if (res.embedding.map[v] >= 0 && next_child[v] < static_cast<int>(f.children(v).size())) {
        parent = v;
        break;
      }
    if (parent < 0) break;
    int x1 = res.embedding.map[parent];
    int c = f.children(parent)[next_child[parent]];

    std::vector<int> broken;
    auto crit = critical_sets(g, x, pend, p.delta, p.m, budget, broken);
    if (!broken.empty())
      throw LemmaViolation("fp_embed: extension inequality broken after step " + std::to_string(res.steps));
    if (opt.log_critical && !crit.empty()) res.critical_log.push_back({res.steps, x, pend, crit});

    // v is admissible unless some critical C avoiding x1 and v has v in Γ(C).
    VertexSet blocked;
    for (const auto& cs : crit)
      if (!cs.test(x1)) blocked |= gamma(g, cs) - cs;
    VertexSet cand = g.neighbors(x1) - x - blocked;
    int v = cand.first();
    if (v < 0) {
      VertexSet free = g.neighbors(x1) - x;
      VertexSet u;
      bool covered = true;
      free.for_each([&](int w) {
        for (const auto& cs : crit)
          if (!cs.test(x1) && !cs.test(w) && gamma(g, cs).test(w)) {
            u |= cs;
            return;
          }
        covered = false;
      });
      VertexSet wit = u;
      wit.set(x1);
      long wg = gamma(g, wit).count();
      bool union_critical = covered && u.count() <= p.m && e1_slack(g, u, x, pend, p.delta) == 0;
      if (union_critical && wit.count() >= p.m && wit.count() <= 2 * p.m && wg < threshold)
        throw HypothesisViolated("fp_embed: no admissible extension; C ∪ {x1} has small Γ", wit.to_vector());
      throw LemmaViolation("fp_embed: no admissible extension at step " + std::to_string(res.steps));
    }
    res.embedding.map[c] = v;
    ++next_child[parent];
    --pend[x1];
    pend[v] = static_cast<int>(f.children(c).size());
    x.set(v);
    ++res.steps;
  }

  auto why = embedding_error(g, f, res.embedding, roots);
  if (!why.empty()) throw LemmaViolation("fp_embed: certified result invalid: " + why);
  auto bad = e2_violation(g, res.embedding.image(), p.delta, p.m, budget);
  if (!bad.empty()) throw LemmaViolation("fp_embed: (e2) fails on the final copy");
  res.e2_verified = true;
  res.nodes = budget.used - start;
  return res;
}

inline FPResult fp_heuristic(const Graph& g, const std::vector<int>& roots, const RootedForest& f, Budget& budget) {
  std::uint64_t start = budget.used;
  FPResult res;
  res.mode_used = FPMode::heuristic;
  res.note = "heuristic: final copy validated, no (e2) guarantee";
  res.embedding.map.assign(static_cast<std::size_t>(f.size()), -1);
  VertexSet used;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    res.embedding.map[f.roots()[i]] = roots[i];
    used.set(roots[i]);
  }
  for (std::size_t i = 0; i < roots.size(); ++i)
    if ((g.neighbors(roots[i]) - used).count() < static_cast<int>(f.children(f.roots()[i]).size()))
      throw NotEmbeddable("fp_embed: a root host has too few free neighbours");
  std::vector<int> order;
  for (int v : f.bfs_order())
    if (f.parent(v) >= 0) order.push_back(v);
  bool out_of_budget = false;

  auto rec = [&](auto& self, std::size_t i) -> bool {
    if (i == order.size()) return true;
    int c = order[i];
    int host = res.embedding.map[f.parent(c)];
    std::vector<std::pair<int, int>> cands;
    (g.neighbors(host) - used).for_each([&](int v) { cands.emplace_back(-(g.neighbors(v) - used).count(), v); });
    std::sort(cands.begin(), cands.end());
    int need = static_cast<int>(f.children(c).size());
    for (auto [neg, v] : cands) {
      if (!budget.tick()) {
        out_of_budget = true;
        return false;
      }
      if (-neg < need) continue;
      res.embedding.map[c] = v;
      used.set(v);
      ++res.steps;
      if (self(self, i + 1)) return true;
      if (out_of_budget) return false;
      used.reset(v);
      res.embedding.map[c] = -1;
    }
    return false;
  };
  if (!rec(rec, 0)) {
    if (out_of_budget) throw SearchBudgetExceeded("fp_embed: heuristic search budget exhausted");
    throw NotEmbeddable("fp_embed: no copy with the prescribed roots");
  }
  auto why = embedding_error(g, f, res.embedding, roots);
  if (!why.empty()) throw LemmaViolation("fp_embed: heuristic result invalid: " + why);
  res.nodes = budget.used - start;
  return res;
}

}  // namespace detail

// Copies of the trees of f, tree i rooted at roots[i], disjoint in g.
inline FPResult fp_embed_forest(const Graph& g, const std::vector<int>& roots, const RootedForest& f,
                                const FPParams& p, const FPOptions& opt, Budget& budget) {
  detail::check_fp_input(g, roots, f, p);
  bool within_caps = p.m <= opt.max_m && f.size() <= opt.max_forest;
  FPMode mode = opt.mode;
  if (mode == FPMode::automatic) mode = within_caps ? FPMode::certified : FPMode::heuristic;
  if (mode == FPMode::certified) {
    if (!within_caps)
      throw CapExceeded("fp_embed: certified mode needs m <= " + std::to_string(opt.max_m) + " and forest <= " +
                        std::to_string(opt.max_forest));
    return detail::fp_certified(g, roots, f, p, opt, budget);
  }
  return detail::fp_heuristic(g, roots, f, budget);
}

inline FPResult fp_embed_forest(const Graph& g, const std::vector<int>& roots, const RootedForest& f,
                                const FPParams& p, const FPOptions& opt = {}) {
  Budget budget;
  return fp_embed_forest(g, roots, f, p, opt, budget);
}

}  // namespace rgood
