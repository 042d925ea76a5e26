#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expander.hpp"
#include "lemmas.hpp"
#include "linkage.hpp"
#include "matching.hpp"

namespace rgood {

// A stage whose hypotheses cannot hold with the given constants at this
// instance size.  Nothing is returned in its place.
class ScaleInfeasible : public Error {
 public:
  ScaleInfeasible(std::string stage, const std::string& why)
      : Error(stage + ": " + why), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Thresholds of the goodness argument.  Zero means "use the named default for
// this tree size"; the defaults are astronomically large below n ~ 10^20,
// so demonstrations override them.
struct PipelineConstants {
  Rational d{0};         // expansion factor
  int r = 0;             // bare path length
  int y = 0;             // linked-system path length
  int u = 0;             // size of the K^{k-1}_u outside X; bookkeeping only
  int q = 0;             // part size of the first K^{k-1}_q
  int w = 0;             // size of the W_i inside each Q_i
  int family_cap = 0;    // short paths collected per pair of M sets
  double c_delta_k = 0;  // C_{Δ,k}; reported only
  // When a lemma's size hypothesis fails at desk scale, run an exhaustive
  // search for the same object instead of stopping.  Results found this way
  // are valid copies but carry certified = false.
  bool substitutes = true;
  std::uint64_t seed = 1;
  int cap = kDefaultEnumerationCap;
  FPOptions fp;
};

inline Rational default_d(int n) {
  double ln = std::log(std::max(n, 3));
  double lnln = std::max(std::log(ln), 1.0);
  return Rational(static_cast<std::int64_t>(std::ceil(4e12 * std::pow(ln, 4) / lnln)));
}
inline int default_r(int n) {
  double ln = std::log(std::max(n, 2));
  return static_cast<int>(std::ceil(1000 * ln * ln));
}
inline int default_y(int n) { return static_cast<int>(std::ceil(std::log(std::max(n, 2)))); }

inline int ceil_div(long a, long b) { return static_cast<int>((a + b - 1) / b); }

// Fills every zero field from the defaults for a tree on n vertices and k parts.
inline PipelineConstants resolve_constants(PipelineConstants c, int n, int k) {
  if (c.d == Rational(0)) c.d = default_d(n);
  if (c.r == 0) c.r = default_r(n);
  if (c.y == 0) c.y = default_y(n);
  if (c.u == 0) c.u = ceil_div(2L * n, c.r);
  if (c.q == 0) c.q = ceil_div(23L * c.y * n, c.r);
  if (c.w == 0) c.w = ceil_div(21L * c.y * n, c.r);
  if (c.family_cap == 0) c.family_cap = ceil_div(8L * std::max(k, 1) * n, c.r);
  return c;
}

enum class PipelineStatus { embedded, witness, scale_infeasible, budget };

inline const char* to_string(PipelineStatus s) {
  switch (s) {
    case PipelineStatus::embedded: return "embedded";
    case PipelineStatus::witness: return "witness";
    case PipelineStatus::scale_infeasible: return "scale_infeasible";
    case PipelineStatus::budget: return "budget_exceeded";
  }
  return "?";
}

struct PipelineResult {
  PipelineStatus status = PipelineStatus::scale_infeasible;
  std::optional<Embedding> embedding;
  std::optional<Parts> witness;
  bool certified = true;  // false once a substitute search stood in for a lemma
  std::string stage;      // where the run ended
  std::string message;
  PipelineConstants constants;
  Trace trace;
};

struct LinkageParams {
  int r = 0;
  int y = 0;
  int u = 0;
  int m = 1;
  int k = 3;
  int delta = 1;
  int paths = -1;  // bare paths to reroute; -1 means ceil(n / 4r)
};

namespace detail {

// Shared state of one pipeline run.
struct Run {
  const PipelineConstants& c;
  Budget& budget;
  Trace trace;
  bool certified = true;

  LemmaOptions lemma_options() const { return LemmaOptions{c.fp, c.cap}; }

  void log(const std::string& stage, const std::string& outcome, std::uint64_t since, Parts witness = {}) {
    trace.push_back({stage, outcome, std::move(witness), budget.used - since});
  }
  void absorb(const std::string& prefix, const Trace& inner) {
    for (const auto& s : inner) trace.push_back({prefix + " / " + s.stage, s.outcome, s.witness, s.nodes});
  }
  // Either stop or record that an exhaustive search replaces the lemma.
  void substitute(const std::string& stage, const std::string& why) {
    if (!c.substitutes) throw ScaleInfeasible(stage, why);
    certified = false;
    trace.push_back({stage, "substitute: " + why, {}, 0});
  }
};

inline Parts trim_parts(Parts parts, const std::vector<int>& sizes) {
  for (std::size_t i = 0; i < parts.size(); ++i) parts[i].resize(static_cast<std::size_t>(sizes[i]));
  return parts;
}

// Appends one part per pool, of the matching size, each avoiding the
// neighbourhoods of everything chosen so far.  Empty if a pool runs dry.
inline std::optional<Parts> extend_parts(const Graph& g, Parts parts, const std::vector<VertexSet>& pools,
                                         const std::vector<int>& sizes) {
  VertexSet used;
  for (const auto& p : parts)
    for (int v : p) used.set(v);
  VertexSet blocked = used | neighborhood(g, used);
  for (std::size_t i = 0; i < pools.size(); ++i) {
    auto pick = take(pools[i] - blocked, sizes[i]);
    if (static_cast<int>(pick.size()) < sizes[i]) return std::nullopt;
    VertexSet ps = VertexSet::from(pick);
    blocked |= ps | neighborhood(g, ps);
    parts.push_back(std::move(pick));
  }
  return parts;
}

// Exhaustive copy search used in place of a lemma.
inline Embedding search_copy(Run& run, const std::string& stage, const Graph& g, const RootedForest& f) {
  std::uint64_t mark = run.budget.used;
  auto s = contains_forest_copy(g, f, run.budget);
  if (s.unknown()) throw SearchBudgetExceeded(stage + ": copy search ran out of budget");
  if (s.absent()) throw ScaleInfeasible(stage, "the region holds no copy of the piece");
  run.log(stage, "copy found by search", mark);
  return *s.value;
}

struct Pruned {
  VertexSet removed;
  std::optional<VertexSet> overflow;  // grown set that reached m vertices
};

// Removes a maximal non-expanding set of at most m-1 vertices.
inline Pruned prune(Run& run, const std::string& stage, const Graph& g, int m, const Rational& factor,
                    const std::optional<VertexSet>& within = std::nullopt) {
  std::uint64_t mark = run.budget.used;
  Pruned out;
  try {
    out.removed = maximal_nonexpanding_set(g, m, factor, Threshold::below, within, run.budget, run.c.cap);
    run.log(stage, "removed " + std::to_string(out.removed.count()), mark);
  } catch (const CapExceeded& e) {
    throw ScaleInfeasible(stage, e.what());
  } catch (const HypothesisViolated& e) {
    out.overflow = VertexSet::from(e.witness());
    run.log(stage, "overflow at " + std::to_string(e.witness().size()), mark);
  }
  return out;
}

inline ScaleInfeasible overflow_error(const std::string& stage) {
  return ScaleInfeasible(stage, "a non-expanding set reached m vertices and yields no witness; "
                                "the thresholds rule this out only for large n");
}

// Lift a local outcome through an induced subgraph.
inline EmbedOutcome lift_outcome(EmbedOutcome o, const InducedSubgraph& sub) {
  if (o.embedding) o.embedding = lift_embedding(*o.embedding, sub);
  if (o.witness) o.witness = lift_parts(*o.witness, sub);
  return o;
}

inline EmbedOutcome run_c1(Run& run, const std::string& stage, const Graph& g, const RootedForest& f, int delta,
                           int m1, int m2) {
  std::uint64_t mark = run.budget.used;
  try {
    auto r = embed_avoiding_bipartite(g, f, delta, m1, m2, run.lemma_options(), run.budget);
    run.absorb(stage, r.trace);
    if (r.fp_mode == FPMode::heuristic && r.embedded()) run.certified = false;
    return r;
  } catch (const CapExceeded& e) {
    run.log(stage, std::string("cap: ") + e.what(), mark);
    throw;
  }
}

inline EmbedOutcome run_c2(Run& run, const std::string& stage, const Graph& g, const RootedForest& t, int delta,
                           int k, int m) {
  try {
    auto r = embed_avoiding_multipartite(g, t, delta, k, m, run.lemma_options(), run.budget);
    run.absorb(stage, r.trace);
    if (r.fp_mode == FPMode::heuristic && r.embedded()) run.certified = false;
    return r;
  } catch (const CapExceeded& e) {
    throw ScaleInfeasible(stage, e.what());
  } catch (const PreconditionError& e) {
    throw ScaleInfeasible(stage, e.what());
  }
}

// The expander branch for two parts: g's complement has no K^2_m and small
// sets expand by d.  Returns a copy of t or K_{m,m} in the complement.
inline EmbedOutcome expander_route(Run& run, const Graph& g, const RootedForest& t, int delta, int m) {
  const auto& c = run.c;
  int n = t.size();
  int np = g.order();
  if (np < n) throw ScaleInfeasible("expander route", "host smaller than the tree");
  if (np >= n + 13L * delta * m + m) {
    try {
      return run_c1(run, "direct copy", g, t, delta, m, m);
    } catch (const CapExceeded& e) {
      throw ScaleInfeasible("direct copy", e.what());
    }
  }

  std::uint64_t mark = run.budget.used;
  auto rep = check_d_expands(g, g.vertices(), c.d, run.budget, c.cap);
  if (rep.verdict == Verdict::holds)
    run.log("expander check", "holds", mark);
  else
    run.substitute("expander check", rep.verdict == Verdict::unknown ? "expansion of the host cannot be verified"
                                                                        : "host is not an (n', d)-expander");

  int p = ceil_div(n, 4L * c.r);
  auto bare = harvest_bare_paths(t, c.r);
  if (static_cast<int>(bare.paths.size()) < p)
    throw ScaleInfeasible("strip paths", "tree has fewer than n/4r bare paths of length r");
  bare.paths.resize(static_cast<std::size_t>(p));
  auto stripped = strip_bare_path_interiors(t, bare);
  const RootedForest& tp = stripped.rest.forest;

  mark = run.budget.used;
  int n2 = ceil_div(n, 8);
  int n1 = np - n2;
  VertexSet g1, g2;
  try {
    auto part = partition_expansion(g, g.vertices(), c.d, {n1, n2}, c.seed, run.budget, 200, c.cap);
    g1 = part.parts[0];
    g2 = part.parts[1];
    run.log("expander split", "parts " + std::to_string(n1) + " + " + std::to_string(n2), mark);
  } catch (const Error& e) {
    if (dynamic_cast<const SearchBudgetExceeded*>(&e)) throw;
    run.substitute("expander split", std::string("unverified split (") + e.what() + ")");
    auto all = g.vertices().to_vector();
    for (int i = 0; i < np; ++i) (i < n1 ? g1 : g2).set(all[i]);
  }

  auto sub1 = induced_subgraph(g, g1);
  Embedding core;
  std::optional<EmbedOutcome> c1;
  try {
    c1 = run_c1(run, "stripped copy", sub1.graph, tp, delta, m, m);
  } catch (const CapExceeded& e) {
    run.substitute("stripped copy", e.what());
  } catch (const PreconditionError& e) {
    run.substitute("stripped copy", e.what());
  }
  if (c1 && !c1->embedded()) return lift_outcome(*c1, sub1);
  core = c1 ? lift_embedding(*c1->embedding, sub1)
            : lift_embedding(search_copy(run, "stripped copy", sub1.graph, tp), sub1);

  // Host of each kept tree vertex, by original id.
  std::vector<int> host(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < stripped.rest.to_original.size(); ++i) host[stripped.rest.to_original[i]] = core.map[i];
  std::vector<std::pair<int, int>> pairs;
  for (auto [a, b] : stripped.endpoint_pairs) pairs.emplace_back(host[a], host[b]);

  VertexSet free = g.vertices() - core.image();
  long need = static_cast<long>(p) * (c.r - 1);
  if (free.count() < need) throw ScaleInfeasible("path cover", "too few free vertices for the connecting paths");
  VertexSet w;
  if (g2.count() > need) {
    run.substitute("path cover", "the reserved part is larger than the paths can cover");
    w = VertexSet::from(take(g2, static_cast<int>(need)));
  } else {
    w = g2 | VertexSet::from(take(free - g2, static_cast<int>(need - g2.count())));
  }
  mark = run.budget.used;
  auto cover = cover_with_paths(g, pairs, c.r, w, run.budget);
  if (cover.unknown()) throw SearchBudgetExceeded("path cover: search ran out of budget");
  std::optional<Routing> routing;
  if (cover.found()) {
    run.log("path cover", "covered", mark);
    routing = *cover.value;
  } else {
    run.substitute("path cover", "no exact cover of the chosen set");
    mark = run.budget.used;
    LinkageRequest req{pairs, std::vector<int>(pairs.size(), c.r)};
    auto any = find_disjoint_paths(g, req, free, run.budget);
    if (any.unknown()) throw SearchBudgetExceeded("path cover: search ran out of budget");
    if (any.absent()) throw ScaleInfeasible("path cover", "no disjoint connecting paths avoid the copy");
    run.log("path cover", "paths found by search", mark);
    routing = *any.value;
  }
  for (std::size_t i = 0; i < stripped.interiors.size(); ++i)
    for (std::size_t j = 0; j < stripped.interiors[i].size(); ++j)
      host[stripped.interiors[i][j]] = routing->paths[i][j + 1];
  EmbedOutcome out;
  out.embedding = Embedding{host};
  auto why = embedding_error(g, t, *out.embedding);
  if (!why.empty()) throw LemmaViolation("expander route: " + why);
  return out;
}

// Two parts (m1 <= m2): prune, then the expander branch with m = m2.
inline EmbedOutcome two_part_route(Run& run, const Graph& g, const RootedForest& t, int delta, int m1, int m2) {
  auto pr = prune(run, "prune", g, m1, run.c.d);
  if (pr.overflow) {
    VertexSet far = g.vertices() - *pr.overflow - neighborhood(g, *pr.overflow);
    if (far.count() < m2) throw overflow_error("prune");
    EmbedOutcome out;
    out.witness = Parts{take(*pr.overflow, m1), take(far, m2)};
    return out;
  }
  auto sub = induced_subgraph(g, g.vertices() - pr.removed);
  auto r = lift_outcome(expander_route(run, sub.graph, t, delta, m2), sub);
  if (r.witness) r.witness = trim_parts(*r.witness, {m1, m2});
  return r;
}

inline std::vector<int> local_ids(const InducedSubgraph& sub, int parent_order) {
  std::vector<int> out(static_cast<std::size_t>(parent_order), -1);
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) out[sub.to_parent[i]] = static_cast<int>(i);
  return out;
}

// Copy of the rooted forest f in g with roots at `root_hosts`, by the
// extension procedure; falls back to its heuristic mode when the size
// hypotheses fail.
inline Embedding rooted_copy(Run& run, const std::string& stage, const Graph& g, const std::vector<int>& root_hosts,
                             const RootedForest& f, const FPParams& params) {
  std::uint64_t mark = run.budget.used;
  FPOptions opt = run.c.fp;
  try {
    try {
      auto r = fp_embed_forest(g, root_hosts, f, params, opt, run.budget);
      if (r.mode_used == FPMode::heuristic) run.certified = false;
      run.log(stage, std::string("embedded (") + to_string(r.mode_used) + ")", mark);
      return r.embedding;
    } catch (const HypothesisViolated& e) {
      run.substitute(stage, std::string("hypothesis fails (") + e.what() + ")");
    } catch (const CapExceeded& e) {
      run.substitute(stage, e.what());
    }
    opt.mode = FPMode::heuristic;
    mark = run.budget.used;
    auto r = fp_embed_forest(g, root_hosts, f, params, opt, run.budget);
    run.log(stage, "embedded (heuristic)", mark);
    return r.embedding;
  } catch (const NotEmbeddable& e) {
    throw ScaleInfeasible(stage, std::string("no copy at the chosen roots (") + e.what() + ")");
  }
}

// K^k_m-style witness: `parts` plus one part from each of `pools`, all of
// size m, trimmed to the requested sizes.
inline std::optional<Parts> witness_with(const Graph& g, Parts parts, const std::vector<VertexSet>& pools, int m,
                                         const std::vector<int>& sizes) {
  auto all = extend_parts(g, std::move(parts), pools, std::vector<int>(pools.size(), m));
  if (!all) return std::nullopt;
  return trim_parts(*all, sizes);
}

inline EmbedOutcome near_extremal(Run& run, const Graph& g, const std::vector<VertexSet>& h, const RootedForest& t,
                                  int delta, const std::vector<int>& sizes) {
  int k = static_cast<int>(sizes.size());
  int m = sizes.back();
  int n = t.size();
  int parts = k - 1;

  // Parts with robust local expansion.
  std::vector<VertexSet> hp;
  for (int i = 0; i < parts; ++i) {
    std::string stage = "part " + std::to_string(i + 1) + " prune";
    auto sub = induced_subgraph(g, h[i]);
    auto pr = prune(run, stage, sub.graph, m, Rational(5L * std::max(delta, 1)));
    if (pr.overflow) {
      VertexSet grown = sub.lift(*pr.overflow);
      std::vector<VertexSet> pools{h[i] - grown - neighborhood(g, grown)};
      for (int j = 0; j < parts; ++j)
        if (j != i) pools.push_back(h[j]);
      auto w = witness_with(g, {take(grown, m)}, pools, m, sizes);
      if (!w) throw overflow_error(stage);
      EmbedOutcome out;
      out.witness = *w;
      return out;
    }
    hp.push_back(h[i] - sub.lift(pr.removed));
  }
  VertexSet covered;
  for (const auto& p : hp) covered |= p;
  VertexSet z = g.vertices() - covered;

  // Branch 1: a vertex with Δ neighbours in two parts carries the separator.
  int bv = -1, ba = -1, bb = -1;
  z.for_each([&](int v) {
    if (bv >= 0) return;
    std::vector<int> rich;
    for (int i = 0; i < parts; ++i)
      if ((g.neighbors(v) & hp[i]).count() >= std::max(delta, 1)) rich.push_back(i);
    if (rich.size() >= 2) {
      bv = v;
      ba = rich[0];
      bb = rich[1];
    }
  });
  if (bv >= 0 && n >= 2) {
    std::uint64_t mark = run.budget.used;
    auto cs = centroid_split(t);
    run.log("separator", "vertex " + std::to_string(bv) + " joins parts " + std::to_string(ba + 1) + " and " +
                             std::to_string(bb + 1),
            mark);
    std::vector<int> host(static_cast<std::size_t>(n), -1);
    host[cs.u] = bv;
    auto side = [&](const std::vector<int>& verts, int part, const std::string& stage) {
      if (verts.empty()) return;
      std::vector<char> keep(static_cast<std::size_t>(n), 0);
      for (int x : verts) keep[x] = 1;
      auto sf = induced_subforest(t, keep, t.neighbors(cs.u));
      auto sub = induced_subgraph(g, hp[part]);
      auto loc = local_ids(sub, g.order());
      auto cand = (g.neighbors(bv) & hp[part]).to_vector();
      std::vector<int> roots;
      for (std::size_t i = 0; i < sf.forest.roots().size(); ++i) roots.push_back(loc[cand[i]]);
      int big_m = std::max(sf.forest.size(), 2 * n / 3);
      auto e = rooted_copy(run, stage, sub.graph, roots, sf.forest, {std::max(delta, 1), m, big_m});
      for (std::size_t i = 0; i < sf.to_original.size(); ++i) host[sf.to_original[i]] = sub.to_parent[e.map[i]];
    };
    side(cs.a, ba, "first side");
    side(cs.b, bb, "second side");
    EmbedOutcome out;
    out.embedding = Embedding{host};
    auto why = embedding_error(g, t, *out.embedding);
    if (!why.empty()) throw LemmaViolation("near-extremal separator branch: " + why);
    return out;
  }

  // Branch 2: every leftover vertex leans towards one part.
  std::vector<VertexSet> gi = hp;
  z.for_each([&](int v) {
    int best = 0;
    int best_deg = -1;
    for (int i = 0; i < parts; ++i) {
      int d = (g.neighbors(v) & hp[i]).count();
      if (d > best_deg) {
        best = i;
        best_deg = d;
      }
    }
    gi[best].set(v);
  });
  VertexSet removed;
  std::vector<VertexSet> gpi;
  for (int i = 0; i < parts; ++i) {
    std::string stage = "group " + std::to_string(i + 1) + " prune";
    auto sub = induced_subgraph(g, gi[i]);
    auto pr = prune(run, stage, sub.graph, m, run.c.d);
    if (pr.overflow) {
      VertexSet grown = sub.lift(*pr.overflow);
      std::vector<VertexSet> pools{gi[i] - grown - neighborhood(g, grown)};
      for (int j = 0; j < parts; ++j)
        if (j != i) pools.push_back(hp[j]);
      auto w = witness_with(g, {take(grown, m)}, pools, m, sizes);
      if (!w) throw overflow_error(stage);
      EmbedOutcome out;
      out.witness = *w;
      return out;
    }
    VertexSet zi = sub.lift(pr.removed);
    removed |= zi;
    gpi.push_back(gi[i] - zi);
  }
  for (int i = 0; i < parts; ++i) {
    if (gpi[i].count() < n) continue;
    std::uint64_t mark = run.budget.used;
    run.log("group " + std::to_string(i + 1), "large enough for the two-part argument", mark);
    auto sub = induced_subgraph(g, gpi[i]);
    auto r = lift_outcome(expander_route(run, sub.graph, t, delta, m), sub);
    if (r.embedded()) return r;
    std::vector<VertexSet> pools;
    for (int j = 0; j < parts; ++j)
      if (j != i) pools.push_back(hp[j]);
    auto w = witness_with(g, *r.witness, pools, m, sizes);
    if (!w) throw ScaleInfeasible("group " + std::to_string(i + 1), "two-part witness does not extend");
    r.witness = *w;
    return r;
  }
  std::uint64_t mark = run.budget.used;
  if (removed.count() < sizes[0])
    throw ScaleInfeasible("witness assembly", "the removed sets hold fewer than m_1 vertices");
  auto x = take(removed, sizes[0]);
  std::vector<VertexSet> pools;
  for (int j = 0; j < parts; ++j) pools.push_back(hp[j] - removed);
  auto w = extend_parts(g, {x}, pools, std::vector<int>(sizes.begin() + 1, sizes.end()));
  if (!w) throw ScaleInfeasible("witness assembly", "a part has too few vertices outside N(X)");
  run.log("witness assembly", "witness", mark, *w);
  EmbedOutcome out;
  out.witness = *w;
  return out;
}

// A ⊆ Z of at most m-1 vertices with |N(A) ∩ X| < |A|, grown greedily.
inline VertexSet z_prune(Run& run, const Graph& g, const VertexSet& z, const VertexSet& x, int m) {
  if (m > run.c.cap) throw ScaleInfeasible("z prune", "m exceeds the enumeration cap");
  std::uint64_t mark = run.budget.used;
  VertexSet a;
  while (true) {
    std::vector<int> found;
    auto end = first_subset_by_size(z - a, m, run.budget, [&](const std::vector<int>& s) {
      VertexSet as = a | VertexSet::from(s);
      if ((neighborhood(g, as) & x).count() < as.count()) found = s;
      return !found.empty();
    });
    if (end == EnumerationEnd::budget) throw SearchBudgetExceeded("z prune: budget exhausted");
    if (found.empty()) break;
    a |= VertexSet::from(found);
    if (a.count() >= m) throw overflow_error("z prune");
  }
  run.log("z prune", "removed " + std::to_string(a.count()), mark);
  return z - a;
}

inline EmbedOutcome via_linkage(Run& run, const Graph& g, const VertexSet& z, const LinkedSystem& sys,
                                const RootedForest& t, const LinkageParams& lp) {
  const VertexSet& x = sys.x;
  const VertexSet& w = sys.w;
  int n = t.size();
  if (!t.is_tree()) throw PreconditionError("embed_via_linkage: input must be a tree");
  if (z.intersects(x) || z.intersects(w) || x.intersects(w))
    throw PreconditionError("embed_via_linkage: Z, X and W must be disjoint");
  if (lp.r < 3 || lp.y < 1) throw PreconditionError("embed_via_linkage: needs r >= 3 and y >= 1");
  int len = lp.r - 2 * lp.y - 4;
  if (len < 0) throw PreconditionError("embed_via_linkage: needs r >= 2y + 4");
  int p = lp.paths >= 0 ? lp.paths : ceil_div(n, 4L * lp.r);
  auto bare = harvest_bare_paths(t, lp.r);
  if (static_cast<int>(bare.paths.size()) < std::max(p, 1))
    throw PreconditionError("embed_via_linkage: tree has too few bare paths of length r");
  if (p > 0 && (lp.y < sys.spec.d_min || lp.y > sys.spec.d_max))
    throw PreconditionError("embed_via_linkage: y outside the system's length range");
  if (2 * p > sys.spec.s) throw PreconditionError("embed_via_linkage: system links fewer than 2p pairs");
  int delta = std::max({lp.delta, t.actual_max_degree(), 1});

  if (p == 0) {
    // Nothing to match or route.
    auto sub = induced_subgraph(g, z);
    return lift_outcome(run_c2(run, "whole tree", sub.graph, t, delta, lp.k, lp.m), sub);
  }
  VertexSet zp = z_prune(run, g, z, x, lp.m);
  auto subz = induced_subgraph(g, zp);

  bare.paths.resize(static_cast<std::size_t>(p));
  auto stripped = strip_bare_path_interiors(t, bare);
  std::vector<std::pair<int, int>> pe;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < len; ++j) pe.emplace_back(i * (len + 1) + j, i * (len + 1) + j + 1);
  RootedForest fa = RootedForest::from_edges(p * (len + 1), pe, 2);
  const RootedForest& fb = stripped.rest.forest;
  RootedForest both = forest_union(fa, fb);

  Embedding e;
  std::optional<EmbedOutcome> c3;
  try {
    c3 = embed_two_trees(subz.graph, connect_forest(fa), connect_forest(fb), std::max(delta, 2), lp.k, lp.m,
                         run.lemma_options(), run.budget);
    run.absorb("forests", c3->trace);
    if (c3->embedded() && c3->fp_mode == FPMode::heuristic) run.certified = false;
  } catch (const PreconditionError& err) {
    run.substitute("forests", err.what());
  } catch (const CapExceeded& err) {
    run.substitute("forests", err.what());
  }
  if (c3 && !c3->embedded()) return lift_outcome(*c3, subz);
  e = lift_embedding(c3 ? *c3->embedding : search_copy(run, "forests", subz.graph, both), subz);

  int off = fa.size();
  std::vector<int> bl(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < stripped.rest.to_original.size(); ++i) bl[stripped.rest.to_original[i]] = static_cast<int>(i);
  // Connections in order: (a_i, start of path i), (end of path i, b_i).
  std::vector<std::pair<int, int>> conn;
  for (int i = 0; i < p; ++i) {
    auto [a, b] = stripped.endpoint_pairs[i];
    conn.emplace_back(e.map[off + bl[a]], e.map[i * (len + 1)]);
    conn.emplace_back(e.map[i * (len + 1) + len], e.map[off + bl[b]]);
  }

  std::uint64_t mark = run.budget.used;
  DemandedBipartite db;
  for (auto [s, f] : conn) {
    ++db.demands[s];
    ++db.demands[f];
  }
  for (auto [v, l] : db.demands) {
    db.a.push_back(v);
    (g.neighbors(v) & x).for_each([&](int xv) { db.edges.emplace_back(v, xv); });
  }
  db.b = x.to_vector();
  auto hall = hall_extension_forest(db);
  if (!hall.forest) {
    run.log("endpoint matching", "deficient set", mark, {hall.deficiency});
    throw ScaleInfeasible("endpoint matching", "endpoints cannot be matched into X");
  }
  run.log("endpoint matching", "matched " + std::to_string(2 * conn.size()) + " endpoints", mark);
  std::map<int, std::size_t> next;
  auto partner = [&](int v) { return hall.assignment.at(v)[next[v]++]; };
  LinkageRequest req;
  for (auto [s, f] : conn) {
    int xs = partner(s);
    int xf = partner(f);
    req.pairs.emplace_back(xs, xf);
  }
  req.lengths.assign(req.pairs.size(), lp.y);

  mark = run.budget.used;
  Routing routing;
  try {
    routing = sys.route(req);
  } catch (const NotLinked& err) {
    throw ScaleInfeasible("routing", err.what());
  }
  auto bad = routing_error(g, req, w, routing);
  if (!bad.empty()) throw LemmaViolation("embed_via_linkage: router returned " + bad);
  run.log("routing", "routed " + std::to_string(req.pairs.size()) + " pairs", mark);

  std::vector<int> host(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < stripped.rest.to_original.size(); ++i)
    host[stripped.rest.to_original[i]] = e.map[off + static_cast<int>(i)];
  for (int i = 0; i < p; ++i) {
    std::vector<int> seq = routing.paths[2 * i];
    for (int j = 0; j <= len; ++j) seq.push_back(e.map[i * (len + 1) + j]);
    const auto& back = routing.paths[2 * i + 1];
    seq.insert(seq.end(), back.begin(), back.end());
    const auto& inner = stripped.interiors[i];
    if (seq.size() != inner.size()) throw LemmaViolation("embed_via_linkage: connection length mismatch");
    for (std::size_t j = 0; j < inner.size(); ++j) host[inner[j]] = seq[j];
  }
  EmbedOutcome out;
  out.embedding = Embedding{host};
  auto why = embedding_error(g, t, *out.embedding);
  if (!why.empty()) throw LemmaViolation("embed_via_linkage: " + why);
  return out;
}

// Connected components of the auxiliary graph on [k-1], largest first.
inline std::vector<std::vector<int>> components(int k, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> comp(static_cast<std::size_t>(k), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < k; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> c{s};
    comp[s] = static_cast<int>(out.size());
    for (std::size_t h = 0; h < c.size(); ++h)
      for (auto [a, b] : edges) {
        int o = a == c[h] ? b : b == c[h] ? a : -1;
        if (o >= 0 && comp[o] < 0) {
          comp[o] = comp[s];
          c.push_back(o);
        }
      }
    std::sort(c.begin(), c.end());
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

inline EmbedOutcome many_part_route(Run& run, const Graph& g, const RootedForest& t, int delta,
                                    const std::vector<int>& sizes) {
  const auto& c = run.c;
  int k = static_cast<int>(sizes.size());
  int m = sizes.back();
  int n = t.size();
  long c2_need = (k - 2) * (n + 13L * std::max(delta, 1) * m) + m;

  // K^{k-1}_q in the complement, or a copy.
  auto first = run_c2(run, "find Q sets", g, t, delta, k - 1, c.q);
  if (first.embedded()) return first;
  const Parts& q = *first.witness;

  std::vector<VertexSet> qp, wp, mi;
  for (int i = 0; i < k - 1; ++i) {
    std::string stage = "Q" + std::to_string(i + 1) + " prune";
    VertexSet qi = VertexSet::from(q[i]);
    VertexSet wi = VertexSet::from(std::vector<int>(q[i].begin(), q[i].begin() + std::min<std::size_t>(c.w, q[i].size())));
    auto sub = induced_subgraph(g, qi);
    auto pr = prune(run, stage, sub.graph, m, Rational(c.y), sub.restrict(wi));
    if (pr.overflow) throw overflow_error(stage);
    VertexSet xi = sub.lift(pr.removed);
    qp.push_back(qi - xi);
    wp.push_back(wi - xi);
    mi.push_back(qp.back() - wp.back());
    if (mi.back().count() == 0) throw ScaleInfeasible(stage, "W_i fills Q_i, so M_i is empty");
  }
  VertexSet r1;
  for (const auto& s : qp) r1 |= s;
  std::uint64_t mark = run.budget.used;
  auto fam = collect_short_path_families(g, mi, r1, c.family_cap);
  VertexSet r2;
  std::vector<std::pair<int, int>> f_edges;
  for (const auto& [key, pf] : fam) {
    for (const auto& path : pf.paths)
      for (int v : path) r2.set(v);
    if (static_cast<int>(pf.paths.size()) >= c.family_cap) f_edges.push_back(key);
  }
  run.log("short paths", std::to_string(f_edges.size()) + " full families", mark);
  VertexSet rr = r1 | r2;
  std::vector<VertexSet> mp;
  for (const auto& s : mi) {
    mp.push_back(s - r2);
    if (mp.back().count() < m) throw ScaleInfeasible("short paths", "the paths use up an M set");
  }

  auto with_m_parts = [&](Parts base, const std::vector<int>& idx, const std::string& stage) {
    std::vector<VertexSet> pools;
    for (int i : idx) pools.push_back(mp[i]);
    auto w = witness_with(g, std::move(base), pools, m, sizes);
    if (!w) throw ScaleInfeasible(stage, "M' sets too small to complete the witness");
    EmbedOutcome out;
    out.witness = *w;
    return out;
  };

  if (!f_edges.empty()) {
    auto comp = components(k - 1, f_edges).front();
    int kp = static_cast<int>(comp.size()) + 1;
    VertexSet cut;
    for (int i : comp) cut |= mp[i] | neighborhood(g, mp[i]);
    VertexSet gp = g.vertices() - cut;
    mark = run.budget.used;
    run.log("case 1", "component of " + std::to_string(comp.size()) + " parts", mark);
    if (gp.count() >= (k - kp) * (n + 13L * std::max(delta, 1) * m) + m) {
      auto sub = induced_subgraph(g, gp);
      auto r = lift_outcome(run_c2(run, "case 1.1", sub.graph, t, delta, k - kp + 1, m), sub);
      if (r.embedded()) return r;
      return with_m_parts(*r.witness, comp, "case 1.1");
    }
    VertexSet z, x;
    for (int i : comp) {
      z |= neighborhood(g, mp[i]);
      x |= mp[i];
    }
    z = z - rr;
    int s = ceil_div(n, 2L * c.r);
    LinkedSpec spec{s, std::max(1, c.y / k - 3), c.y};
    std::vector<LinkedSystem> systems;
    std::map<int, int> index;
    for (int i : comp) {
      index[i] = static_cast<int>(systems.size());
      systems.push_back(solver_system(g, mp[i], wp[i], spec));
    }
    std::vector<std::pair<int, int>> local_edges;
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> families;
    for (auto [a, b] : f_edges)
      if (index.count(a) && index.count(b)) {
        local_edges.emplace_back(index[a], index[b]);
        families[{index[a], index[b]}] = fam.at({a, b}).paths;
      }
    mark = run.budget.used;
    JoinedSystem joined;
    try {
      joined = join_many(g, systems, local_edges, families);
    } catch (const PreconditionError& e) {
      throw ScaleInfeasible("join", e.what());
    }
    if (joined.system.spec.d_min > c.y) throw ScaleInfeasible("join", "joined system cannot route paths of length y");
    run.log("join", "joined " + std::to_string(systems.size()) + " systems", mark);
    return via_linkage(run, g, z, joined.system, t, {c.r, c.y, c.u, m, kp, delta, -1});
  }

  std::vector<VertexSet> h;
  for (int i = 0; i < k - 1; ++i) {
    VertexSet near = mp[i] | neighborhood(g, mp[i]);
    VertexSet rest = g.vertices() - near;
    if (rest.count() >= c2_need) {
      auto sub = induced_subgraph(g, rest);
      auto r = lift_outcome(run_c2(run, "case 2 part " + std::to_string(i + 1), sub.graph, t, delta, k - 1, m), sub);
      if (r.embedded()) return r;
      return with_m_parts(*r.witness, {i}, "case 2");
    }
    h.push_back(neighborhood(g, mp[i]) - rr);
  }
  mark = run.budget.used;
  run.log("case 2", "near-extremal parts", mark);
  return near_extremal(run, g, h, t, delta, sizes);
}

inline PipelineResult finish(Run& run, const Graph& g, const RootedForest& t, const std::vector<int>& sizes,
                             const std::function<EmbedOutcome()>& body) {
  PipelineResult res;
  res.constants = run.c;
  try {
    auto o = body();
    if (o.embedded()) {
      auto why = embedding_error(g, t, *o.embedding);
      if (!why.empty()) throw LemmaViolation("pipeline: " + why);
      res.status = PipelineStatus::embedded;
      res.embedding = o.embedding;
    } else {
      check_witness(g, *o.witness, sizes, "pipeline");
      res.status = PipelineStatus::witness;
      res.witness = o.witness;
    }
    res.stage = run.trace.empty() ? "" : run.trace.back().stage;
  } catch (const ScaleInfeasible& e) {
    res.status = PipelineStatus::scale_infeasible;
    res.stage = e.stage();
    res.message = e.what();
    run.trace.push_back({e.stage(), "scale infeasible", {}, 0});
  } catch (const SearchBudgetExceeded& e) {
    res.status = PipelineStatus::budget;
    res.message = e.what();
    res.stage = run.trace.empty() ? "" : run.trace.back().stage;
  }
  res.certified = run.certified;
  res.trace = run.trace;
  return res;
}

inline void check_parts(const Graph& g, const std::vector<VertexSet>& h) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!h[i].subset_of(g.vertices())) throw PreconditionError("near_extremal_embed: part outside the host");
    for (std::size_t j = i + 1; j < h.size(); ++j) {
      if (h[i].intersects(h[j])) throw PreconditionError("near_extremal_embed: parts must be disjoint");
      if (neighborhood(g, h[i]).intersects(h[j]))
        throw PreconditionError("near_extremal_embed: parts must be pairwise non-adjacent");
    }
  }
}

inline std::vector<int> sorted_sizes(std::vector<int> sizes) {
  if (sizes.empty()) throw PreconditionError("part sizes must not be empty");
  for (int s : sizes)
    if (s < 1) throw PreconditionError("part sizes must be positive");
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace detail

// Copy of t, or K_{sizes} in the complement, when g has k-1 disjoint,
// pairwise non-adjacent large parts h (k = |sizes|).
inline PipelineResult near_extremal_embed(const Graph& g, const std::vector<VertexSet>& h, const RootedForest& t,
                                          int delta, std::vector<int> sizes, const PipelineConstants& constants,
                                          Budget& budget) {
  sizes = detail::sorted_sizes(std::move(sizes));
  if (h.size() + 1 != sizes.size()) throw PreconditionError("near_extremal_embed: needs one part fewer than sizes");
  if (!t.is_tree()) throw PreconditionError("near_extremal_embed: input must be a tree");
  if (t.actual_max_degree() > delta) throw PreconditionError("near_extremal_embed: tree degree exceeds Δ");
  detail::check_parts(g, h);
  auto c = resolve_constants(constants, t.size(), static_cast<int>(sizes.size()));
  detail::Run run{c, budget, {}, true};
  return detail::finish(run, g, t, sizes, [&] { return detail::near_extremal(run, g, h, t, delta, sizes); });
}

// Copy of t inside Z ∪ X ∪ W: the tree minus some bare paths and a set of
// shorter paths go into Z, their ends are matched into X, and the linked
// system (X, W) closes the gaps.
inline PipelineResult embed_via_linkage(const Graph& g, const VertexSet& z, const LinkedSystem& sys,
                                        const RootedForest& t, const LinkageParams& params,
                                        const PipelineConstants& constants, Budget& budget) {
  auto c = resolve_constants(constants, t.size(), params.k);
  detail::Run run{c, budget, {}, true};
  std::vector<int> sizes(static_cast<std::size_t>(params.k), params.m);
  return detail::finish(run, g, t, sizes, [&] { return detail::via_linkage(run, g, z, sys, t, params); });
}

// Copy of t in g or K_{sizes} in the complement of g, following the
// goodness argument stage by stage.
inline PipelineResult goodness_pipeline(const Graph& g, const RootedForest& t, int delta, std::vector<int> sizes,
                                        const PipelineConstants& constants, Budget& budget) {
  sizes = detail::sorted_sizes(std::move(sizes));
  if (!t.is_tree()) throw PreconditionError("goodness_pipeline: input must be a tree");
  if (t.actual_max_degree() > delta) throw PreconditionError("goodness_pipeline: tree degree exceeds Δ");
  int n = t.size();
  int k = static_cast<int>(sizes.size());
  int m = sizes.back();
  auto c = resolve_constants(constants, n, k);
  detail::Run run{c, budget, {}, true};
  return detail::finish(run, g, t, sizes, [&]() -> EmbedOutcome {
    long threshold = (k - 1) * static_cast<long>(n - 1) + sizes[0];
    run.log("setup", "host " + std::to_string(g.order()) + ", threshold " + std::to_string(threshold), run.budget.used);
    EmbedOutcome out;
    if (k == 1) {
      if (g.order() < sizes[0]) throw ScaleInfeasible("one part", "host smaller than m_1");
      out.witness = Parts{detail::take(g.vertices(), sizes[0])};
      return out;
    }
    if (n <= 2) {
      run.substitute("tiny tree", "trees on at most two vertices are searched directly");
      out.embedding = detail::search_copy(run, "tiny tree", g, t);
      return out;
    }
    std::uint64_t mark = run.budget.used;
    if (static_cast<long>(leaves(t).size()) >= 13L * std::max(delta, 1) * m + 1) {
      run.log("dichotomy", "many leaves", mark);
      try {
        auto r = embed_many_leaves(g, t, delta, sizes, run.lemma_options(), run.budget);
        run.absorb("many leaves", r.trace);
        if (r.embedded() && r.fp_mode == FPMode::heuristic) run.certified = false;
        return r;
      } catch (const PreconditionError& e) {
        throw ScaleInfeasible("many leaves", e.what());
      } catch (const CapExceeded& e) {
        throw ScaleInfeasible("many leaves", e.what());
      }
    }
    auto lp = leaves_or_bare_paths(t, c.r, BranchPreference::paths_first);
    if (lp.branch == Branch::leaves)
      throw ScaleInfeasible("dichotomy", "n/4r leaves exist but fewer than 13Δm_k + 1, and too few bare paths");
    run.log("dichotomy", std::to_string(lp.paths.paths.size()) + " bare paths of length " + std::to_string(c.r), mark);
    if (k == 2) return detail::two_part_route(run, g, t, delta, sizes[0], sizes[1]);
    return detail::many_part_route(run, g, t, delta, sizes);
  });
}

}  // namespace rgood
