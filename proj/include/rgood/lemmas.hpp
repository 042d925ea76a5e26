#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "expander.hpp"
#include "fp_embed.hpp"
#include "graph.hpp"
#include "matching.hpp"
#include "subgraph.hpp"
#include "subsets.hpp"
#include "tree.hpp"

namespace rgood {

// One step of a lemma pipeline.  `nodes` is the search work spent in the
// step, counted in budget ticks so that traces are reproducible.
struct StageRecord {
  std::string stage;
  std::string outcome;
  Parts witness;
  std::uint64_t nodes = 0;
};

using Trace = std::vector<StageRecord>;

// Either a copy of the pattern or parts of a complete multipartite graph in
// the complement of the host (no host edge between different parts).
struct EmbedOutcome {
  std::optional<Embedding> embedding;
  std::optional<Parts> witness;
  bool e2_verified = false;
  FPMode fp_mode = FPMode::certified;
  Trace trace;

  bool embedded() const { return embedding.has_value(); }
};

struct LemmaOptions {
  FPOptions fp;
  int cap = kDefaultEnumerationCap;
};

// A tree on the same labels containing f, rooted at f's first root.
// Components are chained leaf to leaf, so degrees grow to at most 2.
inline RootedForest connect_forest(const RootedForest& f) {
  if (f.is_tree()) return f;
  auto edges = f.edges();
  int prev_out = -1;
  for (int r : f.roots()) {
    auto comp = f.tree_of_root(r);
    std::vector<int> ends;
    for (int v : comp)
      if (f.degree(v) <= 1) ends.push_back(v);
    int in = ends.front();
    int out = ends.size() > 1 ? ends[1] : ends.front();
    if (prev_out >= 0) edges.emplace_back(prev_out, in);
    prev_out = out;
  }
  int deg = std::max(f.declared_max_degree(), 2);
  return RootedForest::from_edges(f.size(), edges, deg, {f.roots().front()});
}

// Empty when |N(S) minus the copy| >= Δ|S| for all S inside the copy with |S| <= m.
inline std::vector<int> copy_expansion_violation(const Graph& g, const VertexSet& image, int delta, int m,
                                                 Budget& budget) {
  std::vector<int> bad;
  auto end = walk_subsets(image, m, budget, [&](const std::vector<int>& c) {
    long free = (neighborhood(g, VertexSet::from(c)) - image).count();
    if (free < static_cast<long>(delta) * static_cast<long>(c.size())) {
      bad = c;
      return Visit::stop;
    }
    return Visit::descend;
  });
  if (end == EnumerationEnd::budget) throw SearchBudgetExceeded("copy expansion check budget");
  return bad;
}

namespace detail {

inline Embedding lift_embedding(const Embedding& e, const InducedSubgraph& sub) {
  Embedding out;
  out.map = sub.lift(e.map);
  return out;
}

inline Parts lift_parts(const Parts& parts, const InducedSubgraph& sub) {
  Parts out;
  for (const auto& p : parts) out.push_back(sub.lift(p));
  return out;
}

inline std::vector<int> take(const VertexSet& s, int k) {
  std::vector<int> out;
  for (int v = s.first(); v >= 0 && static_cast<int>(out.size()) < k; v = s.next(v)) out.push_back(v);
  return out;
}

// K_{|a|,m2} in the complement: `a` against vertices outside a ∪ N(a).
inline std::optional<Parts> bipartite_witness_from(const Graph& g, const std::vector<int>& a, int m2) {
  VertexSet as = VertexSet::from(a);
  VertexSet far = g.vertices() - as - neighborhood(g, as);
  if (far.count() < m2) return std::nullopt;
  return Parts{a, take(far, m2)};
}

inline void check_witness(const Graph& g, const Parts& parts, const std::vector<int>& sizes, const char* where) {
  if (!valid_multipartite(complement(g), parts, sizes))
    throw LemmaViolation(std::string(where) + ": extracted witness does not check out");
}

}  // namespace detail

// Copy of the forest f in g, or K_{m1,m2} in the complement of g.  Small
// non-expanding sets are pruned first; the rest is embedded by the
// extension procedure.  A certified copy also has |N(S) minus the copy| >= Δ|S|
// for all S inside it with |S| <= m1.
inline EmbedOutcome embed_avoiding_bipartite(const Graph& g, const RootedForest& f, int delta, int m1, int m2,
                                             const LemmaOptions& opt, Budget& budget) {
  if (m1 < 1 || m2 < 1) throw PreconditionError("embed_avoiding_bipartite: part sizes must be positive");
  if (f.actual_max_degree() > delta) throw PreconditionError("embed_avoiding_bipartite: forest degree exceeds Δ");
  RootedForest tree = connect_forest(f);
  int d = std::max({delta, tree.actual_max_degree(), 1});
  if (g.order() < f.size() + 13L * d * m1 + m2)
    throw PreconditionError("embed_avoiding_bipartite: need |g| >= |f| + 13Δm1 + m2");

  EmbedOutcome out;
  std::uint64_t mark = budget.used;
  VertexSet pruned;
  try {
    pruned = maximal_nonexpanding_set(g, m1, Rational(4L * d), Threshold::at_most, std::nullopt, budget, opt.cap);
  } catch (const HypothesisViolated& e) {
    // |N(grown)| <= 4Δ|grown| <= 8Δm1 leaves at least m2 vertices far from it.
    std::vector<int> a(e.witness().begin(), e.witness().begin() + m1);
    VertexSet grown = VertexSet::from(e.witness());
    VertexSet far = g.vertices() - grown - neighborhood(g, grown);
    if (far.count() < m2) throw LemmaViolation("embed_avoiding_bipartite: pruned set has too many neighbours");
    out.witness = Parts{a, detail::take(far, m2)};
    detail::check_witness(g, *out.witness, {m1, m2}, "embed_avoiding_bipartite");
    out.trace.push_back({"prune", "witness", *out.witness, budget.used - mark});
    return out;
  }
  out.trace.push_back({"prune", "removed " + std::to_string(pruned.count()), {}, budget.used - mark});

  mark = budget.used;
  auto sub = induced_subgraph(g, g.vertices() - pruned);
  try {
    auto r = fp_embed_forest(sub.graph, {0}, tree, {d, m1, tree.size()}, opt.fp, budget);
    out.embedding = detail::lift_embedding(r.embedding, sub);
    out.e2_verified = r.e2_verified;
    out.fp_mode = r.mode_used;
    out.trace.push_back({"extend", std::string("embedded (") + to_string(r.mode_used) + ")", {}, budget.used - mark});
  } catch (const HypothesisViolated& e) {
    auto s = sub.lift(e.witness());
    if (static_cast<int>(s.size()) < m1) throw LemmaViolation("embed_avoiding_bipartite: residual graph fails to expand");
    s.resize(static_cast<std::size_t>(m1));
    auto w = detail::bipartite_witness_from(g, s, m2);
    if (!w) throw LemmaViolation("embed_avoiding_bipartite: small-Γ set has too many neighbours");
    out.witness = *w;
    detail::check_witness(g, *out.witness, {m1, m2}, "embed_avoiding_bipartite");
    out.trace.push_back({"extend", "witness", *out.witness, budget.used - mark});
    return out;
  }
  auto why = embedding_error(g, f, *out.embedding);
  if (!why.empty()) throw LemmaViolation("embed_avoiding_bipartite: " + why);
  return out;
}

// Copy of the tree t in g, or K^k_m in the complement (k parts of size m).
// Each level tries the bipartite version and descends into the far side of
// its witness.
inline EmbedOutcome embed_avoiding_multipartite(const Graph& g, const RootedForest& t, int delta, int k, int m,
                                                const LemmaOptions& opt, Budget& budget) {
  if (k < 1 || m < 1) throw PreconditionError("embed_avoiding_multipartite: needs k, m >= 1");
  long need = (k - 1) * (t.size() + 13L * std::max(delta, 1) * m) + m;
  if (g.order() < need) throw PreconditionError("embed_avoiding_multipartite: need |g| >= (k-1)(|t| + 13Δm) + m");

  EmbedOutcome out;
  VertexSet host = g.vertices();
  Parts found;  // parts collected on the way down
  for (int level = k; level >= 1; --level) {
    auto sub = induced_subgraph(g, host);
    if (level == 1) {
      found.push_back(detail::take(host, m));
      out.trace.push_back({"level 1", "trivial part", {found.back()}, 0});
      break;
    }
    long m2 = (level - 2) * (t.size() + 13L * std::max(delta, 1) * m) + m;
    auto r = embed_avoiding_bipartite(sub.graph, t, delta, m, static_cast<int>(m2), opt, budget);
    std::uint64_t nodes = 0;
    for (const auto& s : r.trace) nodes += s.nodes;
    if (r.embedded()) {
      out.embedding = detail::lift_embedding(*r.embedding, sub);
      out.e2_verified = r.e2_verified;
      out.fp_mode = r.fp_mode;
      out.trace.push_back({"level " + std::to_string(level), "embedded", {}, nodes});
      return out;
    }
    auto parts = detail::lift_parts(*r.witness, sub);
    out.trace.push_back({"level " + std::to_string(level), "descend", parts, nodes});
    found.push_back(parts[0]);
    host = VertexSet::from(parts[1]);
  }
  out.witness = found;
  detail::check_witness(g, found, std::vector<int>(static_cast<std::size_t>(k), m), "embed_avoiding_multipartite");
  return out;
}

// Copy of the forest t_a ∪ t_b (t_b's labels shifted by |t_a|) or K^k_m in
// the complement.  The first tree is placed, then the second avoids it.
inline EmbedOutcome embed_two_trees(const Graph& g, const RootedForest& ta, const RootedForest& tb, int delta, int k,
                                    int m, const LemmaOptions& opt, Budget& budget) {
  if (k < 3) throw PreconditionError("embed_two_trees: needs k >= 3");
  if (ta.size() > tb.size()) throw PreconditionError("embed_two_trees: needs |t_a| <= |t_b|");
  if (!ta.is_tree() || !tb.is_tree()) throw PreconditionError("embed_two_trees: inputs must be trees");
  long need = ta.size() + (k - 1) * (tb.size() + 13L * std::max(delta, 1) * m) + m;
  if (g.order() < need) throw PreconditionError("embed_two_trees: need |g| >= |t_a| + (k-1)(|t_b| + 13Δm) + m");

  EmbedOutcome out;
  auto first = embed_avoiding_multipartite(g, ta, delta, k, m, opt, budget);
  for (auto& s : first.trace) out.trace.push_back({"t_a " + s.stage, s.outcome, s.witness, s.nodes});
  if (!first.embedded()) {
    out.witness = first.witness;
    return out;
  }
  auto sub = induced_subgraph(g, g.vertices() - first.embedding->image());
  auto second = embed_avoiding_multipartite(sub.graph, tb, delta, k, m, opt, budget);
  for (auto& s : second.trace)
    out.trace.push_back({"t_b " + s.stage, s.outcome, detail::lift_parts(s.witness, sub), s.nodes});
  if (!second.embedded()) {
    out.witness = detail::lift_parts(*second.witness, sub);
    detail::check_witness(g, *out.witness, std::vector<int>(static_cast<std::size_t>(k), m), "embed_two_trees");
    return out;
  }
  Embedding both = *first.embedding;
  for (int v : sub.lift(second.embedding->map)) both.map.push_back(v);
  out.embedding = both;
  out.e2_verified = first.e2_verified && second.e2_verified;
  out.fp_mode = second.fp_mode == FPMode::heuristic ? second.fp_mode : first.fp_mode;
  auto why = embedding_error(g, forest_union(ta, tb), both);
  if (!why.empty()) throw LemmaViolation("embed_two_trees: " + why);
  return out;
}

namespace detail {

// First m-set S with |N(S)| <= limit; empty when none.
inline std::vector<int> small_neighbourhood_set(const Graph& g, int m, long limit, Budget& budget) {
  std::vector<int> found;
  auto end = combinations(g.vertices(), m, budget, [&](const std::vector<int>& s) {
    if (neighborhood(g, VertexSet::from(s)).count() <= limit) {
      found = s;
      return true;
    }
    return false;
  });
  if (end == EnumerationEnd::budget) throw SearchBudgetExceeded("embed_many_leaves: set search budget exhausted");
  return found;
}

inline EmbedOutcome many_leaves_rec(const Graph& g, const RootedForest& t, int delta, std::vector<int> sizes,
                                    const LemmaOptions& opt, Budget& budget) {
  EmbedOutcome out;
  int k = static_cast<int>(sizes.size());
  int n = t.size();
  std::string tag = "k=" + std::to_string(k) + " ";
  if (k == 1) {
    out.witness = Parts{take(g.vertices(), sizes[0])};
    out.trace.push_back({tag + "base", "trivial part", *out.witness, 0});
    return out;
  }
  int mk = sizes.back();
  long m_rest = static_cast<long>(k - 2) * (n - 1) + sizes.front();

  // Recurse into the vertices far from s; the witness grows by m_k of s.
  auto descend = [&](const std::vector<int>& s, const std::string& why) {
    VertexSet ss = VertexSet::from(s);
    auto sub = induced_subgraph(g, g.vertices() - ss - neighborhood(g, ss));
    std::vector<int> first(s.begin(), s.begin() + mk);
    out.trace.push_back({tag + why, "descend", {first}, 0});
    std::vector<int> fewer(sizes.begin(), sizes.end() - 1);
    auto inner = many_leaves_rec(sub.graph, t, delta, fewer, opt, budget);
    for (auto& st : inner.trace) out.trace.push_back({st.stage, st.outcome, lift_parts(st.witness, sub), st.nodes});
    if (inner.embedded()) {
      out.embedding = lift_embedding(*inner.embedding, sub);
      out.e2_verified = inner.e2_verified;
      out.fp_mode = inner.fp_mode;
      return;
    }
    Parts parts = lift_parts(*inner.witness, sub);
    parts.push_back(first);
    out.witness = parts;
  };

  std::uint64_t mark = budget.used;
  if (mk <= opt.cap) {
    auto s = small_neighbourhood_set(g, mk, n - mk - 1, budget);
    out.trace.push_back({tag + "small-neighbourhood search", s.empty() ? "none" : "found", {}, budget.used - mark});
    if (!s.empty()) {
      descend(s, "small-neighbourhood set");
      return out;
    }
  } else {
    out.trace.push_back({tag + "small-neighbourhood search", "skipped (cap)", {}, 0});
  }

  auto stripped = strip_leaves(t);
  const auto& core = stripped.core;
  auto c1 = embed_avoiding_bipartite(g, core.forest, delta, mk, static_cast<int>(m_rest), opt, budget);
  for (auto& st : c1.trace) out.trace.push_back({tag + "core " + st.stage, st.outcome, st.witness, st.nodes});
  if (!c1.embedded()) {
    descend((*c1.witness)[0], "core witness");
    return out;
  }
  // Hall step: each core vertex takes its removed leaves among the unused hosts.
  VertexSet image = c1.embedding->image();
  DemandedBipartite db;
  db.b = (g.vertices() - image).to_vector();
  std::map<int, int> host_of;  // original label -> host
  for (int i = 0; i < core.forest.size(); ++i) host_of[core.to_original[i]] = c1.embedding->map[i];
  for (auto [v, l] : stripped.demands) {
    int h = host_of.at(v);
    db.a.push_back(h);
    db.demands[h] = l;
    (g.neighbors(h) - image).for_each([&](int b) { db.edges.emplace_back(h, b); });
  }
  mark = budget.used;
  auto hall = hall_extension_forest(db);
  if (!hall.forest) {
    out.trace.push_back({tag + "leaves", "deficiency", {hall.deficiency}, 0});
    if (static_cast<int>(hall.deficiency.size()) >= mk) {
      descend(hall.deficiency, "deficiency");
      return out;
    }
    if (c1.e2_verified) throw LemmaViolation("embed_many_leaves: small Hall deficiency despite the expansion guarantee");
    throw Error("embed_many_leaves: heuristic core copy left a small Hall deficiency");
  }
  out.trace.push_back({tag + "leaves", "matched", {}, budget.used - mark});
  Embedding e;
  e.map.assign(static_cast<std::size_t>(n), -1);
  for (auto [v, h] : host_of) e.map[v] = h;
  std::map<int, std::size_t> next;
  for (auto [leaf, anchor] : stripped.leaf_anchor) {
    int h = host_of.at(anchor);
    e.map[leaf] = hall.assignment.at(h)[next[h]++];
  }
  auto why = embedding_error(g, t, e);
  if (!why.empty()) throw LemmaViolation("embed_many_leaves: " + why);
  out.embedding = e;
  out.e2_verified = c1.e2_verified;
  out.fp_mode = c1.fp_mode;
  return out;
}

}  // namespace detail

// Copy of a tree with many leaves, or K_{m_1..m_k} in the complement.
// Sizes are sorted ascending; the tree needs at least 13Δm_k + 1 leaves and
// the host at least (k-1)(|t|-1) + m_1 vertices.
inline EmbedOutcome embed_many_leaves(const Graph& g, const RootedForest& t, int delta, std::vector<int> sizes,
                                      const LemmaOptions& opt, Budget& budget) {
  if (!t.is_tree()) throw PreconditionError("embed_many_leaves: input must be a tree");
  if (sizes.empty()) throw PreconditionError("embed_many_leaves: needs at least one part");
  for (int s : sizes)
    if (s < 1) throw PreconditionError("embed_many_leaves: part sizes must be positive");
  std::sort(sizes.begin(), sizes.end());
  if (t.actual_max_degree() > delta) throw PreconditionError("embed_many_leaves: tree degree exceeds Δ");
  long l = static_cast<long>(leaves(t).size());
  if (l < 13L * std::max(delta, 1) * sizes.back() + 1)
    throw PreconditionError("embed_many_leaves: needs at least 13Δm_k + 1 leaves");
  long need = static_cast<long>(sizes.size() - 1) * (t.size() - 1) + sizes.front();
  if (g.order() < need) throw PreconditionError("embed_many_leaves: need |g| >= (k-1)(|t|-1) + m_1");
  auto out = detail::many_leaves_rec(g, t, delta, sizes, opt, budget);
  if (out.witness) detail::check_witness(g, *out.witness, sizes, "embed_many_leaves");
  return out;
}

}  // namespace rgood
