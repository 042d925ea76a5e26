#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "subgraph.hpp"
#include "subsets.hpp"

namespace rgood {

enum class Verdict { holds, fails, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

struct ExpansionReport {
  Verdict verdict = Verdict::unknown;
  int condition = 0;           // 1 or 2 when the check fails
  std::vector<int> witness;    // X
  std::vector<int> partner;    // Y, condition 2 only
  std::uint64_t nodes = 0;

  bool holds() const { return verdict == Verdict::holds; }
  bool fails() const { return verdict == Verdict::fails; }
};

inline constexpr int kDefaultEnumerationCap = 6;

// ceil(|W| / 2d); zero when W is empty.  d must be positive.
inline int expansion_set_size(int w, const Rational& d) {
  if (w == 0) return 0;
  return static_cast<int>(ceil_div(Rational(w), 2 * d));
}

// Does g d-expand into W?  Condition 1 is checked over all X with
// 1 <= |X| < ceil(|W|/2d), condition 2 over disjoint pairs of size exactly
// ceil(|W|/2d).  Answers unknown when that size exceeds `cap`.  For d > 0 an
// empty W always fails condition 2 on the empty pair.
inline ExpansionReport check_d_expands(const Graph& g, const VertexSet& w, const Rational& d, Budget& budget,
                                       int cap = kDefaultEnumerationCap) {
  if (d < Rational(0)) throw PreconditionError("expansion factor must be nonnegative");
  if (!w.subset_of(g.vertices())) throw PreconditionError("W is not a vertex set of the graph");
  ExpansionReport rep;
  std::uint64_t start = budget.used;
  if (d == Rational(0)) {
    rep.verdict = Verdict::holds;
    return rep;
  }
  int k = expansion_set_size(w.count(), d);
  if (k == 0) {
    // Condition 2 on X = Y = empty set: e(X, Y) = 0.
    rep.verdict = Verdict::fails;
    rep.condition = 2;
    return rep;
  }
  if (k > cap) {
    rep.verdict = Verdict::unknown;
    return rep;
  }
  auto end = first_subset_by_size(g.vertices(), k - 1, budget, [&](const std::vector<int>& x) {
    int hit = (neighborhood(g, VertexSet::from(x)) & w).count();
    if (at_least(hit, d, static_cast<std::int64_t>(x.size()))) return false;
    rep.witness = x;
    return true;
  });
  if (end == EnumerationEnd::budget) {
    rep.nodes = budget.used - start;
    return rep;
  }
  if (end == EnumerationEnd::stopped) {
    rep.verdict = Verdict::fails;
    rep.condition = 1;
    rep.nodes = budget.used - start;
    return rep;
  }
  auto pair = find_multipartite(complement(g), {k, k}, budget);
  rep.nodes = budget.used - start;
  if (pair.unknown()) return rep;
  if (pair.found()) {
    rep.verdict = Verdict::fails;
    rep.condition = 2;
    rep.witness = pair.value->at(0);
    rep.partner = pair.value->at(1);
    return rep;
  }
  rep.verdict = Verdict::holds;
  return rep;
}

inline ExpansionReport check_d_expands(const Graph& g, const VertexSet& w, const Rational& d,
                                       int cap = kDefaultEnumerationCap) {
  Budget b;
  return check_d_expands(g, w, d, b, cap);
}

// Independent re-check that a failing report names a genuine violation.
inline bool is_genuine_violation(const Graph& g, const VertexSet& w, const Rational& d, const ExpansionReport& rep) {
  if (!rep.fails() || d <= Rational(0)) return false;
  int k = expansion_set_size(w.count(), d);
  VertexSet x = VertexSet::from(rep.witness);
  if (x.count() != static_cast<int>(rep.witness.size())) return false;
  if (rep.condition == 1) {
    int sz = x.count();
    return sz >= 1 && sz < k && !at_least((neighborhood(g, x) & w).count(), d, sz);
  }
  if (rep.condition == 2) {
    VertexSet y = VertexSet::from(rep.partner);
    if (x.count() != k || y.count() != k || x.intersects(y)) return false;
    return !neighborhood(g, x).intersects(y);
  }
  return false;
}

enum class Conclusion { not_applicable, holds, fails, unknown };

inline const char* to_string(Conclusion c) {
  switch (c) {
    case Conclusion::not_applicable: return "n/a";
    case Conclusion::holds: return "holds";
    case Conclusion::fails: return "fails";
    case Conclusion::unknown: return "unknown";
  }
  return "?";
}

struct ClosureReport {
  ExpansionReport premise;  // g d-expands into W
  Conclusion restrict_host = Conclusion::not_applicable;   // (i)  g[Z] d-expands into W
  Conclusion enlarge_target = Conclusion::not_applicable;  // (ii) g d-expands into Z, when d >= 2
  Conclusion weaken_factor = Conclusion::not_applicable;   // (iii) g c-expands into W, when d/(d-1) <= c <= d
};

inline Conclusion as_conclusion(const ExpansionReport& r) {
  switch (r.verdict) {
    case Verdict::holds: return Conclusion::holds;
    case Verdict::fails: return Conclusion::fails;
    case Verdict::unknown: return Conclusion::unknown;
  }
  return Conclusion::unknown;
}

// Evaluates the three closure properties of expansion directly.  Conclusions
// are only evaluated when the premise holds.
inline ClosureReport subset_expansion_closure(const Graph& g, const VertexSet& w, const VertexSet& z, const Rational& d,
                                              const Rational& c, Budget& budget, int cap = kDefaultEnumerationCap) {
  if (!w.subset_of(z) || !z.subset_of(g.vertices())) throw PreconditionError("closure check needs W within Z within V(g)");
  ClosureReport out;
  out.premise = check_d_expands(g, w, d, budget, cap);
  if (!out.premise.holds()) return out;
  auto sub = induced_subgraph(g, z);
  out.restrict_host = as_conclusion(check_d_expands(sub.graph, sub.restrict(w), d, budget, cap));
  if (d >= Rational(2)) out.enlarge_target = as_conclusion(check_d_expands(g, z, d, budget, cap));
  if (d > Rational(1) && d / (d - Rational(1)) <= c && c <= d) out.weaken_factor = as_conclusion(check_d_expands(g, w, c, budget, cap));
  return out;
}

enum class Threshold { below, at_most };

// Greedily grows X (|X| <= m - 1) by absorbing minimal sets S of the residual
// graph g - X with |N(S) cap within| under factor * |S| (strictly below, or
// at most, per `threshold`), smallest and lexicographically first first.  On
// return no S in g - X with 1 <= |S| <= m violates the bound.  Throws
// HypothesisViolated(X u S) when absorbing would make |X| >= m.
inline VertexSet maximal_nonexpanding_set(const Graph& g, int m, const Rational& factor, Threshold threshold,
                                          const std::optional<VertexSet>& within, Budget& budget,
                                          int cap = kDefaultEnumerationCap) {
  if (m < 1) throw PreconditionError("maximal_nonexpanding_set needs m >= 1");
  if (m > cap) throw CapExceeded("set size " + std::to_string(m) + " exceeds enumeration cap " + std::to_string(cap));
  VertexSet target = within ? *within : g.vertices();
  VertexSet x;
  while (true) {
    VertexSet rest = g.vertices() - x;
    std::vector<int> found;
    auto end = first_subset_by_size(rest, m, budget, [&](const std::vector<int>& s) {
      VertexSet ss = VertexSet::from(s);
      int nb = (neighborhood(g, ss) & rest & target).count();
      Rational bound = factor * static_cast<std::int64_t>(s.size());
      bool violates = threshold == Threshold::below ? Rational(nb) < bound : Rational(nb) <= bound;
      if (violates) found = s;
      return violates;
    });
    if (end == EnumerationEnd::budget) throw SearchBudgetExceeded("maximal_nonexpanding_set: node budget exhausted");
    if (found.empty()) return x;
    VertexSet grown = x | VertexSet::from(found);
    if (grown.count() >= m)
      throw HypothesisViolated("non-expanding set of size " + std::to_string(grown.count()) + " reached the cap " +
                                   std::to_string(m),
                               grown.to_vector());
    x = grown;
  }
}

struct PartitionResult {
  std::vector<VertexSet> parts;
  std::vector<Rational> factors;  // d_i = m_i d / 5|W|
  int attempts = 0;
  // Recorded, not enforced: the asymptotic side conditions of the
  // partition statement (k <= log n and d_i >= 2 log n).
  bool parts_at_most_log_n = false;
  bool factors_at_least_2_log_n = false;
};

// Splits W into parts of the given sizes so that g (m_i d / 5|W|)-expands
// into each part.  Seeded random splits are verified and retried.
inline PartitionResult partition_expansion(const Graph& g, const VertexSet& w, const Rational& d,
                                           const std::vector<int>& sizes, std::uint64_t seed, Budget& budget,
                                           int attempts = 200, int cap = kDefaultEnumerationCap) {
  long total = 0;
  for (int s : sizes) {
    if (s < 1) throw PreconditionError("part sizes must be positive");
    total += s;
  }
  if (total != w.count()) throw PreconditionError("part sizes must sum to |W|");
  auto pre = check_d_expands(g, w, d, budget, cap);
  if (pre.verdict == Verdict::unknown) throw CapExceeded("cannot verify that g d-expands into W");
  if (pre.fails()) throw PreconditionError("g does not d-expand into W");

  PartitionResult out;
  for (int s : sizes) out.factors.push_back(Rational(s) * d / (5 * total));
  double logn = std::log(static_cast<double>(std::max(g.order(), 2)));
  out.parts_at_most_log_n = static_cast<double>(sizes.size()) <= logn;
  out.factors_at_least_2_log_n = true;
  for (auto f : out.factors)
    if (boost::rational_cast<double>(f) < 2 * logn) out.factors_at_least_2_log_n = false;

  Rng rng(seed);
  std::vector<int> members = w.to_vector();
  for (int a = 1; a <= attempts; ++a) {
    rng.shuffle(members);
    std::vector<VertexSet> parts;
    std::size_t at = 0;
    for (int s : sizes) {
      VertexSet p;
      for (int i = 0; i < s; ++i) p.set(members[at++]);
      parts.push_back(p);
    }
    bool ok = true;
    for (std::size_t i = 0; i < parts.size() && ok; ++i) {
      auto r = check_d_expands(g, parts[i], out.factors[i], budget, cap);
      if (r.verdict == Verdict::unknown) throw CapExceeded("cannot verify expansion into a part");
      ok = r.holds();
    }
    if (ok) {
      out.parts = std::move(parts);
      out.attempts = a;
      return out;
    }
  }
  throw RetriesExhausted("no verified partition after " + std::to_string(attempts) + " attempts");
}

}  // namespace rgood
