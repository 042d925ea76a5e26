#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "extremal.hpp"
#include "subgraph.hpp"
#include "tree.hpp"

namespace rgood {

struct ChromaticData {
  int chi = 0;
  int sigma = 0;
  std::vector<int> coloring;  // class of each vertex, 0..chi-1
};

namespace detail {

// Proper colourings of h with at most k classes, class labels in first-use
// order.  `leaf` sees each complete colouring and returns false to stop.
template <class F>
bool walk_colorings(const Graph& h, int k, F&& leaf) {
  int n = h.order();
  std::vector<int> col(static_cast<std::size_t>(n), -1);
  std::vector<VertexSet> cls(static_cast<std::size_t>(k));
  auto rec = [&](auto& self, int v, int used) -> bool {
    if (v == n) return leaf(col, used);
    int top = std::min(used + 1, k);
    for (int c = 0; c < top; ++c) {
      if (h.neighbors(v).intersects(cls[c])) continue;
      col[v] = c;
      cls[c].set(v);
      bool go = self(self, v + 1, std::max(used, c + 1));
      cls[c].reset(v);
      if (!go) return false;
    }
    return true;
  };
  return rec(rec, 0, 0);
}

}  // namespace detail

inline ChromaticData chromatic_data(const Graph& h, int cap = 16) {
  int n = h.order();
  if (n > cap)
    throw CapExceeded("chromatic_data: " + std::to_string(n) + " vertices exceeds cap " + std::to_string(cap));
  ChromaticData out;
  if (n == 0) return out;
  int chi = 1;
  for (;; ++chi) {
    bool found = !detail::walk_colorings(h, chi, [](const std::vector<int>&, int) { return false; });
    if (found) break;
  }
  out.chi = chi;
  out.sigma = n + 1;
  detail::walk_colorings(h, chi, [&](const std::vector<int>& col, int used) {
    if (used < chi) return true;
    std::vector<int> count(static_cast<std::size_t>(chi), 0);
    for (int c : col) ++count[c];
    int smallest = *std::min_element(count.begin(), count.end());
    if (smallest < out.sigma) {
      out.sigma = smallest;
      out.coloring = col;
    }
    return out.sigma > 1;
  });
  return out;
}

enum class ContainsKind { red_t, blue_h, neither };

inline const char* to_string(ContainsKind k) {
  switch (k) {
    case ContainsKind::red_t: return "RedT";
    case ContainsKind::blue_h: return "BlueH";
    case ContainsKind::neither: return "Neither";
  }
  return "?";
}

struct ContainsResult {
  ContainsKind kind = ContainsKind::neither;
  std::vector<int> witness;  // pattern vertex -> host vertex
  std::uint64_t nodes = 0;
};

// Red t is looked for first.
inline ContainsResult coloring_contains(const EdgeColoring& c, const RootedForest& t, const Graph& h,
                                        Budget& budget) {
  ContainsResult out;
  auto red = contains_forest_copy(c.red, t, budget);
  out.nodes += red.nodes;
  if (red.unknown()) throw SearchBudgetExceeded("coloring_contains: red search ran out of budget");
  if (red.found()) {
    out.kind = ContainsKind::red_t;
    out.witness = red.value->map;
    return out;
  }
  auto blue = find_subgraph(c.blue(), h, budget);
  out.nodes += blue.nodes;
  if (blue.unknown()) throw SearchBudgetExceeded("coloring_contains: blue search ran out of budget");
  if (blue.found()) {
    out.kind = ContainsKind::blue_h;
    out.witness = *blue.value;
  }
  return out;
}

inline ContainsResult coloring_contains(const EdgeColoring& c, const RootedForest& t, const Graph& h) {
  Budget b;
  return coloring_contains(c, t, h, b);
}

// R(t, h) lies in [lo, hi]; hi = -1 when no upper bound is known.
class RamseyCapExceeded : public CapExceeded {
 public:
  RamseyCapExceeded(std::string what, long lo, long hi) : CapExceeded(std::move(what)), lo_(lo), hi_(hi) {}
  long lo() const { return lo_; }
  long hi() const { return hi_; }

 private:
  long lo_, hi_;
};

struct RamseyLogEntry {
  int n = 0;
  bool avoiding = false;  // an avoiding colouring of K_n was found
  std::uint64_t nodes = 0;
};

struct RamseyResult {
  int value = 0;
  EdgeColoring lower;  // avoids both targets on value-1 vertices
  std::vector<RamseyLogEntry> log;
};

namespace detail {

// Pattern plus its edge list, for copies through a given host edge.
struct Target {
  Pattern p;
  std::vector<std::pair<int, int>> edges;
};

inline Target target_of(const Pattern& p) {
  Target t{p, {}};
  for (int a = 0; a < p.n; ++a)
    for (int b : p.adj[a])
      if (a < b) t.edges.emplace_back(a, b);
  return t;
}

// Some copy of the target in g uses the edge uv.
inline bool copy_through(const Graph& g, const Target& t, int u, int v, Budget& budget) {
  for (auto [a, b] : t.edges) {
    for (int flip = 0; flip < 2; ++flip) {
      MonomorphismOptions opt;
      opt.fixed = {{a, flip ? v : u}, {b, flip ? u : v}};
      auto r = find_monomorphism(t.p, g, budget, opt);
      if (r.unknown()) throw SearchBudgetExceeded("ramsey_number: budget exhausted");
      if (r.found()) return true;
    }
  }
  return false;
}

// Avoiding colouring of K_n, edges coloured column by column.  Symmetry
// breaking: colours towards vertex 0 are sorted (red first), and inside each
// such class the colours towards vertex 1 are sorted too.  Any colouring can
// be relabelled to meet both rules.
inline std::optional<Graph> avoiding_coloring(int n, const Target& tt, const Target& th, Budget& budget) {
  Graph red(n), blue(n);
  {
    auto r0 = find_monomorphism(tt.p, red, budget);
    auto b0 = find_monomorphism(th.p, blue, budget);
    if (r0.unknown() || b0.unknown()) throw SearchBudgetExceeded("ramsey_number: budget exhausted");
    if (r0.found() || b0.found()) return std::nullopt;
  }
  std::vector<std::pair<int, int>> order;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) order.emplace_back(i, j);
  auto is_blue = [&](int i, int j) { return blue.adjacent(i, j); };

  auto rec = [&](auto& self, std::size_t e) -> bool {
    if (e == order.size()) return true;
    auto [i, j] = order[e];
    for (int colour = 0; colour < 2; ++colour) {
      if (i == 0 && j >= 2 && colour < int(is_blue(0, j - 1))) continue;
      if (i == 1 && j >= 3 && is_blue(0, j) == is_blue(0, j - 1) && colour < int(is_blue(1, j - 1))) continue;
      if (!budget.tick()) throw SearchBudgetExceeded("ramsey_number: budget exhausted");
      Graph& g = colour == 0 ? red : blue;
      g.add_edge(i, j);
      bool dead = copy_through(g, colour == 0 ? tt : th, i, j, budget);
      if (!dead && self(self, e + 1)) return true;
      g.remove_edge(i, j);
    }
    return false;
  };
  if (rec(rec, 0)) return red;
  return std::nullopt;
}

}  // namespace detail

// Upper bound (|t|-1)(|h|-1)+1, from the tree-versus-clique value and h ⊆ K_|h|.
inline long ramsey_upper_bound(const RootedForest& t, const Graph& h) {
  return (static_cast<long>(t.size()) - 1) * (h.order() - 1) + 1;
}

inline RamseyResult ramsey_number(const RootedForest& t, const Graph& h, int n_max, Budget& budget) {
  if (t.size() < 1 || !t.is_tree()) throw PreconditionError("ramsey_number: t must be a tree");
  if (h.order() < 1) throw PreconditionError("ramsey_number: h must have a vertex");
  if (n_max < 1 || n_max > kMaxVertices) throw PreconditionError("ramsey_number: n_max out of range");
  auto tt = detail::target_of(Pattern::of(t));
  auto th = detail::target_of(Pattern::of(h));
  long hi = ramsey_upper_bound(t, h);
  RamseyResult out;
  EdgeColoring last{Graph(0)};
  for (int n = 1; n <= n_max; ++n) {
    std::uint64_t start = budget.used;
    std::optional<Graph> found;
    try {
      found = detail::avoiding_coloring(n, tt, th, budget);
    } catch (const SearchBudgetExceeded&) {
      throw RamseyCapExceeded("ramsey_number: budget exhausted at N = " + std::to_string(n), n, hi);
    }
    out.log.push_back({n, found.has_value(), budget.used - start});
    if (!found) {
      out.value = n;
      out.lower = last;
      return out;
    }
    last = EdgeColoring{*found};
  }
  throw RamseyCapExceeded("ramsey_number: no forcing N up to " + std::to_string(n_max), n_max + 1, hi);
}

inline RamseyResult ramsey_number(const RootedForest& t, const Graph& h, int n_max) {
  Budget b;
  return ramsey_number(t, h, n_max, b);
}

enum class Goodness { good, not_good, unknown };

inline const char* to_string(Goodness g) {
  switch (g) {
    case Goodness::good: return "Good";
    case Goodness::not_good: return "NotGood";
    case Goodness::unknown: return "Unknown";
  }
  return "?";
}

struct GoodnessResult {
  Goodness verdict = Goodness::unknown;
  std::optional<long> r;  // exact value when known
  long lo = 0, hi = -1;    // bracket on R
  long bound = 0;
  int chi = 0, sigma = 0;
  std::string note;
};

inline GoodnessResult goodness_check(const RootedForest& t, const Graph& h, int n_max, Budget& budget) {
  GoodnessResult out;
  ChromaticData cd;
  try {
    cd = chromatic_data(h);
  } catch (const CapExceeded& e) {
    out.note = e.what();
    return out;
  }
  out.chi = cd.chi;
  out.sigma = cd.sigma;
  out.bound = burr_bound(t.size(), cd.chi, cd.sigma);
  try {
    auto r = ramsey_number(t, h, n_max, budget);
    out.r = r.value;
    out.lo = out.hi = r.value;
  } catch (const RamseyCapExceeded& e) {
    out.lo = e.lo();
    out.hi = e.hi();
    out.note = e.what();
  }
  if (out.hi >= 0 && out.hi < out.bound)
    throw LemmaViolation("goodness_check: Ramsey value below the chromatic lower bound");
  if (out.r && *out.r == out.bound)
    out.verdict = Goodness::good;
  else if (out.lo > out.bound)
    out.verdict = Goodness::not_good;
  return out;
}

inline GoodnessResult goodness_check(const RootedForest& t, const Graph& h, int n_max) {
  Budget b;
  return goodness_check(t, h, n_max, b);
}

}  // namespace rgood
