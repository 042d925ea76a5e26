#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "rgood/verify.hpp"

using namespace rgood;
using namespace rgood::graphs;

namespace {

// chi and sigma from all k^n assignments.
std::pair<int, int> chromatic_bruteforce(const Graph& h) {
  int n = h.order();
  for (int k = 1; k <= n; ++k) {
    int best = -1;
    std::vector<int> col(static_cast<std::size_t>(n), 0);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= k;
    for (long code = 0; code < total; ++code) {
      long x = code;
      for (int i = 0; i < n; ++i) {
        col[i] = static_cast<int>(x % k);
        x /= k;
      }
      bool proper = true;
      for (auto [a, b] : h.edges()) proper = proper && col[a] != col[b];
      if (!proper) continue;
      std::vector<int> cnt(static_cast<std::size_t>(k), 0);
      for (int c : col) ++cnt[c];
      int smallest = *std::min_element(cnt.begin(), cnt.end());
      if (smallest == 0) continue;
      if (best < 0 || smallest < best) best = smallest;
    }
    if (best > 0) return {k, best};
  }
  return {0, 0};
}

bool has_copy_naive(const Graph& g, const std::vector<std::pair<int, int>>& h_edges, int h_n) {
  int n = g.order();
  if (h_n > n) return false;
  std::vector<int> map(static_cast<std::size_t>(h_n));
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto& self, int i) -> bool {
    if (i == h_n) {
      for (auto [a, b] : h_edges)
        if (!g.adjacent(map[a], map[b])) return false;
      return true;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      map[i] = v;
      bool ok = self(self, i + 1);
      used[v] = 0;
      if (ok) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

// Does some colouring of K_n avoid red t and blue h?  All 2^(n choose 2) colourings.
bool avoiding_exists_bruteforce(int n, const RootedForest& t, const Graph& h) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
  auto te = t.edges();
  auto he = h.edges();
  for (long mask = 0; mask < (1L << es.size()); ++mask) {
    Graph red(n), blue(n);
    for (std::size_t e = 0; e < es.size(); ++e) ((mask >> e) & 1 ? red : blue).add_edge(es[e].first, es[e].second);
    if (!has_copy_naive(red, te, t.size()) && !has_copy_naive(blue, he, h.order())) return true;
  }
  return false;
}

// Representatives of all trees on n <= 5 vertices up to isomorphism (the
// sorted degree sequence separates them at this size), from Prüfer codes.
std::vector<RootedForest> all_small_trees(int n) {
  if (n == 1) return {trees::single_vertex()};
  if (n == 2) return {trees::path(2)};
  std::map<std::vector<int>, RootedForest> seen;
  std::vector<int> code(static_cast<std::size_t>(n - 2), 0);
  while (true) {
    std::vector<int> deg(static_cast<std::size_t>(n), 1);
    for (int c : code) ++deg[c];
    std::vector<std::pair<int, int>> edges;
    auto d = deg;
    for (int c : code) {
      int leaf = 0;
      while (d[leaf] != 1) ++leaf;
      edges.emplace_back(leaf, c);
      --d[leaf];
      --d[c];
    }
    int a = -1, b = -1;
    for (int v = 0; v < n; ++v)
      if (d[v] == 1) (a < 0 ? a : b) = v;
    edges.emplace_back(a, b);
    auto key = deg;
    std::sort(key.begin(), key.end());
    if (!seen.count(key)) seen.emplace(key, RootedForest::from_edges(n, edges, n - 1));
    int i = 0;
    while (i < n - 2 && ++code[i] == n) code[i++] = 0;
    if (i == n - 2) break;
  }
  std::vector<RootedForest> out;
  for (auto& [k, t] : seen) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("chromatic_data") {
  for (int m = 1; m <= 6; ++m) {
    auto cd = chromatic_data(complete(m));
    CHECK(cd.chi == m);
    CHECK(cd.sigma == 1);
  }
  auto c5 = chromatic_data(cycle(5));
  CHECK(c5.chi == 3);
  CHECK(c5.sigma == 1);
  auto b23 = chromatic_data(complete_multipartite({2, 3}));
  CHECK(b23.chi == 2);
  CHECK(b23.sigma == 2);
  auto t122 = chromatic_data(complete_multipartite({1, 2, 2}));
  CHECK(t122.chi == 3);
  CHECK(t122.sigma == 1);
  CHECK(chromatic_data(empty(4)).sigma == 4);
  CHECK(chromatic_data(Graph(0)).chi == 0);
  CHECK_THROWS_AS(chromatic_data(empty(17)), CapExceeded);
  CHECK_NOTHROW(chromatic_data(empty(17), 20));
}

TEST_CASE("chromatic_data against brute force") {
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    int n = 2 + static_cast<int>(rng.below(6));
    auto g = gnp(n, 0.2 + 0.6 * rng.uniform01(), rng);
    auto cd = chromatic_data(g);
    auto [chi, sigma] = chromatic_bruteforce(g);
    REQUIRE(cd.chi == chi);
    REQUIRE(cd.sigma == sigma);
    // Witness is proper, uses chi classes, smallest has sigma vertices.
    std::vector<int> cnt(static_cast<std::size_t>(cd.chi), 0);
    for (int c : cd.coloring) ++cnt[c];
    CHECK(*std::min_element(cnt.begin(), cnt.end()) == cd.sigma);
    for (auto [a, b] : g.edges()) CHECK(cd.coloring[a] != cd.coloring[b]);
  }
}

TEST_CASE("coloring_contains") {
  auto red_all = EdgeColoring{complete(5)};
  auto r = coloring_contains(red_all, trees::path(5), complete(3));
  CHECK(r.kind == ContainsKind::red_t);
  CHECK(valid_embedding(red_all.red, trees::path(5), Embedding{r.witness}));
  auto blue_all = EdgeColoring{Graph(5)};
  auto b = coloring_contains(blue_all, trees::path(2), complete(3));
  CHECK(b.kind == ContainsKind::blue_h);
  CHECK(valid_subgraph_map(blue_all.blue(), complete(3), b.witness));
  auto burr = clique_blowup_coloring(burr_sizes(4, 3, 1));
  CHECK(coloring_contains(burr, trees::path(4), complete(3)).kind == ContainsKind::neither);
  Budget tiny{2, 0};
  CHECK_THROWS_AS(coloring_contains(EdgeColoring{cycle(30)}, trees::path(25), complete(3), tiny),
                  SearchBudgetExceeded);
}

TEST_CASE("ramsey_number against brute force on tiny pairs") {
  std::vector<std::pair<RootedForest, Graph>> pairs{
      {trees::path(2), complete(2)}, {trees::path(2), complete(3)}, {trees::path(3), complete(3)},
      {trees::path(3), path(3)},     {trees::single_vertex(), complete(3)}};
  for (auto& [t, h] : pairs) {
    auto r = ramsey_number(t, h, 8);
    // Brute force: K_{R-1} has an avoiding colouring, K_R has none.
    CHECK(!avoiding_exists_bruteforce(r.value, t, h));
    if (r.value > 1) CHECK(avoiding_exists_bruteforce(r.value - 1, t, h));
    CHECK(coloring_contains(r.lower, t, h).kind == ContainsKind::neither);
    CHECK(r.lower.size() == r.value - 1);
    CHECK(r.log.back().n == r.value);
    CHECK(!r.log.back().avoiding);
  }
}

TEST_CASE("ramsey_number path against clique") {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {4, 3}, {3, 4}}) {
    auto r = ramsey_number(trees::path(n), complete(m), 12);
    CHECK(r.value == (n - 1) * (m - 1) + 1);
    CHECK(coloring_contains(r.lower, trees::path(n), complete(m)).kind == ContainsKind::neither);
  }
  CHECK(ramsey_number(trees::path(2), complete(2), 4).value == 2);
}

TEST_CASE("ramsey_number threshold spot check") {
  Rng rng(77);
  auto t = trees::path(4);
  auto h = complete(3);
  auto r = ramsey_number(t, h, 10);
  for (int i = 0; i < 100; ++i) {
    auto c = EdgeColoring{gnp(r.value, rng.uniform01(), rng)};
    REQUIRE(coloring_contains(c, t, h).kind != ContainsKind::neither);
  }
}

TEST_CASE("ramsey_number caps and preconditions") {
  try {
    ramsey_number(trees::path(4), complete(3), 5);
    FAIL("expected a cap");
  } catch (const RamseyCapExceeded& e) {
    CHECK(e.lo() == 6);
    CHECK(e.hi() == 7);
  }
  Budget tiny{50, 0};
  CHECK_THROWS_AS(ramsey_number(trees::path(5), complete(3), 12, tiny), RamseyCapExceeded);
  CHECK_THROWS_AS(ramsey_number(RootedForest({-1, -1}, 1), complete(3), 5), PreconditionError);
  CHECK_THROWS_AS(ramsey_number(trees::path(3), Graph(0), 5), PreconditionError);
}

TEST_CASE("all small trees are K3-good") {
  int count = 0;
  for (int n = 1; n <= 5; ++n)
    for (const auto& t : all_small_trees(n)) {
      ++count;
      auto g = goodness_check(t, complete(3), 12);
      CHECK(g.verdict == Goodness::good);
      REQUIRE(g.r);
      CHECK(*g.r == 2 * (n - 1) + 1);
      CHECK(*g.r >= g.bound);
    }
  CHECK(count == 1 + 1 + 1 + 2 + 3);
}

TEST_CASE("goodness_check verdicts") {
  auto p3k3 = goodness_check(trees::path(3), complete(3), 10);
  CHECK(p3k3.verdict == Goodness::good);
  CHECK(*p3k3.r == 5);

  // K_{3,3}: bound 5, the tightness colouring on 6 vertices pushes R to at least 7.
  auto k33 = complete_multipartite({3, 3});
  auto neg = goodness_check(trees::path(3), k33, 10);
  CHECK(neg.bound == 5);
  CHECK(neg.verdict == Goodness::not_good);
  REQUIRE(neg.r);
  CHECK(*neg.r >= 7);

  auto capped = goodness_check(trees::path(3), k33, 5);
  // The bracket alone already clears the bound.
  CHECK(capped.verdict == Goodness::not_good);
  CHECK(!capped.r);
  CHECK(capped.lo == 6);
  auto open = goodness_check(trees::path(3), complete(3), 3);
  CHECK(open.verdict == Goodness::unknown);
  CHECK(open.lo == 4);
  CHECK(open.hi == 5);

  auto star = goodness_check(trees::star(4), complete(3), 10);
  CHECK(star.verdict == Goodness::good);
  CHECK(*star.r == 7);

  CHECK(goodness_check(trees::path(3), empty(17), 5).verdict == Goodness::unknown);
}
