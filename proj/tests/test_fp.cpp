#include <catch_amalgamated.hpp>

#include "rgood/fp_embed.hpp"

using namespace rgood;
using namespace rgood::graphs;

namespace {

// Every S with |S| <= m (m <= 3) against |Γ(S) minus the copy| >= Δ|S|, by nested loops.
bool e2_holds_bruteforce(const Graph& g, const VertexSet& img, int delta, int m) {
  int n = g.order();
  auto free_nb = [&](int v) { return g.neighbors(v) - img; };
  for (int a = 0; a < n; ++a) {
    VertexSet ga = free_nb(a);
    if (ga.count() < delta) return false;
    if (m < 2) continue;
    for (int b = a + 1; b < n; ++b) {
      VertexSet gb = ga | free_nb(b);
      if (gb.count() < 2 * delta) return false;
      if (m < 3) continue;
      for (int c = b + 1; c < n; ++c)
        if ((gb | free_nb(c)).count() < 3 * delta) return false;
    }
  }
  return true;
}

// Initial inequality for the root system, by nested loops (m <= 3).
bool roots_satisfy_e1(const Graph& g, const std::vector<int>& hosts, const RootedForest& f, int delta, int m) {
  VertexSet x = VertexSet::from(hosts);
  std::vector<int> pend(static_cast<std::size_t>(g.order()), 0);
  for (std::size_t i = 0; i < hosts.size(); ++i) pend[hosts[i]] = static_cast<int>(f.children(f.roots()[i]).size());
  auto ok = [&](const std::vector<int>& s) {
    VertexSet gs;
    for (int v : s) gs |= g.neighbors(v);
    long lhs = (gs - x).count();
    long rhs = 0;
    for (int v : s) rhs += x.test(v) ? pend[v] + delta : 4 * delta;
    return lhs >= rhs;
  };
  int n = g.order();
  for (int a = 0; a < n; ++a) {
    if (!ok({a})) return false;
    for (int b = a + 1; m >= 2 && b < n; ++b) {
      if (!ok({a, b})) return false;
      for (int c = b + 1; m >= 3 && c < n; ++c)
        if (!ok({a, b, c})) return false;
    }
  }
  return true;
}

// Dense random host plus `weak` extra vertices, each joined to exactly 4Δ
// dense vertices, with pairwise disjoint neighbourhoods.
Graph planted_host(int dense, double p, int weak, int delta, Rng& rng) {
  Graph base = gnp(dense, p, rng);
  Graph g(dense + weak);
  for (auto [u, v] : base.edges()) g.add_edge(u, v);
  std::vector<int> pool(static_cast<std::size_t>(dense));
  for (int i = 0; i < dense; ++i) pool[i] = i;
  rng.shuffle(pool);
  std::size_t next = 0;
  for (int w = 0; w < weak; ++w)
    for (int i = 0; i < 4 * delta; ++i) g.add_edge(dense + w, pool[next++]);
  return g;
}

}  // namespace

TEST_CASE("fp_embed single-vertex trees") {
  auto g = complete(20);
  RootedForest f({-1, -1, -1}, 1);
  std::vector<int> roots{5, 6, 7};
  auto r = fp_embed_forest(g, roots, f, {1, 1, 3}, {FPMode::certified});
  CHECK(r.embedding.map == roots);
  CHECK(r.steps == 0);
  CHECK(r.e2_verified);
  CHECK(e2_holds_bruteforce(g, r.embedding.image(), 1, 1));
}

TEST_CASE("fp_embed path in a complete host") {
  auto p8 = trees::path(8);
  auto k60 = complete(60);
  auto r = fp_embed_forest(k60, {0}, p8, {2, 2, 8}, {FPMode::certified});
  CHECK(r.mode_used == FPMode::certified);
  CHECK(valid_embedding(k60, p8, r.embedding, {0}));
  CHECK(r.e2_verified);
  CHECK(r.steps == 7);
  CHECK(e2_holds_bruteforce(k60, r.embedding.image(), 2, 2));

  // On K_20 two vertices see only 20 < 8 + 40 vertices.
  auto k20 = complete(20);
  CHECK_THROWS_AS(fp_embed_forest(k20, {0}, p8, {2, 2, 8}, {FPMode::certified}), HypothesisViolated);
  auto h = fp_embed_forest(k20, {0}, p8, {2, 2, 8}, {FPMode::heuristic});
  CHECK(h.mode_used == FPMode::heuristic);
  CHECK(!h.e2_verified);
  CHECK(valid_embedding(k20, p8, h.embedding, {0}));
}

TEST_CASE("fp_embed two trees in a random regular host") {
  Rng rng(8);
  auto f = forest_union(trees::random_bounded(10, 3, 0.5, 1), trees::random_bounded(10, 3, 0.5, 2));
  REQUIRE(f.roots().size() == 2);
  auto g = random_regular(200, 60, rng);
  std::vector<int> roots{3, 150};
  REQUIRE(roots_satisfy_e1(g, roots, f, 3, 2));
  auto r = fp_embed_forest(g, roots, f, {3, 2, 20}, {FPMode::certified});
  CHECK(valid_embedding(g, f, r.embedding, roots));
  CHECK(r.e2_verified);
  CHECK(e2_holds_bruteforce(g, r.embedding.image(), 3, 2));

  // An 8-regular host on 60 vertices has |Γ(S)| <= 16 for pairs, far below 20 + 60.
  auto sparse = random_regular(60, 8, rng);
  CHECK_THROWS_AS(fp_embed_forest(sparse, {0, 1}, f, {3, 2, 20}, {FPMode::certified}), HypothesisViolated);
  auto h = fp_embed_forest(sparse, {0, 1}, f, {3, 2, 20}, {FPMode::heuristic});
  CHECK(valid_embedding(sparse, f, h.embedding, {0, 1}));
}

TEST_CASE("fp_embed critical sets on planted weak vertices") {
  Rng rng(12);
  int snapshots = 0;
  long pairs = 0;
  for (int trial = 0; trial < 6; ++trial) {
    int delta = 3;
    int m = trial % 2 == 0 ? 3 : 2;
    int weak = m - 1;
    auto g = planted_host(200, 0.8, weak, delta, rng);
    auto f = trees::random_bounded(24, delta, 0.4, 100 + trial);
    // Root away from the weak vertices and their neighbourhoods.
    VertexSet avoid;
    for (int w = 200; w < 200 + weak; ++w) {
      avoid.set(w);
      avoid |= g.neighbors(w);
    }
    int root = (g.vertices() - avoid).first();
    auto r = fp_embed_forest(g, {root}, f, {delta, m, 24}, {FPMode::certified});
    REQUIRE(valid_embedding(g, f, r.embedding, {root}));
    REQUIRE(r.e2_verified);
    for (int w = 200; w < 200 + weak; ++w) CHECK(!r.embedding.image().intersects(g.neighbors(w)));
    for (const auto& snap : r.critical_log) {
      ++snapshots;
      for (const auto& c : snap.critical) REQUIRE(is_critical(g, snap, c, delta, m));
      for (std::size_t i = 0; i < snap.critical.size(); ++i)
        for (std::size_t j = i + 1; j < snap.critical.size(); ++j) {
          ++pairs;
          REQUIRE(is_critical(g, snap, snap.critical[i] | snap.critical[j], delta, m));
        }
    }
  }
  CHECK(snapshots > 0);
  CHECK(pairs > 0);
}

TEST_CASE("fp_embed errors") {
  auto g = complete(60);
  auto p8 = trees::path(8);
  CHECK_THROWS_AS(fp_embed_forest(g, {0, 1}, p8, {2, 2, 8}), PreconditionError);
  CHECK_THROWS_AS(fp_embed_forest(g, {0}, p8, {2, 2, 7}), PreconditionError);
  CHECK_THROWS_AS(fp_embed_forest(g, {0}, trees::star(5), {2, 2, 8}), PreconditionError);
  CHECK_THROWS_AS(fp_embed_forest(g, {3, 3}, RootedForest({-1, -1}, 1), {1, 1, 2}), PreconditionError);
  CHECK_THROWS_AS(fp_embed_forest(g, {0}, p8, {2, 4, 8}, {FPMode::certified}), CapExceeded);
  // Automatic mode falls back to the heuristic above the caps.
  auto a = fp_embed_forest(g, {0}, p8, {2, 4, 8}, {FPMode::automatic});
  CHECK(a.mode_used == FPMode::heuristic);
  CHECK(valid_embedding(g, p8, a.embedding, {0}));

  // A root of degree 2 cannot take three children.
  CHECK_THROWS_AS(fp_embed_forest(path(5), {2}, trees::star(4), {3, 1, 4}, {FPMode::heuristic}), NotEmbeddable);
  // Backtracking runs dry: P_4 does not fit in P_3.
  CHECK_THROWS_AS(fp_embed_forest(path(3), {0}, trees::path(4), {2, 1, 4}, {FPMode::heuristic}), NotEmbeddable);
  Budget tiny{5, 0};
  CHECK_THROWS_AS(fp_embed_forest(cycle(30), {0}, trees::path(25), {2, 1, 25}, {FPMode::heuristic}, tiny),
                  SearchBudgetExceeded);
}
