#include <catch_amalgamated.hpp>

#include "rgood/lemmas.hpp"

using namespace rgood;
using namespace rgood::graphs;

namespace {

// Spine 0..s-1, one leaf per spine vertex and one more at each end: Δ = 3, s + 2 leaves.
RootedForest comb(int spine) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < spine; ++i) e.emplace_back(i, i + 1);
  int next = spine;
  for (int i = 0; i < spine; ++i) e.emplace_back(i, next++);
  e.emplace_back(0, next++);
  e.emplace_back(spine - 1, next++);
  return RootedForest::from_edges(next, e, 3);
}

// Clique on [lo, hi).
void add_clique(Graph& g, int lo, int hi) {
  for (int u = lo; u < hi; ++u)
    for (int v = u + 1; v < hi; ++v) g.add_edge(u, v);
}

// Independent re-check of a witness: the parts form K_{sizes} in the
// complement, and the generic search agrees that such a copy exists.
bool witness_ok(const Graph& g, const Parts& parts, const std::vector<int>& sizes) {
  auto co = complement(g);
  std::set<int> seen;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (static_cast<int>(parts[i].size()) != sizes[i]) return false;
    for (int v : parts[i])
      if (!seen.insert(v).second) return false;
  }
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      for (int a : parts[i])
        for (int b : parts[j])
          if (g.adjacent(a, b)) return false;
  Budget b;
  return find_multipartite(co, sizes, b).found();
}

}  // namespace

TEST_CASE("connect_forest") {
  RootedForest f({-1, 0, -1, -1, 3, 3}, 2);
  auto t = connect_forest(f);
  CHECK(t.is_tree());
  CHECK(t.roots().front() == 0);
  CHECK(t.actual_max_degree() <= 2);
  auto te = t.edges();
  for (auto e : f.edges()) CHECK(std::count(te.begin(), te.end(), e) == 1);
  CHECK(t.edge_count() == 5);
}

TEST_CASE("embed_avoiding_bipartite") {
  LemmaOptions opt;
  Budget b;
  auto f = trees::random_bounded(20, 3, 0.5, 7);
  // |g| >= 20 + 13*3*2 + 2 = 100.
  auto k100 = complete(100);
  auto r = embed_avoiding_bipartite(k100, f, 3, 2, 2, opt, b);
  REQUIRE(r.embedded());
  CHECK(valid_embedding(k100, f, *r.embedding));
  CHECK(r.e2_verified);
  CHECK(copy_expansion_violation(k100, r.embedding->image(), 3, 2, b).empty());

  auto one = embed_avoiding_bipartite(complete(20), trees::single_vertex(), 0, 1, 1, opt, b);
  REQUIRE(one.embedded());
  CHECK(one.embedding->map.size() == 1);

  // A forest of three paths.
  RootedForest three({-1, 0, 1, -1, 3, -1}, 2);
  auto tr = embed_avoiding_bipartite(k100, three, 2, 2, 2, opt, b);
  REQUIRE(tr.embedded());
  CHECK(valid_embedding(k100, three, *tr.embedding));

  CHECK_THROWS_AS(embed_avoiding_bipartite(complete(60), f, 3, 2, 2, opt, b), PreconditionError);
}

TEST_CASE("embed_avoiding_bipartite witnesses") {
  LemmaOptions opt;
  Budget b;
  auto p5 = trees::path(5);
  // Vertices 0 and 1 only see each other and vertex 2; everything else is a clique.
  Graph g(100);
  add_clique(g, 2, 100);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  auto r = embed_avoiding_bipartite(g, p5, 2, 2, 40, opt, b);
  REQUIRE(r.witness);
  CHECK(r.trace.front().outcome == "witness");
  CHECK(witness_ok(g, *r.witness, {2, 40}));

  // Now 0 and 1 have ten private neighbours each: more than 4Δ, but a pair
  // sees only 20 < 5 + 10Δm vertices.
  Graph h(100);
  add_clique(h, 2, 100);
  for (int i = 0; i < 10; ++i) {
    h.add_edge(0, 2 + i);
    h.add_edge(1, 12 + i);
  }
  auto s = embed_avoiding_bipartite(h, p5, 2, 2, 40, opt, b);
  REQUIRE(s.witness);
  CHECK(s.trace.back().stage == "extend");
  CHECK(witness_ok(h, *s.witness, {2, 40}));
}

TEST_CASE("embed_avoiding_bipartite on random hosts") {
  Rng rng(41);
  LemmaOptions opt;
  int embedded = 0, witnessed = 0;
  for (int i = 0; i < 30; ++i) {
    auto f = trees::random_bounded(8, 2, 0.3, 500 + i);
    int m2 = 1 + static_cast<int>(rng.below(8));
    int n = 8 + 52 + m2 + static_cast<int>(rng.below(10));
    auto g = gnp(n, 0.6 + 0.39 * rng.uniform01(), rng);
    // A few low-degree vertices now and then.
    if (i % 3 == 0)
      for (int v = 0; v < 3; ++v)
        for (int u = 3; u < n; ++u)
          if (rng.bernoulli(0.9)) g.remove_edge(v, u);
    Budget b;
    auto r = embed_avoiding_bipartite(g, f, 2, 2, m2, opt, b);
    if (r.embedded()) {
      ++embedded;
      REQUIRE(valid_embedding(g, f, *r.embedding));
      REQUIRE(r.e2_verified);
      REQUIRE(copy_expansion_violation(g, r.embedding->image(), 2, 2, b).empty());
    } else {
      ++witnessed;
      REQUIRE(witness_ok(g, *r.witness, {2, m2}));
    }
  }
  CHECK(embedded > 0);
  CHECK(witnessed > 0);
}

TEST_CASE("embed_avoiding_multipartite") {
  LemmaOptions opt;
  Budget b;
  auto t = trees::random_bounded(12, 2, 0.3, 3);

  auto k1 = embed_avoiding_multipartite(complete(5), t, 2, 1, 3, opt, b);
  REQUIRE(k1.witness);
  CHECK(k1.witness->size() == 1);
  CHECK((*k1.witness)[0].size() == 3);

  // k = 2 is the bipartite version with m' = m.
  auto k100 = complete(100);
  auto two = embed_avoiding_multipartite(k100, t, 2, 2, 2, opt, b);
  auto direct = embed_avoiding_bipartite(k100, t, 2, 2, 2, opt, b);
  REQUIRE(two.embedded());
  REQUIRE(direct.embedded());
  CHECK(two.embedding->map == direct.embedding->map);

  // Two disjoint K_70 with sprinkled cross edges: |g| = 140 >= 2(12 + 52) + 2.
  Rng rng(9);
  Graph g(140);
  add_clique(g, 0, 70);
  add_clique(g, 70, 140);
  for (int i = 0; i < 40; ++i) g.add_edge(static_cast<int>(rng.below(70)), 70 + static_cast<int>(rng.below(70)));
  auto r = embed_avoiding_multipartite(g, t, 2, 3, 2, opt, b);
  REQUIRE(r.embedded());
  CHECK(valid_embedding(g, t, *r.embedding));

  // A weak pair forces one descent before the copy appears.
  Graph d(140);
  d.add_edge(0, 1);
  add_clique(d, 2, 140);
  auto dr = embed_avoiding_multipartite(d, t, 2, 3, 2, opt, b);
  REQUIRE(dr.embedded());
  CHECK(valid_embedding(d, t, *dr.embedding));
  REQUIRE(dr.trace.size() == 2);
  CHECK(dr.trace[0].outcome == "descend");
  CHECK(dr.trace[1].outcome == "embedded");

  // Two weak pairs: the cascade bottoms out in K^3_2 in the complement.
  Graph c(130);
  c.add_edge(0, 1);
  c.add_edge(2, 3);
  add_clique(c, 4, 130);
  auto cr = embed_avoiding_multipartite(c, t, 2, 3, 2, opt, b);
  REQUIRE(cr.witness);
  CHECK(witness_ok(c, *cr.witness, {2, 2, 2}));

  CHECK_THROWS_AS(embed_avoiding_multipartite(complete(120), t, 2, 3, 2, opt, b), PreconditionError);
}

TEST_CASE("embed_two_trees") {
  LemmaOptions opt;
  Budget b;
  auto ta = trees::path(5);
  auto tb = trees::random_bounded(8, 2, 0.3, 4);
  // 5 + 2(8 + 52) + 2 = 127.
  auto g = complete(127);
  auto r = embed_two_trees(g, ta, tb, 2, 3, 2, opt, b);
  REQUIRE(r.embedded());
  CHECK(valid_embedding(g, forest_union(ta, tb), *r.embedding));

  Graph c(130);
  c.add_edge(0, 1);
  c.add_edge(2, 3);
  add_clique(c, 4, 130);
  auto w = embed_two_trees(c, ta, tb, 2, 3, 2, opt, b);
  REQUIRE(w.witness);
  CHECK(witness_ok(c, *w.witness, {2, 2, 2}));

  CHECK_THROWS_AS(embed_two_trees(g, tb, ta, 2, 3, 2, opt, b), PreconditionError);
  CHECK_THROWS_AS(embed_two_trees(g, ta, tb, 2, 2, 2, opt, b), PreconditionError);
  CHECK_THROWS_AS(embed_two_trees(complete(126), ta, tb, 2, 3, 2, opt, b), PreconditionError);
}

TEST_CASE("embed_many_leaves") {
  LemmaOptions opt;
  Budget b;
  // 79 = 13*3*2 + 1 leaves, n = 156.
  auto t = comb(77);
  REQUIRE(leaves(t).size() == 79);
  // Red graph of the two-clique coloring on (n-1) + 2 vertices: K_156 plus an isolated vertex.
  Graph g(157);
  add_clique(g, 0, 156);
  auto r = embed_many_leaves(g, t, 3, {2, 2}, opt, b);
  REQUIRE(r.embedded());
  CHECK(valid_embedding(g, t, *r.embedding));
  CHECK(r.fp_mode == FPMode::heuristic);

  // Certified core copy with the size cap lifted: 40 leaves, sizes (1,1).
  LemmaOptions wide;
  wide.fp.max_forest = 100;
  auto t2 = comb(38);
  auto k78 = complete(78);
  auto c = embed_many_leaves(k78, t2, 3, {1, 1}, wide, b);
  REQUIRE(c.embedded());
  CHECK(c.e2_verified);
  CHECK(valid_embedding(k78, t2, *c.embedding));

  // Two isolated vertices give K_{2,2} in the complement.
  Graph w(158);
  add_clique(w, 0, 156);
  auto wr = embed_many_leaves(w, t, 3, {2, 2}, opt, b);
  REQUIRE(wr.witness);
  CHECK(witness_ok(w, *wr.witness, {2, 2}));

  CHECK_THROWS_AS(embed_many_leaves(g, comb(10), 3, {2, 2}, opt, b), PreconditionError);
  CHECK_THROWS_AS(embed_many_leaves(complete(156), t, 3, {2, 2}, opt, b), PreconditionError);
}
