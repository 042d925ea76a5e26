#include <catch_amalgamated.hpp>

#include <sstream>

#include "rgood/graph.hpp"
#include "rgood/subgraph.hpp"

using namespace rgood;

namespace {

// Plain recursive assignment of every vertex to "unused" or one of the parts.
bool naive_multipartite(const Graph& g, const std::vector<int>& sizes) {
  int n = g.order();
  int k = static_cast<int>(sizes.size());
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::function<bool(int)> rec = [&](int v) -> bool {
    if (v == n) {
      std::vector<int> cnt(static_cast<std::size_t>(k), 0);
      for (int x : label)
        if (x >= 0) ++cnt[x];
      if (cnt != sizes) return false;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (label[a] >= 0 && label[b] >= 0 && label[a] != label[b] && !g.adjacent(a, b)) return false;
      return true;
    }
    for (int l = -1; l < k; ++l) {
      label[v] = l;
      if (rec(v + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace

TEST_CASE("complement") {
  CHECK(complement(graphs::complete(3)) == graphs::empty(3));
  CHECK(complement(graphs::empty(5)) == graphs::complete(5));
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    Graph g = graphs::gnp(1 + static_cast<int>(rng.below(20)), 0.4, rng);
    CHECK(complement(complement(g)) == g);
    long n = g.order();
    CHECK(g.edge_count() + complement(g).edge_count() == n * (n - 1) / 2);
  }
}

TEST_CASE("neighborhood and gamma") {
  Graph e = graphs::path(2);
  CHECK(neighborhood(e, {0}) == VertexSet{1});

  Graph two = graphs::disjoint_union(graphs::cycle(4), graphs::path(3));
  CHECK(neighborhood(two, {0, 1, 2, 3}).empty());

  Graph p4 = graphs::path(4);  // a-b-c-d as 0-1-2-3
  CHECK(neighborhood(p4, {1, 2}) == VertexSet({0, 3}));
  CHECK(gamma(p4, {1, 2}) == VertexSet({0, 1, 2, 3}));

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Graph g = graphs::gnp(12, 0.3, rng);
    VertexSet s;
    for (int v = 0; v < 12; ++v)
      if (rng.bernoulli(0.3)) s.set(v);
    VertexSet n = neighborhood(g, s);
    CHECK_FALSE(n.intersects(s));
    CHECK(n.subset_of(gamma(g, s)));
  }
}

TEST_CASE("find_multipartite examples") {
  Budget b;
  auto r = find_multipartite(graphs::cycle(4), {2, 2}, b);
  REQUIRE(r.found());
  CHECK(*r.value == Parts{{0, 2}, {1, 3}});

  auto one = find_multipartite(graphs::empty(6), {4}, b);
  REQUIRE(one.found());
  CHECK(one.value->at(0).size() == 4);

  CHECK(find_multipartite(graphs::empty(5), {1, 1}, b).absent());
  CHECK(find_multipartite(graphs::complete(3), {2, 2}, b).absent());
}

TEST_CASE("find_multipartite budget gives unknown") {
  Budget b{5, 0};
  Graph g = complement(graphs::complete_multipartite({6, 6, 6}));
  auto r = find_multipartite(g, {3, 3}, b);
  CHECK(r.unknown());
}

TEST_CASE("find_multipartite agrees with naive oracle") {
  Rng rng(2024);
  const std::vector<std::vector<int>> specs{{1}, {2}, {1, 1}, {1, 2}, {2, 2}, {1, 1, 1}, {1, 1, 2}, {2, 3}, {1, 2, 2}, {3, 3}};
  for (int trial = 0; trial < 400; ++trial) {
    int n = 1 + static_cast<int>(rng.below(7));
    Graph g = graphs::gnp(n, rng.uniform01(), rng);
    for (const auto& spec : specs) {
      Budget b;
      auto r = find_multipartite(g, spec, b);
      REQUIRE_FALSE(r.unknown());
      bool expect = naive_multipartite(g, spec);
      CHECK(r.found() == expect);
      if (r.found()) CHECK(valid_multipartite(g, *r.value, spec));
    }
  }
}

TEST_CASE("contains_forest_copy examples") {
  Budget b;
  auto p3 = contains_forest_copy(graphs::complete(3), trees::path(3), b);
  REQUIRE(p3.found());
  CHECK(valid_embedding(graphs::complete(3), trees::path(3), *p3.value));

  CHECK(contains_forest_copy(graphs::cycle(5), trees::star(4), b).absent());

  auto p6 = contains_forest_copy(graphs::prism(), trees::path(6), b);
  REQUIRE(p6.found());
  CHECK(valid_embedding(graphs::prism(), trees::path(6), *p6.value));

  // Disconnected host pieces too small for the tree.
  Graph two_k4 = graphs::disjoint_union(graphs::complete(4), graphs::complete(4));
  CHECK(contains_forest_copy(two_k4, trees::path(5), b).absent());
}

TEST_CASE("monomorphism respects fixed vertices and allowed hosts") {
  Budget b;
  Graph g = graphs::cycle(6);
  MonomorphismOptions opt;
  opt.fixed = {{0, 3}};
  auto r = contains_forest_copy(g, trees::path(3), b, opt);
  REQUIRE(r.found());
  CHECK(r.value->map[0] == 3);
  CHECK(valid_embedding(g, trees::path(3), *r.value, {3}));

  opt.allowed = VertexSet{2, 3};
  CHECK(contains_forest_copy(g, trees::path(3), b, opt).absent());
}

TEST_CASE("graph text round trip") {
  std::istringstream in("# a square\n4 4\n0 1\n1 2\n\n2 3\n0 3\n");
  Graph g = read_graph_text(in);
  CHECK(g == graphs::cycle(4));
  std::ostringstream out;
  write_graph_text(out, g);
  std::istringstream back(out.str());
  CHECK(read_graph_text(back) == g);

  std::istringstream dup("2 2\n0 1\n1 0\n");
  CHECK_THROWS_AS(read_graph_text(dup), PreconditionError);
  CHECK_THROWS_AS(Graph(3).add_edge(1, 1), PreconditionError);
}

TEST_CASE("random regular graphs are regular") {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    Graph g = graphs::random_regular(30, 5 + (i % 2), rng);
    for (int v = 0; v < 30; ++v) CHECK(g.degree(v) == 5 + (i % 2));
  }
}
