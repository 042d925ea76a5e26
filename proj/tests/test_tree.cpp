#include <catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "rgood/tree.hpp"

using namespace rgood;

namespace {

bool is_connected_tree(const RootedForest& t) {
  return t.is_tree() && static_cast<int>(t.tree_of_root(t.roots()[0]).size()) == t.size();
}

int ceil_n_over_4r(int n, int r) { return (n + 4 * r - 1) / (4 * r); }

}  // namespace

TEST_CASE("random bounded trees") {
  CHECK(trees::random_bounded(1, 2, 0.5, 1).size() == 1);
  for (double bias : {0.0, 0.5, 1.0}) {
    auto t = trees::random_bounded(10, 2, bias, 9);
    CHECK(is_connected_tree(t));
    CHECK(t.actual_max_degree() == 2);
    CHECK(leaves(t).size() == 2);
  }
  auto t = trees::random_bounded(50, 3, 1.0, 7);
  CHECK(is_connected_tree(t));
  CHECK(t.size() == 50);
  CHECK(t.actual_max_degree() <= 3);
  CHECK(trees::random_bounded(50, 3, 1.0, 7) == t);
  // A bias of zero always extends the newest vertex.
  CHECK(trees::random_bounded(30, 4, 0.0, 3).edges() == trees::path(30).edges());
}

TEST_CASE("forest construction rejects bad input") {
  CHECK_THROWS_AS(RootedForest({1, 0}, 2), PreconditionError);
  CHECK_THROWS_AS(RootedForest({-1, 0, 0, 0}, 2), PreconditionError);
  CHECK_THROWS_AS(RootedForest::from_edges(3, {{0, 1}, {1, 2}, {2, 0}}, 2), PreconditionError);
}

TEST_CASE("leaves") {
  CHECK(leaves(trees::path(2)).size() == 2);
  CHECK(leaves(trees::path(9)).size() == 2);
  CHECK(leaves(trees::star(8)).size() == 7);
  CHECK(leaves(trees::spider(3, 3)).size() == 3);
  CHECK(leaves(trees::single_vertex()).size() == 1);
}

TEST_CASE("leaves_or_bare_paths examples") {
  auto p13 = trees::path(13);
  auto lf = leaves_or_bare_paths(p13, 3);
  CHECK(lf.required == 2);
  CHECK(lf.branch == Branch::leaves);
  CHECK(lf.leaves.size() == 2);

  auto pf = leaves_or_bare_paths(p13, 3, BranchPreference::paths_first);
  REQUIRE(pf.branch == Branch::paths);
  CHECK(pf.paths.paths.size() >= 2);
  CHECK_NOTHROW(validate_bare_paths(p13, pf.paths));

  auto star = leaves_or_bare_paths(trees::star(21), 3);
  CHECK(star.branch == Branch::leaves);
  CHECK(star.leaves.size() == 20);

  CHECK_THROWS_AS(leaves_or_bare_paths(trees::path(2), 3), PreconditionError);
}

TEST_CASE("leaves_or_bare_paths on random small trees") {
  Rng rng(77);
  for (int i = 0; i < 10000; ++i) {
    int n = 3 + static_cast<int>(rng.below(12));
    int delta = 2 + static_cast<int>(rng.below(4));
    auto t = trees::random_bounded(n, delta, rng.uniform01(), rng());
    for (auto pref : {BranchPreference::leaves_first, BranchPreference::paths_first}) {
      auto res = leaves_or_bare_paths(t, 3, pref);
      int need = ceil_n_over_4r(n, 3);
      if (res.branch == Branch::leaves) {
        REQUIRE(static_cast<int>(res.leaves.size()) >= need);
        for (int v : res.leaves) REQUIRE(t.degree(v) <= 1);
      } else {
        REQUIRE(static_cast<int>(res.paths.paths.size()) >= need);
        REQUIRE_NOTHROW(validate_bare_paths(t, res.paths));
      }
    }
  }
}

TEST_CASE("harvested paths meet the bound whenever leaves do not") {
  Rng rng(5);
  for (int i = 0; i < 3000; ++i) {
    int n = 3 + static_cast<int>(rng.below(300));
    int r = 3 + static_cast<int>(rng.below(5));
    auto t = trees::random_bounded(n, 2 + static_cast<int>(rng.below(4)), rng.uniform01() * 0.3, rng());
    int need = ceil_n_over_4r(n, r);
    auto ps = harvest_bare_paths(t, r);
    REQUIRE_NOTHROW(validate_bare_paths(t, ps));
    if (static_cast<int>(leaves(t).size()) < need) REQUIRE(static_cast<int>(ps.paths.size()) >= need);
  }
}

TEST_CASE("validate_bare_paths rejects bad collections") {
  auto t = trees::spider(3, 4);  // centre 0 of degree 3
  BarePathCollection through_centre{{{1, 0, 5, 6}}, 3};
  CHECK_THROWS_AS(validate_bare_paths(t, through_centre), InvalidPaths);
  BarePathCollection overlap{{{1, 2, 3, 4}, {4, 3, 2, 1}}, 3};
  CHECK_THROWS_AS(validate_bare_paths(t, overlap), InvalidPaths);
  BarePathCollection short_path{{{1, 2, 3}}, 3};
  CHECK_THROWS_AS(validate_bare_paths(t, short_path), InvalidPaths);
  BarePathCollection gap{{{1, 2, 4, 3}}, 3};
  CHECK_THROWS_AS(validate_bare_paths(t, gap), InvalidPaths);
}

TEST_CASE("centroid_split examples") {
  auto p3 = centroid_split(trees::path(3));
  CHECK(p3.u == 1);
  CHECK(p3.a.size() == 1);
  CHECK(p3.b.size() == 1);

  auto p7 = centroid_split(trees::path(7));
  CHECK(p7.u == 3);
  CHECK(p7.a.size() == 3);
  CHECK(p7.b.size() == 3);

  auto p2 = centroid_split(trees::path(2));
  CHECK(p2.a.size() + p2.b.size() == 1);
}

TEST_CASE("centroid_split property") {
  Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    int n = 2 + static_cast<int>(rng.below(i < 250 ? 200 : 20000));
    auto t = trees::random_bounded(n, 2 + static_cast<int>(rng.below(5)), rng.uniform01(), rng());
    auto s = centroid_split(t);
    std::vector<int> side(static_cast<std::size_t>(n), 0);
    side[s.u] = 3;
    for (int v : s.a) side[v] += 1;
    for (int v : s.b) side[v] += 2;
    for (int v = 0; v < n; ++v) REQUIRE(side[v] != 0);
    REQUIRE(static_cast<int>(s.a.size() + s.b.size()) == n - 1);
    REQUIRE(static_cast<int>(s.a.size()) <= 2 * n / 3);
    REQUIRE(static_cast<int>(s.b.size()) <= 2 * n / 3);
    for (auto [x, y] : t.edges()) REQUIRE(side[x] + side[y] != 3);
  }
}

TEST_CASE("strip_bare_path_interiors") {
  auto p7 = trees::path(7);
  auto s4 = strip_bare_path_interiors(p7, BarePathCollection{{{1, 2, 3, 4, 5}}, 4});
  CHECK(s4.rest.forest.size() == 4);
  CHECK(s4.rest.forest.roots().size() == 2);
  CHECK(s4.endpoint_pairs == std::vector<std::pair<int, int>>{{1, 5}});

  auto s3 = strip_bare_path_interiors(p7, BarePathCollection{{{2, 3, 4, 5}}, 3});
  CHECK(s3.rest.forest.size() == 5);
  CHECK(s3.rest.to_original == std::vector<int>{0, 1, 2, 5, 6});

  auto id = strip_bare_path_interiors(p7, BarePathCollection{{}, 3});
  CHECK(id.rest.forest.edges() == p7.edges());

  CHECK_THROWS_AS(strip_bare_path_interiors(trees::star(5), BarePathCollection{{{1, 0, 2, 3}}, 3}), InvalidPaths);

  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    int n = 3 + static_cast<int>(rng.below(150));
    auto t = trees::random_bounded(n, 3, 0.1, rng());
    auto res = leaves_or_bare_paths(t, 3, BranchPreference::paths_first);
    if (res.branch != Branch::paths) continue;
    auto s = strip_bare_path_interiors(t, res.paths);
    CHECK(s.rest.forest.size() == n - 2 * static_cast<int>(res.paths.paths.size()));
  }
}

TEST_CASE("strip_leaves") {
  auto star = strip_leaves(trees::star(6));
  CHECK(star.core.forest.size() == 1);
  CHECK(star.demands.at(0) == 5);

  auto p4 = strip_leaves(trees::path(4));
  CHECK(p4.core.to_original == std::vector<int>{1, 2});
  CHECK(p4.demands.at(1) == 1);
  CHECK(p4.demands.at(2) == 1);

  auto p2 = strip_leaves(trees::path(2));
  CHECK(p2.core.forest.size() == 1);
  CHECK(p2.demands.at(0) == 1);

  Rng rng(60);
  for (int i = 0; i < 50; ++i) {
    auto t = trees::random_bounded(60, 4, 0.7, rng());
    auto s = strip_leaves(t);
    int total = 0;
    for (auto [v, c] : s.demands) total += c;
    CHECK(s.core.forest.size() + total == 60);
    // Re-attach fresh leaves to the core: degree sequence matches the original.
    std::multiset<int> original, rebuilt;
    for (int v = 0; v < 60; ++v) original.insert(t.degree(v));
    for (int i2 = 0; i2 < s.core.forest.size(); ++i2) {
      int v = s.core.to_original[i2];
      int d = s.core.forest.degree(i2) + (s.demands.count(v) ? s.demands.at(v) : 0);
      CHECK(d <= 4);
      rebuilt.insert(d);
    }
    for (int j = 0; j < total; ++j) rebuilt.insert(1);
    CHECK(rebuilt == original);
  }
}

TEST_CASE("tree text round trip") {
  std::istringstream in("5; 0 0 1 1");
  auto t = read_tree_text(in);
  CHECK(t.size() == 5);
  CHECK(t.parent(3) == 1);
  std::ostringstream out;
  write_tree_text(out, t);
  CHECK(out.str() == "5; 0 0 1 1\n");
  std::istringstream bad("3; 0");
  CHECK_THROWS_AS(read_tree_text(bad), PreconditionError);
}
