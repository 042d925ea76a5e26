#include <catch_amalgamated.hpp>

#include "rgood/expander.hpp"

using namespace rgood;
using namespace rgood::graphs;

namespace {

// Straight from the definition over bitmasks, n <= 12.
bool expands_bruteforce(const Graph& g, unsigned w, const Rational& d) {
  int n = g.order();
  int wsize = __builtin_popcount(w);
  if (d == Rational(0)) return true;
  if (wsize == 0) return false;  // two empty sets have no edge between them
  int k = static_cast<int>(ceil_div(Rational(wsize), 2 * d));
  std::vector<unsigned> nb(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g.adjacent(u, v)) nb[u] |= 1U << v;
  for (unsigned x = 1; x < (1U << n); ++x) {
    int sz = __builtin_popcount(x);
    unsigned nx = 0;
    for (int u = 0; u < n; ++u)
      if (x >> u & 1U) nx |= nb[u];
    nx &= ~x;
    if (sz < k && Rational(__builtin_popcount(nx & w)) < d * sz) return false;
    if (sz == k) {
      unsigned rest = ((1U << n) - 1) & ~x & ~nx;
      if (__builtin_popcount(rest) >= k) return false;
    }
  }
  return true;
}

unsigned mask_of(const VertexSet& s) {
  unsigned m = 0;
  s.for_each([&](int v) { m |= 1U << v; });
  return m;
}

VertexSet random_subset(int n, double p, Rng& rng) {
  VertexSet s;
  for (int v = 0; v < n; ++v)
    if (rng.bernoulli(p)) s.set(v);
  return s;
}

}  // namespace

TEST_CASE("check_d_expands examples") {
  auto k10 = complete(10);
  auto r = check_d_expands(k10, VertexSet{0, 1, 2, 3, 4}, Rational(2));
  CHECK(r.holds());

  auto e = empty(6);
  auto f = check_d_expands(e, VertexSet{1, 2, 3}, Rational(1));
  REQUIRE(f.fails());
  CHECK(f.condition == 1);
  CHECK(f.witness.size() == 1);
  CHECK(is_genuine_violation(e, VertexSet{1, 2, 3}, Rational(1), f));

  // ceil(0 / 2d) = 0, and two empty sets have no edge between them.
  auto none = check_d_expands(complete(4), VertexSet{}, Rational(3));
  CHECK(none.fails());
  CHECK(none.condition == 2);
  CHECK(check_d_expands(e, e.vertices(), Rational(0)).holds());

  // ceil(40 / 2) = 20 is past the default cap.
  CHECK(check_d_expands(complete(40), complete(40).vertices(), Rational(1)).verdict == Verdict::unknown);
}

TEST_CASE("check_d_expands agrees with the definition") {
  Rng rng(2024);
  int fails = 0;
  for (int i = 0; i < 400; ++i) {
    int n = 3 + static_cast<int>(rng.below(7));
    auto g = gnp(n, 0.3 + 0.6 * rng.uniform01(), rng);
    auto w = random_subset(n, 0.6, rng);
    Rational d(1 + static_cast<int>(rng.below(6)), 1 + static_cast<int>(rng.below(2)));
    auto rep = check_d_expands(g, w, d);
    REQUIRE(rep.verdict != Verdict::unknown);
    INFO("n=" << n << " |W|=" << w.count() << " d=" << to_string(d));
    REQUIRE(rep.holds() == expands_bruteforce(g, mask_of(w), d));
    if (rep.fails()) {
      ++fails;
      REQUIRE(is_genuine_violation(g, w, d, rep));
    }
  }
  CHECK(fails > 20);
}

TEST_CASE("subset_expansion_closure on instances where the premise holds") {
  Rng rng(77);
  int premises = 0;
  int attempts = 0;
  int conclusions = 0;
  while (premises < 500 && attempts < 20000) {
    ++attempts;
    int n = 4 + static_cast<int>(rng.below(6));
    auto g = gnp(n, 0.5 + 0.45 * rng.uniform01(), rng);
    auto w = random_subset(n, 0.5, rng);
    auto z = w | random_subset(n, 0.5, rng);
    Rational d(2 + static_cast<int>(rng.below(5)), 1 + static_cast<int>(rng.below(2)));
    // c uniform among a few points of [d/(d-1), d] when that interval is nonempty.
    Rational lo = d > Rational(1) ? d / (d - Rational(1)) : d;
    Rational c = lo + (d - lo) * Rational(static_cast<int>(rng.below(3)), 2);
    Budget b;
    auto rep = subset_expansion_closure(g, w, z, d, c, b);
    if (!rep.premise.holds()) continue;
    ++premises;
    for (auto concl : {rep.restrict_host, rep.enlarge_target, rep.weaken_factor}) {
      INFO("n=" << n << " W=" << w.count() << " Z=" << z.count() << " d=" << to_string(d) << " c=" << to_string(c));
      REQUIRE(concl != Conclusion::fails);
      REQUIRE(concl != Conclusion::unknown);
      if (concl == Conclusion::holds) ++conclusions;
    }
  }
  CHECK(premises == 500);
  CHECK(conclusions > 500);

  // Degenerate cases.
  auto g = complete(6);
  VertexSet w{0, 1, 2};
  Budget b;
  auto same = subset_expansion_closure(g, w, w, Rational(2), Rational(2), b);
  CHECK(same.premise.holds());
  CHECK(same.restrict_host == Conclusion::holds);
  CHECK(same.enlarge_target == Conclusion::holds);
  CHECK(same.weaken_factor == Conclusion::holds);
  CHECK_THROWS_AS(subset_expansion_closure(g, VertexSet{0, 4}, w, Rational(2), Rational(2), b), PreconditionError);
}

namespace {

// No S of size 1..m in g - x violates the bound.
bool residual_clean(const Graph& g, const VertexSet& x, int m, const Rational& factor, Threshold t,
                    const VertexSet& target) {
  VertexSet rest = g.vertices() - x;
  Budget b = Budget::unlimited();
  auto end = first_subset_by_size(rest, m, b, [&](const std::vector<int>& s) {
    int nb = (neighborhood(g, VertexSet::from(s)) & rest & target).count();
    Rational bound = factor * static_cast<std::int64_t>(s.size());
    return t == Threshold::below ? Rational(nb) < bound : Rational(nb) <= bound;
  });
  return end == EnumerationEnd::complete;
}

}  // namespace

TEST_CASE("maximal_nonexpanding_set") {
  Budget b;
  Rng rng(5);
  auto dense = gnp(30, 0.8, rng);
  CHECK(maximal_nonexpanding_set(dense, 3, Rational(2), Threshold::below, std::nullopt, b).empty());

  // Isolated vertex 20 next to K_20.
  Graph iso(21);
  for (int u = 0; u < 20; ++u)
    for (int v = u + 1; v < 20; ++v) iso.add_edge(u, v);
  auto x = maximal_nonexpanding_set(iso, 3, Rational(1), Threshold::below, std::nullopt, b);
  CHECK(x.test(20));

  // K_20 with a pendant path 20-21-22 hanging off vertex 0.
  Graph pend(23);
  for (int u = 0; u < 20; ++u)
    for (int v = u + 1; v < 20; ++v) pend.add_edge(u, v);
  pend.add_edge(0, 20);
  pend.add_edge(20, 21);
  pend.add_edge(21, 22);
  auto px = maximal_nonexpanding_set(pend, 4, Rational(4), Threshold::below, std::nullopt, b);
  CHECK(px == VertexSet({20, 21, 22}));
  CHECK(residual_clean(pend, px, 4, Rational(4), Threshold::below, pend.vertices()));
  // With "at most", four clique vertices (16 outside neighbours) also count.
  CHECK_THROWS_AS(maximal_nonexpanding_set(pend, 4, Rational(4), Threshold::at_most, std::nullopt, b),
                  HypothesisViolated);

  // Too many weak vertices: the grown set reaches the cap.
  auto sparse = empty(8);
  try {
    maximal_nonexpanding_set(sparse, 3, Rational(1), Threshold::below, std::nullopt, b);
    FAIL("expected HypothesisViolated");
  } catch (const HypothesisViolated& e) {
    CHECK(e.witness().size() >= 3);
  }
  CHECK_THROWS_AS(maximal_nonexpanding_set(sparse, 9, Rational(1), Threshold::below, std::nullopt, b), CapExceeded);
}

TEST_CASE("maximal_nonexpanding_set postcondition on random graphs") {
  Rng rng(31);
  int returned = 0;
  for (int i = 0; i < 150; ++i) {
    int n = 8 + static_cast<int>(rng.below(8));
    auto g = gnp(n, 0.2 + 0.6 * rng.uniform01(), rng);
    int m = 2 + static_cast<int>(rng.below(2));
    Rational factor(1 + static_cast<int>(rng.below(3)));
    auto t = rng.bernoulli(0.5) ? Threshold::below : Threshold::at_most;
    std::optional<VertexSet> within;
    if (rng.bernoulli(0.3)) within = random_subset(n, 0.7, rng);
    Budget b;
    try {
      auto x = maximal_nonexpanding_set(g, m, factor, t, within, b);
      ++returned;
      REQUIRE(x.count() <= m - 1);
      REQUIRE(residual_clean(g, x, m, factor, t, within ? *within : g.vertices()));
    } catch (const HypothesisViolated& e) {
      REQUIRE(static_cast<int>(e.witness().size()) >= m);
      REQUIRE(static_cast<int>(e.witness().size()) <= 2 * m - 1);
    }
  }
  CHECK(returned > 10);
}

TEST_CASE("partition_expansion") {
  auto k40 = complete(40);
  VertexSet w = VertexSet::prefix(20);
  Budget b;
  auto one = partition_expansion(k40, w, Rational(40), {20}, 1, b);
  REQUIRE(one.parts.size() == 1);
  CHECK(one.parts[0] == w);
  CHECK(one.factors[0] == Rational(8));
  CHECK(check_d_expands(k40, one.parts[0], one.factors[0]).holds());

  auto two = partition_expansion(k40, w, Rational(40), {10, 10}, 1, b);
  REQUIRE(two.parts.size() == 2);
  CHECK(two.factors[0] == Rational(4));
  CHECK((two.parts[0] | two.parts[1]) == w);
  CHECK(!two.parts[0].intersects(two.parts[1]));
  for (int i = 0; i < 2; ++i) {
    CHECK(two.parts[i].count() == 10);
    CHECK(check_d_expands(k40, two.parts[i], two.factors[i]).holds());
  }
  // Factor 4/10 puts ceil(10 / (2 * 2/5)) = 13 past the enumeration cap.
  CHECK_THROWS_AS(partition_expansion(k40, w, Rational(4), {10, 10}, 1, b), CapExceeded);

  CHECK_THROWS_AS(partition_expansion(k40, w, Rational(4), {10, 9}, 1, b), PreconditionError);
  CHECK_THROWS_AS(partition_expansion(empty(10), VertexSet{0, 1}, Rational(1), {2}, 1, b), PreconditionError);
}
