#include "doctest.h"
#include "loadmatch/balance.hpp"
#include "loadmatch/corrmodel.hpp"
#include "loadmatch/intersect.hpp"
#include "support.hpp"

using namespace loadmatch;

TEST_CASE("matching basics") {
  CHECK(test::throws_code([] { Matching({0, 0, 1}); }, ErrorCode::kInvalidArgument));
  CHECK(test::throws_code([] { Matching({0, 3, 1}); }, ErrorCode::kInvalidArgument));
  const Matching c({1, 2, 0});
  CHECK((c * c.inverse()) == Matching::identity(3));
  CHECK((c * c)(0) == 2);
  CHECK(overlap(c, Matching::identity(3)) == 0);
  CHECK(overlap(c, c) == 3);
  CHECK(test::throws_code([&] { (void)overlap(c, Matching::identity(4)); }, ErrorCode::kSizeMismatch));
}

TEST_CASE("partial matching") {
  PartialMatching pm(4);
  pm.assign(1, 3);
  CHECK(test::throws_code([&] { pm.assign(1, 0); }, ErrorCode::kInvalidArgument));
  CHECK(test::throws_code([&] { pm.assign(2, 3); }, ErrorCode::kInvalidArgument));
  CHECK(pm.domain() == VertexSet::from_sorted({1}));
  CHECK(pm.range() == VertexSet::from_sorted({3}));
  const Matching ext = pm.lowest_extension();
  CHECK(ext == Matching({0, 3, 1, 2}));
  CHECK(pm.agrees_with(ext));
  CHECK_FALSE(pm.agrees_with(Matching::identity(4)));
}

TEST_CASE("intersection graph examples") {
  const Graph k4 = test::complete(4);
  CHECK(intersection_graph(k4, k4, Matching::identity(4)).edges() == k4.edges());
  const Graph empty = graph_from_edges(4, {}).graph;
  CHECK(intersection_graph(k4, empty, Matching({2, 0, 3, 1})).num_edges() == 0);

  const Graph g1 = graph_from_edges(3, {{0, 1}}).graph;
  const Graph g2 = graph_from_edges(3, {{1, 2}}).graph;
  const Matching cyc({1, 2, 0});
  const Graph h = intersection_graph(g1, g2, cyc);
  REQUIRE(h.num_edges() == 1);
  CHECK(h.has_edge(0, 1));
  // The inverse convention sends (0,1) to (2,0), which is absent.
  CHECK(intersection_graph(g1, g2, cyc, Convention::kInverse).num_edges() == 0);
  // The two conventions swap under pi <-> pi^-1.
  CHECK(intersection_graph(g1, g2, cyc.inverse(), Convention::kInverse).edges() == h.edges());

  CHECK(test::throws_code([&] { (void)intersection_graph(g1, g2, Matching::identity(4)); },
                          ErrorCode::kDomainMismatch));
  PartialMatching pm(3);
  pm.assign(0, 1);
  CHECK(test::throws_code([&] { (void)intersection_graph(g1, g2, pm, VertexSet::range(2)); },
                          ErrorCode::kDomainMismatch));
  pm.assign(1, 2);
  CHECK(intersection_graph(g1, g2, pm, VertexSet::range(2)).has_edge(0, 1));
}

TEST_CASE("ft_pi examples") {
  const Graph tri = test::triangle();
  CHECK(ft_pi(tri, tri, Matching::identity(3), Rational(1), VertexSet{}) == Rational(0));
  CHECK(ft_pi(tri, tri, Matching::identity(3), Rational(1), VertexSet::range(3)) == Rational(0));
}

TEST_CASE("intersection graph properties") {
  test::Lcg rng(71, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(8);
    const Graph g1 = test::random_graph(rng, n, 0.5);
    const Graph g2 = test::random_graph(rng, n, 0.5);
    const Matching pi = test::random_matching(rng, n);
    const Graph h = intersection_graph(g1, g2, pi);
    CHECK(h.num_edges() <= std::min(g1.num_edges(), g2.num_edges()));
    for (const Edge& e : h.edges()) {
      CHECK(g1.has_edge(e.u, e.v));
      CHECK(g2.has_edge(pi(e.u), pi(e.v)));
    }
    // Counting directly over G1 edges.
    std::size_t direct = 0;
    for (const Edge& e : g1.edges()) direct += g2.has_edge(pi(e.u), pi(e.v)) ? 1 : 0;
    CHECK(direct == h.num_edges());

    // Extension independence: a partial matching on a random domain and two
    // different completions agree on H(U).
    std::vector<Vertex> dom;
    for (Vertex v = 0; v < n; ++v) {
      if (rng.bernoulli(0.6)) dom.push_back(v);
    }
    const VertexSet u = VertexSet::from_sorted(dom);
    const PartialMatching part = PartialMatching::restrict(pi, u);
    const Matching low = part.lowest_extension();
    std::vector<Vertex> free_images;
    for (Vertex v = 0; v < n; ++v) {
      if (!part.range().contains(v)) free_images.push_back(v);
    }
    std::reverse(free_images.begin(), free_images.end());
    std::vector<Vertex> other = part.raw();
    std::size_t next = 0;
    for (auto& v : other) {
      if (v == PartialMatching::kUnset) v = free_images[next++];
    }
    const Matching high(other);
    const auto via_part = intersection_graph(g1, g2, part, u).edges();
    CHECK(intersection_graph(g1, g2, low, u).edges() == via_part);
    CHECK(intersection_graph(g1, g2, high, u).edges() == via_part);

    const Rational t(1 + static_cast<std::int64_t>(rng.below(4)), 1 + static_cast<std::int64_t>(rng.below(3)));
    CHECK(ft_pi(g1, g2, pi, t, u) == ft_value(h, t, u));
  }
}

TEST_CASE("planted intersection graph is the I J1 J2 graph") {
  const ModelParams m = forced_params(40, 0.3, 0.7);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CorrelatedPair pair = sample_correlated_pair(m, seed);
    const IndicatorSource src(m, seed);
    std::vector<Edge> expect;
    for (Vertex i = 0; i < m.n; ++i) {
      for (Vertex j = i + 1; j < m.n; ++j) {
        const auto idx = pair_index(i, j, m.n);
        const auto idx2 = pair_index(pair.pi_star(i), pair.pi_star(j), m.n);
        if (src.I(idx) && src.J1(idx) && src.J2(idx2)) expect.push_back({i, j});
      }
    }
    CHECK(intersection_graph(pair.g1, pair.g2, pair.pi_star).edges() == expect);
  }
}
