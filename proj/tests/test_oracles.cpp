#include <cmath>

#include "doctest.h"
#include "loadmatch/balance.hpp"
#include "loadmatch/error.hpp"
#include "loadmatch/oracles.hpp"
#include "support.hpp"

using namespace loadmatch;

TEST_CASE("QP oracle symmetric cases") {
  const auto edge = loads_qp_oracle(graph_from_edges(2, {{0, 1}}).graph, 1e-13);
  CHECK(edge[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(edge[1] == doctest::Approx(0.5).epsilon(1e-12));
  for (const double l : loads_qp_oracle(test::triangle(), 1e-13)) CHECK(std::abs(l - 1.0) < 1e-12);
  for (const double l : loads_qp_oracle(test::path(3), 1e-13)) CHECK(std::abs(l - 2.0 / 3.0) < 1e-7);
  for (const double l : loads_qp_oracle(test::bowtie(), 1e-13)) CHECK(std::abs(l - 1.2) < 1e-7);
}

TEST_CASE("QP oracle agrees with the exact solver") {
  test::Lcg rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = test::random_graph(rng, 1 + rng.below(12), 0.1 + 0.6 * rng.uniform());
    const auto qp = loads_qp_oracle(g, 1e-13);
    const auto exact = balanced_loads(g);
    for (Vertex v = 0; v < g.num_vertices(); ++v) CHECK(std::abs(qp[v] - exact.loads[v].to_double()) < 1e-7);
  }
}

TEST_CASE("ft_bruteforce") {
  const auto a = ft_bruteforce(test::triangle(), Rational(1));
  CHECK(a.value == Rational(0));
  CHECK(a.maximizer == VertexSet::range(3));
  const auto b = ft_bruteforce(test::triangle(), Rational(1, 2));
  CHECK(b.value == Rational(0));
  CHECK(b.maximizer.empty());
  try {
    (void)ft_bruteforce(Graph(21), Rational(1));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooLarge);
  }
}

TEST_CASE("densest density matches the top block") {
  test::Lcg rng(23);
  CHECK(densest_density(Graph(4)) == Rational(0));
  CHECK(densest_density(test::complete(5)) == Rational(2));
  CHECK(densest_density(test::bowtie()) == Rational(6, 5));
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    const Graph g = test::random_graph(rng, n, 4.0 * rng.uniform() / static_cast<double>(n));
    CHECK(densest_density(g) == balanced_loads(g).max_load());
  }
}

TEST_CASE("admissibility") {
  AdmissibilityParams p;
  p.max_degree_cap = 3;
  p.d_n = 10;
  p.neighborhood_radius = 2;
  p.small_subgraph_cap = 6;
  p.cycle_count_base = 2;
  p.cycle_length_cap = 6;
  CHECK(admissibility_check(Graph(5), p).ok);
  CHECK(admissibility_check(Graph(0), p).ok);

  std::vector<std::pair<Vertex, Vertex>> star;
  for (Vertex v = 1; v <= 5; ++v) star.emplace_back(0, v);
  const auto s = admissibility_check(graph_from_edges(6, star).graph, p);
  CHECK_FALSE(s.ok);
  CHECK(s.first_violation == "i");

  // Two triangles sharing an edge: 4 vertices, 5 edges.
  const Graph diamond = graph_from_edges(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}).graph;
  const auto d = admissibility_check(diamond, p);
  CHECK_FALSE(d.ok);
  CHECK(d.first_violation == "iii");
  p.small_subgraph_cap = 4;  // only connected sets on <= 3 vertices
  CHECK(admissibility_check(diamond, p).ok);

  // (ii): with D_n = 1 every vertex of a triangle is high degree.
  AdmissibilityParams q = p;
  q.d_n = 1;
  const auto t = admissibility_check(test::triangle(), q);
  CHECK_FALSE(t.ok);
  CHECK(t.first_violation == "ii");

  // (iv): K4 has 4 triangles, more than 1^3.
  AdmissibilityParams r = p;
  r.max_degree_cap = 10;
  r.small_subgraph_cap = 0;
  r.cycle_count_base = 1.5;
  const auto k = admissibility_check(test::complete(4), r);
  CHECK_FALSE(k.ok);
  CHECK(k.first_violation == "iv");

  AdmissibilityParams tiny = r;
  tiny.node_budget = 3;
  tiny.cycle_count_base = 100;
  CHECK_THROWS_AS((void)admissibility_check(test::complete(6), tiny), Error);

  const auto def = AdmissibilityParams::defaults(1000, 0.8, 0.1);
  CHECK(def.c_param == 11);
  CHECK(def.neighborhood_radius == 24);
}

TEST_CASE("admissibility is monotone in edges for (i) and (iv)") {
  test::Lcg rng(29);
  AdmissibilityParams p;
  p.max_degree_cap = 4;
  p.d_n = 100;
  p.neighborhood_radius = 1;
  p.small_subgraph_cap = 0;
  p.cycle_count_base = 1.3;
  p.cycle_length_cap = 5;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(9);
    const Graph g = test::random_graph(rng, n, 0.35);
    auto edges = g.edges();
    const auto a = static_cast<Vertex>(rng.below(n));
    auto b = static_cast<Vertex>(rng.below(n - 1));
    if (b >= a) ++b;
    edges.push_back(make_edge(a, b));
    const Graph h = graph_from_canonical_edges(n, edges);
    if (!admissibility_check(g, p).ok) CHECK_FALSE(admissibility_check(h, p).ok);
  }
}

TEST_CASE("event D") {
  CHECK(event_d_check(Graph(4), 0, 0).holds);
  CHECK(event_d_check(test::complete(4), 3, 0).holds);
  const auto r = event_d_check(test::complete(4), 1, 0);
  CHECK_FALSE(r.holds);
  CHECK_FALSE(r.sampled);
  CHECK(r.witness.size() == 1);
  const auto big = event_d_check(test::path(30), 2, 0, 1, 1000);
  CHECK(big.sampled);
  CHECK(big.holds);
  CHECK_FALSE(event_d_check(test::complete(25), 1, 0, 1, 100).holds);
}
