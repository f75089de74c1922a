#include <sstream>

#include "doctest.h"
#include "loadmatch/error.hpp"
#include "loadmatch/graph.hpp"
#include "support.hpp"

using namespace loadmatch;

TEST_CASE("graph_from_edges builds canonical edge sets") {
  const auto tri = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(tri.graph.num_edges() == 3);
  CHECK(tri.duplicates_removed == 0);

  const auto dup = graph_from_edges(2, {{0, 1}, {1, 0}});
  CHECK(dup.graph.num_edges() == 1);
  CHECK(dup.duplicates_removed == 1);
  CHECK(dup.graph.edges()[0] == Edge{0, 1});
}

TEST_CASE("graph_from_edges rejects bad input") {
  try {
    (void)graph_from_edges(2, {{0, 0}});
    FAIL("expected SelfLoop");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSelfLoop);
  }
  try {
    (void)graph_from_edges(2, {{0, 2}});
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfRange);
  }
}

TEST_CASE("induced subgraph") {
  const Graph tri = test::triangle();
  const auto sub = induced_subgraph(tri, VertexSet{0, 1});
  CHECK(sub.graph.num_vertices() == 2);
  CHECK(sub.graph.num_edges() == 1);

  const auto empty = induced_subgraph(tri, VertexSet{});
  CHECK(empty.graph.num_vertices() == 0);
  CHECK(empty.graph.num_edges() == 0);

  const auto bow = induced_subgraph(test::bowtie(), VertexSet{0, 1, 2});
  CHECK(bow.graph == tri);
  CHECK(bow.to_parent == std::vector<Vertex>{0, 1, 2});

  CHECK_THROWS_AS((void)induced_subgraph(tri, VertexSet{3}), Error);

  const auto whole = induced_subgraph(test::bowtie(), VertexSet::range(5));
  CHECK(whole.graph == test::bowtie());
}

TEST_CASE("tree components and non-simple 2-cores") {
  const Graph forest = graph_from_edges(6, {{0, 1}, {1, 2}, {3, 4}}).graph;
  CHECK(tree_components(forest) == VertexSet::range(6));
  CHECK(tree_components(test::triangle()).empty());

  // triangle + edge + isolated vertex
  const Graph mix = graph_from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}}).graph;
  CHECK(tree_components(mix) == VertexSet{3, 4, 5});

  CHECK(two_cores_of_nonsimple_components(test::triangle()).empty());
  CHECK(two_cores_of_nonsimple_components(test::bowtie()) == VertexSet::range(5));

  // K4 on 0..3 with pendant path 3-4-5.
  const Graph k4p = graph_from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}}).graph;
  CHECK(two_cores_of_nonsimple_components(k4p) == VertexSet{0, 1, 2, 3});
}

TEST_CASE("structural invariants over random graphs") {
  test::Lcg rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = test::random_graph(rng, 1 + rng.below(12), 0.3);
    std::size_t deg_sum = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) deg_sum += g.degree(v);
    CHECK(deg_sum == 2 * g.num_edges());
    const auto trees = tree_components(g);
    const auto cores = two_cores_of_nonsimple_components(g);
    CHECK(set_intersection(trees, cores).empty());
  }
}

TEST_CASE("edge list round trip") {
  const Graph g = test::bowtie();
  std::stringstream ss;
  write_edge_list(ss, g);
  CHECK(read_edge_list(ss) == g);

  std::stringstream bad("2 1\n1 1\n");
  CHECK_THROWS_AS((void)read_edge_list(bad), Error);
}
