#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace loadmatch {

using Vertex = std::uint32_t;

// Unordered pair stored in canonical order u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Ascending, duplicate-free subset of {0..n-1}.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> members);
  static VertexSet from_unsorted(std::vector<Vertex> members);
  static VertexSet from_sorted(std::vector<Vertex> members);  // caller guarantees ascending order
  static VertexSet range(std::size_t n);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Vertex v) const;
  const std::vector<Vertex>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  // Membership bitmap over [0, n).
  std::vector<char> mask(std::size_t n) const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);

// Immutable simple undirected graph on vertices 0..n-1 with a CSR adjacency.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), offsets_(n + 1, 0) {}

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex a, Vertex b) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  friend Graph graph_from_canonical_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;  // sorted
  std::vector<std::size_t> offsets_ = {0};
  std::vector<Vertex> adj_;  // sorted per vertex
};

struct EdgeListBuild {
  Graph graph;
  std::size_t duplicates_removed = 0;
};

// Validates and canonicalizes an arbitrary pair list; throws SelfLoop / OutOfRange.
EdgeListBuild graph_from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs);
EdgeListBuild graph_from_edges(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> pairs);

// Fast path for already-canonical input (u < v, in range); duplicates are removed.
Graph graph_from_canonical_edges(std::size_t n, std::vector<Edge> edges);

struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_parent;  // local index -> parent vertex (ascending)
};

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& u);

// Number of edges with both endpoints in u.
std::size_t count_edges_within(const Graph& g, const VertexSet& u);

// Component id per vertex (ids assigned in order of smallest member), and count.
std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count = nullptr);

VertexSet tree_components(const Graph& g);
VertexSet two_cores_of_nonsimple_components(const Graph& g);

// Edge-list text format: "n m" header, then m lines "i j" (0-indexed).
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace loadmatch
