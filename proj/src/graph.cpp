#include "loadmatch/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "loadmatch/error.hpp"

namespace loadmatch {

VertexSet::VertexSet(std::initializer_list<Vertex> members) : members_(members) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet VertexSet::from_unsorted(std::vector<Vertex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  VertexSet s;
  s.members_ = std::move(members);
  return s;
}

VertexSet VertexSet::from_sorted(std::vector<Vertex> members) {
  VertexSet s;
  s.members_ = std::move(members);
  return s;
}

VertexSet VertexSet::range(std::size_t n) {
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  return from_sorted(std::move(all));
}

bool VertexSet::contains(Vertex v) const { return std::binary_search(members_.begin(), members_.end(), v); }

std::vector<char> VertexSet::mask(std::size_t n) const {
  std::vector<char> m(n, 0);
  for (Vertex v : members_) {
    if (v >= n) throw Error(ErrorCode::kOutOfRange, "vertex " + std::to_string(v) + " >= " + std::to_string(n));
    m[v] = 1;
  }
  return m;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet::from_sorted(std::move(out));
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet::from_sorted(std::move(out));
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet::from_sorted(std::move(out));
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a >= n_ || b >= n_ || a == b) return false;
  if (degree(a) > degree(b)) std::swap(a, b);
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

Graph graph_from_canonical_edges(std::size_t n, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Graph g(n);
  g.edges_ = std::move(edges);
  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.adj_.resize(2 * g.edges_.size());
  std::vector<std::size_t> pos(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so each adjacency list fills in ascending order
  // for the "v" side; the "u" side entries arrive ascending as well.
  for (const Edge& e : g.edges_) g.adj_[pos[e.u]++] = e.v;
  for (const Edge& e : g.edges_) g.adj_[pos[e.v]++] = e.u;
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
  }
  return g;
}

EdgeListBuild graph_from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a == b) throw Error(ErrorCode::kSelfLoop, "self-loop at vertex " + std::to_string(a));
    if (a >= n || b >= n) {
      throw Error(ErrorCode::kOutOfRange,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") outside [0," + std::to_string(n) + ")");
    }
    edges.push_back(make_edge(a, b));
  }
  const std::size_t raw = edges.size();
  EdgeListBuild out;
  out.graph = graph_from_canonical_edges(n, std::move(edges));
  out.duplicates_removed = raw - out.graph.num_edges();
  return out;
}

EdgeListBuild graph_from_edges(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> pairs) {
  return graph_from_edges(n, std::span<const std::pair<Vertex, Vertex>>(pairs.begin(), pairs.size()));
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& u) {
  const std::size_t n = g.num_vertices();
  std::vector<std::int64_t> local(n, -1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vertex v = u.members()[i];
    if (v >= n) throw Error(ErrorCode::kOutOfRange, "vertex " + std::to_string(v) + " not in graph");
    local[v] = static_cast<std::int64_t>(i);
  }
  std::vector<Edge> edges;
  for (const Vertex v : u) {
    for (const Vertex w : g.neighbors(v)) {
      if (w > v && local[w] >= 0) {
        edges.push_back({static_cast<Vertex>(local[v]), static_cast<Vertex>(local[w])});
      }
    }
  }
  InducedSubgraph out;
  out.graph = graph_from_canonical_edges(u.size(), std::move(edges));
  out.to_parent = u.members();
  return out;
}

std::size_t count_edges_within(const Graph& g, const VertexSet& u) {
  const auto in = u.mask(g.num_vertices());
  std::size_t count = 0;
  for (const Vertex v : u) {
    for (const Vertex w : g.neighbors(v)) {
      if (w > v && in[w]) ++count;
    }
  }
  return count;
}

std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count) {
  const std::size_t n = g.num_vertices();
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> comp(n, kUnset);
  std::vector<Vertex> stack;
  std::uint32_t next = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const Vertex w : g.neighbors(v)) {
        if (comp[w] == kUnset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return comp;
}

namespace {

struct ComponentCensus {
  std::vector<std::uint32_t> comp;
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
};

ComponentCensus census(const Graph& g) {
  ComponentCensus c;
  std::size_t k = 0;
  c.comp = connected_components(g, &k);
  c.vertices.assign(k, 0);
  c.edges.assign(k, 0);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) ++c.vertices[c.comp[v]];
  for (const Edge& e : g.edges()) ++c.edges[c.comp[e.u]];
  return c;
}

}  // namespace

VertexSet tree_components(const Graph& g) {
  const auto c = census(g);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto id = c.comp[v];
    if (c.edges[id] + 1 == c.vertices[id]) out.push_back(v);
  }
  return VertexSet::from_sorted(std::move(out));
}

VertexSet two_cores_of_nonsimple_components(const Graph& g) {
  const auto c = census(g);
  const std::size_t n = g.num_vertices();
  std::vector<char> alive(n, 0);
  std::vector<std::size_t> deg(n, 0);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    const auto id = c.comp[v];
    if (c.edges[id] > c.vertices[id]) {
      alive[v] = 1;
      deg[v] = g.degree(v);
      if (deg[v] < 2) queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (const Vertex w : g.neighbors(v)) {
      if (alive[w] && --deg[w] == 1) queue.push_back(w);
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n; ++v) {
    if (alive[v]) out.push_back(v);
  }
  return VertexSet::from_sorted(std::move(out));
}

Graph read_edge_list(std::istream& in) {
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw Error(ErrorCode::kParse, "edge list header must be 'n m'");
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    long long a = -1;
    long long b = -1;
    if (!(in >> a >> b)) throw Error(ErrorCode::kParse, "edge list truncated at edge " + std::to_string(k));
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw Error(ErrorCode::kOutOfRange, "edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
    pairs.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  return graph_from_edges(static_cast<std::size_t>(n), pairs).graph;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace loadmatch
