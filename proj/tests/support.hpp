#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "loadmatch/error.hpp"
#include "loadmatch/graph.hpp"
#include "loadmatch/intersect.hpp"
#include "loadmatch/rng.hpp"

namespace loadmatch::test {

using Lcg = Rng;

inline Graph triangle() { return graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}}).graph; }

// Two triangles sharing vertex 2.
inline Graph bowtie() { return graph_from_edges(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}).graph; }

inline Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return graph_from_canonical_edges(n, std::move(edges));
}

inline Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return graph_from_canonical_edges(n, std::move(edges));
}

inline Graph random_graph(Rng& rng, std::size_t n, double q) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (rng.bernoulli(q)) edges.push_back({i, j});
    }
  }
  return graph_from_canonical_edges(n, std::move(edges));
}

inline bool is_connected(const Graph& g) {
  std::size_t count = 0;
  (void)connected_components(g, &count);
  return count <= 1;
}

// One representative per isomorphism class of graphs on exactly k vertices
// (k <= 7): every labelled edge mask is visited once and its orbit under
// all k! relabelings is marked.
inline std::vector<Graph> all_graphs(std::size_t k) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<std::vector<int>> index(k, std::vector<int>(k, -1));
  for (Vertex i = 0; i < k; ++i) {
    for (Vertex j = i + 1; j < k; ++j) {
      index[i][j] = index[j][i] = static_cast<int>(pairs.size());
      pairs.emplace_back(i, j);
    }
  }
  const std::size_t bits = pairs.size();
  std::vector<Vertex> perm(k);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::vector<std::vector<int>> maps;
  do {
    std::vector<int> m(bits);
    for (std::size_t b = 0; b < bits; ++b) m[b] = index[perm[pairs[b].first]][perm[pairs[b].second]];
    maps.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<char> seen(std::size_t{1} << bits, 0);
  std::vector<Graph> out;
  for (std::uint32_t code = 0; code < (std::uint32_t{1} << bits); ++code) {
    if (seen[code]) continue;
    for (const auto& m : maps) {
      std::uint32_t image = 0;
      for (std::uint32_t rest = code; rest != 0; rest &= rest - 1) image |= 1U << m[std::countr_zero(rest)];
      seen[image] = 1;
    }
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < bits; ++b) {
      if (code >> b & 1U) edges.push_back({pairs[b].first, pairs[b].second});
    }
    out.push_back(graph_from_canonical_edges(k, std::move(edges)));
  }
  return out;
}

inline Matching random_matching(Rng& rng, std::size_t n) {
  std::vector<Vertex> image(n);
  std::iota(image.begin(), image.end(), Vertex{0});
  rng.shuffle(image);
  return Matching(std::move(image));
}

// True when fn throws loadmatch::Error carrying `code`.
template <class Fn>
bool throws_code(Fn&& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace loadmatch::test
