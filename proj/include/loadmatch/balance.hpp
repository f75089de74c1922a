#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "loadmatch/graph.hpp"
#include "loadmatch/rational.hpp"

namespace loadmatch {

struct LoadBlock {
  Rational density;
  VertexSet vertices;

  friend bool operator==(const LoadBlock&, const LoadBlock&) = default;
};

// Balanced loads of a graph together with its density decomposition.
// Blocks are listed by strictly decreasing density; every vertex sits in
// exactly one block and carries that block's density as its load.
struct LoadProfile {
  std::vector<Rational> loads;
  std::vector<LoadBlock> blocks;

  Rational max_load() const;
  friend bool operator==(const LoadProfile&, const LoadProfile&) = default;
};

// theta[{x, y}] is the share of edge {x, y} credited to y, i.e. theta(x -> y).
struct Allocation {
  std::map<std::pair<Vertex, Vertex>, Rational> theta;
};

// f_t(U) = t |E(U)| - |U|.
Rational ft_value(const Graph& g, const Rational& t, const VertexSet& u);

// Maximum-cardinality maximizer of f_t via the maximal source-side min cut of
// the edge-gadget network.
VertexSet ft_max_set(const Graph& g, const Rational& t);

LoadProfile balanced_loads(const Graph& g);

VertexSet load_level_set(const LoadProfile& profile, const Rational& threshold, bool strict);

struct BalanceCheck {
  bool balanced = true;
  std::optional<std::pair<Vertex, Vertex>> witness;  // directed edge x -> y violating the condition
};

std::vector<Rational> allocation_loads(const Graph& g, const Allocation& alloc);
BalanceCheck is_balanced(const Graph& g, const Allocation& alloc);

// One balanced allocation realizing the profile: cross-block edges go to the
// lighter endpoint, within-block shares come from an integral flow.
Allocation reconstruct_allocation(const Graph& g, const LoadProfile& profile);

// (t - r) * eps / (2 r).
Rational stability_delta(const Rational& t, const Rational& r, const Rational& eps);

// Text format: "loads <n>" then one "vertex num/den" line per vertex, then
// "blocks <k>" and one "num/den v1 v2 ..." line per block.
void write_profile(std::ostream& out, const LoadProfile& profile);
LoadProfile read_profile(std::istream& in);

namespace detail {

// Maximal maximizer of q * (|E(W)| + bonus(W)) - p * |W| over W subset of `vertices`
// (local graph, ids 0..k-1). Exposed for the decomposition and its tests.
std::vector<char> maximal_maximizer(const Graph& local, const std::vector<std::int64_t>& bonus, std::int64_t p,
                                    std::int64_t q);

}  // namespace detail

}  // namespace loadmatch
