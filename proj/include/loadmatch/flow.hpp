#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace loadmatch {

struct FlowArc {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t capacity = 0;  // FlowNetwork::kUnbounded for an uncapacitated arc
};

struct FlowNetwork {
  static constexpr std::int64_t kUnbounded = -1;

  std::size_t node_count = 0;
  std::size_t source = 0;
  std::size_t sink = 1;
  std::vector<FlowArc> arcs;

  void add_arc(std::size_t from, std::size_t to, std::int64_t capacity) { arcs.push_back({from, to, capacity}); }
};

// Both sides are minimum cuts; min is the residual reach of the source, max is
// the complement of the residual co-reach of the sink.
struct CutResult {
  std::int64_t flow_value = 0;
  std::vector<std::size_t> source_side_min;  // ascending node ids
  std::vector<std::size_t> source_side_max;  // ascending node ids
  std::vector<std::int64_t> arc_flow;        // per input arc, same order as FlowNetwork::arcs
};

// Exact integer max-flow (Dinic). Unbounded arcs are given the capacity
// (total finite capacity + 1); throws Overflow / Unbounded.
CutResult solve_max_flow(const FlowNetwork& net);

// Capacity of the cut whose source side is given as a node bitmap; unbounded
// arcs crossing the cut report FlowNetwork::kUnbounded.
std::int64_t cut_capacity(const FlowNetwork& net, const std::vector<char>& source_side);

}  // namespace loadmatch
