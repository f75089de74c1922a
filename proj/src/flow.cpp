#include "loadmatch/flow.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "loadmatch/error.hpp"

namespace loadmatch {

namespace {

class Dinic {
 public:
  Dinic(std::size_t n, std::size_t arc_hint) : head_(n + 1, 0), level_(n), iter_(n) { staged_.reserve(arc_hint); }

  void stage(std::size_t from, std::size_t to, std::int64_t cap) { staged_.push_back({from, to, cap}); }

  // Lays staged arcs out in CSR order with paired reverse arcs.
  void finalize() {
    const std::size_t n = level_.size();
    std::vector<std::size_t> deg(n, 0);
    for (const auto& a : staged_) {
      ++deg[a.from];
      ++deg[a.to];
    }
    for (std::size_t v = 0; v < n; ++v) head_[v + 1] = head_[v] + deg[v];
    to_.resize(2 * staged_.size());
    cap_.resize(2 * staged_.size());
    rev_.resize(2 * staged_.size());
    std::vector<std::size_t> pos(head_.begin(), head_.end() - 1);
    forward_.clear();
    forward_.reserve(staged_.size());
    for (const auto& a : staged_) {
      const std::size_t f = pos[a.from]++;
      forward_.push_back(f);
      const std::size_t r = pos[a.to]++;
      to_[f] = a.to;
      cap_[f] = a.cap;
      rev_[f] = r;
      to_[r] = a.from;
      cap_[r] = 0;
      rev_[r] = f;
    }
    staged_.clear();
    staged_.shrink_to_fit();
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      for (std::size_t v = 0; v < iter_.size(); ++v) iter_[v] = head_[v];
      for (;;) {
        const std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max());
        if (f == 0) break;
        total += f;
      }
    }
    return total;
  }

  // Flow on staged arc i is the capacity gathered on its reverse arc.
  std::int64_t arc_flow(std::size_t i) const { return cap_[rev_[forward_[i]]]; }

  std::vector<char> reach_from(std::size_t s) const {
    std::vector<char> seen(level_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e = head_[v]; e < head_[v + 1]; ++e) {
        if (cap_[e] > 0 && !seen[to_[e]]) {
          seen[to_[e]] = 1;
          stack.push_back(to_[e]);
        }
      }
    }
    return seen;
  }

  // Nodes with a residual path to t.
  std::vector<char> coreach_to(std::size_t t) const {
    std::vector<char> seen(level_.size(), 0);
    std::vector<std::size_t> stack{t};
    seen[t] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e = head_[v]; e < head_[v + 1]; ++e) {
        // Arc u -> v has residual capacity cap_[rev_[e]] where u = to_[e].
        const std::size_t u = to_[e];
        if (!seen[u] && cap_[rev_[e]] > 0) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    return seen;
  }

 private:
  struct Staged {
    std::size_t from;
    std::size_t to;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t>& q = queue_;
    q.clear();
    level_[s] = 0;
    q.push_back(s);
    for (std::size_t qi = 0; qi < q.size(); ++qi) {
      const std::size_t v = q[qi];
      for (std::size_t e = head_[v]; e < head_[v + 1]; ++e) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[v] + 1;
          q.push_back(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  // Iterative blocking-flow DFS along the level graph.
  std::int64_t dfs(std::size_t s, std::size_t t, std::int64_t limit) {
    path_.clear();
    std::size_t v = s;
    for (;;) {
      if (v == t) {
        std::int64_t f = limit;
        for (const std::size_t e : path_) f = std::min(f, cap_[e]);
        for (const std::size_t e : path_) {
          cap_[e] -= f;
          cap_[rev_[e]] += f;
        }
        return f;
      }
      bool advanced = false;
      for (std::size_t& e = iter_[v]; e < head_[v + 1]; ++e) {
        const std::size_t w = to_[e];
        if (cap_[e] > 0 && level_[w] == level_[v] + 1) {
          path_.push_back(e);
          v = w;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      // Dead end: retreat and prune.
      level_[v] = -1;
      if (path_.empty()) return 0;
      const std::size_t back = path_.back();
      path_.pop_back();
      v = to_[rev_[back]];
      ++iter_[v];
    }
  }

  std::vector<Staged> staged_;
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> head_;
  std::vector<std::size_t> to_;
  std::vector<std::int64_t> cap_;
  std::vector<std::size_t> rev_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  std::vector<std::size_t> queue_;
  std::vector<std::size_t> path_;
};

}  // namespace

CutResult solve_max_flow(const FlowNetwork& net) {
  if (net.source == net.sink) throw Error(ErrorCode::kInvalidArgument, "source equals sink");
  if (net.source >= net.node_count || net.sink >= net.node_count) {
    throw Error(ErrorCode::kOutOfRange, "terminal outside network");
  }
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t finite_total = 0;
  for (const FlowArc& a : net.arcs) {
    if (a.from >= net.node_count || a.to >= net.node_count) throw Error(ErrorCode::kOutOfRange, "arc endpoint");
    if (a.capacity == FlowNetwork::kUnbounded) continue;
    if (a.capacity < 0) throw Error(ErrorCode::kInvalidArgument, "negative capacity");
    if (a.capacity > kMax / 4 - finite_total) throw Error(ErrorCode::kOverflow, "total capacity exceeds range");
    finite_total += a.capacity;
  }
  const std::int64_t unbounded = finite_total + 1;

  Dinic d(net.node_count, net.arcs.size());
  for (const FlowArc& a : net.arcs) {
    d.stage(a.from, a.to, a.capacity == FlowNetwork::kUnbounded ? unbounded : a.capacity);
  }
  d.finalize();
  CutResult out;
  out.flow_value = d.run(net.source, net.sink);
  if (out.flow_value >= unbounded) throw Error(ErrorCode::kUnbounded, "source-sink path of unbounded arcs");

  out.arc_flow.resize(net.arcs.size());
  for (std::size_t i = 0; i < net.arcs.size(); ++i) out.arc_flow[i] = d.arc_flow(i);

  const auto reach = d.reach_from(net.source);
  const auto coreach = d.coreach_to(net.sink);
  for (std::size_t v = 0; v < net.node_count; ++v) {
    if (reach[v]) out.source_side_min.push_back(v);
    if (!coreach[v]) out.source_side_max.push_back(v);
  }
  return out;
}

std::int64_t cut_capacity(const FlowNetwork& net, const std::vector<char>& source_side) {
  std::int64_t total = 0;
  for (const FlowArc& a : net.arcs) {
    if (source_side[a.from] && !source_side[a.to]) {
      if (a.capacity == FlowNetwork::kUnbounded) return FlowNetwork::kUnbounded;
      total += a.capacity;
    }
  }
  return total;
}

}  // namespace loadmatch
