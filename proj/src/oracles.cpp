#include "loadmatch/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>

#include "loadmatch/balance.hpp"
#include "loadmatch/error.hpp"
#include "loadmatch/rng.hpp"

namespace loadmatch {

std::vector<double> loads_qp_oracle(const Graph& g, double tol, std::size_t max_sweeps) {
  if (!(tol > 0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  if (g.num_edges() > 10'000) throw Error(ErrorCode::kTooLarge, "QP oracle limited to 10^4 edges");
  const auto& edges = g.edges();
  std::vector<double> share(edges.size(), 0.5);  // part of edge credited to its larger endpoint
  std::vector<double> load(g.num_vertices(), 0.0);
  for (const Edge& e : edges) {
    load[e.u] += 0.5;
    load[e.v] += 0.5;
  }
  double worst = 0;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    worst = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      const double x = share[i];
      const double base_u = load[e.u] - (1.0 - x);
      const double base_v = load[e.v] - x;
      const double y = std::clamp((base_u + 1.0 - base_v) / 2.0, 0.0, 1.0);
      worst = std::max(worst, std::abs(y - x));
      share[i] = y;
      load[e.u] = base_u + (1.0 - y);
      load[e.v] = base_v + y;
    }
    if (worst < tol) {
      // Recompute from scratch to shed accumulated rounding.
      std::fill(load.begin(), load.end(), 0.0);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        load[edges[i].u] += 1.0 - share[i];
        load[edges[i].v] += share[i];
      }
      return load;
    }
  }
  throw Error(ErrorCode::kNonConvergence, "QP oracle stalled with residual " + std::to_string(worst));
}

FtBrute ft_bruteforce(const Graph& g, const Rational& t) {
  if (t <= Rational(0)) throw Error(ErrorCode::kNonPositiveT, "t must be positive");
  const std::size_t n = g.num_vertices();
  if (n > 20) throw Error(ErrorCode::kTooLarge, "ft_bruteforce limited to n <= 20");
  std::vector<std::uint32_t> adj(n, 0);
  for (const Edge& e : g.edges()) {
    adj[e.u] |= 1U << e.v;
    adj[e.v] |= 1U << e.u;
  }
  const __int128 a = t.num();
  const __int128 b = t.den();
  __int128 best = 0;  // scaled by b; empty set scores 0
  std::uint32_t best_mask = 0;
  // Lexicographic order on ascending member lists, for masks of equal size.
  const auto lex_less = [](std::uint32_t x, std::uint32_t y) {
    while (x != 0 && y != 0) {
      const int lx = std::countr_zero(x);
      const int ly = std::countr_zero(y);
      if (lx != ly) return lx < ly;
      x &= x - 1;
      y &= y - 1;
    }
    return x == 0 && y != 0;
  };
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mm = 1; mm < total; ++mm) {
    const auto mask = static_cast<std::uint32_t>(mm);
    int twice = 0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      twice += std::popcount(adj[std::countr_zero(rest)] & mask);
    }
    const int size = std::popcount(mask);
    const __int128 val = a * (twice / 2) - b * size;
    const int best_size = std::popcount(best_mask);
    if (val > best || (val == best && (size > best_size || (size == best_size && lex_less(mask, best_mask))))) {
      best = val;
      best_mask = mask;
    }
  }
  FtBrute out;
  out.value = Rational(static_cast<std::int64_t>(best), t.den());
  std::vector<Vertex> members;
  for (Vertex v = 0; v < n; ++v) {
    if (best_mask >> v & 1U) members.push_back(v);
  }
  out.maximizer = VertexSet::from_sorted(std::move(members));
  return out;
}

Rational densest_density(const Graph& g) {
  const auto n = static_cast<std::int64_t>(g.num_vertices());
  if (g.num_edges() == 0) return Rational(0);
  // density >= r  iff  the maximal maximizer of f_{1/r} is nonempty.
  const auto at_least = [&](std::int64_t num, std::int64_t den) {
    if (num == 0) return true;
    return !ft_max_set(g, Rational(den, num)).empty();
  };
  // Invariant: lo = a/b attained, hi = c/d not attained (1/0 is +infinity).
  std::int64_t a = 0, b = 1, c = 1, d = 0;
  for (;;) {
    if (b + d > n) break;
    if (at_least(a + c, b + d)) {
      // Gallop lo toward hi: largest k with (a + k c)/(b + k d) attained.
      std::int64_t good = 1;
      std::int64_t step = 1;
      const auto fits = [&](std::int64_t k) { return b + k * d <= n; };
      std::int64_t bad = -1;
      while (bad < 0) {
        const std::int64_t k = good + step;
        if (!fits(k) || !at_least(a + k * c, b + k * d)) {
          bad = k;
        } else {
          good = k;
          step *= 2;
        }
      }
      while (bad - good > 1) {
        const std::int64_t k = good + (bad - good) / 2;
        if (fits(k) && at_least(a + k * c, b + k * d)) {
          good = k;
        } else {
          bad = k;
        }
      }
      a += good * c;
      b += good * d;
    } else {
      std::int64_t good = 1;
      std::int64_t step = 1;
      const auto fits = [&](std::int64_t k) { return d + k * b <= n; };
      std::int64_t bad = -1;
      while (bad < 0) {
        const std::int64_t k = good + step;
        if (!fits(k) || at_least(c + k * a, d + k * b)) {
          bad = k;
        } else {
          good = k;
          step *= 2;
        }
      }
      while (bad - good > 1) {
        const std::int64_t k = good + (bad - good) / 2;
        if (fits(k) && !at_least(c + k * a, d + k * b)) {
          good = k;
        } else {
          bad = k;
        }
      }
      c += good * a;
      d += good * b;
    }
  }
  const Rational rho(a, b);
  // Certificate: at t = 1/rho the best value of f_t is exactly zero.
  const VertexSet top = ft_max_set(g, rho.reciprocal());
  if (top.empty() || ft_value(g, rho.reciprocal(), top) != Rational(0)) {
    throw Error(ErrorCode::kInternal, "densest density certificate failed at " + rho.to_string());
  }
  return rho;
}

AdmissibilityParams AdmissibilityParams::defaults(std::size_t n, double alpha, double eps) {
  (void)alpha;  // alpha (1/alpha - eps + 1/C) < 1 reduces to C > 1/eps
  if (!(eps > 0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  AdmissibilityParams p;
  p.c_param = static_cast<int>(std::floor(1.0 / eps)) + 1;
  const double ln = std::log(std::max<double>(static_cast<double>(n), 2.0));
  p.max_degree_cap = ln;
  p.d_n = std::pow(ln, 1.0 / (10.0 * p.c_param));
  p.neighborhood_radius = 2 * p.c_param + 2;
  p.small_subgraph_cap = ln > 1.0 ? static_cast<int>(std::floor(std::log(ln))) : 0;
  p.cycle_count_base = ln;
  return p;
}

namespace {

struct Budget {
  std::uint64_t left;
  void spend() {
    if (left == 0) throw Error(ErrorCode::kCycleEnumerationBudget, "enumeration budget exhausted (inconclusive)");
    --left;
  }
};

// ESU-style enumeration of connected vertex sets whose smallest member is
// `root`, restricted to `alive` vertices and sizes below `cap`. Each set is
// visited once; stops at the first set spanning more edges than vertices.
class DenseSetSearch {
 public:
  DenseSetSearch(const Graph& g, const std::vector<char>& alive, int cap, Budget& budget)
      : g_(g), alive_(alive), cap_(cap), budget_(budget), touch_(g.num_vertices(), 0) {}

  bool run(Vertex root, std::vector<Vertex>& witness) {
    root_ = root;
    set_.assign(1, root);
    mark(root, +1);
    std::vector<Vertex> ext;
    for (const Vertex u : g_.neighbors(root)) {
      if (u > root && alive_[u]) ext.push_back(u);
    }
    const bool hit = extend(ext, 0);
    if (hit) witness = set_;
    mark(root, -1);
    return hit;
  }

 private:
  // touch_ counts members of the current set in the closed neighbourhood.
  void mark(Vertex w, int delta) {
    touch_[w] += delta;
    for (const Vertex u : g_.neighbors(w)) touch_[u] += delta;
  }

  bool extend(std::vector<Vertex> ext, int edges) {
    budget_.spend();
    if (edges > static_cast<int>(set_.size())) return true;
    if (static_cast<int>(set_.size()) + 1 >= cap_) return false;
    while (!ext.empty()) {
      const Vertex w = ext.back();
      ext.pop_back();
      std::vector<Vertex> next = ext;
      for (const Vertex u : g_.neighbors(w)) {
        if (u > root_ && alive_[u] && touch_[u] == 0) next.push_back(u);
      }
      int gained = 0;
      for (const Vertex u : g_.neighbors(w)) {
        if (std::find(set_.begin(), set_.end(), u) != set_.end()) ++gained;
      }
      set_.push_back(w);
      mark(w, +1);
      const bool hit = extend(std::move(next), edges + gained);
      if (hit) return true;
      mark(w, -1);
      set_.pop_back();
    }
    return false;
  }

  const Graph& g_;
  const std::vector<char>& alive_;
  int cap_;
  Budget& budget_;
  std::vector<int> touch_;
  std::vector<Vertex> set_;
  Vertex root_ = 0;
};

std::vector<char> two_core_mask(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> deg(n);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] < 2) queue.push_back(v);
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
  return alive;
}

// Distance (in hops, capped at limit + 1) from each vertex to the nearest
// vertex in `sources`.
std::vector<int> multi_source_distance(const Graph& g, const std::vector<Vertex>& sources, int limit) {
  std::vector<int> dist(g.num_vertices(), limit + 1);
  std::deque<Vertex> queue;
  for (const Vertex s : sources) {
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    if (dist[v] >= limit) continue;
    for (const Vertex w : g.neighbors(v)) {
      if (dist[w] > dist[v] + 1) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

AdmissibilityResult admissibility_check(const Graph& h, const AdmissibilityParams& params) {
  const std::size_t n = h.num_vertices();
  AdmissibilityResult res;
  const auto fail = [&](const char* tag, std::string detail) {
    res.ok = false;
    res.first_violation = tag;
    res.detail = std::move(detail);
    return res;
  };

  // (i) maximum degree.
  for (Vertex v = 0; v < n; ++v) {
    if (static_cast<double>(h.degree(v)) > params.max_degree_cap) {
      return fail("i", "vertex " + std::to_string(v) + " has degree " + std::to_string(h.degree(v)));
    }
  }

  // (ii) vertices whose radius-R ball avoids degrees above D_n.
  {
    std::vector<Vertex> high;
    for (Vertex v = 0; v < n; ++v) {
      if (static_cast<double>(h.degree(v)) > params.d_n) high.push_back(v);
    }
    const int r = params.neighborhood_radius;
    const auto dist = multi_source_distance(h, high, r);
    std::size_t good = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (dist[v] > r) ++good;
    }
    if (params.exclude_center) {
      // A high-degree centre still counts when no other high vertex is within R.
      std::vector<char> is_high(n, 0);
      for (const Vertex v : high) is_high[v] = 1;
      for (const Vertex v : high) {
        // BFS from v up to radius r looking for another high vertex.
        std::vector<int> d(n, -1);
        std::deque<Vertex> q{v};
        d[v] = 0;
        bool clean = true;
        while (!q.empty() && clean) {
          const Vertex x = q.front();
          q.pop_front();
          if (d[x] >= r) continue;
          for (const Vertex y : h.neighbors(x)) {
            if (d[y] >= 0) continue;
            d[y] = d[x] + 1;
            if (is_high[y]) {
              clean = false;
              break;
            }
            q.push_back(y);
          }
        }
        if (clean) ++good;
      }
    }
    const double need = (1.0 - std::exp(-params.d_n)) * static_cast<double>(n);
    if (static_cast<double>(good) < need) {
      return fail("ii", std::to_string(good) + " clean centres, need " + std::to_string(need));
    }
  }

  // (iii) connected subgraphs on fewer than cap vertices have at most one cycle.
  Budget budget{params.node_budget};
  if (params.small_subgraph_cap > 2) {
    const auto alive = two_core_mask(h);
    DenseSetSearch search(h, alive, params.small_subgraph_cap, budget);
    for (Vertex v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      std::vector<Vertex> witness;
      if (search.run(v, witness)) {
        std::string text = "dense connected set {";
        for (std::size_t i = 0; i < witness.size(); ++i) text += (i ? "," : "") + std::to_string(witness[i]);
        return fail("iii", text + "}");
      }
    }
  }

  // (iv) cycles of length k, 3 <= k <= cap, at most base^k each.
  if (params.cycle_length_cap >= 3 && n > 0) {
    const int cap = params.cycle_length_cap;
    std::vector<std::uint64_t> count(static_cast<std::size_t>(cap) + 1, 0);
    std::vector<char> on_path(n, 0);
    // Cycles through their smallest vertex s, each traversed in both directions.
    for (Vertex s = 0; s < n; ++s) {
      std::vector<std::pair<Vertex, std::size_t>> stack{{s, 0}};
      on_path[s] = 1;
      while (!stack.empty()) {
        auto& [v, idx] = stack.back();
        const auto nb = h.neighbors(v);
        if (idx >= nb.size()) {
          on_path[v] = 0;
          stack.pop_back();
          continue;
        }
        const Vertex w = nb[idx++];
        budget.spend();
        const auto len = stack.size();
        if (w == s && len >= 3) {
          ++count[len];
        } else if (w > s && !on_path[w] && static_cast<int>(len) < cap) {
          on_path[w] = 1;
          stack.push_back({w, 0});
        }
      }
    }
    for (int k = 3; k <= cap; ++k) {
      const double cycles = static_cast<double>(count[static_cast<std::size_t>(k)] / 2);
      if (cycles > std::pow(params.cycle_count_base, k)) {
        return fail("iv", std::to_string(static_cast<std::uint64_t>(cycles)) + " cycles of length " + std::to_string(k));
      }
    }
  }
  return res;
}

EventDResult event_d_check(const Graph& g, double d, double delta, std::uint64_t seed, std::size_t samples) {
  const std::size_t n = g.num_vertices();
  const double slack = delta * static_cast<double>(n) / 2.0;
  const double tiny = 1e-9;
  EventDResult res;
  if (n <= 20) {
    std::vector<std::uint32_t> adj(n, 0);
    for (const Edge& e : g.edges()) {
      adj[e.u] |= 1U << e.v;
      adj[e.v] |= 1U << e.u;
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mm = 1; mm < total; ++mm) {
      const auto mask = static_cast<std::uint32_t>(mm);
      int deg_sum = 0;
      int twice_inside = 0;
      for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
        const int v = std::countr_zero(rest);
        deg_sum += std::popcount(adj[static_cast<std::size_t>(v)]);
        twice_inside += std::popcount(adj[static_cast<std::size_t>(v)] & mask);
      }
      const double touching = deg_sum - twice_inside / 2;
      if (touching > d * std::popcount(mask) + slack + tiny) {
        res.holds = false;
        for (Vertex v = 0; v < n; ++v) {
          if (mask >> v & 1U) res.witness.push_back(v);
        }
        return res;
      }
    }
    return res;
  }
  res.sampled = true;
  Rng rng(seed, 0xd);
  std::vector<Vertex> order(n);
  std::vector<char> in(n, 0);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  for (std::size_t trial = 0; trial < samples; ++trial) {
    const std::size_t size = 1 + static_cast<std::size_t>(rng.below(n));
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(order[i], order[j]);
      in[order[i]] = 1;
    }
    std::size_t touching = 0;
    for (const Edge& e : g.edges()) {
      if (in[e.u] || in[e.v]) ++touching;
    }
    const bool bad = static_cast<double>(touching) > d * static_cast<double>(size) + slack + tiny;
    if (bad) {
      res.holds = false;
      res.witness.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
      std::sort(res.witness.begin(), res.witness.end());
    }
    for (std::size_t i = 0; i < size; ++i) in[order[i]] = 0;
    if (bad) return res;
  }
  return res;
}

}  // namespace loadmatch
