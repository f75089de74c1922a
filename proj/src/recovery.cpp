#include "loadmatch/recovery.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <unordered_map>

#include "loadmatch/balance.hpp"
#include "loadmatch/error.hpp"
#include "loadmatch/orbits.hpp"

namespace loadmatch {

std::string LoadInterval::to_string() const {
  return "[" + lo.to_string() + "," + (hi ? hi->to_string() : std::string("inf")) + ")";
}

namespace {

Rational snapped(double x) { return Rational::snap(x, kThresholdDenominator); }

// Strict total order on vertex sets: cardinality, then member lists.
bool precedes(const VertexSet& a, const VertexSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.members() < b.members();
}

}  // namespace

AlgoConfig AlgoConfig::make(double alpha, double epsilon, double eta, double A, std::size_t n_max) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
  if (!(epsilon > 0.0) || !(eta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps and eta must be positive");
  AlgoConfig cfg;
  cfg.alpha = alpha;
  cfg.epsilon = epsilon;
  cfg.eta = eta;
  cfg.A = A;
  cfg.n_max = n_max;
  const double top = A / eta;
  const double floor_load = 1.0 / alpha + epsilon;
  const double steps = std::ceil((top - floor_load) / eta);
  if (!(steps >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "A/eta must exceed 1/alpha + eps");
  if (steps > 1e6) throw Error(ErrorCode::kTooLarge, "too many rounds; raise eta");
  cfg.N = static_cast<std::size_t>(steps);
  cfg.intervals.push_back({snapped(top), std::nullopt});
  for (std::size_t k = 1; k < cfg.N; ++k) {
    const auto kk = static_cast<double>(k);
    cfg.intervals.push_back({snapped(top - kk * eta), snapped(top - (kk - 1) * eta)});
  }
  cfg.intervals.push_back({snapped(floor_load), snapped(top - static_cast<double>(cfg.N - 1) * eta)});
  return cfg;
}

RecoveryResult iterative_matching(const Graph& g1, const Graph& g2, const AlgoConfig& cfg) {
  const std::size_t n = g1.num_vertices();
  if (g2.num_vertices() != n) throw Error(ErrorCode::kSizeMismatch, "graphs differ in vertex count");
  if (n > cfg.n_max) throw Error(ErrorCode::kTooLarge, "n exceeds the enumeration guard n_max");

  const auto& e1 = g1.edges();
  const bool memo_ok = e1.size() <= 64;
  std::unordered_map<std::uint64_t, std::vector<Rational>> memo;
  std::vector<char> adj2(n * n, 0);
  for (const Edge& e : g2.edges()) adj2[e.u * n + e.v] = adj2[e.v * n + e.u] = 1;
  const Rational rho1 = n == 0 ? Rational(0) : balanced_loads(g1).max_load();

  auto loads_of = [&](const std::vector<Vertex>& image, std::size_t& edge_count) -> std::vector<Rational> {
    std::uint64_t mask = 0;
    std::vector<Edge> kept;
    for (std::size_t idx = 0; idx < e1.size(); ++idx) {
      const Edge& e = e1[idx];
      if (adj2[image[e.u] * n + image[e.v]]) {
        kept.push_back(e);
        if (memo_ok) mask |= std::uint64_t{1} << idx;
      }
    }
    edge_count = kept.size();
    if (memo_ok) {
      const auto it = memo.find(mask);
      if (it != memo.end()) return it->second;
    }
    auto loads = balanced_loads(graph_from_canonical_edges(n, std::move(kept))).loads;
    if (memo_ok) memo.emplace(mask, loads);
    return loads;
  };

  RecoveryResult res;
  res.pi_tilde = PartialMatching(n);
  VertexSet u_prev;
  for (std::size_t k = 0; k <= cfg.N; ++k) {
    const LoadInterval& iv = cfg.intervals[k];
    // Positions outside U_{k-1} in order, and the unused images in order;
    // next_permutation over the images walks extensions lexicographically.
    std::vector<Vertex> free_pos;
    std::vector<Vertex> free_img;
    std::vector<char> used(n, 0);
    std::vector<Vertex> image(n, 0);
    for (Vertex i = 0; i < n; ++i) {
      if (res.pi_tilde.defined(i)) {
        image[i] = res.pi_tilde(i);
        used[image[i]] = 1;
      } else {
        free_pos.push_back(i);
      }
    }
    for (Vertex j = 0; j < n; ++j) {
      if (!used[j]) free_img.push_back(j);
    }
    auto place = [&] {
      for (std::size_t a = 0; a < free_pos.size(); ++a) image[free_pos[a]] = free_img[a];
    };

    RoundTrace tr;
    tr.k = k;
    if (iv.lo > rho1) {
      // H_pi is a subgraph of G1, so monotonicity caps every load at rho(G1).
      place();
      tr.skipped = true;
      tr.pi_k = Matching(image);
      tr.u_k = u_prev;
      res.rounds.push_back(std::move(tr));
      continue;
    }

    bool have = false;
    std::vector<Vertex> best_image;
    VertexSet best_v;
    std::size_t best_edges = 0;
    do {
      place();
      std::size_t edges = 0;
      const auto loads = loads_of(image, edges);
      std::vector<Vertex> v;
      for (const Vertex i : free_pos) {
        if (iv.contains(loads[i])) v.push_back(i);
      }
      VertexSet vs = VertexSet::from_sorted(std::move(v));
      if (!have || vs.size() > best_v.size() || (vs.size() == best_v.size() && precedes(vs, best_v))) {
        have = true;
        best_v = std::move(vs);
        best_image = image;
        best_edges = edges;
      }
    } while (std::next_permutation(free_img.begin(), free_img.end()));

    tr.pi_k = Matching(best_image);
    tr.v_k = best_v;
    tr.edges = best_edges;
    for (const Vertex i : best_v) res.pi_tilde.assign(i, best_image[i]);
    u_prev = set_union(u_prev, best_v);
    tr.u_k = u_prev;
    res.rounds.push_back(std::move(tr));
  }
  res.u_n = u_prev;
  return res;
}

std::pair<VertexSet, VertexSet> heavy_light_sets(const Matching& pi_star, const Graph& g1, const Graph& g2,
                                                 double alpha, double eps) {
  const auto profile = balanced_loads(intersection_graph(g1, g2, pi_star));
  const Rational hi = snapped(1.0 / alpha + eps);
  const Rational lo = snapped(1.0 / alpha - eps);
  std::vector<Vertex> heavy;
  std::vector<Vertex> light;
  for (Vertex i = 0; i < profile.loads.size(); ++i) {
    if (profile.loads[i] >= hi) heavy.push_back(i);
    if (profile.loads[i] <= lo) light.push_back(i);
  }
  return {VertexSet::from_sorted(std::move(heavy)), VertexSet::from_sorted(std::move(light))};
}

VertexSet correct_set(const RecoveryResult& result, const Matching& pi_star) {
  std::vector<Vertex> out;
  for (const Vertex i : result.u_n) {
    if (i < pi_star.size() && result.pi_tilde(i) == pi_star(i)) out.push_back(i);
  }
  return VertexSet::from_sorted(std::move(out));
}

Rational alpha_eps_rational(double alpha, double eps) { return snapped(1.0 / alpha + eps).reciprocal(); }

Rational near_maximizer_gap(const Matching& pi_star, const Graph& g1, const Graph& g2, const VertexSet& u_cor,
                            const VertexSet& u_heavy, const Rational& alpha_eps) {
  const Graph h = intersection_graph(g1, g2, pi_star);
  return ft_value(h, alpha_eps, set_union(u_cor, u_heavy)) - ft_value(h, alpha_eps, u_cor);
}

BayesEstimate bayes_optimal_estimate(const Graph& g1, const Graph& g2, const ModelParams& params) {
  const PosteriorTable table = posterior_exact(g1, g2, params);
  const auto m = table.marginals();
  const std::size_t n = m.size();
  // rest[mask]: best total for rows popcount(mask)..n-1 on the columns outside mask.
  const std::size_t full = std::size_t{1} << n;
  std::vector<double> rest(full, 0.0);
  for (std::size_t mask = full; mask-- > 0;) {
    const auto row = static_cast<std::size_t>(std::popcount(mask));
    if (row >= n) continue;
    double best = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1U) continue;
      best = std::max(best, m[row][j] + rest[mask | (std::size_t{1} << j)]);
    }
    rest[mask] = best;
  }
  // Rebuild with the smallest column among near-optimal choices.
  std::vector<Vertex> image(n);
  std::size_t mask = 0;
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1U) continue;
      if (m[row][j] + rest[mask | (std::size_t{1} << j)] >= rest[mask] - 1e-12) {
        image[row] = static_cast<Vertex>(j);
        mask |= std::size_t{1} << j;
        break;
      }
    }
  }
  BayesEstimate out{Matching(image), 0.0};
  for (std::size_t i = 0; i < n; ++i) out.expected_overlap += m[i][image[i]];
  return out;
}

std::optional<std::size_t> level_set_violation(const RecoveryResult& result, const Graph& g1, const Graph& g2,
                                               const AlgoConfig& cfg) {
  for (const RoundTrace& tr : result.rounds) {
    if (tr.u_k.empty()) continue;
    const auto loads = balanced_loads(intersection_graph(g1, g2, result.pi_tilde, tr.u_k)).loads;
    for (const Vertex i : tr.u_k) {
      if (loads[i] < cfg.intervals[tr.k].lo) return tr.k;
    }
  }
  return std::nullopt;
}

std::vector<RoundConstraint> round_constraints(const RecoveryResult& result, const Matching& pi_star,
                                               const Graph& g1, const Graph& g2, const AlgoConfig& cfg,
                                               std::size_t L) {
  std::vector<RoundConstraint> out;
  VertexSet u_prev;
  for (const RoundTrace& tr : result.rounds) {
    const VertexSet before = u_prev;
    u_prev = tr.u_k;
    const auto& hi = cfg.intervals[tr.k].hi;
    if (tr.k == 0 || !hi || tr.v_k.empty()) continue;
    if (tr.v_k.size() > 20) throw Error(ErrorCode::kTooLarge, "item (iii) check enumerates 2^|V_k| sets");
    const PartialMatching check = PartialMatching::restrict(tr.pi_k, tr.u_k);
    const Graph h = intersection_graph(g1, g2, check, tr.u_k);
    const auto in_before = before.mask(h.num_vertices());

    RoundConstraint rc;
    rc.k = tr.k;
    rc.item_iii = true;
    const auto& fresh = tr.v_k.members();
    for (std::uint32_t bits = 1; bits < (1U << fresh.size()) && rc.item_iii; ++bits) {
      std::vector<char> in_w = in_before;
      for (std::size_t a = 0; a < fresh.size(); ++a) {
        if (bits >> a & 1U) in_w[fresh[a]] = 1;
      }
      std::int64_t edges = 0;
      for (const Edge& e : h.edges()) {
        if (in_w[e.u] && in_w[e.v] && !(in_before[e.u] && in_before[e.v])) ++edges;
      }
      if (Rational(edges) > *hi * Rational(std::popcount(bits))) rc.item_iii = false;
    }

    std::set<Edge> e_prev;
    for (const Edge& e : h.edges()) {
      if (in_before[e.u] && in_before[e.v]) e_prev.insert(e);
    }
    const auto decomp = decompose_orbits_restricted(pi_star, check, before, e_prev, tr.u_k, L);
    rc.constraint = constraint_check_Ek(orbit_edge_counts(decomp, h, L), decomp.census, *hi);
    out.push_back(rc);
  }
  return out;
}

void write_report(std::ostream& out, const RecoveryResult& result, const AlgoConfig& cfg) {
  for (const RoundTrace& tr : result.rounds) {
    out << tr.k << ' ' << tr.v_k.size() << ' ' << tr.u_k.size() << " interval=" << cfg.intervals[tr.k].to_string()
        << '\n';
  }
  for (const Vertex i : result.u_n) out << i << " -> " << result.pi_tilde(i) << '\n';
}

}  // namespace loadmatch
