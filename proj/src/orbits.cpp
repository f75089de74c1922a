#include "loadmatch/orbits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "loadmatch/error.hpp"

namespace loadmatch {

const char* orbit_kind_name(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::kCycle: return "cycle";
    case OrbitKind::kSpecialCycle: return "special";
    case OrbitKind::kFreeChain: return "free_chain";
    case OrbitKind::kConfinedChain: return "confined_chain";
  }
  return "?";
}

SigmaMap SigmaMap::from_matching(const Matching& sigma) {
  SigmaMap m;
  m.forward.resize(sigma.size());
  m.backward.resize(sigma.size());
  for (Vertex i = 0; i < sigma.size(); ++i) {
    m.forward[i] = sigma(i);
    m.backward[sigma(i)] = i;
  }
  return m;
}

SigmaMap sigma_of(const Matching& pi_star, const Matching& pi) {
  if (pi_star.size() != pi.size()) throw Error(ErrorCode::kSizeMismatch, "matchings differ in size");
  return SigmaMap::from_matching(pi_star.inverse() * pi);
}

SigmaMap sigma_of(const Matching& pi_star, const PartialMatching& pi) {
  if (pi_star.size() != pi.size()) throw Error(ErrorCode::kSizeMismatch, "matchings differ in size");
  const Matching inv = pi_star.inverse();
  SigmaMap m;
  m.forward.assign(pi.size(), SigmaMap::kUnset);
  m.backward.assign(pi.size(), SigmaMap::kUnset);
  for (Vertex i = 0; i < pi.size(); ++i) {
    if (!pi.defined(i)) continue;
    const Vertex j = inv(pi(i));
    m.forward[i] = j;
    m.backward[j] = i;
  }
  return m;
}

bool OrbitDecomposition::in_universe(Edge e) const {
  return u.contains(e.u) && u.contains(e.v) && !(u_prev.contains(e.u) && u_prev.contains(e.v));
}

std::vector<std::size_t> sigma_cycle_lengths(const SigmaMap& sigma) {
  const std::size_t n = sigma.size();
  std::vector<std::size_t> len(n, 0);
  std::vector<char> done(n, 0);
  for (Vertex s = 0; s < n; ++s) {
    if (done[s]) continue;
    std::vector<Vertex> trail{s};
    std::int64_t cur = sigma.forward[s];
    while (cur != SigmaMap::kUnset && cur != s && !done[static_cast<std::size_t>(cur)]) {
      trail.push_back(static_cast<Vertex>(cur));
      cur = sigma.forward[static_cast<std::size_t>(cur)];
    }
    const bool closed = cur == s;
    for (const Vertex v : trail) {
      done[v] = 1;
      len[v] = closed ? trail.size() : 0;
    }
    // A trail that ran into an already classified vertex is an open path.
  }
  return len;
}

namespace {

struct PairMap {
  const SigmaMap& sigma;

  bool forward(Edge e, Edge& out) const {
    const auto a = sigma.forward[e.u];
    const auto b = sigma.forward[e.v];
    if (a == SigmaMap::kUnset || b == SigmaMap::kUnset) return false;
    out = make_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
    return true;
  }
  bool backward(Edge e, Edge& out) const {
    const auto a = sigma.backward[e.u];
    const auto b = sigma.backward[e.v];
    if (a == SigmaMap::kUnset || b == SigmaMap::kUnset) return false;
    out = make_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
    return true;
  }
};

bool is_special(const SigmaMap& sigma, const std::vector<std::size_t>& cyc, Edge e) {
  const std::size_t m = cyc[e.u];
  if (m == 0 || m % 2 != 0 || cyc[e.v] != m) return false;
  std::int64_t cur = e.u;
  for (std::size_t step = 0; step < m / 2; ++step) cur = sigma.forward[static_cast<std::size_t>(cur)];
  return cur == static_cast<std::int64_t>(e.v);
}

}  // namespace

OrbitDecomposition decompose_orbits_restricted_sigma(const SigmaMap& sigma, const VertexSet& u_prev,
                                                     const std::set<Edge>& e_prev, const VertexSet& u,
                                                     std::size_t truncation) {
  const std::size_t n = sigma.size();
  if (!is_subset(u_prev, u)) throw Error(ErrorCode::kNestingViolation, "u_prev is not contained in u");
  for (const Vertex v : u) {
    if (v >= n || sigma.forward[v] == SigmaMap::kUnset) {
      throw Error(ErrorCode::kNestingViolation, "u leaves the matching domain at " + std::to_string(v));
    }
  }
  for (const Edge& e : e_prev) {
    if (!u_prev.contains(e.u) || !u_prev.contains(e.v)) {
      throw Error(ErrorCode::kNestingViolation, "e_prev pair outside u_prev");
    }
  }

  OrbitDecomposition d;
  d.n = n;
  d.u = u;
  d.u_prev = u_prev;
  d.truncation = truncation;
  const PairMap pm{sigma};
  const auto cyc = sigma_cycle_lengths(sigma);
  std::vector<char> visited(n * n, 0);
  const auto key = [n](Edge e) { return static_cast<std::size_t>(e.u) * n + e.v; };

  const auto& members = u.members();
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const Edge e{members[a], members[b]};
      if (visited[key(e)] || !d.in_universe(e)) continue;
      // Walk back to the chain head, or around to e for a cycle.
      Edge head = e;
      bool cycle = false;
      for (;;) {
        Edge prev;
        if (!pm.backward(head, prev) || !d.in_universe(prev)) break;
        if (prev == e) {
          cycle = true;
          break;
        }
        head = prev;
      }
      Orbit orbit;
      Edge cur = cycle ? e : head;
      for (;;) {
        orbit.pairs.push_back(cur);
        visited[key(cur)] = 1;
        Edge next;
        if (!pm.forward(cur, next) || !d.in_universe(next) || next == orbit.pairs.front()) break;
        cur = next;
      }
      if (cycle) {
        orbit.kind = is_special(sigma, cyc, e) ? OrbitKind::kSpecialCycle : OrbitKind::kCycle;
      } else {
        Edge before;
        Edge after;
        const bool hit_before = pm.backward(orbit.pairs.front(), before) && e_prev.count(before) > 0;
        const bool hit_after = pm.forward(orbit.pairs.back(), after) && e_prev.count(after) > 0;
        orbit.kind = hit_before || hit_after ? OrbitKind::kConfinedChain : OrbitKind::kFreeChain;
      }
      d.orbits.push_back(std::move(orbit));
    }
  }
  std::sort(d.orbits.begin(), d.orbits.end(),
            [](const Orbit& x, const Orbit& y) { return x.pairs.front() < y.pairs.front(); });

  // Census of vertices of u \ u_prev on complete sigma-cycles of length <= truncation.
  d.census.assign(truncation + 1, 0);
  if (truncation > 0) {
    const auto in_u = u.mask(n);
    std::vector<char> complete(n, 0);
    std::vector<char> seen(n, 0);
    for (Vertex s = 0; s < n; ++s) {
      if (seen[s] || cyc[s] == 0) continue;
      std::vector<Vertex> members_of;
      Vertex cur = s;
      bool inside = true;
      do {
        members_of.push_back(cur);
        seen[cur] = 1;
        inside = inside && in_u[cur];
        cur = static_cast<Vertex>(sigma.forward[cur]);
      } while (cur != s);
      for (const Vertex v : members_of) complete[v] = inside ? 1 : 0;
    }
    for (const Vertex v : u) {
      if (u_prev.contains(v) || !complete[v]) continue;
      if (cyc[v] <= truncation) ++d.census[cyc[v]];
    }
  }
  return d;
}

OrbitDecomposition decompose_orbits_restricted(const Matching& pi_star, const PartialMatching& pi_check,
                                               const VertexSet& u_prev, const std::set<Edge>& e_prev,
                                               const VertexSet& u, std::size_t truncation) {
  return decompose_orbits_restricted_sigma(sigma_of(pi_star, pi_check), u_prev, e_prev, u, truncation);
}

OrbitDecomposition decompose_orbits_sigma(const Matching& sigma) {
  return decompose_orbits_restricted_sigma(SigmaMap::from_matching(sigma), VertexSet{}, {},
                                           VertexSet::range(sigma.size()), 0);
}

OrbitDecomposition decompose_orbits(const Matching& pi_star, const Matching& pi) {
  if (pi_star.size() != pi.size()) throw Error(ErrorCode::kSizeMismatch, "matchings differ in size");
  return decompose_orbits_sigma(pi_star.inverse() * pi);
}

std::size_t OrbitCounts::total() const {
  std::size_t t = e_special + e_gt_L + e_chain_free + e_chain_confined;
  for (const auto x : e_k) t += x;
  return t;
}

OrbitCounts orbit_edge_counts(const OrbitDecomposition& decomp, const Graph& h, std::size_t L) {
  if (h.num_vertices() != decomp.n) throw Error(ErrorCode::kUniverseMismatch, "graph and decomposition differ in n");
  OrbitCounts c;
  c.e_k.assign(L + 1, 0);
  for (const Orbit& o : decomp.orbits) {
    std::size_t hits = 0;
    for (const Edge& e : o.pairs) hits += h.has_edge(e.u, e.v) ? 1 : 0;
    switch (o.kind) {
      case OrbitKind::kSpecialCycle: c.e_special += hits; break;
      case OrbitKind::kFreeChain: c.e_chain_free += hits; break;
      case OrbitKind::kConfinedChain: c.e_chain_confined += hits; break;
      case OrbitKind::kCycle:
        if (o.length() <= L) {
          c.e_k[o.length()] += hits;
        } else {
          c.e_gt_L += hits;
        }
        break;
    }
  }
  return c;
}

bool constraint_check_Ek(const OrbitCounts& counts, const std::vector<std::size_t>& census, const Rational& u_k) {
  const std::size_t L = counts.e_k.empty() ? 0 : counts.e_k.size() - 1;
  std::int64_t edges = 0;
  std::int64_t verts = 0;
  for (std::size_t k = 1; k <= L; ++k) {
    edges += static_cast<std::int64_t>(counts.e_k[k]);
    verts += k < census.size() ? static_cast<std::int64_t>(census[k]) : 0;
    if (Rational(edges) > u_k * Rational(verts)) return false;
  }
  return true;
}

void write_decomposition(std::ostream& out, const OrbitDecomposition& decomp) {
  for (const Orbit& o : decomp.orbits) {
    out << orbit_kind_name(o.kind) << ':' << o.length() << ':';
    for (const Edge& e : o.pairs) out << " (" << e.u << ',' << e.v << ')';
    out << '\n';
  }
  if (decomp.truncation > 0) {
    out << "census:";
    for (std::size_t k = 1; k <= decomp.truncation; ++k) out << ' ' << decomp.census[k];
    out << '\n';
  }
}

// ----- exponential moments -----

std::size_t truncation_L(double alpha, double eps) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
  if (alpha < 1.0) return static_cast<std::size_t>(std::floor(1.0 / (1.0 - alpha)));
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  return static_cast<std::size_t>(std::ceil((2.0 + 2.0 * eps) / eps));
}

MomentParams make_moment_params(double p, double s, double theta, double alpha, double eps) {
  if (!(theta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "theta must be non-negative");
  MomentParams mp;
  mp.theta = theta;
  mp.nu = std::expm1(theta);
  if (!std::isfinite(mp.nu)) throw Error(ErrorCode::kOverflow, "e^theta overflows");
  mp.p = p;
  mp.s = s;
  const double tr = 1.0 + p * s * s * mp.nu;
  const double det = p * (1.0 - p) * s * s * mp.nu;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  mp.mu1 = (tr + disc) / 2.0;
  mp.mu2 = mp.mu1 > 0 ? det / mp.mu1 : 0.0;  // product form avoids cancellation
  mp.L = truncation_L(alpha, eps);
  mp.alpha_ladder.assign(mp.L + 2, 0.0);
  for (std::size_t k = 1; k <= mp.L; ++k) mp.alpha_ladder[k] = static_cast<double>(k - 1) / static_cast<double>(k);
  mp.alpha_ladder[mp.L + 1] =
      std::min(alpha, static_cast<double>(mp.L) / static_cast<double>(mp.L + 1));
  return mp;
}

namespace {

using Vec2 = std::array<double, 2>;

// One step v <- v T with T[a][b] = Pr(I = b) (1 + a b s^2 nu); returns the log
// of the factor removed to keep the vector normalized.
double step(Vec2& v, const MomentParams& mp) {
  const double q = 1.0 - mp.p;
  const double boost = 1.0 + mp.s * mp.s * mp.nu;
  const Vec2 w{(v[0] + v[1]) * q, (v[0] + v[1] * boost) * mp.p};
  const double scale = std::max(w[0], w[1]);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    v = w;
    return 0.0;
  }
  v = {w[0] / scale, w[1] / scale};
  return std::log(scale);
}

}  // namespace

double exact_dp_log_moment(MomentKind kind, std::size_t k, const MomentParams& mp) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  double log_scale = 0.0;
  switch (kind) {
    case MomentKind::kCycle: {
      // trace(T^k) = sum over the starting state a of (e_a T^k)[a].
      double total = 0.0;
      std::array<double, 2> logs{};
      std::array<double, 2> vals{};
      for (int a = 0; a < 2; ++a) {
        Vec2 v{a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0};
        double ls = 0.0;
        for (std::size_t t = 0; t < k; ++t) ls += step(v, mp);
        logs[static_cast<std::size_t>(a)] = ls;
        vals[static_cast<std::size_t>(a)] = v[static_cast<std::size_t>(a)];
      }
      const double anchor = std::max(logs[0], logs[1]);
      for (int a = 0; a < 2; ++a) {
        total += vals[static_cast<std::size_t>(a)] * std::exp(logs[static_cast<std::size_t>(a)] - anchor);
      }
      return anchor + std::log(total);
    }
    case MomentKind::kFreeChain: {
      Vec2 v{1.0 - mp.p, mp.p};
      for (std::size_t t = 0; t < k; ++t) log_scale += step(v, mp);
      return log_scale + std::log(v[0] + v[1]);
    }
    case MomentKind::kConfinedChain: {
      // I_0 = 1 pinned; I_1..I_{k-1} free; I_k = 1 pinned (no Pr factor).
      Vec2 v{0.0, 1.0};
      for (std::size_t t = 0; t + 1 < k; ++t) log_scale += step(v, mp);
      const double boost = 1.0 + mp.s * mp.s * mp.nu;
      return log_scale + std::log(v[0] + v[1] * boost);
    }
  }
  throw Error(ErrorCode::kInternal, "unknown moment kind");
}

double exact_dp_moment(MomentKind kind, std::size_t k, const MomentParams& mp) {
  const double out = std::exp(exact_dp_log_moment(kind, k, mp));
  if (!std::isfinite(out)) throw Error(ErrorCode::kOverflow, "moment overflows double range");
  return out;
}

ChainCoefficients moment_coefficients(MomentKind kind, const MomentParams& mp) {
  if (kind == MomentKind::kCycle) return {1.0, 1.0};
  const double gap = mp.mu1 - mp.mu2;
  if (!(mp.mu2 > 0.0) || gap <= 1e-12 * mp.mu1) {
    throw Error(ErrorCode::kIllConditioned, "roots too close for a coefficient solve");
  }
  const double d1 = exact_dp_moment(kind, 1, mp);
  const double d2 = exact_dp_moment(kind, 2, mp);
  ChainCoefficients c;
  c.c1 = (d2 - mp.mu2 * d1) / (mp.mu1 * gap);
  c.c2 = (mp.mu1 * d1 - d2) / (mp.mu2 * gap);
  return c;
}

double closed_form_moment(MomentKind kind, std::size_t k, const MomentParams& mp) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (mp.nu == 0.0) return 1.0;
  const auto kk = static_cast<double>(k);
  double out = 0;
  if (kind == MomentKind::kCycle) {
    out = std::pow(mp.mu1, kk) + std::pow(mp.mu2, kk);
  } else {
    const auto c = moment_coefficients(kind, mp);
    out = c.c1 * std::pow(mp.mu1, kk) + c.c2 * std::pow(mp.mu2, kk);
  }
  if (!std::isfinite(out)) throw Error(ErrorCode::kOverflow, "moment overflows double range");
  return out;
}

}  // namespace loadmatch
