#include "loadmatch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "loadmatch/balance.hpp"
#include "loadmatch/error.hpp"
#include "loadmatch/limitdist.hpp"
#include "loadmatch/oracles.hpp"
#include "loadmatch/rng.hpp"

namespace loadmatch {

namespace {

std::string edge_str(Edge e) { return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"; }

std::string set_str(const VertexSet& s) {
  std::string out = "{";
  for (const Vertex v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

std::string perm_str(const Matching& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) out += (i ? "," : "") + std::to_string(m(static_cast<Vertex>(i)));
  return out + "]";
}

std::size_t cycle_len(const Matching& sigma, Vertex x) {
  std::size_t len = 1;
  for (Vertex y = sigma(x); y != x; y = sigma(y)) ++len;
  return len;
}

Graph random_graph(Rng& rng, std::size_t n, double q) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (rng.bernoulli(q)) edges.push_back({i, j});
    }
  }
  return graph_from_canonical_edges(n, std::move(edges));
}

Matching random_matching(Rng& rng, std::size_t n) {
  std::vector<Vertex> img(n);
  std::iota(img.begin(), img.end(), Vertex{0});
  rng.shuffle(img);
  return Matching(img);
}

// Accumulates one property: counts cases and keeps the first witness.
struct Prop {
  PropertyResult r;
  explicit Prop(std::string name) { r.name = std::move(name); }
  void check(bool ok, const std::function<std::string()>& witness) {
    ++r.cases;
    if (!ok && r.pass) {
      r.pass = false;
      r.witness = witness();
    }
  }
  void check(const std::optional<std::string>& failure) {
    ++r.cases;
    if (failure && r.pass) {
      r.pass = false;
      r.witness = *failure;
    }
  }
};

}  // namespace

std::string describe_graph(const Graph& g) {
  std::string out = "n=" + std::to_string(g.num_vertices()) + " E=[";
  bool first = true;
  for (const Edge& e : g.edges()) {
    out += (first ? "" : " ") + std::to_string(e.u) + "-" + std::to_string(e.v);
    first = false;
  }
  return out + "]";
}

std::optional<std::string> check_full_orbits(const Matching& sigma, const OrbitDecomposition& d) {
  const std::size_t n = sigma.size();
  std::set<Edge> seen;
  for (std::size_t idx = 0; idx < d.orbits.size(); ++idx) {
    const Orbit& o = d.orbits[idx];
    const std::string where = "sigma=" + perm_str(sigma) + " orbit " + std::to_string(idx);
    if (o.is_chain() || o.pairs.empty()) return where + ": not a cycle";
    for (std::size_t t = 0; t < o.length(); ++t) {
      if (!seen.insert(o.pairs[t]).second) return where + ": pair " + edge_str(o.pairs[t]) + " repeated";
      const Edge next = make_edge(sigma(o.pairs[t].u), sigma(o.pairs[t].v));
      if (next != o.pairs[(t + 1) % o.length()]) return where + ": successor of " + edge_str(o.pairs[t]);
    }
    if (*std::min_element(o.pairs.begin(), o.pairs.end()) != o.pairs.front()) return where + ": not rotated";
    const Edge e = o.pairs.front();
    const std::size_t nx = cycle_len(sigma, e.u);
    const std::size_t ny = cycle_len(sigma, e.v);
    if (o.kind == OrbitKind::kSpecialCycle) {
      if (nx % 2 != 0 || o.length() != nx / 2) return where + ": special length " + std::to_string(o.length());
    } else if (o.length() != std::lcm(nx, ny)) {
      return where + ": length " + std::to_string(o.length()) + " vs lcm " + std::to_string(std::lcm(nx, ny));
    }
    if (idx > 0 && !(d.orbits[idx - 1].pairs.front() < e)) return where + ": orbits out of order";
  }
  if (seen.size() != n * (n - 1) / 2) {
    return "sigma=" + perm_str(sigma) + ": covers " + std::to_string(seen.size()) + " of " +
           std::to_string(n * (n - 1) / 2) + " pairs";
  }
  return std::nullopt;
}

std::optional<std::string> check_restricted_orbits(const Matching& pi_star, const PartialMatching& pi_check,
                                                   const VertexSet& u_prev, const std::set<Edge>& e_prev,
                                                   const VertexSet& u, std::size_t truncation,
                                                   const OrbitDecomposition& d) {
  struct Ref {
    std::vector<Edge> pairs;
    bool cycle = false;
    bool confined = false;
  };
  const Matching ext = pi_star.inverse() * pi_check.lowest_extension();
  const Matching inv = ext.inverse();
  const std::string where = "pi*=" + perm_str(pi_star) + " U=" + set_str(u) + " Uprev=" + set_str(u_prev);
  std::vector<Ref> ref;
  for (const Orbit& o : decompose_orbits_sigma(ext).orbits) {
    const std::size_t m = o.length();
    std::size_t start = m;
    for (std::size_t t = 0; t < m; ++t) {
      if (!d.in_universe(o.pairs[t])) {
        start = t;
        break;
      }
    }
    if (start == m) {
      ref.push_back({o.pairs, true, false});
      continue;
    }
    std::vector<Edge> run;
    for (std::size_t step = 1; step <= m; ++step) {
      const Edge e = o.pairs[(start + step) % m];
      if (d.in_universe(e)) {
        run.push_back(e);
        continue;
      }
      if (!run.empty()) {
        const Edge before = make_edge(inv(run.front().u), inv(run.front().v));
        ref.push_back({run, false, e_prev.count(e) > 0 || e_prev.count(before) > 0});
        run.clear();
      }
    }
  }
  if (ref.size() != d.orbits.size()) {
    return where + ": " + std::to_string(d.orbits.size()) + " orbits vs " + std::to_string(ref.size()) + " expected";
  }
  std::size_t covered = 0;
  for (const Orbit& o : d.orbits) {
    covered += o.length();
    const auto hit = std::find_if(ref.begin(), ref.end(), [&](const Ref& r) {
      if (r.cycle != !o.is_chain() || r.pairs.size() != o.length()) return false;
      return o.is_chain() ? r.pairs == o.pairs
                          : std::find(r.pairs.begin(), r.pairs.end(), o.pairs.front()) != r.pairs.end();
    });
    if (hit == ref.end()) return where + ": no reference orbit through " + edge_str(o.pairs.front());
    if (o.is_chain() && hit->confined != (o.kind == OrbitKind::kConfinedChain)) {
      return where + ": chain at " + edge_str(o.pairs.front()) + " misclassified";
    }
  }
  std::size_t universe = 0;
  for (const Vertex a : u) {
    for (const Vertex b : u) universe += a < b && d.in_universe({a, b}) ? 1 : 0;
  }
  if (covered != universe) return where + ": orbits cover " + std::to_string(covered) + " of " + std::to_string(universe);

  // Census: vertices of U \ U_prev whose whole sigma-cycle stays in U.
  const Matching sigma = pi_star.inverse() * pi_check.lowest_extension();
  std::vector<std::size_t> census(truncation + 1, 0);
  for (const Vertex v : u) {
    if (u_prev.contains(v)) continue;
    const std::size_t len = cycle_len(sigma, v);
    bool inside = true;
    Vertex w = v;
    for (std::size_t s = 0; s < len; ++s, w = sigma(w)) inside = inside && u.contains(w);
    if (inside && len <= truncation) ++census[len];
  }
  if (census != d.census) return where + ": census mismatch";
  return std::nullopt;
}

std::optional<std::string> check_recovery_trial(const CorrelatedPair& pair, const RecoveryResult& result,
                                                const AlgoConfig& cfg, const ModelParams& params, std::size_t L,
                                                RecoveryTally& tally) {
  (void)params;
  ++tally.trials;
  if (!result.u_n.empty()) ++tally.active;
  const std::string where = "pi*=" + perm_str(pair.pi_star) + " G1 " + describe_graph(pair.g1) + " G2 " +
                            describe_graph(pair.g2);
  VertexSet prev;
  for (const RoundTrace& r : result.rounds) {
    if (!set_intersection(prev, r.v_k).empty()) return where + ": round " + std::to_string(r.k) + " reselects";
    if (set_union(prev, r.v_k) != r.u_k) return where + ": round " + std::to_string(r.k) + " breaks nesting";
    for (const Vertex v : r.v_k) {
      if (!result.pi_tilde.defined(v) || result.pi_tilde(v) != r.pi_k(v)) {
        return where + ": pi~ disagrees with pi_" + std::to_string(r.k) + " at " + std::to_string(v);
      }
    }
    prev = r.u_k;
  }
  if (prev != result.u_n || result.pi_tilde.domain() != result.u_n) return where + ": U_N differs from dom pi~";
  if (const auto k = level_set_violation(result, pair.g1, pair.g2, cfg)) {
    return where + ": level set fails in round " + std::to_string(*k);
  }
  const VertexSet cor = correct_set(result, pair.pi_star);
  if (!is_subset(cor, result.u_n)) return where + ": U_cor not inside U_N";
  const auto [heavy, light] = heavy_light_sets(pair.pi_star, pair.g1, pair.g2, cfg.alpha, cfg.epsilon);
  (void)light;
  const Rational gap =
      near_maximizer_gap(pair.pi_star, pair.g1, pair.g2, cor, heavy, alpha_eps_rational(cfg.alpha, cfg.epsilon));
  if (gap < Rational(0)) return where + ": near-maximizer gap " + gap.to_string();
  for (const RoundConstraint& rc : round_constraints(result, pair.pi_star, pair.g1, pair.g2, cfg, L)) {
    if (!rc.item_iii) continue;
    ++tally.item_iii_rounds;
    if (!rc.constraint) return where + ": E_k constraint fails in round " + std::to_string(rc.k);
  }
  return std::nullopt;
}

RecoveryResult reference_recovery(const Graph& g1, const Graph& g2, const AlgoConfig& cfg) {
  const std::size_t n = g1.num_vertices();
  std::map<std::vector<Edge>, std::vector<Rational>> memo;
  auto loads_of = [&](const Matching& pi) {
    const Graph h = intersection_graph(g1, g2, pi);
    auto it = memo.find(h.edges());
    if (it != memo.end()) return it->second;
    std::vector<Rational> out;
    for (const double x : loads_qp_oracle(h, 1e-12)) {
      Rational r;
      if (!Rational::simplest_within(x, 1e-7, static_cast<std::int64_t>(std::max<std::size_t>(n, 1)), r)) {
        throw Error(ErrorCode::kInternal, "quadratic oracle load is not a small fraction");
      }
      out.push_back(r);
    }
    memo.emplace(h.edges(), out);
    return out;
  };
  RecoveryResult res;
  res.pi_tilde = PartialMatching(n);
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  for (std::size_t k = 0; k <= cfg.N; ++k) {
    std::vector<Vertex> perm = all;
    bool have = false;
    std::vector<Vertex> best;
    Matching best_pi;
    do {
      const Matching pi(perm);
      if (!res.pi_tilde.agrees_with(pi)) continue;
      const auto loads = loads_of(pi);
      std::vector<Vertex> v;
      for (Vertex i = 0; i < n; ++i) {
        if (!res.u_n.contains(i) && cfg.intervals[k].contains(loads[i])) v.push_back(i);
      }
      if (!have || v.size() > best.size() || (v.size() == best.size() && v < best)) {
        have = true;
        best = v;
        best_pi = pi;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const Vertex i : best) res.pi_tilde.assign(i, best_pi(i));
    res.u_n = set_union(res.u_n, VertexSet::from_sorted(best));
    RoundTrace tr;
    tr.k = k;
    tr.pi_k = best_pi;
    tr.v_k = VertexSet::from_sorted(best);
    tr.u_k = res.u_n;
    res.rounds.push_back(tr);
  }
  return res;
}

// ----- suites -----

namespace {

using LoadSolver = std::function<LoadProfile(const Graph&)>;

std::vector<PropertyResult> balance_suite(std::uint64_t seed, bool mutate) {
  LoadSolver solve = [](const Graph& g) { return balanced_loads(g); };
  if (mutate) {
    // Corrupted solver: the first vertex of any graph with edges is overcharged.
    solve = [](const Graph& g) {
      LoadProfile p = balanced_loads(g);
      if (g.num_edges() > 0) p.loads[0] += Rational(1, static_cast<std::int64_t>(g.num_vertices()) + 1);
      return p;
    };
  }
  Rng rng(seed, 101);
  Prop qp("balance.qp_oracle_agreement");
  for (int t = 0; t < 200; ++t) {
    const Graph g = random_graph(rng, 2 + rng.below(11), 0.1 + 0.6 * rng.uniform());
    const LoadProfile p = solve(g);
    const auto ref = loads_qp_oracle(g, 1e-12);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      qp.check(std::abs(p.loads[v].to_double() - ref[v]) < 1e-7, [&] {
        return describe_graph(g) + " vertex " + std::to_string(v) + " exact " + p.loads[v].to_string() + " qp " +
               std::to_string(ref[v]);
      });
    }
  }
  Prop var("balance.variational_level_sets");
  for (int t = 0; t < 100; ++t) {
    const Graph g = random_graph(rng, 2 + rng.below(11), 0.15 + 0.6 * rng.uniform());
    const Rational tt(1 + static_cast<std::int64_t>(rng.below(12)), 1 + static_cast<std::int64_t>(rng.below(8)));
    const FtBrute brute = ft_bruteforce(g, tt);
    const VertexSet fast = ft_max_set(g, tt);
    const VertexSet level = load_level_set(solve(g), tt.reciprocal(), false);
    var.check(fast == brute.maximizer && level == brute.maximizer &&
                  ft_value(g, tt, fast) == brute.value,
              [&] {
                return describe_graph(g) + " t=" + tt.to_string() + " brute " + set_str(brute.maximizer) + " flow " +
                       set_str(fast) + " level " + set_str(level);
              });
  }
  Prop one("balance.load_one_characterization");
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 5 + rng.below(36);
    const Graph g = random_graph(rng, n, (0.5 + 2.0 * rng.uniform()) / static_cast<double>(n));
    const LoadProfile p = solve(g);
    one.check(load_level_set(p, Rational(1), false) == set_difference(VertexSet::range(n), tree_components(g)) &&
                  load_level_set(p, Rational(1), true) == two_cores_of_nonsimple_components(g),
              [&] { return describe_graph(g); });
  }
  Prop mono("balance.monotonicity");
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng.below(18);
    const Graph g = random_graph(rng, n, 0.3 * rng.uniform());
    const Vertex a = static_cast<Vertex>(rng.below(n));
    Vertex b = static_cast<Vertex>(rng.below(n - 1));
    if (b >= a) ++b;
    std::vector<Edge> es = g.edges();
    es.push_back(make_edge(a, b));
    const Graph h = graph_from_canonical_edges(n, es);
    const LoadProfile before = solve(g);
    const LoadProfile after = solve(h);
    for (Vertex v = 0; v < n; ++v) {
      mono.check(after.loads[v] >= before.loads[v], [&] {
        return describe_graph(g) + " plus " + edge_str(make_edge(a, b)) + " lowers vertex " + std::to_string(v);
      });
    }
  }
  Prop alloc("balance.allocation_realizes_loads");
  for (int t = 0; t < 60; ++t) {
    const Graph g = random_graph(rng, 2 + rng.below(20), 0.4 * rng.uniform() + 0.05);
    const LoadProfile p = solve(g);
    const Allocation a = reconstruct_allocation(g, balanced_loads(g));
    alloc.check(is_balanced(g, a).balanced && allocation_loads(g, a) == p.loads, [&] { return describe_graph(g); });
  }
  return {qp.r, var.r, one.r, mono.r, alloc.r};
}

std::vector<PropertyResult> orbits_suite(std::uint64_t seed, bool mutate) {
  auto decompose = [mutate](const Matching& ps, const Matching& pi) {
    OrbitDecomposition d = decompose_orbits(ps, pi);
    if (mutate) {
      // Corrupted decomposer: the longest orbit loses its last pair.
      auto it = std::max_element(d.orbits.begin(), d.orbits.end(),
                                 [](const Orbit& a, const Orbit& b) { return a.length() < b.length(); });
      if (it != d.orbits.end() && it->length() > 1) it->pairs.pop_back();
    }
    return d;
  };
  auto closed = [mutate](MomentKind kind, std::size_t k, const MomentParams& mp) {
    return closed_form_moment(kind, k, mp) * (mutate ? 1.0 + 1e-6 : 1.0);
  };
  Rng rng(seed, 202);
  Prop full("orbits.full_invariants");
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng.below(30);
    const Matching ps = random_matching(rng, n);
    const Matching pi = random_matching(rng, n);
    full.check(check_full_orbits(ps.inverse() * pi, decompose(ps, pi)));
  }
  Prop restricted("orbits.restricted_reference");
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 3 + rng.below(20);
    const Matching ps = random_matching(rng, n);
    const Matching pi = random_matching(rng, n);
    std::vector<Vertex> uv;
    std::vector<Vertex> pv;
    for (Vertex v = 0; v < n; ++v) {
      if (rng.bernoulli(0.75)) {
        uv.push_back(v);
        if (rng.bernoulli(0.4)) pv.push_back(v);
      }
    }
    std::set<Edge> e_prev;
    for (std::size_t a = 0; a < pv.size(); ++a) {
      for (std::size_t b = a + 1; b < pv.size(); ++b) {
        if (rng.bernoulli(0.5)) e_prev.insert({pv[a], pv[b]});
      }
    }
    const VertexSet u = VertexSet::from_sorted(uv);
    const VertexSet up = VertexSet::from_sorted(pv);
    const PartialMatching check = PartialMatching::restrict(pi, u);
    OrbitDecomposition d = decompose_orbits_restricted(ps, check, up, e_prev, u, 6);
    if (mutate && !d.orbits.empty()) d.orbits.pop_back();
    restricted.check(check_restricted_orbits(ps, check, up, e_prev, u, 6, d));
  }
  Prop moments("orbits.closed_form_moments");
  Prop brute("orbits.dp_against_enumeration");
  for (double p : {0.05, 0.3, 0.8}) {
    for (double s : {0.2, 0.6, 0.95}) {
      for (double theta : {0.3, 1.0, 2.5}) {
        const MomentParams mp = make_moment_params(p, s, theta, 0.7, 0.1);
        for (auto kind : {MomentKind::kCycle, MomentKind::kFreeChain, MomentKind::kConfinedChain}) {
          for (std::size_t k = 1; k <= 12; ++k) {
            const double a = closed(kind, k, mp);
            const double b = exact_dp_moment(kind, k, mp);
            moments.check(std::abs(a - b) <= 1e-9 * std::abs(b), [&] {
              std::ostringstream w;
              w.precision(17);
              w << "p=" << p << " s=" << s << " theta=" << theta << " kind=" << static_cast<int>(kind)
                << " k=" << k << " closed=" << a << " dp=" << b;
              return w.str();
            });
          }
          // Enumeration over the indicator vectors for short lengths.
          for (std::size_t k = 1; k <= 4; ++k) {
            const std::size_t nI = kind == MomentKind::kCycle ? k : k + 1;
            double total = 0;
            for (std::uint32_t ib = 0; ib < (1U << nI); ++ib) {
              double w = 1;
              for (std::size_t t = 0; t < nI; ++t) {
                const bool on = ib >> t & 1U;
                if (kind == MomentKind::kConfinedChain && (t == 0 || t == k)) {
                  w *= on ? 1 : 0;
                } else {
                  w *= on ? p : 1 - p;
                }
              }
              if (w == 0) continue;
              for (std::uint32_t kb = 0; kb < (1U << k); ++kb) {
                double pk = 1;
                int sum = 0;
                for (std::size_t t = 0; t < k; ++t) {
                  const bool kt = kb >> t & 1U;
                  pk *= kt ? s * s : 1 - s * s;
                  sum += kt && (ib >> t & 1U) && (ib >> ((t + 1) % nI) & 1U) ? 1 : 0;
                }
                total += w * pk * std::exp(theta * sum);
              }
            }
            const double dp = exact_dp_moment(kind, k, mp);
            brute.check(std::abs(total - dp) <= 1e-11 * total, [&] {
              return "p=" + std::to_string(p) + " s=" + std::to_string(s) + " k=" + std::to_string(k);
            });
          }
        }
      }
    }
  }
  return {full.r, restricted.r, moments.r, brute.r};
}

std::vector<PropertyResult> model_suite(std::uint64_t seed, bool mutate) {
  auto sample = [mutate](const ModelParams& m, std::uint64_t s) {
    CorrelatedPair pair = sample_correlated_pair(m, s);
    if (mutate) {
      // Corrupted sampler: G2 gains one pair the rule does not produce.
      for (Vertex i = 0; i < m.n; ++i) {
        for (Vertex j = i + 1; j < m.n; ++j) {
          if (!pair.g2.has_edge(i, j)) {
            std::vector<Edge> es = pair.g2.edges();
            es.push_back({i, j});
            pair.g2 = graph_from_canonical_edges(m.n, es);
            return pair;
          }
        }
      }
    }
    return pair;
  };
  Rng rng(seed, 303);
  Prop rule("model.edge_rule");
  for (int t = 0; t < 20; ++t) {
    const ModelParams m = forced_params(25, 0.2 + 0.6 * rng.uniform(), 0.2 + 0.7 * rng.uniform());
    const std::uint64_t s = rng.next();
    const CorrelatedPair pair = sample(m, s);
    const IndicatorSource src(m, s);
    const Matching inv = pair.pi_star.inverse();
    for (Vertex i = 0; i < m.n; ++i) {
      for (Vertex j = i + 1; j < m.n; ++j) {
        const auto idx = pair_index(i, j, m.n);
        const bool g1 = src.I(idx) && src.J1(idx);
        const bool g2 = src.I(pair_index(inv(i), inv(j), m.n)) && src.J2(idx);
        rule.check(pair.g1.has_edge(i, j) == g1 && pair.g2.has_edge(i, j) == g2, [&] {
          return "seed=" + std::to_string(s) + " pair " + edge_str({i, j});
        });
      }
    }
  }
  Prop relabel("model.full_correlation_relabels");
  for (int t = 0; t < 10; ++t) {
    const ModelParams m = forced_params(30, 0.3, 1.0);
    const std::uint64_t s = rng.next();
    const CorrelatedPair pair = sample(m, s);
    relabel.check(intersection_graph(pair.g1, pair.g2, pair.pi_star) == pair.g1 &&
                      pair.g1.num_edges() == pair.g2.num_edges(),
                  [&] { return "seed=" + std::to_string(s); });
  }
  Prop law("model.intersection_law");
  {
    const ModelParams m = derive_params(200, 0.5, 2.0);
    const double q = m.p * m.s * m.s;
    const double pairs = 200.0 * 199.0 / 2.0 * 60;
    double edges = 0;
    for (int t = 0; t < 60; ++t) {
      const CorrelatedPair pair = sample(m, rng.next());
      edges += static_cast<double>(intersection_graph(pair.g1, pair.g2, pair.pi_star).num_edges());
    }
    const double se = std::sqrt(pairs * q * (1 - q));
    law.check(std::abs(edges - pairs * q) < 4 * se, [&] {
      return "edges " + std::to_string(edges) + " expected " + std::to_string(pairs * q);
    });
  }
  Prop ratio("model.pair_ratio_identity");
  for (double p : {0.01, 0.1, 0.3, 0.7, 0.95}) {
    for (double s : {0.05, 0.2, 0.5, 0.9, 0.99}) {
      const ModelParams q = forced_params(10, p, s);
      const double m1 = p * s;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double joint = a && b ? p * s * s : (a || b ? p * s * (1 - s) : 1 - 2 * p * s + p * s * s);
          const double prod = (a ? m1 : 1 - m1) * (b ? m1 : 1 - m1);
          const auto [lhs, rhs] = pair_ratio_identity(a != 0, b != 0, q);
          ratio.check(std::abs(lhs - joint / prod) <= 1e-12 * std::abs(lhs) &&
                          std::abs(rhs - joint / prod) <= 1e-12 * std::abs(rhs),
                      [&] { return "p=" + std::to_string(p) + " s=" + std::to_string(s); });
        }
      }
    }
  }
  Prop post("model.posterior_weights");
  for (int t = 0; t < 3; ++t) {
    const ModelParams m = forced_params(6, 0.3 + 0.4 * rng.uniform(), 0.3 + 0.5 * rng.uniform());
    const CorrelatedPair pair = sample(m, rng.next());
    const PosteriorTable tab = posterior_exact(pair.g1, pair.g2, m);
    for (std::size_t x = 0; x < tab.count(); x += 7) {
      const std::size_t y = (x * 31 + 5) % tab.count();
      const double diff = static_cast<double>(tab.edge_count(x)) - static_cast<double>(tab.edge_count(y));
      const double got = tab.log_weight(x) - tab.log_weight(y);
      post.check(std::abs(got - diff * std::log(m.P)) <= 1e-9 * std::max(1.0, std::abs(got)) &&
                     tab.edge_count(x) == intersection_graph(pair.g1, pair.g2, tab.permutation(x)).num_edges(),
                 [&] { return "G1 " + describe_graph(pair.g1) + " perm " + perm_str(tab.permutation(x)); });
    }
  }
  return {rule.r, relabel.r, law.r, ratio.r, post.r};
}

std::vector<PropertyResult> recovery_suite(std::uint64_t seed, bool mutate) {
  auto run = [mutate](const Graph& g1, const Graph& g2, const AlgoConfig& cfg) {
    RecoveryResult r = iterative_matching(g1, g2, cfg);
    if (mutate && r.u_n.size() >= 2) {
      // Corrupted algorithm: the images of the first two recovered vertices are swapped.
      const Vertex a = r.u_n.members()[0];
      const Vertex b = r.u_n.members()[1];
      std::vector<Vertex> img = r.pi_tilde.raw();
      std::swap(img[a], img[b]);
      PartialMatching swapped(img.size());
      for (Vertex v = 0; v < img.size(); ++v) {
        if (img[v] != PartialMatching::kUnset) swapped.assign(v, img[v]);
      }
      r.pi_tilde = swapped;
    }
    return r;
  };
  Rng rng(seed, 404);
  Prop structure("recovery.structural_invariants");
  RecoveryTally tally;
  const ModelParams dense = forced_params(7, 0.6, 0.9);
  const AlgoConfig dense_cfg = AlgoConfig::make(1.0, 0.1, 0.25, 2.0);
  for (int t = 0; t < 20; ++t) {
    const CorrelatedPair pair = sample_correlated_pair(dense, rng.next());
    structure.check(check_recovery_trial(pair, run(pair.g1, pair.g2, dense_cfg), dense_cfg, dense,
                                         truncation_L(1.0, 0.1), tally));
  }
  const ModelParams model = derive_params(7, 0.7, 1.5);
  const AlgoConfig model_cfg = AlgoConfig::make(0.7, 0.1, 0.25, model.A);
  for (int t = 0; t < 20; ++t) {
    const CorrelatedPair pair = sample_correlated_pair(model, rng.next());
    structure.check(check_recovery_trial(pair, run(pair.g1, pair.g2, model_cfg), model_cfg, model,
                                         truncation_L(0.7, 0.1), tally));
  }
  Prop reference("recovery.reference_rerun");
  const ModelParams small = forced_params(6, 0.6, 0.9);
  for (int t = 0; t < 6; ++t) {
    const CorrelatedPair pair = sample_correlated_pair(small, rng.next());
    const RecoveryResult got = run(pair.g1, pair.g2, dense_cfg);
    const RecoveryResult ref = reference_recovery(pair.g1, pair.g2, dense_cfg);
    reference.check(got.u_n == ref.u_n && got.pi_tilde == ref.pi_tilde, [&] {
      return "G1 " + describe_graph(pair.g1) + " G2 " + describe_graph(pair.g2) + " U_N " + set_str(got.u_n) +
             " reference " + set_str(ref.u_n);
    });
  }
  Prop empty("recovery.empty_graphs");
  {
    const Graph e = graph_from_canonical_edges(6, {});
    empty.check(run(e, e, model_cfg).u_n.empty(), [] { return std::string("empty graphs recover vertices"); });
  }
  return {structure.r, reference.r, empty.r};
}

std::vector<PropertyResult> limit_suite(std::uint64_t seed, bool mutate) {
  auto loads = [mutate](const Graph& g, const LimitOptions& o) {
    auto v = tiered_loads(g, o);
    if (mutate && !v.empty()) {
      // Corrupted tier: vertex 0 is reported a fraction heavier.
      const Rational bumped = v[0].exact.value_or(Rational(0)) + Rational(1, 2);
      v[0] = LoadValue::of(bumped);
    }
    return v;
  };
  Rng rng(seed, 505);
  Prop one("limit.load_one_characterization");
  Prop overlap("limit.tier_overlap");
  Prop dens("limit.max_load_is_densest_density");
  LimitOptions exact;
  LimitOptions approx;
  approx.exact_cutoff = 0;
  for (int t = 0; t < 3; ++t) {
    const Graph g = sample_gnp(5000, 1.5 + rng.uniform(), seed, 1000 + static_cast<std::uint64_t>(t));
    const auto a = loads(g, exact);
    const auto b = loads(g, approx);
    const VertexSet trees = tree_components(g);
    const VertexSet cores = two_cores_of_nonsimple_components(g);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      for (const auto* side : {&a, &b}) {
        const LoadValue& x = (*side)[v];
        one.check(x.exact && (*x.exact < Rational(1)) == trees.contains(v) &&
                      (*x.exact > Rational(1)) == cores.contains(v),
                  [&] { return "G(5000) trial " + std::to_string(t) + " vertex " + std::to_string(v); });
      }
      overlap.check(std::abs(a[v].value - b[v].value) < 1e-5 && (!b[v].exact || b[v].exact == a[v].exact), [&] {
        return "trial " + std::to_string(t) + " vertex " + std::to_string(v) + " exact " +
               std::to_string(a[v].value) + " approx " + std::to_string(b[v].value);
      });
    }
    const auto top = *std::max_element(a.begin(), a.end());
    const Rational dd = densest_density(g);
    dens.check(top.exact && *top.exact == dd, [&] {
      return "trial " + std::to_string(t) + " max load " + std::to_string(top.value) + " density " + dd.to_string();
    });
  }
  Prop anchors("limit.fixed_point_anchors");
  {
    LoadECDF e;
    e.lambda = 2.0;
    e.n = 20000;
    e.seed = seed;
    for (std::uint64_t t = 0; t < 2; ++t) {
      for (const LoadValue& v : loads(sample_gnp(20000, 2.0, seed, t), exact)) e.add(v);
    }
    const double y = giant_fraction(2.0);
    const double below = e.mass_below(1.0);
    const double above = e.mass_above(1.0);
    const double zero = e.mass_at(Rational(0));
    anchors.check(std::abs(below - (1 - y)) < 0.02 && std::abs(above - two_core_fraction(2.0)) < 0.02 &&
                      std::abs(zero - std::exp(-2.0)) < 0.02,
                  [&] {
                    return "below " + std::to_string(below) + " above " + std::to_string(above) + " at0 " +
                           std::to_string(zero);
                  });
  }
  return {one.r, overlap.r, dens.r, anchors.r};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"balance", "orbits", "model", "recovery", "limit"};
  return names;
}

std::vector<PropertyResult> run_suite(std::string_view suite, std::uint64_t seed, bool mutate) {
  if (suite == "balance") return balance_suite(seed, mutate);
  if (suite == "orbits") return orbits_suite(seed, mutate);
  if (suite == "model") return model_suite(seed, mutate);
  if (suite == "recovery") return recovery_suite(seed, mutate);
  if (suite == "limit") return limit_suite(seed, mutate);
  throw Error(ErrorCode::kInvalidArgument, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace loadmatch
