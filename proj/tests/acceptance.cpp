// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
// Usage: acceptance <path-to-cli>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "loadmatch/balance.hpp"
#include "loadmatch/corrmodel.hpp"
#include "loadmatch/limitdist.hpp"
#include "loadmatch/oracles.hpp"
#include "loadmatch/orbits.hpp"
#include "loadmatch/recovery.hpp"
#include "loadmatch/verify.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace loadmatch;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(double x, int prec = 5) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

// ---- 1 ----
Outcome load_solver_oracle() {
  Outcome o;
  std::size_t graphs = 0;
  auto compare = [&](const Graph& g) {
    ++graphs;
    const LoadProfile p = balanced_loads(g);
    const auto qp = loads_qp_oracle(g, 1e-12);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (std::abs(p.loads[v].to_double() - qp[v]) > 1e-7) o.fail(describe_graph(g) + " vertex " + std::to_string(v));
    }
  };
  for (std::size_t k = 1; k <= 7; ++k) {
    for (const Graph& g : test::all_graphs(k)) {
      if (test::is_connected(g)) compare(g);
    }
  }
  test::Lcg rng(1001);
  for (int t = 0; t < 500; ++t) compare(test::random_graph(rng, 1 + rng.below(12), 0.1 + 0.7 * rng.uniform()));
  if (o.pass) o.detail = std::to_string(graphs) + " graphs within 1e-7";
  return o;
}

// ---- 2 ----
Outcome variational() {
  Outcome o;
  test::Lcg rng(1002);
  for (int t = 0; t < 300; ++t) {
    const Graph g = test::random_graph(rng, 1 + rng.below(14), 0.1 + 0.6 * rng.uniform());
    const Rational tt(1 + static_cast<std::int64_t>(rng.below(15)), 1 + static_cast<std::int64_t>(rng.below(9)));
    const FtBrute brute = ft_bruteforce(g, tt);
    const VertexSet fast = ft_max_set(g, tt);
    if (fast != brute.maximizer || ft_value(g, tt, fast) != brute.value) {
      o.fail(describe_graph(g) + " t=" + tt.to_string());
    }
  }
  if (o.pass) o.detail = "300 instances, sets and values equal";
  return o;
}

// ---- 3 ----
Outcome load_one() {
  Outcome o;
  std::size_t graphs = 0;
  for (std::size_t k = 1; k <= 7; ++k) {
    for (const Graph& g : test::all_graphs(k)) {
      ++graphs;
      const LoadProfile p = balanced_loads(g);
      const VertexSet below = set_difference(VertexSet::range(k), load_level_set(p, Rational(1), false));
      if (below != tree_components(g) || load_level_set(p, Rational(1), true) != two_cores_of_nonsimple_components(g)) {
        o.fail(describe_graph(g));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(graphs) + " isomorphism classes";
  return o;
}

// ---- 4 ----
Outcome monotonicity() {
  Outcome o;
  test::Lcg rng(1004);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(24);
    const Graph g = test::random_graph(rng, n, 0.35 * rng.uniform());
    if (g.num_edges() == n * (n - 1) / 2) continue;
    Vertex a = 0;
    Vertex b = 0;
    do {
      a = static_cast<Vertex>(rng.below(n));
      b = static_cast<Vertex>(rng.below(n));
    } while (a == b || g.has_edge(a, b));
    std::vector<Edge> es = g.edges();
    es.push_back(make_edge(a, b));
    const LoadProfile before = balanced_loads(g);
    const LoadProfile after = balanced_loads(graph_from_canonical_edges(n, es));
    for (Vertex v = 0; v < n; ++v) {
      if (after.loads[v] < before.loads[v]) o.fail(describe_graph(g) + " adding " + std::to_string(a) + "-" + std::to_string(b));
    }
  }
  if (o.pass) o.detail = "no load decreased";
  return o;
}

// ---- 5 ----
Outcome mu_lambda_anchors() {
  Outcome o;
  const LoadECDF e = empirical_load_distribution(100'000, 2.0, 3, 2024);
  const double y = giant_fraction(2.0);
  const double below = e.mass_below(1.0);
  const double above = e.mass_above(1.0);
  const double zero = e.mass_at(Rational(0));
  o.detail = "below 1 " + fmt(below) + " (oracle " + fmt(1 - y) + "), above 1 " + fmt(above) + " (oracle " +
             fmt(two_core_fraction(2.0)) + "), at 0 " + fmt(zero) + " (oracle " + fmt(std::exp(-2.0)) + ")";
  if (std::abs(below - (1 - y)) > 0.01 || std::abs(above - 0.47300) > 0.01 || std::abs(zero - std::exp(-2.0)) > 0.01) {
    o.pass = false;
  }
  return o;
}

// ---- 6 ----
Outcome rho_consistency() {
  Outcome o;
  const auto maxima = max_loads(10'000, 2.0, 5, 606);
  std::string values;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const Rational dd = densest_density(sample_gnp(10'000, 2.0, 606, t));
    if (!maxima[t].exact || *maxima[t].exact != dd) o.fail("sample " + std::to_string(t) + " density " + dd.to_string());
    values += (t ? " " : "") + dd.to_string();
  }
  if (o.pass) o.detail = "max loads " + values;
  return o;
}

// ---- 7 ----
Outcome moments() {
  Outcome o;
  const MomentKind kinds[] = {MomentKind::kCycle, MomentKind::kFreeChain, MomentKind::kConfinedChain};
  std::size_t checks = 0;
  for (double p : {0.05, 0.3, 0.8}) {
    for (double s : {0.2, 0.6, 0.95}) {
      for (double theta : {0.3, 1.0, 2.5}) {
        const MomentParams mp = make_moment_params(p, s, theta, 0.7, 0.1);
        for (MomentKind kind : kinds) {
          for (std::size_t k = 1; k <= 12; ++k) {
            const double a = closed_form_moment(kind, k, mp);
            const double b = exact_dp_moment(kind, k, mp);
            ++checks;
            if (std::abs(a - b) > 1e-9 * std::abs(b)) o.fail("closed form off at p=" + fmt(p) + " k=" + std::to_string(k));
          }
        }
      }
    }
  }
  // Monte Carlo over the indicator model itself.
  test::Lcg rng(1007);
  double worst_z = 0;
  const std::size_t draws = 1'000'000;
  for (const auto& [p, s, theta] : {std::tuple{0.3, 0.6, 1.0}, std::tuple{0.8, 0.95, 0.3}, std::tuple{0.05, 0.6, 2.5}}) {
    const MomentParams mp = make_moment_params(p, s, theta, 0.7, 0.1);
    for (MomentKind kind : kinds) {
      const std::size_t k = 5;
      const std::size_t nI = kind == MomentKind::kCycle ? k : k + 1;
      double sum = 0;
      double sum2 = 0;
      std::vector<int> ind(nI);
      for (std::size_t d = 0; d < draws; ++d) {
        for (std::size_t t = 0; t < nI; ++t) {
          const bool pinned = kind == MomentKind::kConfinedChain && (t == 0 || t == k);
          ind[t] = pinned || rng.bernoulli(p) ? 1 : 0;
        }
        int count = 0;
        for (std::size_t t = 0; t < k; ++t) count += ind[t] && ind[(t + 1) % nI] && rng.bernoulli(s * s) ? 1 : 0;
        const double x = std::exp(theta * count);
        sum += x;
        sum2 += x * x;
      }
      const double mean = sum / draws;
      const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
      const double z = std::abs(mean - closed_form_moment(kind, k, mp)) / se;
      worst_z = std::max(worst_z, z);
      if (z > 5) o.fail("Monte Carlo z=" + fmt(z) + " at p=" + fmt(p));
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " closed-form checks; 9 x 1e6 draws, worst |z| " + fmt(worst_z, 3);
  return o;
}

// ---- 8 ----
Outcome orbit_structure() {
  Outcome o;
  test::Lcg rng(1008);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(49);
    const Matching ps = test::random_matching(rng, n);
    const Matching pi = test::random_matching(rng, n);
    if (auto w = check_full_orbits(ps.inverse() * pi, decompose_orbits(ps, pi))) o.fail(*w);
  }
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng.below(22);
    const Matching ps = test::random_matching(rng, n);
    const Matching pi = test::random_matching(rng, n);
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
    const auto d = decompose_orbits_restricted(ps, check, up, e_prev, u, 6);
    if (auto w = check_restricted_orbits(ps, check, up, e_prev, u, 6, d)) o.fail(*w);
  }
  if (o.pass) o.detail = "1000 full and 200 restricted decompositions";
  return o;
}

// ---- 9 ----
Outcome likelihood() {
  Outcome o;
  for (double p : {0.01, 0.1, 0.3, 0.7, 0.95}) {
    for (double s : {0.05, 0.2, 0.5, 0.9, 0.99}) {
      const ModelParams q = forced_params(10, p, s);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const auto [lhs, rhs] = pair_ratio_identity(a != 0, b != 0, q);
          if (std::abs(lhs - rhs) > 1e-12 * std::max(std::abs(lhs), std::abs(rhs))) {
            o.fail("p=" + fmt(p) + " s=" + fmt(s));
          }
        }
      }
    }
  }
  test::Lcg rng(1009);
  for (int t = 0; t < 4; ++t) {
    const ModelParams m = forced_params(7, 0.3 + 0.4 * rng.uniform(), 0.3 + 0.5 * rng.uniform());
    const Graph g1 = test::random_graph(rng, 7, 0.5);
    const Graph g2 = test::random_graph(rng, 7, 0.5);
    const PosteriorTable tab = posterior_exact(g1, g2, m);
    for (int r = 0; r < 200; ++r) {
      const std::size_t x = rng.below(tab.count());
      const std::size_t y = rng.below(tab.count());
      const double diff = static_cast<double>(tab.edge_count(x)) - static_cast<double>(tab.edge_count(y));
      const double got = tab.weight(x) / tab.weight(y);
      const double want = std::pow(m.P, diff);
      if (std::abs(got - want) > 1e-9 * want) o.fail("weight ratio at n=7");
      if (tab.edge_count(x) != intersection_graph(g1, g2, tab.permutation(x)).num_edges()) o.fail("edge count");
    }
  }
  if (o.pass) o.detail = "100 identity checks, 800 posterior ratios";
  return o;
}

// ---- 10 ----
Outcome algorithm_end_to_end() {
  Outcome o;
  const ModelParams m = derive_params(7, 0.7, 1.5);
  const AlgoConfig cfg = AlgoConfig::make(0.7, 0.1, 0.25, m.A);
  RecoveryTally model_tally;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const CorrelatedPair pair = sample_correlated_pair(m, seed);
    const RecoveryResult a = iterative_matching(pair.g1, pair.g2, cfg);
    const RecoveryResult b = iterative_matching(pair.g1, pair.g2, cfg);
    if (a.u_n != b.u_n || a.pi_tilde != b.pi_tilde) o.fail("rerun differs at seed " + std::to_string(seed));
    if (auto w = check_recovery_trial(pair, a, cfg, m, truncation_L(0.7, 0.1), model_tally)) o.fail(*w);
  }
  // Denser pairs where heavy rounds do fire at this size.
  const ModelParams dense = forced_params(7, 0.6, 0.9);
  const AlgoConfig dense_cfg = AlgoConfig::make(1.0, 0.1, 0.25, 2.0);
  RecoveryTally dense_tally;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const CorrelatedPair pair = sample_correlated_pair(dense, seed);
    const RecoveryResult r = iterative_matching(pair.g1, pair.g2, dense_cfg);
    if (auto w = check_recovery_trial(pair, r, dense_cfg, dense, truncation_L(1.0, 0.1), dense_tally)) o.fail(*w);
  }
  if (dense_tally.item_iii_rounds == 0) o.fail("dense block never exercised the E_k constraint");
  const std::string counts = "model s=" + fmt(m.s, 3) + ": " + std::to_string(model_tally.active) +
                             "/100 trials with non-empty U_N; dense block: " + std::to_string(dense_tally.active) +
                             "/30 active, " + std::to_string(dense_tally.item_iii_rounds) + " Item-(iii) rounds";
  o.detail = o.pass ? counts : o.detail + "; " + counts;
  return o;
}

// ---- 11 ----
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.fail("no CLI path given");
    return o;
  }
  const fs::path root = fs::temp_directory_path() / ("loadmatch_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path cfg = root / "config.json";
  fs::create_directories(root);
  std::ofstream(cfg) << R"({"n": 6, "lambda": 1.2, "trials": 25, "seed": 77})";
  const std::vector<std::string> commands = {
      "--seed 3 mu-lambda --n 20000 --lambda 2 --trials 2",
      "--seed 3 --threads 2 mu-lambda --n 30000 --lambda 1.5 --trials 2",
      "--seed 4 recover --n 7 --trials 100",
      "--config " + cfg.string() + " recover",
      "--seed 5 posterior --n 6",
      "--seed 6 sample --n 40",
      "--seed 6 sample --model gnp --n 2000 --lambda 3",
      "--seed 7 verify --suite model",
      "--seed 8 admissible-check --n 300",
      "--seed 9 event-d --n 16 --D 3 --delta 0.2",
  };
  std::size_t files = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string outs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / ("c" + std::to_string(c) + "_" + std::to_string(rep));
      fs::create_directories(dir);
      const std::string line = "\"" + cli + "\" --out \"" + dir.string() + "\" " + commands[c] + " > /dev/null 2>&1";
      if (std::system(line.c_str()) != 0) {
        o.fail("command failed: " + commands[c]);
        break;
      }
      std::vector<fs::path> listing;
      for (const auto& entry : fs::directory_iterator(dir)) listing.push_back(entry.path().filename());
      std::sort(listing.begin(), listing.end());
      for (const auto& name : listing) outs[rep] += name.string() + "\n" + slurp(dir / name);
      if (rep == 0) files += listing.size();
    }
    if (outs[0].empty() || outs[0] != outs[1]) o.fail("outputs differ: " + commands[c]);
  }
  fs::remove_all(root);
  if (o.pass) o.detail = std::to_string(commands.size()) + " invocations, " + std::to_string(files) + " files identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "load-solver oracle equivalence", 300, load_solver_oracle},
      {2, "variational lemma", 120, variational},
      {3, "load-1 characterization", 60, load_one},
      {4, "monotonicity", 60, monotonicity},
      {5, "mu_lambda anchors at lambda=2, n=1e5", 600, mu_lambda_anchors},
      {6, "rho consistency", 300, rho_consistency},
      {7, "moment identities", 180, moments},
      {8, "orbit structure", 120, orbit_structure},
      {9, "likelihood identity", 60, likelihood},
      {10, "algorithm end-to-end at n=7", 600, algorithm_end_to_end},
      {11, "CLI determinism", 600, [&] { return cli_determinism(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) out.fail("over time budget " + fmt(c.limit_s, 4) + " s; " + out.detail);
    failed += out.pass ? 0 : 1;
    std::printf("[%s] criterion %d %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
