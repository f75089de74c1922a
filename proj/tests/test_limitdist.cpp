#include <cmath>
#include <sstream>

#include "doctest.h"
#include "loadmatch/balance.hpp"
#include "loadmatch/limitdist.hpp"
#include "loadmatch/oracles.hpp"
#include "support.hpp"

using namespace loadmatch;

namespace {

// Largest root of y = 1 - exp(-lambda y) by bisection on [1/2, 1]; the
// positive root exceeds 1/2 for every lambda >= 1.4.
double giant_by_bisection(double lambda) {
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (mid - (1 - std::exp(-lambda * mid)) < 0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("fixed-point anchors") {
  CHECK(giant_fraction(0.0) == 0.0);
  CHECK(giant_fraction(1.0) == 0.0);
  CHECK(two_core_fraction(0.7) == 0.0);
  CHECK(std::abs(giant_fraction(2.0) - 0.79681) < 1e-5);
  CHECK(std::abs(giant_fraction(4.0) - 0.98017) < 1e-4);
  CHECK(std::abs(two_core_fraction(2.0) - 0.47300) < 1e-4);
  CHECK(std::abs(two_core_fraction(4.0) - 0.9024) < 1e-3);
  for (double lam : {1.5, 2.0, 3.0, 5.0, 8.0}) {
    CHECK(std::abs(giant_fraction(lam) - giant_by_bisection(lam)) < 1e-10);
  }
  CHECK(test::throws_code([] { (void)giant_fraction(-1); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("empty graphs put all mass at zero") {
  const LoadECDF e = empirical_load_distribution(500, 0.0, 3, 1);
  CHECK(e.total == 1500);
  CHECK(e.counts.size() == 1);
  CHECK(e.mass_at(Rational(0)) == 1.0);
  CHECK(f_lambda(e, -0.5) == 1.0);
  CHECK(f_lambda(e, 0.0) == 0.0);
  CHECK(rho_lambda(500, 0.0, 3, 1) == 0.0);
  CHECK(test::throws_code([] { (void)empirical_load_distribution(0, 1.0, 1, 1); }, ErrorCode::kInvalidArgument));
  CHECK(test::throws_code([] { (void)empirical_load_distribution(5, 1.0, 0, 1); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("sampler") {
  CHECK(sample_gnp(300, 2.0, 4, 0) == sample_gnp(300, 2.0, 4, 0));
  CHECK_FALSE(sample_gnp(300, 2.0, 4, 0) == sample_gnp(300, 2.0, 4, 1));
  CHECK(sample_gnp(6, 100.0, 1, 0).num_edges() == 15);
  CHECK(sample_gnp(1, 3.0, 1, 0).num_edges() == 0);

  // Edge count is Binomial(C(n,2), lambda/n).
  const std::size_t n = 400;
  const double p = 3.0 / n;
  const double pairs = n * (n - 1) / 2.0;
  const int trials = 200;
  double total = 0;
  for (int t = 0; t < trials; ++t) total += static_cast<double>(sample_gnp(n, 3.0, 11, t).num_edges());
  const double se = std::sqrt(trials * pairs * p * (1 - p));
  CHECK(std::abs(total - trials * pairs * p) < 4 * se);

  // Pair-level frequency for a fixed pair, including the last one.
  int first = 0, last = 0;
  for (int t = 0; t < 20000; ++t) {
    const Graph g = sample_gnp(20, 4.0, 3, t);
    first += g.has_edge(0, 1) ? 1 : 0;
    last += g.has_edge(18, 19) ? 1 : 0;
  }
  const double q = 0.2, sq = std::sqrt(20000 * q * (1 - q));
  CHECK(std::abs(first - 20000 * q) < 4 * sq);
  CHECK(std::abs(last - 20000 * q) < 4 * sq);
}

TEST_CASE("load-1 characterization per sample") {
  for (bool approx : {false, true}) {
    LimitOptions opts;
    if (approx) opts.exact_cutoff = 100;
    for (std::uint64_t t = 0; t < 4; ++t) {
      const Graph g = sample_gnp(3000, 2.0, 21, t);
      const auto loads = tiered_loads(g, opts);
      const VertexSet trees = tree_components(g);
      const VertexSet cores = two_cores_of_nonsimple_components(g);
      std::size_t below = 0, above = 0;
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        REQUIRE(loads[v].exact.has_value());
        const bool lt = *loads[v].exact < Rational(1);
        const bool gt = *loads[v].exact > Rational(1);
        CHECK(lt == trees.contains(v));
        CHECK(gt == cores.contains(v));
        below += lt;
        above += gt;
      }
      CHECK(below == trees.size());
      CHECK(above == cores.size());
    }
  }
}

TEST_CASE("approximate tier agrees with the exact solver") {
  LimitOptions approx;
  approx.exact_cutoff = 0;
  for (double lam : {2.0, 4.0}) {
    const Graph g = sample_gnp(10'000, lam, 5, 0);
    const LoadProfile exact = balanced_loads(g);
    const auto fast = approximate_loads(g, approx);
    double worst = 0;
    std::size_t snapped = 0, agree = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      worst = std::max(worst, std::abs(fast[v].value - exact.loads[v].to_double()));
      if (fast[v].exact) {
        ++snapped;
        agree += *fast[v].exact == exact.loads[v];
      }
    }
    CHECK(worst < 1e-5);
    CHECK(snapped == agree);
    MESSAGE("lambda " << lam << ": snapped " << snapped << " of " << g.num_vertices());
  }
}

TEST_CASE("max load equals the densest subgraph density") {
  const auto maxima = max_loads(600, 3.0, 6, 8);
  for (std::uint64_t t = 0; t < 6; ++t) {
    REQUIRE(maxima[t].exact.has_value());
    CHECK(*maxima[t].exact == densest_density(sample_gnp(600, 3.0, 8, t)));
  }
  CHECK(rho_lambda(10'000, 2.0, 3, 2) >= 1.0);
}

TEST_CASE("merge order and threads do not change the result") {
  LimitOptions one, three;
  three.threads = 3;
  const LoadECDF a = empirical_load_distribution(800, 2.5, 5, 13, one);
  const LoadECDF b = empirical_load_distribution(800, 2.5, 5, 13, three);
  CHECK(a.counts == b.counts);
  CHECK(a.total == 4000);
  CHECK(a.trials == 5);

  LoadECDF x = empirical_load_distribution(200, 2.5, 1, 13);
  LoadECDF y = x;
  LoadECDF z = x;
  x.merge(y);
  x.merge(z);
  LoadECDF w = z;
  w.merge(y);
  w.merge(z);
  CHECK(x.counts == w.counts);
  LoadECDF other = empirical_load_distribution(200, 1.0, 1, 13);
  CHECK(test::throws_code([&] { x.merge(other); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("F_lambda(1) grows with lambda") {
  const double lams[] = {1.2, 1.5, 2.0, 3.0};
  double prev = -1, prev_var = 0;
  for (double lam : lams) {
    const LoadECDF e = empirical_load_distribution(5000, lam, 4, 31);
    const double f = f_lambda(e, 1.0);
    const double var = f * (1 - f) / static_cast<double>(e.total);
    if (prev >= 0) CHECK(f >= prev - 3 * std::sqrt(var + prev_var));
    prev = f;
    prev_var = var;
  }
}

TEST_CASE("csv export") {
  LoadECDF e;
  e.add(LoadValue::of(Rational(1, 2)), 2);
  e.add(LoadValue::of(Rational(0)), 1);
  e.add(LoadValue::real(1.25), 1);
  std::ostringstream out;
  write_ecdf_csv(out, e);
  CHECK(out.str() ==
        "load,cumulative_mass,rational\n"
        "0.000000000000,0.250000000000,0/1\n"
        "0.500000000000,0.750000000000,1/2\n"
        "1.250000000000,1.000000000000,\n");
  CHECK(e.mass_below(0.5) == 0.25);
  CHECK(e.mass_above(0.5) == 0.25);
  CHECK(e.mass_at(Rational(1, 2)) == 0.5);
}

TEST_CASE("nearest fraction") {
  CHECK(nearest_fraction(0.0, 10) == Rational(0));
  CHECK(nearest_fraction(3.0, 10) == Rational(3));
  CHECK(nearest_fraction(M_PI, 7) == Rational(22, 7));
  CHECK(nearest_fraction(M_PI, 113) == Rational(355, 113));
  CHECK(nearest_fraction(M_PI, 100) == Rational(311, 99));
  CHECK(nearest_fraction(1.0 / 3 + 1e-12, 1000) == Rational(1, 3));
  // Brute force over all denominators.
  test::Lcg rng(3);
  for (int r = 0; r < 300; ++r) {
    const double x = 3 * rng.uniform();
    const std::int64_t cap = 1 + static_cast<std::int64_t>(rng.below(200));
    double best = 1e9;
    for (std::int64_t q = 1; q <= cap; ++q) {
      const double k = std::round(x * static_cast<double>(q));
      best = std::min(best, std::abs(k / static_cast<double>(q) - x));
    }
    CHECK(std::abs(nearest_fraction(x, cap).to_double() - x) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("maxima from the distribution run match max_loads") {
  std::vector<LoadValue> maxima;
  (void)empirical_load_distribution(1500, 2.5, 4, 19, {}, &maxima);
  CHECK(maxima == max_loads(1500, 2.5, 4, 19));
  CHECK(median_load(maxima) == rho_lambda(1500, 2.5, 4, 19));
  CHECK(median_load({LoadValue::of(Rational(1)), LoadValue::of(Rational(2))}) == 1.5);
}
