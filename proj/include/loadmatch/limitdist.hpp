#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "loadmatch/graph.hpp"
#include "loadmatch/rational.hpp"

namespace loadmatch {

// A load that is exact when the solver (or snapping) produced a rational.
struct LoadValue {
  double value = 0;
  std::optional<Rational> exact;

  static LoadValue of(const Rational& r) { return {r.to_double(), r}; }
  static LoadValue real(double x) { return {x, std::nullopt}; }

  // Orders by value; an exact load sorts before a real one of equal double value.
  friend bool operator<(const LoadValue& a, const LoadValue& b);
  friend bool operator==(const LoadValue& a, const LoadValue& b);
};

struct LoadECDF {
  std::map<LoadValue, std::uint64_t> counts;
  std::uint64_t total = 0;
  double lambda = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  void add(const LoadValue& v, std::uint64_t count = 1);
  // Associative and commutative; metadata of `other` must match except trials.
  void merge(const LoadECDF& other);

  double mass_below(double x) const;  // strictly below
  double mass_above(double x) const;  // strictly above
  double mass_at(const Rational& x) const;
};

struct LimitOptions {
  std::size_t exact_cutoff = 20'000;  // exact solver for n up to this
  double residual_tol = 1e-13;        // rebalancing stops once every edge moves less than this
  double snap_tol = 1e-6;
  std::size_t max_sweeps = 1'000'000;
  unsigned threads = 1;
};

// G(n, lambda/n) for trial `trial`, by geometric skipping over the pair index
// (probability clamped to 1).
Graph sample_gnp(std::size_t n, double lambda, std::uint64_t seed, std::uint64_t trial);

Rational nearest_fraction(double x, std::int64_t max_den);

// Per-vertex loads of one graph through the tier selected by its size.
std::vector<LoadValue> tiered_loads(const Graph& g, const LimitOptions& opts);

// Rebalancing sweeps followed by snapping to the nearest rational with
// denominator <= n when it lies within snap_tol.
std::vector<LoadValue> approximate_loads(const Graph& g, const LimitOptions& opts);

// `maxima`, when given, receives the per-trial maximum load.
LoadECDF empirical_load_distribution(std::size_t n, double lambda, std::size_t trials, std::uint64_t seed,
                                     const LimitOptions& opts = {}, std::vector<LoadValue>* maxima = nullptr);

// Mass strictly above x.
double f_lambda(const LoadECDF& ecdf, double x);

// Per-trial maximum balanced load.
std::vector<LoadValue> max_loads(std::size_t n, double lambda, std::size_t trials, std::uint64_t seed,
                                 const LimitOptions& opts = {});

double median_load(std::vector<LoadValue> values);

// Median of the per-trial maxima.
double rho_lambda(std::size_t n, double lambda, std::size_t trials, std::uint64_t seed,
                  const LimitOptions& opts = {});

// Largest root of y = 1 - exp(-lambda y); 0 for lambda <= 1.
double giant_fraction(double lambda);

// P(Poisson(lambda y) >= 2) with y the giant fraction.
double two_core_fraction(double lambda);

// "load,cumulative_mass,rational" with 12-digit decimals; the rational column
// is empty for loads that stayed real.
void write_ecdf_csv(std::ostream& out, const LoadECDF& ecdf);

}  // namespace loadmatch
