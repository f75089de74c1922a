#include "loadmatch/limitdist.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "loadmatch/balance.hpp"
#include "loadmatch/error.hpp"
#include "loadmatch/rng.hpp"

namespace loadmatch {

bool operator<(const LoadValue& a, const LoadValue& b) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  if (a.value != b.value) return a.value < b.value;
  return a.exact.has_value() && !b.exact.has_value();
}

bool operator==(const LoadValue& a, const LoadValue& b) { return !(a < b) && !(b < a); }

void LoadECDF::add(const LoadValue& v, std::uint64_t count) {
  counts[v] += count;
  total += count;
}

void LoadECDF::merge(const LoadECDF& other) {
  if (other.n != n || other.lambda != lambda || other.seed != seed) {
    throw Error(ErrorCode::kInvalidArgument, "cannot merge ECDFs of different runs");
  }
  for (const auto& [v, c] : other.counts) counts[v] += c;
  total += other.total;
  trials += other.trials;
}

double LoadECDF::mass_below(double x) const {
  if (total == 0) return 0;
  std::uint64_t c = 0;
  for (const auto& [v, k] : counts) {
    if (!(v.value < x)) break;
    c += k;
  }
  return static_cast<double>(c) / static_cast<double>(total);
}

double LoadECDF::mass_above(double x) const {
  if (total == 0) return 0;
  std::uint64_t c = 0;
  for (const auto& [v, k] : counts) {
    if (v.value > x) c += k;
  }
  return static_cast<double>(c) / static_cast<double>(total);
}

double LoadECDF::mass_at(const Rational& x) const {
  if (total == 0) return 0;
  const auto it = counts.find(LoadValue::of(x));
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

Graph sample_gnp(std::size_t n, double lambda, std::uint64_t seed, std::uint64_t trial) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  std::vector<Edge> edges;
  const double p = std::min(1.0, lambda / static_cast<double>(n));
  if (p <= 0 || n < 2) return graph_from_canonical_edges(n, {});
  Rng rng(seed, trial);
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(total) * 1.1) + 16);
  std::uint64_t idx = rng.geometric(p);
  std::uint64_t row = 0;
  std::uint64_t row_start = 0;  // pair index of (row, row + 1)
  while (idx < total) {
    while (idx >= row_start + (n - 1 - row)) {
      row_start += n - 1 - row;
      ++row;
    }
    edges.push_back({static_cast<Vertex>(row), static_cast<Vertex>(row + 1 + (idx - row_start))});
    const std::uint64_t skip = rng.geometric(p);
    if (skip >= total) break;
    idx += 1 + skip;
  }
  return graph_from_canonical_edges(n, std::move(edges));
}

// Nearest fraction to x with denominator <= max_den (continued-fraction
// convergents plus the last semiconvergent); x >= 0.
Rational nearest_fraction(double x, std::int64_t max_den) {
  if (x < 1e-15) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, m in [1/2, 1)
  __int128 num = static_cast<__int128>(std::ldexp(m, 53));
  __int128 den = 1;
  if (e >= 53) return Rational(static_cast<std::int64_t>(x));
  den <<= (53 - e);
  __int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  while (den != 0) {
    const __int128 a = num / den;
    const __int128 q2 = q0 + a * q1;
    if (q2 > max_den) break;
    const __int128 p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const __int128 r = num - a * den;
    num = den;
    den = r;
  }
  if (den == 0) return Rational(static_cast<std::int64_t>(p1), static_cast<std::int64_t>(q1));
  const __int128 k = (max_den - q0) / q1;
  const Rational semi(static_cast<std::int64_t>(p0 + k * p1), static_cast<std::int64_t>(q0 + k * q1));
  const Rational conv(static_cast<std::int64_t>(p1), static_cast<std::int64_t>(q1));
  return std::abs(semi.to_double() - x) < std::abs(conv.to_double() - x) ? semi : conv;
}

std::vector<LoadValue> approximate_loads(const Graph& g, const LimitOptions& opts) {
  const auto& edges = g.edges();
  const std::size_t n = g.num_vertices();
  std::vector<double> share(edges.size(), 0.5);  // part credited to the larger endpoint
  std::vector<double> load(n, 0.0);
  for (const Edge& e : edges) {
    load[e.u] += 0.5;
    load[e.v] += 0.5;
  }
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double worst = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      const double x = share[i];
      const double bu = load[e.u] - (1.0 - x);
      const double bv = load[e.v] - x;
      const double y = std::clamp((bu + 1.0 - bv) / 2.0, 0.0, 1.0);
      worst = std::max(worst, std::abs(y - x));
      share[i] = y;
      load[e.u] = bu + (1.0 - y);
      load[e.v] = bv + y;
    }
    if (worst < opts.residual_tol) break;
  }
  std::fill(load.begin(), load.end(), 0.0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    load[edges[i].u] += 1.0 - share[i];
    load[edges[i].v] += share[i];
  }
  std::vector<LoadValue> out(n);
  const auto max_den = static_cast<std::int64_t>(std::max<std::size_t>(n, 1));
  for (std::size_t v = 0; v < n; ++v) {
    const Rational r = nearest_fraction(load[v], max_den);
    out[v] = std::abs(r.to_double() - load[v]) <= opts.snap_tol ? LoadValue::of(r) : LoadValue::real(load[v]);
  }
  return out;
}

std::vector<LoadValue> tiered_loads(const Graph& g, const LimitOptions& opts) {
  if (g.num_vertices() > opts.exact_cutoff) return approximate_loads(g, opts);
  const LoadProfile prof = balanced_loads(g);
  std::vector<LoadValue> out;
  out.reserve(prof.loads.size());
  for (const Rational& r : prof.loads) out.push_back(LoadValue::of(r));
  return out;
}

namespace {

void check_args(std::size_t n, double lambda, std::size_t trials) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be positive");
}

// Runs fn(trial) for every trial on up to `threads` workers; results land in
// per-trial slots so the outcome does not depend on scheduling.
template <class T, class Fn>
std::vector<T> per_trial(std::size_t trials, unsigned threads, Fn fn) {
  std::vector<T> slots(trials);
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) slots[t] = fn(t);
    return slots;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = next++; t < trials; t = next++) slots[t] = fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return slots;
}

}  // namespace

LoadECDF empirical_load_distribution(std::size_t n, double lambda, std::size_t trials, std::uint64_t seed,
                                     const LimitOptions& opts, std::vector<LoadValue>* maxima) {
  check_args(n, lambda, trials);
  using Part = std::pair<LoadECDF, LoadValue>;
  const auto parts = per_trial<Part>(trials, opts.threads, [&](std::size_t t) {
    Part part;
    part.first.lambda = lambda;
    part.first.n = n;
    part.first.seed = seed;
    part.first.trials = 1;
    const auto loads = tiered_loads(sample_gnp(n, lambda, seed, t), opts);
    for (const LoadValue& v : loads) part.first.add(v);
    part.second = *std::max_element(loads.begin(), loads.end());
    return part;
  });
  LoadECDF out = parts.front().first;
  for (std::size_t t = 1; t < parts.size(); ++t) out.merge(parts[t].first);
  if (maxima != nullptr) {
    maxima->clear();
    for (const Part& p : parts) maxima->push_back(p.second);
  }
  return out;
}

double f_lambda(const LoadECDF& ecdf, double x) { return ecdf.mass_above(x); }

std::vector<LoadValue> max_loads(std::size_t n, double lambda, std::size_t trials, std::uint64_t seed,
                                 const LimitOptions& opts) {
  check_args(n, lambda, trials);
  return per_trial<LoadValue>(trials, opts.threads, [&](std::size_t t) {
    const auto loads = tiered_loads(sample_gnp(n, lambda, seed, t), opts);
    return *std::max_element(loads.begin(), loads.end());
  });
}

double median_load(std::vector<LoadValue> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 == 1 ? values[h].value : (values[h - 1].value + values[h].value) / 2.0;
}

double rho_lambda(std::size_t n, double lambda, std::size_t trials, std::uint64_t seed, const LimitOptions& opts) {
  return median_load(max_loads(n, lambda, trials, seed, opts));
}

double giant_fraction(double lambda) {
  if (!(lambda >= 0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (lambda <= 1.0) return 0.0;
  // Starting from 1 the map decreases monotonically onto the largest root.
  double y = 1.0;
  for (int it = 0; it < 10'000'000; ++it) {
    const double next = 0.5 * y + 0.5 * -std::expm1(-lambda * y);
    if (std::abs(next - y) < 1e-13) return next;
    y = next;
  }
  throw Error(ErrorCode::kNonConvergence, "giant fraction iteration did not settle");
}

double two_core_fraction(double lambda) {
  const double y = giant_fraction(lambda);
  if (y == 0) return 0.0;
  const double m = lambda * y;
  return -std::expm1(-m) - m * std::exp(-m);
}

void write_ecdf_csv(std::ostream& out, const LoadECDF& ecdf) {
  out << "load,cumulative_mass,rational\n";
  std::uint64_t run = 0;
  char buf[64];
  for (const auto& [v, c] : ecdf.counts) {
    run += c;
    std::snprintf(buf, sizeof buf, "%.12f,", v.value);
    out << buf;
    std::snprintf(buf, sizeof buf, "%.12f,", static_cast<double>(run) / static_cast<double>(ecdf.total));
    out << buf;
    if (v.exact) out << v.exact->to_string();
    out << '\n';
  }
}

}  // namespace loadmatch
