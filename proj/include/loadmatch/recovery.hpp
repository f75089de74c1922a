#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "loadmatch/corrmodel.hpp"
#include "loadmatch/graph.hpp"
#include "loadmatch/intersect.hpp"
#include "loadmatch/rational.hpp"

namespace loadmatch {

// Half-open load interval [lo, hi); hi absent means unbounded.
struct LoadInterval {
  Rational lo;
  std::optional<Rational> hi;

  bool contains(const Rational& x) const { return x >= lo && (!hi || x < *hi); }
  std::string to_string() const;
};

inline constexpr std::int64_t kThresholdDenominator = 1'000'000;

struct AlgoConfig {
  double alpha = 1;
  double epsilon = 0.1;
  double eta = 0.1;
  double A = 1;
  std::size_t n_max = 8;
  std::size_t N = 0;
  std::vector<LoadInterval> intervals;  // I_0..I_N, endpoints snapped to 1e-6

  // N = ceil((A/eta - 1/alpha - eps)/eta); throws InvalidArgument when N < 1.
  static AlgoConfig make(double alpha, double epsilon, double eta, double A, std::size_t n_max = 8);
};

struct RoundTrace {
  std::size_t k = 0;
  Matching pi_k;
  VertexSet v_k;
  VertexSet u_k;
  std::size_t edges = 0;  // |E(H_{pi_k})|
  bool skipped = false;   // interval above the densest load of G1; no extension can reach it
};

struct RecoveryResult {
  VertexSet u_n;
  PartialMatching pi_tilde;
  std::vector<RoundTrace> rounds;
};

// Exhaustive over extensions of the current partial matching in every round.
// Ties: larger |V_k|, then smaller V_k (cardinality, then member list), then
// the lexicographically smallest image array.
RecoveryResult iterative_matching(const Graph& g1, const Graph& g2, const AlgoConfig& cfg);

// Loads of H_{pi*} against snapped thresholds 1/alpha + eps and 1/alpha - eps.
std::pair<VertexSet, VertexSet> heavy_light_sets(const Matching& pi_star, const Graph& g1, const Graph& g2,
                                                 double alpha, double eps);

VertexSet correct_set(const RecoveryResult& result, const Matching& pi_star);

// f(U_cor u U_heavy) - f(U_cor) with f = f_{alpha_eps} on H_{pi*}.
Rational near_maximizer_gap(const Matching& pi_star, const Graph& g1, const Graph& g2, const VertexSet& u_cor,
                            const VertexSet& u_heavy, const Rational& alpha_eps);

// alpha_eps = (1/alpha + eps)^-1 with the heavy threshold snapped first.
Rational alpha_eps_rational(double alpha, double eps);

struct BayesEstimate {
  Matching pi_hat;
  double expected_overlap = 0;
};

// Maximum-weight assignment on the exact posterior marginals (n <= 10).
BayesEstimate bayes_optimal_estimate(const Graph& g1, const Graph& g2, const ModelParams& params);

// ----- per-round diagnostics -----

// Every i in U_k has load >= lo(I_k) in H_{pi~}(U_k); returns the first round
// that fails, if any.
std::optional<std::size_t> level_set_violation(const RecoveryResult& result, const Graph& g1, const Graph& g2,
                                               const AlgoConfig& cfg);

struct RoundConstraint {
  std::size_t k = 0;
  bool item_iii = false;    // |E(W) \ E(U_{k-1})| <= u_k |W \ U_{k-1}| for all U_{k-1} <= W <= U_k
  bool constraint = false;  // sum_{t<=j} E_t <= u_k sum_{t<=j} N_t, j = 1..L
};

// Rounds 1..N with a bounded upper endpoint and a non-empty V_k.
std::vector<RoundConstraint> round_constraints(const RecoveryResult& result, const Matching& pi_star,
                                               const Graph& g1, const Graph& g2, const AlgoConfig& cfg,
                                               std::size_t L);

void write_report(std::ostream& out, const RecoveryResult& result, const AlgoConfig& cfg);

}  // namespace loadmatch
