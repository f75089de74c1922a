#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "loadmatch/graph.hpp"
#include "loadmatch/rational.hpp"

namespace loadmatch {

// Minimizes the sum of squared loads by cyclic per-edge rebalancing; each
// pass moves every edge split toward equal endpoint loads, clamped to [0,1].
// Throws NonConvergence if the largest adjustment is still above tol after
// max_sweeps passes.
std::vector<double> loads_qp_oracle(const Graph& g, double tol, std::size_t max_sweeps = 2'000'000);

struct FtBrute {
  Rational value;
  VertexSet maximizer;  // maximum cardinality, then lexicographically smallest
};

FtBrute ft_bruteforce(const Graph& g, const Rational& t);

// Largest subgraph density max |E(W)|/|W|, located by a Stern-Brocot walk
// over fractions with denominator <= n using flow feasibility probes only.
Rational densest_density(const Graph& g);

struct AdmissibilityParams {
  double max_degree_cap = 0;       // (i)
  double d_n = 0;                  // (ii) degree bound D_n
  int neighborhood_radius = 0;     // (ii)
  bool exclude_center = false;     // (ii) alternative reading: ignore the centre vertex itself
  int small_subgraph_cap = 0;      // (iii) connected subgraphs on fewer vertices than this
  double cycle_count_base = 0;     // (iv) at most base^k cycles of length k
  int cycle_length_cap = 8;        // (iv) lengths checked: 3..cap
  int c_param = 1;                 // C
  std::uint64_t node_budget = 50'000'000;

  // Defaults from the asymptotic definition for a graph on n vertices, C the
  // smallest integer with alpha (1/alpha - eps + 1/C) < 1.
  static AdmissibilityParams defaults(std::size_t n, double alpha, double eps);
};

struct AdmissibilityResult {
  bool ok = true;
  std::string first_violation;  // "", "i", "ii", "iii" or "iv"
  std::string detail;
};

AdmissibilityResult admissibility_check(const Graph& h, const AdmissibilityParams& params);

struct EventDResult {
  bool holds = true;
  bool sampled = false;
  std::vector<Vertex> witness;  // violating subset, if any
};

// Edges with at least one endpoint in U <= D |U| + delta n / 2 for every U
// (exhaustive for n <= 20, otherwise `samples` random subsets).
EventDResult event_d_check(const Graph& g, double d, double delta, std::uint64_t seed = 0,
                           std::size_t samples = 100'000);

}  // namespace loadmatch
