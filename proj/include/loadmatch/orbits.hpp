#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "loadmatch/graph.hpp"
#include "loadmatch/intersect.hpp"
#include "loadmatch/rational.hpp"

namespace loadmatch {

enum class OrbitKind { kCycle, kSpecialCycle, kFreeChain, kConfinedChain };

const char* orbit_kind_name(OrbitKind kind);

struct Orbit {
  OrbitKind kind = OrbitKind::kCycle;
  std::vector<Edge> pairs;  // successive pairs under the pair map

  std::size_t length() const noexcept { return pairs.size(); }
  bool is_chain() const noexcept { return kind == OrbitKind::kFreeChain || kind == OrbitKind::kConfinedChain; }
  friend bool operator==(const Orbit&, const Orbit&) = default;
};

// Vertex map with possibly undefined entries (kUnset).
struct SigmaMap {
  static constexpr std::int64_t kUnset = -1;
  std::vector<std::int64_t> forward;
  std::vector<std::int64_t> backward;

  static SigmaMap from_matching(const Matching& sigma);
  std::size_t size() const noexcept { return forward.size(); }
};

// sigma = pi*^-1 o pi, the map that carries the G2 index of a pair back to G1
// labels under the forward intersection convention.
SigmaMap sigma_of(const Matching& pi_star, const Matching& pi);
SigmaMap sigma_of(const Matching& pi_star, const PartialMatching& pi);

struct OrbitDecomposition {
  std::size_t n = 0;
  std::vector<Orbit> orbits;  // sorted by first pair; cycles start at their smallest pair
  std::size_t truncation = 0;
  std::vector<std::size_t> census;  // census[k] = N_k for 1 <= k <= truncation (index 0 unused)
  // Pair universe: pairs within u not entirely within u_prev.
  VertexSet u;
  VertexSet u_prev;

  bool in_universe(Edge e) const;
};

OrbitDecomposition decompose_orbits(const Matching& pi_star, const Matching& pi);
OrbitDecomposition decompose_orbits_sigma(const Matching& sigma);

// Orbits of the pair map on E(u) \ E(u_prev); `truncation` sets the census
// range. Throws NestingViolation unless u_prev within u within dom(pi_check)
// and every pair of e_prev lies inside u_prev.
OrbitDecomposition decompose_orbits_restricted(const Matching& pi_star, const PartialMatching& pi_check,
                                               const VertexSet& u_prev, const std::set<Edge>& e_prev,
                                               const VertexSet& u, std::size_t truncation);
OrbitDecomposition decompose_orbits_restricted_sigma(const SigmaMap& sigma, const VertexSet& u_prev,
                                                     const std::set<Edge>& e_prev, const VertexSet& u,
                                                     std::size_t truncation);

// sigma-cycle length of each vertex, 0 when its orbit is not closed.
std::vector<std::size_t> sigma_cycle_lengths(const SigmaMap& sigma);

struct OrbitCounts {
  std::size_t e_special = 0;
  std::vector<std::size_t> e_k;  // e_k[k] for 1 <= k <= L (index 0 unused)
  std::size_t e_gt_L = 0;
  std::size_t e_chain_free = 0;
  std::size_t e_chain_confined = 0;

  std::size_t total() const;
};

OrbitCounts orbit_edge_counts(const OrbitDecomposition& decomp, const Graph& h, std::size_t L);

// sum_{t<=k} E_t <= u_k sum_{t<=k} N_t for every k = 1..L.
bool constraint_check_Ek(const OrbitCounts& counts, const std::vector<std::size_t>& census, const Rational& u_k);

void write_decomposition(std::ostream& out, const OrbitDecomposition& decomp);

// ----- exponential moments -----

enum class MomentKind { kCycle, kFreeChain, kConfinedChain };

struct MomentParams {
  double theta = 0;
  double nu = 0;  // e^theta - 1
  double p = 0;
  double s = 0;
  double mu1 = 0;
  double mu2 = 0;
  std::size_t L = 0;
  std::vector<double> alpha_ladder;  // alpha_k for k = 1..L+1 (index 0 unused)
};

// L = floor(1/(1-alpha)) for alpha < 1, else ceil((2 + 2 eps)/eps).
std::size_t truncation_L(double alpha, double eps);
MomentParams make_moment_params(double p, double s, double theta, double alpha, double eps);

// E exp(theta S_k) by 2x2 transfer matrices with per-step rescaling.
double exact_dp_moment(MomentKind kind, std::size_t k, const MomentParams& mp);
double exact_dp_log_moment(MomentKind kind, std::size_t k, const MomentParams& mp);

struct ChainCoefficients {
  double c1 = 0;
  double c2 = 0;
};

// c1 mu1^k + c2 mu2^k fitted to the exact values at k = 1, 2 (cycles: 1, 1).
ChainCoefficients moment_coefficients(MomentKind kind, const MomentParams& mp);
double closed_form_moment(MomentKind kind, std::size_t k, const MomentParams& mp);

}  // namespace loadmatch
