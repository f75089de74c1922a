#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "loadmatch/graph.hpp"
#include "loadmatch/intersect.hpp"

namespace loadmatch {

struct ModelParams {
  std::size_t n = 0;
  double alpha = 0;
  double lambda = 0;
  double p = 0;
  double s = 0;
  double P = 0;  // NaN when s = 1
  double Q = 0;
  double R = 0;
  double gamma = 0;
  double rho_hat = 0;  // density estimate the recovery constant A is built on
  double A = 0;
};

// p = n^-alpha, s = sqrt(lambda / (n p)), A = rho_hat + 2 + 1/gamma (the
// strict inequality 1 - gamma (A - rho_hat - 1) < 0 plus a unit margin).
ModelParams derive_params(std::size_t n, double alpha, double lambda, double rho_hat = 1.0);

// Direct (p, s) instantiation for tests and boundary cases; alpha and lambda
// are back-filled. P, Q, R are NaN when s = 1.
ModelParams forced_params(std::size_t n, double p, double s, double rho_hat = 1.0);

struct PairBits {
  bool i = false;
  bool j1 = false;
  bool j2 = false;
};

// Keyed indicator draws for the pair with canonical index `pair`; I and J1 are
// indexed in G1 labels, J2 in G2 labels.
class IndicatorSource {
 public:
  IndicatorSource(const ModelParams& params, std::uint64_t seed);
  bool I(std::uint64_t pair) const;
  bool J1(std::uint64_t pair) const;
  bool J2(std::uint64_t pair) const;

 private:
  double p_;
  double s_;
  std::uint64_t key_i_;
  std::uint64_t key_j1_;
  std::uint64_t key_j2_;
};

std::uint64_t pair_index(Vertex i, Vertex j, std::size_t n);

// Uniform permutation drawn from (seed, stream 0).
Matching sample_permutation(std::size_t n, std::uint64_t seed);

struct CorrelatedPair {
  Matching pi_star;
  Graph g1;
  Graph g2;
};

// (i,j) in G1 iff I_ij J1_ij = 1; (a,b) in G2 iff I_{pi*^-1 a, pi*^-1 b} J2_ab = 1.
CorrelatedPair sample_correlated_pair(const ModelParams& params, std::uint64_t seed);

// Posterior over all n! permutations (n <= 10), weight proportional to P^|E_pi|
// with E_pi the forward intersection edge set.
class PosteriorTable {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t count() const noexcept { return edges_.size(); }
  Matching permutation(std::size_t k) const;
  std::size_t edge_count(std::size_t k) const { return edges_[k]; }
  double weight(std::size_t k) const;
  double log_weight(std::size_t k) const;
  double log_normalizer() const noexcept { return log_z_; }
  // M[i][j] = posterior probability that pi(i) = j.
  std::vector<std::vector<double>> marginals() const;

 private:
  friend PosteriorTable posterior_exact(const Graph& g1, const Graph& g2, const ModelParams& params);
  std::size_t n_ = 0;
  std::vector<std::uint8_t> images_;  // n entries per permutation, lexicographic order
  std::vector<std::uint16_t> edges_;
  double log_p_ = 0;
  double log_z_ = 0;
};

PosteriorTable posterior_exact(const Graph& g1, const Graph& g2, const ModelParams& params);

// lhs = P^(ab) Q^(a+b) R; rhs = joint-over-product ratio of the pair.
std::pair<double, double> pair_ratio_identity(bool a, bool b, const ModelParams& params);

void write_params(std::ostream& out, const ModelParams& params);
ModelParams read_params(std::istream& in);
void write_pair(std::ostream& out, const CorrelatedPair& pair);
CorrelatedPair read_pair(std::istream& in);

}  // namespace loadmatch
