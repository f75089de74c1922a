#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "loadmatch/corrmodel.hpp"
#include "loadmatch/graph.hpp"
#include "loadmatch/intersect.hpp"
#include "loadmatch/orbits.hpp"
#include "loadmatch/recovery.hpp"

namespace loadmatch {

// Invariant checks shared by the `verify` command and the acceptance run.
// Each returns a witness describing the first failure, or nothing.

std::string describe_graph(const Graph& g);

// Partition of all pairs, successor relation, LCM / half-length rule, ordering.
std::optional<std::string> check_full_orbits(const Matching& sigma, const OrbitDecomposition& d);

// Chains and cycles of a restricted decomposition against the full cycles of
// an extension, cut at pairs outside the universe; census against a direct walk.
std::optional<std::string> check_restricted_orbits(const Matching& pi_star, const PartialMatching& pi_check,
                                                   const VertexSet& u_prev, const std::set<Edge>& e_prev,
                                                   const VertexSet& u, std::size_t truncation,
                                                   const OrbitDecomposition& d);

struct RecoveryTally {
  std::size_t trials = 0;
  std::size_t active = 0;          // trials with a non-empty U_N
  std::size_t item_iii_rounds = 0;  // rounds where the constraint hypothesis held
};

// Nesting, level-set consistency, U_cor within U_N, near-maximizer gap >= 0
// against the exact heavy set, and the E_k constraint on Item-(iii) rounds.
std::optional<std::string> check_recovery_trial(const CorrelatedPair& pair, const RecoveryResult& result,
                                                const AlgoConfig& cfg, const ModelParams& params, std::size_t L,
                                                RecoveryTally& tally);

// Plain re-run: every permutation, loads from the quadratic oracle, no skipping.
RecoveryResult reference_recovery(const Graph& g1, const Graph& g2, const AlgoConfig& cfg);

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::size_t cases = 0;
  std::string witness;
};

const std::vector<std::string>& suite_names();

// Runs one invariant suite. With `mutate` the component under test is
// replaced by a deliberately corrupted copy. Throws InvalidArgument for an
// unknown suite.
std::vector<PropertyResult> run_suite(std::string_view suite, std::uint64_t seed, bool mutate);

}  // namespace loadmatch
