#pragma once

#include <cstdint>

#include "jfdl/demand.hpp"
#include "jfdl/instance.hpp"

namespace jfdl {

/// Number of size-k subsets of an n-element set, saturating at int64 max.
std::uint64_t subset_count(int n, int k);

struct ExactConfig {
  /// exact_solve refuses instances with more than this many facility subsets.
  std::uint64_t max_subsets = 100000;
};

/// Ground-truth solver: enumerates every size-k facility subset in
/// lexicographic order and places demand optimally for each, so ties land on
/// the lexicographically smallest facility set. Throws InstanceTooLargeError
/// (reporting the subset count) above the cap and Error when no subset
/// admits a feasible placement.
Solution exact_solve(const Instance& inst, ObjectiveKind kind, const ExactConfig& cfg = {});

struct OracleLimits {
  int max_m = 12;
  std::int64_t max_d = 6;
};

/// Test oracle for the fixed-facility subroutines: exhaustive search over
/// size-d demand subsets and capacity-feasible assignments, no flow
/// machinery. Regional and co-location rules are enforced by direct
/// counting.
DemandOutcome exact_demand_oracle(const Instance& inst, const FacilitySet& open,
                                  ObjectiveKind kind, const OracleLimits& limits = {});

}  // namespace jfdl
