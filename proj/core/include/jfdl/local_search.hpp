#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jfdl/demand.hpp"
#include "jfdl/instance.hpp"

namespace jfdl {

enum class RankRule {
  scored,  // burden/proximity scores (default)
  random,  // seeded shuffle, kept as a control
};

struct SearchConfig {
  ObjectiveKind objective_kind = ObjectiveKind::median;
  std::uint64_t rng_seed = 0;
  /// Wall-clock cutoff; defaults to one hour.
  std::optional<double> time_budget_s = 3600.0;
  /// Cap on accepted improving swaps; unset means run to a local optimum.
  std::optional<std::uint64_t> max_iterations;
  RankRule rank_rule = RankRule::scored;
  int init_retry_cap = 100;
};

enum class Termination { local_optimum, time_budget, iteration_cap };

std::string to_string(Termination t);

/// counter == accepted improving swaps == history.size() - 1; history
/// objective values are strictly decreasing.
struct SearchTrace {
  std::uint64_t counter = 0;
  std::vector<std::pair<double, Cost>> history;  // (elapsed s, objective)
  std::vector<std::pair<NodeId, NodeId>> accepted_swaps;  // (closed, opened)
  Termination terminated_by = Termination::local_optimum;
};

struct SearchResult {
  Solution solution;
  SearchTrace trace;
};

/// Uniformly random size-k facility subset, deterministic per seed.
/// Subsets whose demand placement is infeasible (co-location or regional
/// dead-ends) are re-sampled up to `retry_cap` times before
/// NoFeasibleInitializationError is thrown.
FacilitySet initialize_facilities(const Instance& inst, std::uint64_t seed,
                                  int retry_cap = 100);

/// Swap candidate ordering. Open facilities come out in increasing removal
/// burden (median: sum of assigned costs; center: max assigned cost, ties by
/// sum), so under-used facilities are tried for closing first. Closed
/// facilities come out in increasing proximity score (minimum cost from the
/// currently located demand to the site). Ties break toward the lower node
/// id.
std::pair<std::vector<NodeId>, std::vector<NodeId>> rank_facilities(
    const Instance& inst, const FacilitySet& open, const DemandOutcome& outcome,
    ObjectiveKind kind);

/// First-improvement swap search: evaluate swaps in ranked order, accept any
/// strict improvement, re-rank and restart the scan, stop at a local optimum
/// or when the budget runs out. `trace_stream` (optional) receives one line
/// per accepted swap: elapsed seconds, objective, closed and opened site.
SearchResult local_search(const Instance& inst, const SearchConfig& cfg,
                          std::ostream* trace_stream = nullptr);

}  // namespace jfdl
