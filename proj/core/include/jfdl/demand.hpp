#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "jfdl/flow.hpp"
#include "jfdl/instance.hpp"

namespace jfdl {

using FacilitySet = std::vector<NodeId>;  // kept sorted ascending

/// Assignment costs of an instance sorted increasing (ties retained), plus a
/// deduplicated view used by the bottleneck binary search.
class CostIndex {
 public:
  explicit CostIndex(std::vector<Cost> values);
  static CostIndex from_instance(const Instance& inst);

  const std::vector<Cost>& sorted() const { return sorted_; }
  const std::vector<Cost>& unique() const { return unique_; }

  /// Index into unique() of the first value >= v, clamped to the last index.
  std::size_t unique_index_of(Cost v) const;

 private:
  std::vector<Cost> sorted_;
  std::vector<Cost> unique_;
};

/// Result of a fixed-facility demand placement. When optimal, converting to
/// a Solution always passes validate_solution.
struct DemandOutcome {
  FlowStatus status = FlowStatus::infeasible;
  Cost objective = 0;
  std::vector<NodeId> located_demand;
  std::map<NodeId, NodeId> assignment;  // demand id -> facility id

  bool optimal() const { return status == FlowStatus::optimal; }
};

/// The flow network for a fixed facility set plus the bookkeeping needed to
/// read an assignment back out of a FlowResult.
struct DemandNetwork {
  FlowNetwork net;
  struct AssignArc {
    int arc_index;
    NodeId demand;
    NodeId facility;
  };
  std::vector<AssignArc> assign_arcs;

  DemandOutcome extract(const FlowResult& result, Cost objective) const;
};

/// Builds the placement network: source -> (region gadget) -> demand
/// candidates -> open facilities -> sink. Regions with GE/EQ bounds are fed
/// straight from the source at exactly their bound; the remaining
/// d - sum(bounds) units go through a dummy node that fans out to LE regions
/// (at their bound), GE regions (at their size) and the unconstrained pool.
/// Assignment arcs above `threshold` are omitted, as are all arcs out of
/// demand candidates that coincide with an open facility when co-location
/// is forbidden.
///
/// Throws GadgetInfeasibleError when sum(GE/EQ bounds) > d.
DemandNetwork build_demand_network(const Instance& inst, const FacilitySet& open,
                                   std::optional<Cost> threshold = std::nullopt);

/// Optimal demand placement for fixed facilities under the median objective:
/// one min-cost flow of value d.
DemandOutcome optimal_demand_median(const Instance& inst, const FacilitySet& open);

/// Optimal demand placement for fixed facilities under the center objective:
/// binary search over the sorted distinct assignment costs, each probe a
/// max-flow feasibility check, then one min-cost solve at the bottleneck
/// threshold to pick a witness assignment. `incumbent` caps the search from
/// above; when no threshold at or below it is feasible the outcome is
/// infeasible. `trace` (optional) receives one line per probe.
DemandOutcome optimal_demand_center(const Instance& inst, const FacilitySet& open,
                                    std::optional<Cost> incumbent = std::nullopt,
                                    std::ostream* trace = nullptr,
                                    const CostIndex* cost_index = nullptr);

/// Wraps an optimal outcome into a Solution for the given facility set.
Solution to_solution(const DemandOutcome& outcome, const FacilitySet& open,
                     ObjectiveKind kind);

}  // namespace jfdl
