#include "jfdl/demand.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <string>

#include "jfdl/errors.hpp"

namespace jfdl {

CostIndex::CostIndex(std::vector<Cost> values) : sorted_(std::move(values)) {
  std::sort(sorted_.begin(), sorted_.end());
  unique_ = sorted_;
  unique_.erase(std::unique(unique_.begin(), unique_.end()), unique_.end());
}

CostIndex CostIndex::from_instance(const Instance& inst) {
  return CostIndex(inst.costs);
}

std::size_t CostIndex::unique_index_of(Cost v) const {
  auto it = std::lower_bound(unique_.begin(), unique_.end(), v);
  if (it == unique_.end()) return unique_.empty() ? 0 : unique_.size() - 1;
  return static_cast<std::size_t>(it - unique_.begin());
}

DemandOutcome DemandNetwork::extract(const FlowResult& result, Cost objective) const {
  DemandOutcome outcome;
  outcome.status = result.status;
  if (result.status != FlowStatus::optimal) return outcome;
  outcome.objective = objective;
  for (const AssignArc& arc : assign_arcs) {
    if (result.arc_flows[arc.arc_index] > 0) {
      outcome.located_demand.push_back(arc.demand);
      outcome.assignment.emplace(arc.demand, arc.facility);
    }
  }
  std::sort(outcome.located_demand.begin(), outcome.located_demand.end());
  return outcome;
}

DemandNetwork build_demand_network(const Instance& inst, const FacilitySet& open,
                                   std::optional<Cost> threshold) {
  NodeIndex index(inst);
  const int m = inst.m();
  const int num_open = static_cast<int>(open.size());

  std::set<NodeId> open_ids(open.begin(), open.end());

  static const std::vector<Region> kNoRegions;
  const bool with_regions = inst.regions && !inst.regions->regions.empty();
  const std::vector<Region>& regions = with_regions ? inst.regions->regions : kNoRegions;

  // Demand candidates outside every region form one unconstrained pool.
  std::vector<int> pool_rows;
  std::vector<int> region_of_row;
  if (with_regions) {
    region_of_row.assign(m, -1);
    for (std::size_t q = 0; q < regions.size(); ++q) {
      for (NodeId id : regions[q].members) {
        region_of_row[index.row(id)] = static_cast<int>(q);
      }
    }
    for (int i = 0; i < m; ++i) {
      if (region_of_row[i] < 0) pool_rows.push_back(i);
    }
  }

  // Node layout: source, [region nodes..., dummy, pool?], demand rows,
  // open facilities, sink.
  DemandNetwork dn;
  FlowNetwork& net = dn.net;
  int next = 0;
  const int source = next++;
  int dummy = -1;
  int pool = -1;
  std::vector<int> region_node(regions.size(), -1);
  if (with_regions) {
    for (std::size_t q = 0; q < regions.size(); ++q) region_node[q] = next++;
    dummy = next++;
    if (!pool_rows.empty()) pool = next++;
  }
  const int demand_base = next;
  next += m;
  const int facility_base = next;
  next += num_open;
  const int sink = next++;

  net.node_count = next;
  net.source = source;
  net.sink = sink;
  net.required_flow = inst.d;

  if (with_regions) {
    std::int64_t lower_sum = 0;
    for (const Region& region : regions) {
      if (region.kind != BoundKind::le) lower_sum += region.bound;
    }
    if (lower_sum > inst.d) {
      throw GadgetInfeasibleError("sum of GE/EQ region bounds " + std::to_string(lower_sum) +
                                  " exceeds d=" + std::to_string(inst.d));
    }
    for (std::size_t q = 0; q < regions.size(); ++q) {
      if (regions[q].kind != BoundKind::le) {
        net.add_arc(source, region_node[q], regions[q].bound);
      }
    }
    net.add_arc(source, dummy, inst.d - lower_sum);
    for (std::size_t q = 0; q < regions.size(); ++q) {
      if (regions[q].kind == BoundKind::le) {
        net.add_arc(dummy, region_node[q], regions[q].bound);
      } else if (regions[q].kind == BoundKind::ge) {
        net.add_arc(dummy, region_node[q], static_cast<Flow>(regions[q].members.size()));
      }
      // EQ regions take exactly their bound from the source and nothing more.
    }
    if (pool >= 0) {
      net.add_arc(dummy, pool, static_cast<Flow>(pool_rows.size()));
    }
    for (std::size_t q = 0; q < regions.size(); ++q) {
      for (NodeId id : regions[q].members) {
        net.add_arc(region_node[q], demand_base + index.row(id), 1);
      }
    }
    for (int i : pool_rows) {
      net.add_arc(pool, demand_base + i, 1);
    }
  } else {
    for (int i = 0; i < m; ++i) {
      net.add_arc(source, demand_base + i, 1);
    }
  }

  for (int i = 0; i < m; ++i) {
    NodeId demand_id = inst.demand_candidates[i];
    if (inst.colocate_forbidden && open_ids.count(demand_id)) continue;
    for (int f = 0; f < num_open; ++f) {
      const int col = index.col(open[f]);
      const Cost c = inst.cost(i, col);
      if (threshold && c > *threshold) continue;
      int arc = net.add_arc(demand_base + i, facility_base + f, 1, c);
      dn.assign_arcs.push_back({arc, demand_id, open[f]});
    }
  }

  for (int f = 0; f < num_open; ++f) {
    net.add_arc(facility_base + f, sink, inst.capacity);
  }

  return dn;
}

DemandOutcome optimal_demand_median(const Instance& inst, const FacilitySet& open) {
  DemandNetwork dn = build_demand_network(inst, open);
  FlowResult result = min_cost_flow(dn.net);
  return dn.extract(result, result.total_cost);
}

DemandOutcome optimal_demand_center(const Instance& inst, const FacilitySet& open,
                                    std::optional<Cost> incumbent, std::ostream* trace,
                                    const CostIndex* cost_index) {
  if (inst.d == 0) {
    DemandOutcome outcome;
    outcome.status = FlowStatus::optimal;
    return outcome;
  }

  std::optional<CostIndex> local;
  if (!cost_index) local.emplace(CostIndex::from_instance(inst));
  const CostIndex& costs = cost_index ? *cost_index : *local;
  const std::vector<Cost>& values = costs.unique();
  if (values.empty()) return DemandOutcome{};

  auto feasible = [&](std::size_t idx) {
    DemandNetwork probe = build_demand_network(inst, open, values[idx]);
    bool ok = max_flow(probe.net).status == FlowStatus::optimal;
    if (trace) {
      *trace << "probe threshold=" << values[idx] << " -> "
             << (ok ? "feasible" : "infeasible") << '\n';
    }
    return ok;
  };

  std::size_t low = 0;
  std::size_t high = incumbent ? costs.unique_index_of(*incumbent) : values.size() - 1;
  std::optional<std::size_t> best;

  // Classic bisection over the monotone feasibility predicate; the candidate
  // band [low, high] that remains after the loop is resolved by direct
  // probes from below, so the result is the smallest feasible index even
  // when the loop never sampled it.
  std::size_t mid = (low + high) / 2;
  while (low + 1 < high) {
    if (feasible(mid)) {
      high = mid;
      best = mid;
    } else {
      low = mid + 1;
    }
    mid = (low + high) / 2;
  }
  for (std::size_t idx = low; idx <= high && idx < values.size(); ++idx) {
    if (best && *best <= idx) break;
    if (feasible(idx)) {
      best = idx;
      break;
    }
  }

  if (!best) return DemandOutcome{};

  // One min-cost solve at the bottleneck threshold picks, among all
  // assignments attaining it, one of minimum total cost.
  DemandNetwork final_net = build_demand_network(inst, open, values[*best]);
  FlowResult result = min_cost_flow(final_net.net);
  return final_net.extract(result, values[*best]);
}

Solution to_solution(const DemandOutcome& outcome, const FacilitySet& open,
                     ObjectiveKind kind) {
  Solution sol;
  sol.open_facilities = open;
  std::sort(sol.open_facilities.begin(), sol.open_facilities.end());
  sol.located_demand = outcome.located_demand;
  sol.assignment.assign(outcome.assignment.begin(), outcome.assignment.end());
  sol.objective_kind = kind;
  sol.objective_value = outcome.objective;
  return sol;
}

}  // namespace jfdl
