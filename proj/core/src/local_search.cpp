#include "jfdl/local_search.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "jfdl/errors.hpp"
#include "jfdl/rng.hpp"

namespace jfdl {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::local_optimum: return "local_optimum";
    case Termination::time_budget: return "time_budget";
    case Termination::iteration_cap: return "iteration_cap";
  }
  return "local_optimum";
}

namespace {

bool placement_feasible(const Instance& inst, const FacilitySet& open) {
  DemandNetwork dn = build_demand_network(inst, open);
  return max_flow(dn.net).status == FlowStatus::optimal;
}

}  // namespace

FacilitySet initialize_facilities(const Instance& inst, std::uint64_t seed, int retry_cap) {
  const int n = inst.n();
  const int k = static_cast<int>(inst.k);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    std::vector<int> cols = sample_indices(rng, n, k);
    FacilitySet open;
    open.reserve(cols.size());
    for (int col : cols) open.push_back(inst.facility_candidates[col]);
    std::sort(open.begin(), open.end());
    if (placement_feasible(inst, open)) return open;
  }
  throw NoFeasibleInitializationError(
      "no feasible facility subset found in " + std::to_string(retry_cap) + " attempts");
}

std::pair<std::vector<NodeId>, std::vector<NodeId>> rank_facilities(
    const Instance& inst, const FacilitySet& open, const DemandOutcome& outcome,
    ObjectiveKind kind) {
  NodeIndex index(inst);

  std::map<NodeId, Cost> sum_cost;
  std::map<NodeId, Cost> max_cost;
  for (NodeId j : open) {
    sum_cost[j] = 0;
    max_cost[j] = 0;
  }
  for (const auto& [i, j] : outcome.assignment) {
    Cost c = inst.cost(index.row(i), index.col(j));
    sum_cost[j] += c;
    max_cost[j] = std::max(max_cost[j], c);
  }

  // Least useful first: an empty facility is the most promising closure.
  std::vector<NodeId> open_order(open.begin(), open.end());
  std::sort(open_order.begin(), open_order.end(), [&](NodeId a, NodeId b) {
    if (kind == ObjectiveKind::median) {
      return std::tuple(sum_cost[a], a) < std::tuple(sum_cost[b], b);
    }
    return std::tuple(max_cost[a], sum_cost[a], a) < std::tuple(max_cost[b], sum_cost[b], b);
  });

  std::vector<NodeId> closed_order;
  for (NodeId j : inst.facility_candidates) {
    if (!std::binary_search(open.begin(), open.end(), j)) closed_order.push_back(j);
  }

  // Sites nearest to the currently located demand open first.
  std::map<NodeId, Cost> proximity;
  for (NodeId b : closed_order) {
    Cost best = std::numeric_limits<Cost>::max();
    const int col = index.col(b);
    for (NodeId i : outcome.located_demand) {
      best = std::min(best, inst.cost(index.row(i), col));
    }
    proximity[b] = outcome.located_demand.empty() ? 0 : best;
  }
  std::sort(closed_order.begin(), closed_order.end(), [&](NodeId a, NodeId b) {
    return std::tuple(proximity[a], a) < std::tuple(proximity[b], b);
  });

  return {std::move(open_order), std::move(closed_order)};
}

namespace {

DemandOutcome find_optimal_demand(const Instance& inst, const FacilitySet& open,
                                  ObjectiveKind kind, std::optional<Cost> incumbent,
                                  const CostIndex* cost_index) {
  if (kind == ObjectiveKind::median) {
    // The incumbent bound does not speed up an exact flow solve.
    return optimal_demand_median(inst, open);
  }
  return optimal_demand_center(inst, open, incumbent, nullptr, cost_index);
}

}  // namespace

SearchResult local_search(const Instance& inst, const SearchConfig& cfg,
                          std::ostream* trace_stream) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  std::optional<CostIndex> center_index;
  if (cfg.objective_kind == ObjectiveKind::center) {
    center_index.emplace(CostIndex::from_instance(inst));
  }
  const CostIndex* index_ptr = center_index ? &*center_index : nullptr;

  FacilitySet open = initialize_facilities(inst, cfg.rng_seed, cfg.init_retry_cap);
  DemandOutcome incumbent =
      find_optimal_demand(inst, open, cfg.objective_kind, std::nullopt, index_ptr);
  if (!incumbent.optimal()) {
    // initialize_facilities already certified feasibility.
    throw Error("initial demand placement unexpectedly infeasible");
  }

  SearchTrace trace;
  trace.history.emplace_back(elapsed(), incumbent.objective);

  std::mt19937_64 rank_rng(cfg.rng_seed + 0x9E3779B97F4A7C15ULL);

  bool out_of_budget = false;
  auto budget_spent = [&] {
    if (cfg.time_budget_s && elapsed() > *cfg.time_budget_s) {
      out_of_budget = true;
    }
    return out_of_budget;
  };

  bool capped = cfg.max_iterations && *cfg.max_iterations == 0;
  bool improved = !capped;
  while (improved && !out_of_budget) {
    improved = false;
    auto [open_order, closed_order] =
        rank_facilities(inst, open, incumbent, cfg.objective_kind);
    if (cfg.rank_rule == RankRule::random) {
      shuffle_deterministic(rank_rng, open_order);
      shuffle_deterministic(rank_rng, closed_order);
    }
    for (NodeId close : open_order) {
      for (NodeId open_site : closed_order) {
        if (budget_spent()) break;
        FacilitySet candidate;
        candidate.reserve(open.size());
        for (NodeId j : open) {
          if (j != close) candidate.push_back(j);
        }
        candidate.push_back(open_site);
        std::sort(candidate.begin(), candidate.end());

        DemandOutcome trial = find_optimal_demand(inst, candidate, cfg.objective_kind,
                                                  incumbent.objective, index_ptr);
        if (!trial.optimal() || trial.objective >= incumbent.objective) continue;

        open = std::move(candidate);
        incumbent = std::move(trial);
        trace.counter += 1;
        trace.history.emplace_back(elapsed(), incumbent.objective);
        trace.accepted_swaps.emplace_back(close, open_site);
        if (trace_stream) {
          *trace_stream << trace.history.back().first << ' ' << incumbent.objective << ' '
                        << close << ' ' << open_site << '\n';
        }
        if (cfg.max_iterations && trace.counter >= *cfg.max_iterations) {
          capped = true;
        } else {
          improved = true;
        }
        break;  // re-rank from the new incumbent
      }
      if (improved || capped || out_of_budget) break;
    }
  }

  trace.terminated_by = out_of_budget ? Termination::time_budget
                        : capped      ? Termination::iteration_cap
                                      : Termination::local_optimum;

  SearchResult result;
  result.solution = to_solution(incumbent, open, cfg.objective_kind);
  result.trace = std::move(trace);
  return result;
}

}  // namespace jfdl
