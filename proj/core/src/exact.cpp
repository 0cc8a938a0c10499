#include "jfdl/exact.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

#include "jfdl/errors.hpp"

namespace jfdl {

std::uint64_t subset_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  const std::uint64_t cap = std::numeric_limits<std::int64_t>::max();
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step
    std::uint64_t next = result * static_cast<std::uint64_t>(n - k + i);
    if (next / static_cast<std::uint64_t>(n - k + i) != result || next > cap) return cap;
    result = next / static_cast<std::uint64_t>(i);
  }
  return result;
}

namespace {

// Advances `combo` (sorted positions into 0..n-1) to the next combination in
// lexicographic order; returns false after the last one.
bool next_combination(std::vector<int>& combo, int n) {
  const int k = static_cast<int>(combo.size());
  for (int i = k - 1; i >= 0; --i) {
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Solution exact_solve(const Instance& inst, ObjectiveKind kind, const ExactConfig& cfg) {
  if (ValidationReport report = validate_instance(inst); !report) {
    throw Error("invalid instance: " + report.message);
  }
  const int n = inst.n();
  const int k = static_cast<int>(inst.k);
  const std::uint64_t subsets = subset_count(n, k);
  if (subsets > cfg.max_subsets) {
    throw InstanceTooLargeError("exact solve would enumerate " + std::to_string(subsets) +
                                " facility subsets (cap " + std::to_string(cfg.max_subsets) +
                                ")");
  }

  std::optional<Cost> best_objective;
  FacilitySet best_open;
  DemandOutcome best_outcome;

  std::vector<int> combo(k);
  for (int i = 0; i < k; ++i) combo[i] = i;
  // Candidate ids sorted so enumeration order is lexicographic over id sets.
  std::vector<NodeId> sorted_ids = inst.facility_candidates;
  std::sort(sorted_ids.begin(), sorted_ids.end());

  if (k == 0) {
    // Single empty subset; only the d = 0 degenerate can be feasible.
    DemandOutcome outcome = optimal_demand_median(inst, {});
    if (outcome.optimal()) {
      return to_solution(outcome, {}, kind);
    }
    throw Error("no feasible facility subset exists");
  }

  bool more = true;
  std::optional<CostIndex> center_index;
  if (kind == ObjectiveKind::center) center_index.emplace(CostIndex::from_instance(inst));

  do {
    FacilitySet open;
    open.reserve(k);
    for (int pos : combo) open.push_back(sorted_ids[pos]);

    // The incumbent caps the center binary search; a subset whose optimum is
    // not strictly better comes back infeasible or equal and is skipped.
    DemandOutcome outcome =
        kind == ObjectiveKind::median
            ? optimal_demand_median(inst, open)
            : optimal_demand_center(inst, open, best_objective, nullptr,
                                    center_index ? &*center_index : nullptr);
    if (outcome.optimal() && (!best_objective || outcome.objective < *best_objective)) {
      best_objective = outcome.objective;
      best_open = open;
      best_outcome = std::move(outcome);
    }
    more = next_combination(combo, n);
  } while (more);

  if (!best_objective) {
    throw Error("no feasible facility subset exists");
  }
  return to_solution(best_outcome, best_open, kind);
}

namespace {

struct OracleState {
  const Instance& inst;
  const std::vector<int>& open_cols;  // columns of the open facilities
  ObjectiveKind kind;
  std::vector<std::int64_t> load;  // per open facility
  std::vector<int> chosen_rows;
  std::optional<Cost> best;
  std::vector<std::pair<int, int>> best_assign;  // (row, open index)
  std::vector<std::pair<int, int>> assign;
};

// Assigns each chosen demand row to some open facility, exploring every
// capacity-feasible combination.
void assign_rows(OracleState& state, std::size_t pos, Cost sum, Cost worst) {
  if (pos == state.chosen_rows.size()) {
    Cost objective = state.kind == ObjectiveKind::median ? sum : worst;
    if (!state.best || objective < *state.best) {
      state.best = objective;
      state.best_assign = state.assign;
    }
    return;
  }
  const int row = state.chosen_rows[pos];
  for (std::size_t f = 0; f < state.open_cols.size(); ++f) {
    if (state.load[f] >= state.inst.capacity) continue;
    const Cost c = state.inst.cost(row, state.open_cols[f]);
    state.load[f] += 1;
    state.assign.emplace_back(row, static_cast<int>(f));
    assign_rows(state, pos + 1, sum + c, std::max(worst, c));
    state.assign.pop_back();
    state.load[f] -= 1;
  }
}

}  // namespace

DemandOutcome exact_demand_oracle(const Instance& inst, const FacilitySet& open,
                                  ObjectiveKind kind, const OracleLimits& limits) {
  const int m = inst.m();
  if (m > limits.max_m || inst.d > limits.max_d) {
    throw InstanceTooLargeError("demand oracle limited to m <= " +
                                std::to_string(limits.max_m) + ", d <= " +
                                std::to_string(limits.max_d));
  }

  NodeIndex index(inst);
  std::vector<int> open_cols;
  open_cols.reserve(open.size());
  for (NodeId j : open) open_cols.push_back(index.col(j));

  // Demand rows that may carry demand at all.
  std::vector<int> usable_rows;
  for (int i = 0; i < m; ++i) {
    NodeId id = inst.demand_candidates[i];
    if (inst.colocate_forbidden &&
        std::find(open.begin(), open.end(), id) != open.end()) {
      continue;
    }
    usable_rows.push_back(i);
  }

  auto region_of = [&](NodeId id) -> int {
    if (!inst.regions) return -1;
    for (std::size_t q = 0; q < inst.regions->regions.size(); ++q) {
      const auto& members = inst.regions->regions[q].members;
      if (std::find(members.begin(), members.end(), id) != members.end()) {
        return static_cast<int>(q);
      }
    }
    return -1;
  };

  auto regions_ok = [&](const std::vector<int>& rows) {
    if (!inst.regions) return true;
    std::vector<std::int64_t> counts(inst.regions->regions.size(), 0);
    for (int row : rows) {
      int q = region_of(inst.demand_candidates[row]);
      if (q >= 0) counts[q] += 1;
    }
    for (std::size_t q = 0; q < counts.size(); ++q) {
      const Region& region = inst.regions->regions[q];
      bool ok = region.kind == BoundKind::ge   ? counts[q] >= region.bound
                : region.kind == BoundKind::le ? counts[q] <= region.bound
                                               : counts[q] == region.bound;
      if (!ok) return false;
    }
    return true;
  };

  OracleState state{inst, open_cols, kind, std::vector<std::int64_t>(open_cols.size(), 0),
                    {},   std::nullopt, {},   {}};

  const auto d = static_cast<std::size_t>(inst.d);
  if (d == 0) {
    if (regions_ok({})) assign_rows(state, 0, 0, 0);
  } else if (d <= usable_rows.size()) {
    // Enumerate size-d subsets of the usable rows.
    std::vector<int> combo(d);
    for (std::size_t i = 0; i < d; ++i) combo[i] = static_cast<int>(i);
    bool more = true;
    while (more) {
      state.chosen_rows.clear();
      for (int pos : combo) state.chosen_rows.push_back(usable_rows[pos]);
      if (regions_ok(state.chosen_rows)) {
        assign_rows(state, 0, 0, 0);
      }
      more = next_combination(combo, static_cast<int>(usable_rows.size()));
    }
  }

  DemandOutcome outcome;
  if (!state.best) return outcome;
  outcome.status = FlowStatus::optimal;
  outcome.objective = *state.best;
  for (const auto& [row, f] : state.best_assign) {
    NodeId demand_id = inst.demand_candidates[row];
    outcome.located_demand.push_back(demand_id);
    outcome.assignment.emplace(demand_id, open[f]);
  }
  std::sort(outcome.located_demand.begin(), outcome.located_demand.end());
  return outcome;
}

}  // namespace jfdl
