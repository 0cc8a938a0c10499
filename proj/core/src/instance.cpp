#include "jfdl/instance.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "jfdl/errors.hpp"

namespace jfdl {

std::string to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::median ? "median" : "center";
}

ObjectiveKind objective_from_string(const std::string& name) {
  if (name == "median") return ObjectiveKind::median;
  if (name == "center") return ObjectiveKind::center;
  throw Error("unknown objective kind: " + name);
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::ge: return "GE";
    case BoundKind::le: return "LE";
    case BoundKind::eq: return "EQ";
  }
  return "GE";
}

BoundKind bound_from_string(const std::string& name) {
  if (name == "GE") return BoundKind::ge;
  if (name == "LE") return BoundKind::le;
  if (name == "EQ") return BoundKind::eq;
  throw Error("unknown region bound kind: " + name);
}

std::int64_t Instance::population(NodeId id) const {
  auto it = populations.find(id);
  return it == populations.end() ? 1 : it->second;
}

NodeIndex::NodeIndex(const Instance& inst) {
  demand_row.reserve(inst.demand_candidates.size());
  for (int i = 0; i < inst.m(); ++i) {
    demand_row.emplace(inst.demand_candidates[i], i);
  }
  facility_col.reserve(inst.facility_candidates.size());
  for (int j = 0; j < inst.n(); ++j) {
    facility_col.emplace(inst.facility_candidates[j], j);
  }
}

int NodeIndex::row(NodeId id) const {
  auto it = demand_row.find(id);
  if (it == demand_row.end()) {
    throw Error("unknown demand candidate id " + std::to_string(id));
  }
  return it->second;
}

int NodeIndex::col(NodeId id) const {
  auto it = facility_col.find(id);
  if (it == facility_col.end()) {
    throw Error("unknown facility candidate id " + std::to_string(id));
  }
  return it->second;
}

namespace {

ValidationReport fail(std::string message) { return ValidationReport{std::move(message)}; }

template <typename... Parts>
std::string cat(Parts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace

ValidationReport validate_instance(const Instance& inst) {
  const auto m = static_cast<std::int64_t>(inst.demand_candidates.size());
  const auto n = static_cast<std::int64_t>(inst.facility_candidates.size());

  {
    std::set<NodeId> seen(inst.demand_candidates.begin(), inst.demand_candidates.end());
    if (static_cast<std::int64_t>(seen.size()) != m) {
      return fail("duplicate ids in demand candidates");
    }
    seen.clear();
    seen.insert(inst.facility_candidates.begin(), inst.facility_candidates.end());
    if (static_cast<std::int64_t>(seen.size()) != n) {
      return fail("duplicate ids in facility candidates");
    }
  }

  if (inst.scale < 1) return fail(cat("scale must be >= 1, got ", inst.scale));
  if (inst.d < 0 || inst.k < 0 || inst.capacity < 0) {
    return fail("d, k and C must be nonnegative");
  }
  if (inst.d > m) return fail(cat("d <= m violated: d=", inst.d, ", m=", m));
  if (inst.k > n) return fail(cat("k <= n violated: k=", inst.k, ", n=", n));
  if (inst.capacity * inst.k < inst.d) {
    return fail(cat("C*k >= d violated: C=", inst.capacity, ", k=", inst.k, ", d=", inst.d));
  }

  if (static_cast<std::int64_t>(inst.costs.size()) != m * n) {
    return fail(cat("cost matrix has ", inst.costs.size(), " entries, expected ", m * n));
  }
  for (std::size_t idx = 0; idx < inst.costs.size(); ++idx) {
    if (inst.costs[idx] < 0) {
      return fail(cat("negative cost at row ", idx / std::max<std::size_t>(n, 1),
                      " col ", idx % std::max<std::size_t>(n, 1)));
    }
  }

  if (!inst.coords.empty()) {
    for (NodeId id : inst.demand_candidates) {
      if (!inst.coords.count(id)) return fail(cat("missing coordinates for node ", id));
    }
    for (NodeId id : inst.facility_candidates) {
      if (!inst.coords.count(id)) return fail(cat("missing coordinates for node ", id));
    }
  }

  if (inst.regions) {
    std::set<NodeId> demand_ids(inst.demand_candidates.begin(), inst.demand_candidates.end());
    std::set<NodeId> claimed;
    std::int64_t lower_sum = 0;
    for (const Region& region : inst.regions->regions) {
      if (region.bound < 0) {
        return fail(cat("region ", region.id, " has negative bound"));
      }
      for (NodeId id : region.members) {
        if (!demand_ids.count(id)) {
          return fail(cat("region ", region.id, " member ", id, " is not a demand candidate"));
        }
        if (!claimed.insert(id).second) {
          return fail(cat("node ", id, " belongs to more than one region"));
        }
      }
      if (region.kind != BoundKind::le &&
          region.bound > static_cast<std::int64_t>(region.members.size())) {
        return fail(cat("region ", region.id, " bound ", region.bound, " exceeds its size ",
                        region.members.size()));
      }
      if (region.kind != BoundKind::le) lower_sum += region.bound;
    }
    if (lower_sum > inst.d) {
      return fail(cat("sum of GE/EQ region bounds ", lower_sum, " exceeds d=", inst.d));
    }
  }

  return {};
}

ValidationReport validate_solution(const Instance& inst, const Solution& sol) {
  NodeIndex index(inst);

  if (static_cast<std::int64_t>(sol.open_facilities.size()) != inst.k) {
    return fail(cat("|F| = k violated: ", sol.open_facilities.size(), " open, k=", inst.k));
  }
  std::set<NodeId> open(sol.open_facilities.begin(), sol.open_facilities.end());
  if (open.size() != sol.open_facilities.size()) {
    return fail("duplicate facility in open set");
  }
  for (NodeId id : sol.open_facilities) {
    if (!index.facility_col.count(id)) {
      return fail(cat("open facility ", id, " is not a facility candidate"));
    }
  }

  if (static_cast<std::int64_t>(sol.located_demand.size()) != inst.d) {
    return fail(cat("|D| = d violated: ", sol.located_demand.size(), " located, d=", inst.d));
  }
  std::set<NodeId> located(sol.located_demand.begin(), sol.located_demand.end());
  if (located.size() != sol.located_demand.size()) {
    return fail("duplicate demand node in located set");
  }
  for (NodeId id : sol.located_demand) {
    if (!index.demand_row.count(id)) {
      return fail(cat("located demand ", id, " is not a demand candidate"));
    }
  }

  // Each located demand assigned to exactly one open facility.
  std::map<NodeId, NodeId> assigned;
  for (const auto& [i, j] : sol.assignment) {
    if (!assigned.emplace(i, j).second) {
      return fail(cat("demand ", i, " assigned more than once"));
    }
    if (!located.count(i)) {
      return fail(cat("assignment references demand ", i, " outside the located set"));
    }
    if (!open.count(j)) {
      return fail(cat("demand ", i, " assigned to closed facility ", j));
    }
  }
  for (NodeId i : sol.located_demand) {
    if (!assigned.count(i)) {
      return fail(cat("located demand ", i, " has no assignment"));
    }
  }

  // Per-facility load.
  std::map<NodeId, std::int64_t> load;
  for (const auto& [i, j] : sol.assignment) load[j] += 1;
  for (const auto& [j, units] : load) {
    if (units > inst.capacity) {
      return fail(cat("capacity violated at facility ", j, ": load ", units, " > C=",
                      inst.capacity));
    }
  }

  if (inst.colocate_forbidden) {
    for (NodeId id : sol.located_demand) {
      if (open.count(id)) {
        return fail(cat("node ", id, " hosts both a facility and demand"));
      }
    }
  }

  if (inst.regions) {
    for (const Region& region : inst.regions->regions) {
      std::int64_t count = 0;
      for (NodeId id : region.members) count += located.count(id) ? 1 : 0;
      const bool ok = region.kind == BoundKind::ge   ? count >= region.bound
                      : region.kind == BoundKind::le ? count <= region.bound
                                                     : count == region.bound;
      if (!ok) {
        return fail(cat("region ", region.id, " count ", count, " violates ",
                        to_string(region.kind), " ", region.bound));
      }
    }
  }

  return {};
}

namespace {

void require_valid(const Instance& inst, const Solution& sol) {
  if (ValidationReport report = validate_solution(inst, sol); !report) {
    throw InvalidSolutionError(report.message);
  }
}

}  // namespace

Cost evaluate_median(const Instance& inst, const Solution& sol) {
  require_valid(inst, sol);
  NodeIndex index(inst);
  Cost total = 0;
  for (const auto& [i, j] : sol.assignment) {
    total += inst.cost(index.row(i), index.col(j));
  }
  return total;
}

Cost evaluate_center(const Instance& inst, const Solution& sol) {
  require_valid(inst, sol);
  if (sol.assignment.empty()) {
    throw InvalidSolutionError("center objective is undefined for an empty assignment");
  }
  NodeIndex index(inst);
  Cost worst = 0;
  for (const auto& [i, j] : sol.assignment) {
    worst = std::max(worst, inst.cost(index.row(i), index.col(j)));
  }
  return worst;
}

}  // namespace jfdl
