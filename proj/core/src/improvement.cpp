#include "jfdl/improvement.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "jfdl/demand.hpp"
#include "jfdl/errors.hpp"

namespace jfdl {

std::vector<Zone> compute_zones(const Instance& inst, const Solution& sol) {
  if (!inst.has_coords()) {
    throw MissingCoordinatesError("zone decomposition needs planar coordinates");
  }
  if (ValidationReport report = validate_solution(inst, sol); !report) {
    throw InvalidSolutionError(report.message);
  }

  std::map<NodeId, std::vector<NodeId>> loads;
  for (const auto& [i, j] : sol.assignment) loads[j].push_back(i);

  std::vector<Zone> zones;
  for (NodeId j : sol.open_facilities) {
    auto it = loads.find(j);
    if (it == loads.end() || it->second.empty()) continue;
    Zone zone;
    zone.facility = j;
    zone.members = it->second;
    std::sort(zone.members.begin(), zone.members.end());
    const Point& first = inst.coords.at(zone.members.front());
    zone.rect = Rect{first.x, first.y, first.x, first.y};
    for (NodeId i : zone.members) {
      const Point& p = inst.coords.at(i);
      zone.rect.min_x = std::min(zone.rect.min_x, p.x);
      zone.rect.min_y = std::min(zone.rect.min_y, p.y);
      zone.rect.max_x = std::max(zone.rect.max_x, p.x);
      zone.rect.max_y = std::max(zone.rect.max_y, p.y);
    }
    zones.push_back(std::move(zone));
  }
  return zones;
}

Solution improve_center(const Instance& inst, const Solution& sol) {
  if (sol.objective_kind != ObjectiveKind::center) {
    throw InvalidSolutionError("improvement pass applies to center solutions only");
  }
  NodeIndex index(inst);
  std::vector<Zone> zones = compute_zones(inst, sol);

  // The stored objective may be stale; compare against the true value.
  Solution current = sol;
  current.objective_value = evaluate_center(inst, sol);

  auto zone_max = [&](const Zone& zone, NodeId facility) {
    Cost worst = 0;
    const int col = index.col(facility);
    for (NodeId i : zone.members) {
      worst = std::max(worst, inst.cost(index.row(i), col));
    }
    return worst;
  };

  // Bottleneck zone first.
  std::sort(zones.begin(), zones.end(), [&](const Zone& a, const Zone& b) {
    return std::tuple(-zone_max(a, a.facility), a.facility) <
           std::tuple(-zone_max(b, b.facility), b.facility);
  });

  std::set<NodeId> original(sol.open_facilities.begin(), sol.open_facilities.end());
  std::set<NodeId> rebuilt;
  bool aborted = false;
  for (const Zone& zone : zones) {
    std::optional<NodeId> best_site;
    Cost best_cost = std::numeric_limits<Cost>::max();
    for (NodeId j : inst.facility_candidates) {
      if (!zone.rect.contains(inst.coords.at(j))) continue;
      if (rebuilt.count(j)) continue;  // already claimed by an earlier zone
      if (original.count(j) && j != zone.facility) continue;  // carries another zone's load
      Cost worst = zone_max(zone, j);
      if (!best_site || worst < best_cost || (worst == best_cost && j < *best_site)) {
        best_site = j;
        best_cost = worst;
      }
    }
    if (!best_site) {
      aborted = true;
      break;
    }
    // Keep the reselected site only on strict improvement of the zone's
    // worst cost; otherwise the zone keeps its current facility.
    NodeId chosen =
        best_cost < zone_max(zone, zone.facility) ? *best_site : zone.facility;
    rebuilt.insert(chosen);
  }

  if (aborted) return current;

  // Facilities with no load keep their slot so the set stays at k.
  for (NodeId j : sol.open_facilities) {
    if (!rebuilt.count(j)) {
      bool has_zone = std::any_of(zones.begin(), zones.end(),
                                  [&](const Zone& z) { return z.facility == j; });
      if (!has_zone) rebuilt.insert(j);
    }
  }

  FacilitySet candidate(rebuilt.begin(), rebuilt.end());
  if (candidate == sol.open_facilities) return current;

  DemandOutcome outcome =
      optimal_demand_center(inst, candidate, /*incumbent=*/current.objective_value);
  if (!outcome.optimal() || outcome.objective >= current.objective_value) return current;
  return to_solution(outcome, candidate, ObjectiveKind::center);
}

}  // namespace jfdl
