#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jfdl/fixed_point.hpp"

namespace jfdl {

using NodeId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class ObjectiveKind { median, center };

std::string to_string(ObjectiveKind kind);
ObjectiveKind objective_from_string(const std::string& name);

enum class BoundKind { ge, le, eq };

std::string to_string(BoundKind kind);
BoundKind bound_from_string(const std::string& name);

/// One disjoint demand region with a count constraint on located demand.
struct Region {
  int id = 0;
  std::vector<NodeId> members;  // demand-candidate ids
  BoundKind kind = BoundKind::ge;
  std::int64_t bound = 0;  // mu_q
};

struct RegionSpec {
  std::vector<Region> regions;
  std::optional<int> grid_g;  // set when produced by the grid partitioner
};

/// A joint facility-demand location instance. Costs are row-major over
/// (demand candidate, facility candidate) pairs, fixed-point at `scale`.
/// Instances are immutable after construction; every operation treats them
/// as read-only, so they are safe to share across concurrent solver runs.
struct Instance {
  std::vector<NodeId> demand_candidates;    // set I, size m
  std::vector<NodeId> facility_candidates;  // set J, size n
  std::vector<Cost> costs;                  // m*n entries, row-major
  std::int64_t d = 0;                       // demand units to locate
  std::int64_t k = 0;                       // facilities to open
  std::int64_t capacity = 0;                // uniform facility capacity C
  Cost scale = kDefaultScale;
  std::map<NodeId, Point> coords;                 // optional, per node id
  std::map<NodeId, std::int64_t> populations;     // optional, per node id
  std::optional<RegionSpec> regions;
  bool colocate_forbidden = false;

  int m() const { return static_cast<int>(demand_candidates.size()); }
  int n() const { return static_cast<int>(facility_candidates.size()); }

  Cost cost(int demand_row, int facility_col) const {
    return costs[static_cast<std::size_t>(demand_row) * facility_candidates.size() +
                 static_cast<std::size_t>(facility_col)];
  }

  bool has_coords() const { return !coords.empty(); }

  /// Population of a node; 1 when no populations were supplied.
  std::int64_t population(NodeId id) const;
};

/// Lookup tables from node id to matrix row/column, built per operation so
/// the Instance itself stays a plain immutable aggregate.
struct NodeIndex {
  std::unordered_map<NodeId, int> demand_row;
  std::unordered_map<NodeId, int> facility_col;

  explicit NodeIndex(const Instance& inst);

  int row(NodeId id) const;  // throws on unknown id
  int col(NodeId id) const;
};

/// Open facilities, located demand and their assignment. `objective_value`
/// is fixed-point at the owning instance's scale; for the center objective
/// it is the bottleneck assignment cost.
struct Solution {
  std::vector<NodeId> open_facilities;                 // set F, |F| = k
  std::vector<NodeId> located_demand;                  // set D, |D| = d
  std::vector<std::pair<NodeId, NodeId>> assignment;   // (demand, facility)
  ObjectiveKind objective_kind = ObjectiveKind::median;
  Cost objective_value = 0;
};

/// Outcome of a validation pass: `ok()` or the first violated invariant,
/// with identifying indices in the message.
struct ValidationReport {
  std::string message;  // empty when valid

  bool ok() const { return message.empty(); }
  explicit operator bool() const { return ok(); }
};

ValidationReport validate_instance(const Instance& inst);
ValidationReport validate_solution(const Instance& inst, const Solution& sol);

/// Sum of assignment costs. Throws InvalidSolutionError when `sol` is not
/// structurally valid for `inst`.
Cost evaluate_median(const Instance& inst, const Solution& sol);

/// Maximum assignment cost. Throws InvalidSolutionError on invalid input and
/// on the degenerate empty assignment (d = 0).
Cost evaluate_center(const Instance& inst, const Solution& sol);

}  // namespace jfdl
