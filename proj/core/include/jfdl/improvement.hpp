#pragma once

#include <vector>

#include "jfdl/instance.hpp"

namespace jfdl {

/// Axis-aligned bounding rectangle, boundary inclusive.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(const Point& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
};

/// Demand assigned to one facility, with the tight bounding box of the
/// member coordinates. Facilities with an empty load produce no zone.
struct Zone {
  NodeId facility = 0;
  std::vector<NodeId> members;
  Rect rect;
};

/// Splits a solution into per-facility zones. Throws
/// MissingCoordinatesError when the instance has no coordinates.
std::vector<Zone> compute_zones(const Instance& inst, const Solution& sol);

/// Zone-by-zone facility reselection for center solutions: each zone may
/// move its whole load to a facility site inside its bounding rectangle
/// when that strictly lowers the zone's worst assignment cost. Zones are
/// visited in decreasing order of their worst cost so the bottleneck zone
/// gets first pick of shared candidates; a zone with no unclaimed in-rect
/// candidate aborts the pass. The rebuilt facility set is re-solved and the
/// better of the original and rebuilt solutions is returned, so the result
/// never has a larger objective than the input.
Solution improve_center(const Instance& inst, const Solution& sol);

}  // namespace jfdl
