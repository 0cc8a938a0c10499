#pragma once

#include <string>

#include "jfdl/instance.hpp"

namespace jfdl {

/// Instance JSON schema (documented in the README): scale,
/// demand_candidates, facility_candidates, costs (row-major; integer values
/// are taken as already fixed-point, floating values are scaled), d, k, C,
/// colocate_forbidden, plus optional coords, populations and regions.
Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

/// Solution JSON schema: open_facilities, located_demand, assignment pairs,
/// objective_kind, objective_value (real-valued, descaled).
Solution read_solution(const std::string& path, Cost scale);
void write_solution(const Solution& sol, Cost scale, const std::string& path);

/// Plot-data export: every point with its population percentile bucket
/// (labels 10/30/50/70/90 for the five 20%-wide percentile classes), open
/// facilities, located demand, one segment per assignment, and the region
/// grid lines when the instance carries a gridded region spec.
void write_map_export(const Instance& inst, const Solution& sol, const std::string& path);

/// Percentile bucket label for one value within a population: 10, 30, 50,
/// 70 or 90. Equal values always land in the same bucket (mid-rank).
int percentile_bucket(const std::vector<std::int64_t>& values, std::int64_t value);

}  // namespace jfdl
