#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jfdl/instance.hpp"

namespace jfdl {

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 100.0;
  double max_y = 100.0;
};

enum class PopulationModel { uniform, powerlaw };

struct GeneratorConfig {
  int num_points = 100;
  BoundingBox bbox;
  std::int64_t d = 10;
  std::int64_t k = 3;
  std::int64_t capacity = 5;
  std::uint64_t seed = 0;
  PopulationModel populations = PopulationModel::uniform;
  Cost scale = kDefaultScale;
};

/// Exact fraction used to size regional bounds (default 70%).
struct Fraction {
  std::int64_t num = 7;
  std::int64_t den = 10;
};

/// Uniform random points in the bounding box with per-point populations;
/// every point is both a demand and a facility candidate, costs are scaled
/// Euclidean distances and co-location is forbidden.
Instance generate_instance(const GeneratorConfig& cfg);

/// Partitions the coordinate bounding box into 2^(2g) equal squares and
/// turns every square containing at least one demand candidate into a GE
/// region with bound floor(fraction * d * pop_q / pop_total). Points on a
/// shared cell edge belong to the lower-indexed square (row-major order).
RegionSpec grid_regions(const Instance& inst, int g, Fraction demand_fraction = {});

struct IngestOptions {
  std::int64_t d = 0;
  std::int64_t k = 0;
  std::int64_t capacity = 0;
  Cost scale = kDefaultScale;
  /// Points with a population below this are dropped.
  std::optional<std::int64_t> min_population;
  /// Optional `from,to,cost` CSV; when absent, costs are Euclidean.
  std::optional<std::string> cost_file;
  bool colocate_forbidden = true;
};

/// Reads an `id,x,y,population` CSV (header required) into an instance with
/// I = J = the listed points. Schema violations report the offending line
/// number. An explicit cost file may be asymmetric and must cover every
/// ordered pair of surviving points.
Instance ingest_points(const std::string& points_path, const IngestOptions& opts);

}  // namespace jfdl
