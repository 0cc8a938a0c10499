#include "jfdl/generate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "jfdl/errors.hpp"
#include "jfdl/rng.hpp"

namespace jfdl {

Instance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.bbox.max_x <= cfg.bbox.min_x || cfg.bbox.max_y <= cfg.bbox.min_y) {
    throw Error("degenerate bounding box");
  }
  if (cfg.num_points < std::max<std::int64_t>(cfg.d + cfg.k, 2)) {
    throw Error("num_points must be at least max(d + k, 2)");
  }

  std::mt19937_64 rng(cfg.seed);
  Instance inst;
  inst.scale = cfg.scale;
  inst.d = cfg.d;
  inst.k = cfg.k;
  inst.capacity = cfg.capacity;
  inst.colocate_forbidden = true;

  for (int id = 0; id < cfg.num_points; ++id) {
    double x = cfg.bbox.min_x + uniform_unit(rng) * (cfg.bbox.max_x - cfg.bbox.min_x);
    double y = cfg.bbox.min_y + uniform_unit(rng) * (cfg.bbox.max_y - cfg.bbox.min_y);
    inst.coords[id] = Point{x, y};
    std::int64_t pop;
    if (cfg.populations == PopulationModel::uniform) {
      pop = 100 + static_cast<std::int64_t>(uniform_below(rng, 9901));  // [100, 10000]
    } else {
      // Pareto tail: few large population centers, many small ones.
      double u = uniform_unit(rng);
      pop = static_cast<std::int64_t>(100.0 / std::pow(1.0 - u, 1.0 / 1.5));
      pop = std::min<std::int64_t>(pop, 1000000);
    }
    inst.populations[id] = pop;
    inst.demand_candidates.push_back(id);
    inst.facility_candidates.push_back(id);
  }

  inst.costs.resize(static_cast<std::size_t>(cfg.num_points) * cfg.num_points);
  for (int i = 0; i < cfg.num_points; ++i) {
    const Point& a = inst.coords[i];
    for (int j = 0; j < cfg.num_points; ++j) {
      const Point& b = inst.coords[j];
      double dist = std::hypot(a.x - b.x, a.y - b.y);
      inst.costs[static_cast<std::size_t>(i) * cfg.num_points + j] = to_fixed(dist, cfg.scale);
    }
  }

  return inst;
}

namespace {

// Cell index along one axis; points exactly on an interior edge go to the
// lower cell.
int cell_along(double value, double origin, double width, int cells) {
  if (width <= 0.0) return 0;
  double offset = value - origin;
  int idx = static_cast<int>(std::floor(offset / width));
  if (idx > 0 && offset == static_cast<double>(idx) * width) idx -= 1;
  return std::clamp(idx, 0, cells - 1);
}

}  // namespace

RegionSpec grid_regions(const Instance& inst, int g, Fraction demand_fraction) {
  if (!inst.has_coords()) {
    throw MissingCoordinatesError("grid partitioning needs planar coordinates");
  }
  if (g < 0 || g > 6) {
    throw Error("grid parameter g must be in [0, 6]");
  }
  if (demand_fraction.num < 0 || demand_fraction.den <= 0) {
    throw Error("demand fraction must be a nonnegative rational");
  }

  double min_x = inst.coords.begin()->second.x;
  double max_x = min_x;
  double min_y = inst.coords.begin()->second.y;
  double max_y = min_y;
  for (const auto& [id, p] : inst.coords) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }

  const int cells = 1 << g;  // per axis; 2^(2g) squares total
  const double width = (max_x - min_x) / cells;
  const double height = (max_y - min_y) / cells;

  // Region membership over demand candidates; population mass over all
  // points, whichever candidate sets they belong to.
  std::map<int, std::vector<NodeId>> members;
  std::map<int, std::int64_t> cell_population;
  std::int64_t total_population = 0;
  for (const auto& [id, p] : inst.coords) {
    int cx = cell_along(p.x, min_x, width, cells);
    int cy = cell_along(p.y, min_y, height, cells);
    int cell = cy * cells + cx;
    cell_population[cell] += inst.population(id);
    total_population += inst.population(id);
  }
  for (NodeId id : inst.demand_candidates) {
    const Point& p = inst.coords.at(id);
    int cx = cell_along(p.x, min_x, width, cells);
    int cy = cell_along(p.y, min_y, height, cells);
    members[cy * cells + cx].push_back(id);
  }

  RegionSpec spec;
  spec.grid_g = g;
  for (const auto& [cell, ids] : members) {
    Region region;
    region.id = cell;
    region.members = ids;
    region.kind = BoundKind::ge;
    if (total_population > 0) {
      // floor(fraction * d * pop_q / pop_total), kept exact in integers
      region.bound = demand_fraction.num * inst.d * cell_population[cell] /
                     (demand_fraction.den * total_population);
    }
    region.bound = std::min<std::int64_t>(region.bound,
                                          static_cast<std::int64_t>(ids.size()));
    spec.regions.push_back(std::move(region));
  }
  return spec;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    // trim surrounding whitespace
    auto begin = field.find_first_not_of(" \t\r");
    auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
  }
  return fields;
}

std::int64_t parse_int(const std::string& text, int line_no, const std::string& what) {
  try {
    std::size_t used = 0;
    std::int64_t value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw SchemaError("line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
  }
}

double parse_double(const std::string& text, int line_no, const std::string& what) {
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw SchemaError("line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
  }
}

}  // namespace

Instance ingest_points(const std::string& points_path, const IngestOptions& opts) {
  std::ifstream in(points_path);
  if (!in) throw SchemaError("cannot open points file " + points_path);

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw SchemaError("empty points file");
  ++line_no;
  {
    auto header = split_csv_line(line);
    if (header.size() != 4 || header[0] != "id" || header[1] != "x" || header[2] != "y" ||
        header[3] != "population") {
      throw SchemaError("line 1: expected header 'id,x,y,population'");
    }
  }

  Instance inst;
  inst.scale = opts.scale;
  inst.d = opts.d;
  inst.k = opts.k;
  inst.capacity = opts.capacity;
  inst.colocate_forbidden = opts.colocate_forbidden;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                        std::to_string(fields.size()));
    }
    NodeId id = static_cast<NodeId>(parse_int(fields[0], line_no, "id"));
    double x = parse_double(fields[1], line_no, "x");
    double y = parse_double(fields[2], line_no, "y");
    std::int64_t population = parse_int(fields[3], line_no, "population");
    if (opts.min_population && population < *opts.min_population) continue;
    if (inst.coords.count(id)) {
      throw SchemaError("line " + std::to_string(line_no) + ": duplicate id " +
                        std::to_string(id));
    }
    inst.coords[id] = Point{x, y};
    inst.populations[id] = population;
    inst.demand_candidates.push_back(id);
    inst.facility_candidates.push_back(id);
  }
  if (inst.demand_candidates.empty()) throw SchemaError("no points survived ingestion");

  const int count = inst.m();
  inst.costs.assign(static_cast<std::size_t>(count) * count, -1);
  NodeIndex index(inst);

  if (opts.cost_file) {
    std::ifstream costs(*opts.cost_file);
    if (!costs) throw SchemaError("cannot open cost file " + *opts.cost_file);
    int cost_line = 0;
    if (!std::getline(costs, line)) throw SchemaError("empty cost file");
    ++cost_line;
    {
      auto header = split_csv_line(line);
      if (header.size() != 3 || header[0] != "from" || header[1] != "to" ||
          header[2] != "cost") {
        throw SchemaError("cost file line 1: expected header 'from,to,cost'");
      }
    }
    while (std::getline(costs, line)) {
      ++cost_line;
      if (line.empty()) continue;
      auto fields = split_csv_line(line);
      if (fields.size() != 3) {
        throw SchemaError("cost file line " + std::to_string(cost_line) +
                          ": expected 3 fields");
      }
      NodeId from = static_cast<NodeId>(parse_int(fields[0], cost_line, "from"));
      NodeId to = static_cast<NodeId>(parse_int(fields[1], cost_line, "to"));
      if (!index.demand_row.count(from) || !index.facility_col.count(to)) {
        continue;  // pair involves a filtered-out point
      }
      double value = parse_double(fields[2], cost_line, "cost");
      if (value < 0) {
        throw SchemaError("cost file line " + std::to_string(cost_line) + ": negative cost");
      }
      inst.costs[static_cast<std::size_t>(index.row(from)) * count + index.col(to)] =
          to_fixed(value, opts.scale);
    }
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        if (inst.costs[static_cast<std::size_t>(i) * count + j] < 0) {
          throw SchemaError("cost file misses pair (" +
                            std::to_string(inst.demand_candidates[i]) + ", " +
                            std::to_string(inst.facility_candidates[j]) + ")");
        }
      }
    }
  } else {
    for (int i = 0; i < count; ++i) {
      const Point& a = inst.coords.at(inst.demand_candidates[i]);
      for (int j = 0; j < count; ++j) {
        const Point& b = inst.coords.at(inst.facility_candidates[j]);
        inst.costs[static_cast<std::size_t>(i) * count + j] =
            to_fixed(std::hypot(a.x - b.x, a.y - b.y), opts.scale);
      }
    }
  }

  return inst;
}

}  // namespace jfdl
