#include "jfdl/io.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "jfdl/errors.hpp"

namespace jfdl {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return doc;
}

void save_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
}

const json& require(const json& doc, const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError("missing key '" + key + "'");
  return *it;
}

}  // namespace

Instance read_instance(const std::string& path) {
  json doc = load_json(path);
  Instance inst;
  try {
    inst.scale = require(doc, "scale").get<Cost>();
    inst.demand_candidates = require(doc, "demand_candidates").get<std::vector<NodeId>>();
    inst.facility_candidates = require(doc, "facility_candidates").get<std::vector<NodeId>>();
    inst.d = require(doc, "d").get<std::int64_t>();
    inst.k = require(doc, "k").get<std::int64_t>();
    inst.capacity = require(doc, "C").get<std::int64_t>();
    inst.colocate_forbidden = doc.value("colocate_forbidden", false);

    const json& costs = require(doc, "costs");
    if (!costs.is_array()) throw SchemaError("costs must be an array");
    inst.costs.reserve(costs.size());
    for (const json& value : costs) {
      if (value.is_number_integer()) {
        // Integers are already fixed-point.
        inst.costs.push_back(value.get<Cost>());
      } else if (value.is_number_float()) {
        inst.costs.push_back(to_fixed(value.get<double>(), inst.scale));
      } else {
        throw SchemaError("costs entries must be numbers");
      }
    }

    if (doc.contains("coords")) {
      for (const json& entry : doc["coords"]) {
        if (!entry.is_array() || entry.size() != 3) {
          throw SchemaError("coords entries must be [id, x, y]");
        }
        inst.coords[entry[0].get<NodeId>()] =
            Point{entry[1].get<double>(), entry[2].get<double>()};
      }
    }
    if (doc.contains("populations")) {
      for (const json& entry : doc["populations"]) {
        if (!entry.is_array() || entry.size() != 2) {
          throw SchemaError("populations entries must be [id, population]");
        }
        inst.populations[entry[0].get<NodeId>()] = entry[1].get<std::int64_t>();
      }
    }
    if (doc.contains("regions") && !doc["regions"].is_null()) {
      const json& spec = doc["regions"];
      RegionSpec regions;
      if (spec.contains("grid_g") && !spec["grid_g"].is_null()) {
        regions.grid_g = spec["grid_g"].get<int>();
      }
      for (const json& entry : require(spec, "regions")) {
        Region region;
        region.id = require(entry, "id").get<int>();
        region.members = require(entry, "members").get<std::vector<NodeId>>();
        region.kind = bound_from_string(require(entry, "kind").get<std::string>());
        region.bound = require(entry, "bound").get<std::int64_t>();
        regions.regions.push_back(std::move(region));
      }
      inst.regions = std::move(regions);
    }
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return inst;
}

void write_instance(const Instance& inst, const std::string& path) {
  json doc;
  doc["scale"] = inst.scale;
  doc["demand_candidates"] = inst.demand_candidates;
  doc["facility_candidates"] = inst.facility_candidates;
  doc["costs"] = inst.costs;  // emitted pre-scaled so round trips are exact
  doc["d"] = inst.d;
  doc["k"] = inst.k;
  doc["C"] = inst.capacity;
  doc["colocate_forbidden"] = inst.colocate_forbidden;
  if (!inst.coords.empty()) {
    json coords = json::array();
    for (const auto& [id, p] : inst.coords) coords.push_back({id, p.x, p.y});
    doc["coords"] = std::move(coords);
  }
  if (!inst.populations.empty()) {
    json pops = json::array();
    for (const auto& [id, pop] : inst.populations) pops.push_back({id, pop});
    doc["populations"] = std::move(pops);
  }
  if (inst.regions) {
    json spec;
    if (inst.regions->grid_g) spec["grid_g"] = *inst.regions->grid_g;
    json regions = json::array();
    for (const Region& region : inst.regions->regions) {
      regions.push_back({{"id", region.id},
                         {"members", region.members},
                         {"kind", to_string(region.kind)},
                         {"bound", region.bound}});
    }
    spec["regions"] = std::move(regions);
    doc["regions"] = std::move(spec);
  }
  save_json(doc, path);
}

Solution read_solution(const std::string& path, Cost scale) {
  json doc = load_json(path);
  Solution sol;
  try {
    sol.open_facilities = require(doc, "open_facilities").get<std::vector<NodeId>>();
    sol.located_demand = require(doc, "located_demand").get<std::vector<NodeId>>();
    for (const json& entry : require(doc, "assignment")) {
      if (!entry.is_array() || entry.size() != 2) {
        throw SchemaError("assignment entries must be [demand, facility]");
      }
      sol.assignment.emplace_back(entry[0].get<NodeId>(), entry[1].get<NodeId>());
    }
    sol.objective_kind = objective_from_string(require(doc, "objective_kind").get<std::string>());
    sol.objective_value = to_fixed(require(doc, "objective_value").get<double>(), scale);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return sol;
}

void write_solution(const Solution& sol, Cost scale, const std::string& path) {
  json doc;
  doc["open_facilities"] = sol.open_facilities;
  doc["located_demand"] = sol.located_demand;
  json assignment = json::array();
  for (const auto& [i, j] : sol.assignment) assignment.push_back({i, j});
  doc["assignment"] = std::move(assignment);
  doc["objective_kind"] = to_string(sol.objective_kind);
  doc["objective_value"] = to_real(sol.objective_value, scale);
  save_json(doc, path);
}

int percentile_bucket(const std::vector<std::int64_t>& values, std::int64_t value) {
  if (values.empty()) return 10;
  double below = 0;
  double equal = 0;
  for (std::int64_t v : values) {
    if (v < value) below += 1;
    if (v == value) equal += 1;
  }
  // mid-rank percentile, so ties share a bucket
  double rank = (below + equal / 2.0) / static_cast<double>(values.size()) * 100.0;
  int cls = std::clamp(static_cast<int>(rank / 20.0), 0, 4);
  return 10 + 20 * cls;
}

void write_map_export(const Instance& inst, const Solution& sol, const std::string& path) {
  if (!inst.has_coords()) {
    throw MissingCoordinatesError("map export needs planar coordinates");
  }

  std::vector<std::int64_t> pops;
  pops.reserve(inst.coords.size());
  for (const auto& [id, p] : inst.coords) pops.push_back(inst.population(id));

  json points = json::array();
  for (const auto& [id, p] : inst.coords) {
    points.push_back({{"id", id},
                      {"x", p.x},
                      {"y", p.y},
                      {"population", inst.population(id)},
                      {"percentile_bucket", percentile_bucket(pops, inst.population(id))}});
  }

  json segments = json::array();
  for (const auto& [i, j] : sol.assignment) {
    const Point& a = inst.coords.at(i);
    const Point& b = inst.coords.at(j);
    segments.push_back({{"demand", i},
                        {"facility", j},
                        {"x1", a.x},
                        {"y1", a.y},
                        {"x2", b.x},
                        {"y2", b.y}});
  }

  json doc;
  doc["points"] = std::move(points);
  doc["open_facilities"] = sol.open_facilities;
  doc["located_demand"] = sol.located_demand;
  doc["assignments"] = std::move(segments);

  if (inst.regions) {
    json layer;
    if (inst.regions->grid_g) {
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
      const int cells = 1 << *inst.regions->grid_g;
      json xs = json::array();
      json ys = json::array();
      for (int c = 0; c <= cells; ++c) {
        xs.push_back(min_x + (max_x - min_x) * c / cells);
        ys.push_back(min_y + (max_y - min_y) * c / cells);
      }
      layer["g"] = *inst.regions->grid_g;
      layer["x_lines"] = std::move(xs);
      layer["y_lines"] = std::move(ys);
    }
    json regions = json::array();
    for (const Region& region : inst.regions->regions) {
      regions.push_back({{"id", region.id},
                         {"members", region.members},
                         {"kind", to_string(region.kind)},
                         {"bound", region.bound}});
    }
    layer["regions"] = std::move(regions);
    doc["region_grid"] = std::move(layer);
  }

  save_json(doc, path);
}

}  // namespace jfdl
