#include "jfdl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "jfdl/errors.hpp"
#include "jfdl/exact.hpp"
#include "jfdl/local_search.hpp"

namespace jfdl {

SizePreset size_preset(const std::string& family, const std::string& size) {
  if (family == "full") {
    if (size == "S") return {"S", 309, 50, 3, 20};
    if (size == "M") return {"M", 309, 100, 6, 20};
    if (size == "L") return {"L", 309, 150, 9, 20};
  } else if (family == "desk") {
    if (size == "S") return {"S", 10, 4, 2, 2};
    if (size == "M") return {"M", 11, 5, 2, 3};
    if (size == "L") return {"L", 12, 6, 3, 3};
  } else {
    throw Error("unknown preset family: " + family);
  }
  throw Error("unknown preset size: " + size);
}

double percent_difference(double heuristic, double baseline) {
  return (heuristic - baseline) / baseline * 100.0;
}

namespace {

struct Cell {
  std::string size;
  int grid = 0;
};

Instance build_cell_instance(const BenchSpec& spec, const Cell& cell, int size_index) {
  SizePreset preset = size_preset(spec.family, cell.size);
  GeneratorConfig cfg;
  cfg.num_points = spec.num_points.value_or(preset.num_points);
  cfg.d = preset.d;
  cfg.k = preset.k;
  cfg.capacity = preset.capacity;
  cfg.seed = spec.gen_seed + static_cast<std::uint64_t>(size_index);
  Instance inst = generate_instance(cfg);
  inst.regions = grid_regions(inst, cell.grid);
  return inst;
}

void run_one(const BenchSpec& spec, const Instance& inst, BenchRow& row) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto stop_timer = [&] {
    row.run_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  };
  try {
    if (row.method == "local_search") {
      SearchConfig cfg;
      cfg.objective_kind = row.objective;
      cfg.rng_seed = row.seed;
      cfg.time_budget_s = spec.budget_s ? spec.budget_s : std::optional<double>(3600.0);
      cfg.max_iterations = spec.max_iterations;
      SearchResult result = local_search(inst, cfg);
      stop_timer();
      row.objective_value = to_real(result.solution.objective_value, inst.scale);
      row.counter = result.trace.counter;
      for (const auto& [elapsed, objective] : result.trace.history) {
        row.trajectory.emplace_back(elapsed, to_real(objective, inst.scale));
      }
    } else if (row.method == "exact") {
      ExactConfig cfg;
      cfg.max_subsets = spec.max_subsets;
      Solution sol = exact_solve(inst, row.objective, cfg);
      stop_timer();
      row.objective_value = to_real(sol.objective_value, inst.scale);
      row.trajectory.emplace_back(row.run_time_s, *row.objective_value);
    } else {
      throw Error("unknown bench method: " + row.method);
    }
  } catch (const std::exception& e) {
    stop_timer();
    row.status = std::string("error: ") + e.what();
  }
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  // Instances are shared by every row of a cell and generated up front.
  std::map<std::pair<std::string, int>, Instance> instances;
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    for (int grid : spec.grids) {
      Cell cell{spec.sizes[s], grid};
      instances.emplace(std::make_pair(cell.size, grid),
                        build_cell_instance(spec, cell, static_cast<int>(s)));
    }
  }

  std::vector<BenchRow> rows;
  for (const std::string& size : spec.sizes) {
    for (int grid : spec.grids) {
      for (ObjectiveKind objective : spec.objectives) {
        for (const std::string& method : spec.methods) {
          if (method == "exact") {
            BenchRow row;
            row.size = size;
            row.grid = grid;
            row.objective = objective;
            row.method = method;
            rows.push_back(std::move(row));
            continue;
          }
          for (std::uint64_t seed : spec.seeds) {
            BenchRow row;
            row.size = size;
            row.grid = grid;
            row.objective = objective;
            row.method = method;
            row.seed = seed;
            rows.push_back(std::move(row));
          }
        }
      }
    }
  }

  const int workers = std::max(1, spec.workers);
  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t mine;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= rows.size()) return;
        mine = next++;
      }
      BenchRow& row = rows[mine];
      const Instance& inst = instances.at({row.size, row.grid});
      run_one(spec, inst, row);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  // Percent differences against the exact baseline where available,
  // otherwise against the best objective observed in the cell.
  using CellKey = std::tuple<std::string, int, ObjectiveKind>;
  std::map<CellKey, double> baseline;
  std::set<CellKey> from_exact;
  for (const BenchRow& row : rows) {
    if (row.status == "ok" && row.objective_value && row.method == "exact") {
      CellKey key{row.size, row.grid, row.objective};
      baseline[key] = *row.objective_value;
      from_exact.insert(key);
    }
  }
  for (const BenchRow& row : rows) {
    if (row.status != "ok" || !row.objective_value) continue;
    CellKey key{row.size, row.grid, row.objective};
    if (from_exact.count(key)) continue;  // exact stays authoritative when present
    auto [it, inserted] = baseline.emplace(key, *row.objective_value);
    if (!inserted) it->second = std::min(it->second, *row.objective_value);
  }
  for (BenchRow& row : rows) {
    if (row.status != "ok" || !row.objective_value) continue;
    auto it = baseline.find(std::make_tuple(row.size, row.grid, row.objective));
    if (it != baseline.end() && it->second > 0.0) {
      row.percent_diff = percent_difference(*row.objective_value, it->second);
    }
  }

  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    write_bench_csv(rows, spec.out_dir + "/bench.csv");
    write_trajectories(rows, spec.out_dir);
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "size,grid,objective,method,seed,status,run_time_s,objective_value,counter,"
         "percent_diff\n";
  for (const BenchRow& row : rows) {
    out << row.size << ',' << row.grid << ',' << to_string(row.objective) << ','
        << row.method << ',' << row.seed << ',';
    // commas in error text would break the row
    std::string status = row.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << status << ',' << std::fixed << std::setprecision(3) << row.run_time_s << ',';
    if (row.objective_value) {
      out << std::setprecision(6) << *row.objective_value;
    }
    out << ',';
    if (row.counter) out << *row.counter;
    out << ',';
    if (row.percent_diff) out << std::setprecision(2) << *row.percent_diff;
    out << '\n';
    out.unsetf(std::ios::fixed);
  }
}

void write_trajectories(const std::vector<BenchRow>& rows, const std::string& dir) {
  for (const BenchRow& row : rows) {
    if (row.trajectory.empty()) continue;
    std::ostringstream name;
    name << dir << "/traj_" << row.size << "_g" << row.grid << '_' << to_string(row.objective)
         << '_' << row.method << "_s" << row.seed << ".csv";
    std::ofstream out(name.str());
    if (!out) throw Error("cannot open " + name.str() + " for writing");
    out << "elapsed_s,objective\n";
    for (const auto& [elapsed, objective] : row.trajectory) {
      out << std::fixed << std::setprecision(6) << elapsed << ',' << objective << '\n';
    }
  }
}

}  // namespace jfdl
