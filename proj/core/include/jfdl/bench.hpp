#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jfdl/generate.hpp"
#include "jfdl/instance.hpp"

namespace jfdl {

/// Named parameter presets. The full-scale rows fix (d, k, C) at
/// (50, 3, 20) / (100, 6, 20) / (150, 9, 20); the desk rows are small enough
/// for the enumeration oracle to act as the baseline.
struct SizePreset {
  std::string name;
  int num_points = 0;
  std::int64_t d = 0;
  std::int64_t k = 0;
  std::int64_t capacity = 0;
};

/// family is "desk" or "full"; size is S, M or L.
SizePreset size_preset(const std::string& family, const std::string& size);

/// (heuristic - baseline) / baseline * 100.
double percent_difference(double heuristic, double baseline);

struct BenchSpec {
  std::string family = "desk";
  std::vector<std::string> sizes = {"S", "M", "L"};
  std::vector<int> grids = {0, 1, 2, 3, 4, 5};
  std::vector<ObjectiveKind> objectives = {ObjectiveKind::median, ObjectiveKind::center};
  std::vector<std::string> methods = {"local_search", "exact"};
  std::vector<std::uint64_t> seeds = {1};
  std::uint64_t gen_seed = 42;
  std::optional<int> num_points;  // overrides the preset's point count
  std::optional<double> budget_s;
  std::optional<std::uint64_t> max_iterations;
  std::uint64_t max_subsets = 100000;
  int workers = 4;
  std::string out_dir;  // trajectories land here when non-empty
};

struct BenchRow {
  std::string size;
  int grid = 0;
  ObjectiveKind objective = ObjectiveKind::median;
  std::string method;
  std::uint64_t seed = 0;
  std::string status = "ok";  // failures carry the error text and the run continues
  double run_time_s = 0.0;
  std::optional<double> objective_value;    // descaled
  std::optional<std::uint64_t> counter;     // local search only
  std::optional<double> percent_diff;       // vs the cell baseline
  std::vector<std::pair<double, double>> trajectory;  // (elapsed s, descaled objective)
};

/// Runs the full matrix, cells in parallel up to `workers`, and fills in
/// percent differences against the exact baseline where it succeeded (best
/// known objective in the cell otherwise).
std::vector<BenchRow> run_bench(const BenchSpec& spec);

/// One CSV row per bench row; recomputing the percent-difference column
/// from the objective columns of the same file reproduces it.
void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

/// One `elapsed_s,objective` CSV per run, for anytime plots.
void write_trajectories(const std::vector<BenchRow>& rows, const std::string& dir);

}  // namespace jfdl
