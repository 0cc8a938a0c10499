// Command-line front end: instance generation, gridding, solving, the
// enumeration oracle, the center-objective improvement pass, benchmark
// matrices and plot-data export.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jfdl/bench.hpp"
#include "jfdl/errors.hpp"
#include "jfdl/exact.hpp"
#include "jfdl/generate.hpp"
#include "jfdl/improvement.hpp"
#include "jfdl/io.hpp"
#include "jfdl/local_search.hpp"

namespace {

using namespace jfdl;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Instance load_checked(const std::string& path) {
  Instance inst = read_instance(path);
  if (ValidationReport report = validate_instance(inst); !report) {
    throw Error(path + ": " + report.message);
  }
  if (inst.d == 0) {
    throw Error(path + ": d = 0 has nothing to solve");
  }
  return inst;
}

// "0.7" -> 7/10, "0.70" -> 70/100; keeps the bound arithmetic exact.
Fraction parse_fraction(const std::string& text) {
  Fraction f;
  auto dot = text.find('.');
  try {
    if (dot == std::string::npos) {
      f.num = std::stoll(text);
      f.den = 1;
    } else {
      std::string whole = text.substr(0, dot);
      std::string frac = text.substr(dot + 1);
      if (frac.empty() || frac.size() > 9) throw std::invalid_argument(text);
      f.den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) f.den *= 10;
      f.num = (whole.empty() ? 0 : std::stoll(whole)) * f.den + std::stoll(frac);
    }
  } catch (const std::exception&) {
    throw Error("bad fraction: " + text);
  }
  if (f.num < 0 || f.den <= 0) throw Error("fraction must be nonnegative");
  return f;
}

void apply_preset(const std::string& preset, GeneratorConfig& cfg, bool& num_points_set) {
  const std::string family = preset == "desk" ? "desk" : "full";
  const std::string size = preset == "desk" ? "L" : preset;
  SizePreset p = size_preset(family, size);
  cfg.d = p.d;
  cfg.k = p.k;
  cfg.capacity = p.capacity;
  if (!num_points_set) cfg.num_points = p.num_points;
}

void report_solution(const Instance& inst, const Solution& sol, double run_time) {
  std::cout << "run_time_s: " << run_time << '\n'
            << "objective_kind: " << to_string(sol.objective_kind) << '\n'
            << "objective: " << to_real(sol.objective_value, inst.scale) << '\n';
}

int cmd_generate(const std::string& out, GeneratorConfig cfg, std::optional<int> grid_g,
                 const std::string& fraction) {
  Instance inst = generate_instance(cfg);
  if (grid_g) inst.regions = grid_regions(inst, *grid_g, parse_fraction(fraction));
  if (ValidationReport report = validate_instance(inst); !report) {
    throw Error("generated instance invalid: " + report.message);
  }
  write_instance(inst, out);
  std::cout << "instance: " << out << "\npoints: " << inst.m() << "\nd: " << inst.d
            << "\nk: " << inst.k << "\nC: " << inst.capacity << '\n';
  return 0;
}

int cmd_grid(const std::string& in, const std::string& out, int g,
             const std::string& fraction) {
  Instance inst = read_instance(in);
  inst.regions = grid_regions(inst, g, parse_fraction(fraction));
  if (ValidationReport report = validate_instance(inst); !report) {
    throw Error("gridded instance invalid: " + report.message);
  }
  write_instance(inst, out);
  std::cout << "regions: " << inst.regions->regions.size() << "\ninstance: " << out << '\n';
  return 0;
}

int cmd_ingest(const std::string& points, const std::string& out, IngestOptions opts,
               std::optional<int> grid_g, const std::string& fraction) {
  Instance inst = ingest_points(points, opts);
  if (grid_g) inst.regions = grid_regions(inst, *grid_g, parse_fraction(fraction));
  if (ValidationReport report = validate_instance(inst); !report) {
    throw Error("ingested instance invalid: " + report.message);
  }
  write_instance(inst, out);
  std::cout << "instance: " << out << "\npoints: " << inst.m() << '\n';
  return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& objective,
              const std::string& method, std::uint64_t seed, double budget_s,
              std::optional<std::uint64_t> max_iterations, const std::string& rank,
              std::uint64_t max_subsets, const std::string& out,
              const std::string& trace_path) {
  Instance inst = load_checked(instance_path);
  ObjectiveKind kind = objective_from_string(objective);

  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) throw Error("cannot open trace file " + trace_path);
    trace = &trace_file;
  }

  const auto start = Clock::now();
  if (method == "exact") {
    ExactConfig cfg;
    cfg.max_subsets = max_subsets;
    Solution sol = exact_solve(inst, kind, cfg);
    report_solution(inst, sol, seconds_since(start));
    if (!out.empty()) write_solution(sol, inst.scale, out);
    return 0;
  }

  if (method != "local_search" && method != "improve") {
    throw Error("unknown method: " + method);
  }
  if (method == "improve" && kind != ObjectiveKind::center) {
    throw Error("method=improve applies to the center objective only");
  }

  SearchConfig cfg;
  cfg.objective_kind = kind;
  cfg.rng_seed = seed;
  cfg.time_budget_s = budget_s;
  cfg.max_iterations = max_iterations;
  cfg.rank_rule = rank == "random" ? RankRule::random : RankRule::scored;
  SearchResult result = local_search(inst, cfg, trace);
  Solution sol = result.solution;

  if (method == "improve") {
    Cost before = sol.objective_value;
    sol = improve_center(inst, sol);
    std::cout << "objective_before_improvement: " << to_real(before, inst.scale) << '\n'
              << "objective_after_improvement: " << to_real(sol.objective_value, inst.scale)
              << '\n';
  }

  report_solution(inst, sol, seconds_since(start));
  std::cout << "counter: " << result.trace.counter << '\n'
            << "terminated_by: " << to_string(result.trace.terminated_by) << '\n';
  if (!out.empty()) write_solution(sol, inst.scale, out);
  return 0;
}

int cmd_oracle(const std::string& instance_path, const std::string& objective,
               std::uint64_t max_subsets, const std::string& out) {
  Instance inst = load_checked(instance_path);
  ExactConfig cfg;
  cfg.max_subsets = max_subsets;
  const auto start = Clock::now();
  Solution sol = exact_solve(inst, objective_from_string(objective), cfg);
  report_solution(inst, sol, seconds_since(start));
  if (!out.empty()) write_solution(sol, inst.scale, out);
  return 0;
}

int cmd_improve(const std::string& instance_path, const std::string& solution_path,
                const std::string& out) {
  Instance inst = load_checked(instance_path);
  Solution sol = read_solution(solution_path, inst.scale);
  if (sol.objective_kind != ObjectiveKind::center) {
    throw Error("improvement pass applies to center solutions only");
  }
  if (ValidationReport report = validate_solution(inst, sol); !report) {
    throw Error(solution_path + ": " + report.message);
  }
  // trust the re-evaluated objective, not the file's claim
  sol.objective_value = evaluate_center(inst, sol);

  const auto start = Clock::now();
  Solution improved = improve_center(inst, sol);
  double elapsed = seconds_since(start);
  std::cout << "objective_before_improvement: " << to_real(sol.objective_value, inst.scale)
            << '\n'
            << "objective_after_improvement: "
            << to_real(improved.objective_value, inst.scale) << '\n'
            << "run_time_s: " << elapsed << '\n';
  if (!out.empty()) write_solution(improved, inst.scale, out);
  return 0;
}

int cmd_export_map(const std::string& instance_path, const std::string& solution_path,
                   const std::string& out) {
  Instance inst = read_instance(instance_path);
  Solution sol = read_solution(solution_path, inst.scale);
  write_map_export(inst, sol, out);
  std::cout << "map_data: " << out << '\n';
  return 0;
}

int cmd_bench(const BenchSpec& spec) {
  std::vector<BenchRow> rows = run_bench(spec);
  int failures = 0;
  for (const BenchRow& row : rows) {
    if (row.status != "ok") failures += 1;
  }
  std::cout << "rows: " << rows.size() << "\nfailures: " << failures << "\ncsv: "
            << spec.out_dir << "/bench.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint facility-demand location solver"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "generate a synthetic instance");
  GeneratorConfig gen_cfg;
  std::string gen_out;
  std::string gen_preset;
  std::string gen_populations = "uniform";
  std::vector<double> gen_bbox;
  std::optional<int> gen_grid;
  std::string gen_fraction = "0.7";
  generate->add_option("--out", gen_out, "output instance JSON")->required();
  auto* gen_points_opt =
      generate->add_option("--num-points", gen_cfg.num_points, "points to sample");
  generate->add_option("--d", gen_cfg.d, "demand units");
  generate->add_option("--k", gen_cfg.k, "facilities to open");
  generate->add_option("--C", gen_cfg.capacity, "facility capacity");
  generate->add_option("--seed", gen_cfg.seed, "random seed");
  generate->add_option("--scale", gen_cfg.scale, "fixed-point scale");
  generate->add_option("--preset", gen_preset, "S, M, L or desk")
      ->check(CLI::IsMember({"S", "M", "L", "desk"}));
  generate->add_option("--populations", gen_populations, "uniform or powerlaw")
      ->check(CLI::IsMember({"uniform", "powerlaw"}));
  generate->add_option("--bbox", gen_bbox, "min_x min_y max_x max_y")->expected(4);
  generate->add_option("--grid-g", gen_grid, "attach 2^(2g) grid regions");
  generate->add_option("--fraction", gen_fraction, "regional demand fraction");

  // grid
  auto* grid = app.add_subcommand("grid", "attach grid regions to an instance");
  std::string grid_in, grid_out;
  int grid_g = 0;
  std::string grid_fraction = "0.7";
  grid->add_option("--instance", grid_in, "instance JSON")->required();
  grid->add_option("--out", grid_out, "output instance JSON")->required();
  grid->add_option("--grid-g", grid_g, "grid parameter g")->required();
  grid->add_option("--fraction", grid_fraction, "regional demand fraction");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "build an instance from a point CSV");
  std::string ingest_points_path, ingest_out, ingest_costs;
  IngestOptions ingest_opts;
  std::optional<std::int64_t> ingest_min_pop;
  std::optional<int> ingest_grid;
  std::string ingest_fraction = "0.7";
  bool ingest_allow_colocate = false;
  ingest->add_option("--points", ingest_points_path, "id,x,y,population CSV")->required();
  ingest->add_option("--out", ingest_out, "output instance JSON")->required();
  ingest->add_option("--d", ingest_opts.d, "demand units")->required();
  ingest->add_option("--k", ingest_opts.k, "facilities to open")->required();
  ingest->add_option("--C", ingest_opts.capacity, "facility capacity")->required();
  ingest->add_option("--scale", ingest_opts.scale, "fixed-point scale");
  ingest->add_option("--costs", ingest_costs, "from,to,cost CSV");
  ingest->add_option("--min-population", ingest_min_pop, "drop sparser points");
  ingest->add_flag("--allow-colocate", ingest_allow_colocate,
                   "allow demand on open facility sites");
  ingest->add_option("--grid-g", ingest_grid, "attach 2^(2g) grid regions");
  ingest->add_option("--fraction", ingest_fraction, "regional demand fraction");

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver on an instance");
  std::string solve_instance, solve_objective = "median", solve_method = "local_search";
  std::string solve_out, solve_trace, solve_rank = "scored";
  std::uint64_t solve_seed = 0;
  double solve_budget = 3600.0;
  std::optional<std::uint64_t> solve_max_iter;
  std::uint64_t solve_max_subsets = 100000;
  solve->add_option("--instance", solve_instance, "instance JSON")->required();
  solve->add_option("--objective", solve_objective, "median or center")
      ->check(CLI::IsMember({"median", "center"}));
  solve->add_option("--method", solve_method, "local_search, exact or improve")
      ->check(CLI::IsMember({"local_search", "exact", "improve"}));
  solve->add_option("--seed", solve_seed, "random seed");
  solve->add_option("--budget-s", solve_budget, "wall-clock budget (default 3600)");
  solve->add_option("--max-iterations", solve_max_iter, "cap on accepted swaps");
  solve->add_option("--rank", solve_rank, "swap ordering rule")
      ->check(CLI::IsMember({"scored", "random"}));
  solve->add_option("--max-subsets", solve_max_subsets, "exact enumeration cap");
  solve->add_option("--out", solve_out, "solution JSON");
  solve->add_option("--trace", solve_trace, "accepted-swap trace file");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact solve by subset enumeration");
  std::string oracle_instance, oracle_objective = "median", oracle_out;
  std::uint64_t oracle_max_subsets = 100000;
  oracle->add_option("--instance", oracle_instance, "instance JSON")->required();
  oracle->add_option("--objective", oracle_objective, "median or center")
      ->check(CLI::IsMember({"median", "center"}));
  oracle->add_option("--max-subsets", oracle_max_subsets, "enumeration cap");
  oracle->add_option("--out", oracle_out, "solution JSON");

  // improve
  auto* improve = app.add_subcommand("improve", "center-objective improvement pass");
  std::string improve_instance, improve_solution, improve_out;
  improve->add_option("--instance", improve_instance, "instance JSON")->required();
  improve->add_option("--solution", improve_solution, "solution JSON")->required();
  improve->add_option("--out", improve_out, "improved solution JSON");

  // export-map
  auto* export_map = app.add_subcommand("export-map", "emit plot data for a solution");
  std::string map_instance, map_solution, map_out;
  export_map->add_option("--instance", map_instance, "instance JSON")->required();
  export_map->add_option("--solution", map_solution, "solution JSON")->required();
  export_map->add_option("--out", map_out, "plot-data JSON")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark matrix");
  BenchSpec bench_spec;
  std::vector<std::string> bench_objectives = {"median", "center"};
  std::optional<int> bench_points;
  double bench_budget = 0.0;
  bench->add_option("--out-dir", bench_spec.out_dir, "output directory")->required();
  bench->add_option("--family", bench_spec.family, "desk or full")
      ->check(CLI::IsMember({"desk", "full"}));
  bench->add_option("--sizes", bench_spec.sizes, "subset of S,M,L")->delimiter(',');
  bench->add_option("--grids", bench_spec.grids, "grid parameters")->delimiter(',');
  bench->add_option("--objectives", bench_objectives, "median and/or center")
      ->delimiter(',');
  bench->add_option("--methods", bench_spec.methods, "local_search and/or exact")
      ->delimiter(',');
  bench->add_option("--seeds", bench_spec.seeds, "local search seeds")->delimiter(',');
  bench->add_option("--gen-seed", bench_spec.gen_seed, "instance generation seed");
  bench->add_option("--num-points", bench_points, "override preset point count");
  bench->add_option("--budget-s", bench_budget, "per-run budget");
  bench->add_option("--max-iterations", bench_spec.max_iterations, "swap cap per run");
  bench->add_option("--max-subsets", bench_spec.max_subsets, "exact enumeration cap");
  bench->add_option("--workers", bench_spec.workers, "parallel cells");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      bool points_set = gen_points_opt->count() > 0;
      if (!gen_preset.empty()) apply_preset(gen_preset, gen_cfg, points_set);
      if (gen_bbox.size() == 4) {
        gen_cfg.bbox = {gen_bbox[0], gen_bbox[1], gen_bbox[2], gen_bbox[3]};
      }
      gen_cfg.populations = gen_populations == "powerlaw" ? PopulationModel::powerlaw
                                                          : PopulationModel::uniform;
      return cmd_generate(gen_out, gen_cfg, gen_grid, gen_fraction);
    }
    if (*grid) return cmd_grid(grid_in, grid_out, grid_g, grid_fraction);
    if (*ingest) {
      ingest_opts.min_population = ingest_min_pop;
      if (!ingest_costs.empty()) ingest_opts.cost_file = ingest_costs;
      ingest_opts.colocate_forbidden = !ingest_allow_colocate;
      return cmd_ingest(ingest_points_path, ingest_out, ingest_opts, ingest_grid,
                        ingest_fraction);
    }
    if (*solve) {
      return cmd_solve(solve_instance, solve_objective, solve_method, solve_seed,
                       solve_budget, solve_max_iter, solve_rank, solve_max_subsets,
                       solve_out, solve_trace);
    }
    if (*oracle) {
      return cmd_oracle(oracle_instance, oracle_objective, oracle_max_subsets, oracle_out);
    }
    if (*improve) return cmd_improve(improve_instance, improve_solution, improve_out);
    if (*export_map) return cmd_export_map(map_instance, map_solution, map_out);
    if (*bench) {
      bench_spec.objectives.clear();
      for (const std::string& name : bench_objectives) {
        bench_spec.objectives.push_back(objective_from_string(name));
      }
      bench_spec.num_points = bench_points;
      if (bench_budget > 0.0) bench_spec.budget_s = bench_budget;
      return cmd_bench(bench_spec);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
