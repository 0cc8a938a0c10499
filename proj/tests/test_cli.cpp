#include <doctest.h>

#ifdef JFDL_CLI_PATH

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "jfdl/instance.hpp"
#include "jfdl/io.hpp"

using namespace jfdl;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / "jfdl_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args) {
  std::string command = std::string(JFDL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string capture_cli(const std::string& args, const std::string& stdout_file) {
  std::string command = std::string(JFDL_CLI_PATH) + " " + args + " > " + stdout_file + " 2>&1";
  std::system(command.c_str());
  std::ifstream in(stdout_file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("solve round trip re-validates through the library") {
  Sandbox box;
  std::string inst_path = box / "inst.json";
  std::string sol_path = box / "sol.json";

  REQUIRE(run_cli("generate --out " + inst_path +
                  " --preset desk --seed 5 --grid-g 1") == 0);
  REQUIRE(run_cli("solve --instance " + inst_path + " --objective median --seed 3 --out " +
                  sol_path) == 0);

  Instance inst = read_instance(inst_path);
  Solution sol = read_solution(sol_path, inst.scale);
  CHECK(validate_solution(inst, sol).ok());
  CHECK(evaluate_median(inst, sol) == sol.objective_value);
}

TEST_CASE("oracle and local search agree on a desk instance") {
  Sandbox box;
  std::string inst_path = box / "inst.json";
  std::string heuristic_path = box / "ls.json";
  std::string exact_path = box / "exact.json";

  REQUIRE(run_cli("generate --out " + inst_path + " --preset desk --seed 11") == 0);
  REQUIRE(run_cli("solve --instance " + inst_path + " --objective center --seed 1 --out " +
                  heuristic_path) == 0);
  REQUIRE(run_cli("oracle --instance " + inst_path + " --objective center --out " +
                  exact_path) == 0);

  Instance inst = read_instance(inst_path);
  Solution heuristic = read_solution(heuristic_path, inst.scale);
  Solution exact = read_solution(exact_path, inst.scale);
  CHECK(heuristic.objective_value >= exact.objective_value);
}

TEST_CASE("improve refuses median solutions") {
  Sandbox box;
  std::string inst_path = box / "inst.json";
  std::string sol_path = box / "sol.json";
  REQUIRE(run_cli("generate --out " + inst_path + " --preset desk --seed 2") == 0);
  REQUIRE(run_cli("solve --instance " + inst_path + " --objective median --out " +
                  sol_path) == 0);
  CHECK(run_cli("improve --instance " + inst_path + " --solution " + sol_path + " --out " +
                (box / "better.json")) != 0);
  CHECK(run_cli("solve --instance " + inst_path +
                " --objective median --method improve") != 0);
}

TEST_CASE("improve post-pass runs on center solutions") {
  Sandbox box;
  std::string inst_path = box / "inst.json";
  std::string sol_path = box / "sol.json";
  std::string out_path = box / "improved.json";
  REQUIRE(run_cli("generate --out " + inst_path + " --preset desk --seed 4 --grid-g 1") == 0);
  REQUIRE(run_cli("solve --instance " + inst_path + " --objective center --seed 9 --out " +
                  sol_path) == 0);
  std::string output =
      capture_cli("improve --instance " + inst_path + " --solution " + sol_path + " --out " +
                      out_path,
                  box / "stdout.txt");
  CHECK(output.find("objective_before_improvement") != std::string::npos);
  CHECK(output.find("objective_after_improvement") != std::string::npos);

  Instance inst = read_instance(inst_path);
  Solution before = read_solution(sol_path, inst.scale);
  Solution after = read_solution(out_path, inst.scale);
  CHECK(after.objective_value <= before.objective_value);
  CHECK(validate_solution(inst, after).ok());
}

TEST_CASE("export-map emits the plot layers") {
  Sandbox box;
  std::string inst_path = box / "inst.json";
  std::string sol_path = box / "sol.json";
  std::string map_path = box / "map.json";
  REQUIRE(run_cli("generate --out " + inst_path + " --preset desk --seed 6 --grid-g 2") == 0);
  REQUIRE(run_cli("solve --instance " + inst_path + " --objective median --out " +
                  sol_path) == 0);
  REQUIRE(run_cli("export-map --instance " + inst_path + " --solution " + sol_path +
                  " --out " + map_path) == 0);
  CHECK(fs::exists(map_path));
}

TEST_CASE("bad inputs exit nonzero") {
  Sandbox box;
  CHECK(run_cli("solve --instance " + (box / "missing.json")) != 0);
  CHECK(run_cli("generate --out " + (box / "x.json") + " --num-points 3 --d 5 --k 2 --C 3") !=
        0);
  CHECK(run_cli("definitely-not-a-subcommand") != 0);
}

TEST_CASE("bench subcommand writes the csv with every cell ok") {
  Sandbox box;
  std::string out_dir = box / "bench";
  REQUIRE(run_cli("bench --out-dir " + out_dir +
                  " --sizes S,M --grids 0,1 --objectives median --methods "
                  "exact,local_search --seeds 1 --workers 2") == 0);
  std::ifstream csv(out_dir + "/bench.csv");
  REQUIRE(csv);
  std::string line;
  std::getline(csv, line);  // header
  int rows = 0;
  while (std::getline(csv, line)) {
    CHECK(line.find(",ok,") != std::string::npos);
    rows += 1;
  }
  CHECK(rows == 2 * 2 * 2);  // sizes x grids x methods, one seed
}

#endif  // JFDL_CLI_PATH
