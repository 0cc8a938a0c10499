#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "jfdl/errors.hpp"
#include "jfdl/exact.hpp"
#include "jfdl/local_search.hpp"
#include "support/oracles.hpp"

using namespace jfdl;
using testsupport::make_instance;

TEST_CASE("initialization is deterministic per seed and uniform across seeds") {
  std::vector<std::vector<Cost>> rows(4, std::vector<Cost>(10, 1));
  Instance inst = make_instance(rows, 2, 3, 1);

  FacilitySet first = initialize_facilities(inst, 1234);
  CHECK(first == initialize_facilities(inst, 1234));
  CHECK(first.size() == 3);

  // chi-square over 10^4 seeds against the uniform distribution on all
  // C(10,3) = 120 subsets; 172.5 is the 0.999 quantile at 119 dof
  std::map<FacilitySet, int> counts;
  const int draws = 10000;
  for (int seed = 0; seed < draws; ++seed) {
    counts[initialize_facilities(inst, seed)] += 1;
  }
  CHECK(counts.size() == 120);
  const double expected = draws / 120.0;
  double chi2 = 0.0;
  for (const auto& [subset, count] : counts) {
    chi2 += (count - expected) * (count - expected) / expected;
  }
  CHECK(chi2 < 172.5);
}

TEST_CASE("initialization with n = k returns the whole candidate set") {
  Instance inst = make_instance({{1, 2}, {3, 4}}, 1, 2, 1);
  CHECK(initialize_facilities(inst, 9) == FacilitySet{100, 101});
}

TEST_CASE("initialization retries around infeasible subsets") {
  // Facility 0 blocks the only region member when open.
  Instance inst = make_instance({{0, 1}, {2, 0}, {4, 4}}, 1, 1, 3, /*shared_ids=*/true);
  inst.colocate_forbidden = true;
  RegionSpec spec;
  spec.regions.push_back({0, {0}, BoundKind::ge, 1});
  inst.regions = spec;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(initialize_facilities(inst, seed) == FacilitySet{1});
  }
}

TEST_CASE("initialization failure reports the retry cap") {
  // d = 1 but every demand slot is blocked by the open facility or region.
  Instance inst = make_instance({{0, 1}, {2, 0}}, 1, 2, 1, /*shared_ids=*/true);
  inst.colocate_forbidden = true;
  try {
    initialize_facilities(inst, 3, 25);
    FAIL("expected NoFeasibleInitializationError");
  } catch (const NoFeasibleInitializationError& e) {
    CHECK(std::string(e.what()).find("25") != std::string::npos);
  }
}

TEST_CASE("rank_facilities ordering") {
  // facility 100 carries everything, 101 carries nothing, 102/103 closed
  Instance inst = make_instance(
      {{1, 9, 6, 50}, {2, 9, 7, 50}, {3, 9, 8, 0}}, 2, 2, 2);
  DemandOutcome outcome;
  outcome.status = FlowStatus::optimal;
  outcome.located_demand = {0, 1};
  outcome.assignment = {{0, 100}, {1, 100}};

  auto [open_order, closed_order] =
      rank_facilities(inst, {100, 101}, outcome, ObjectiveKind::median);
  // empty-load facility first among open
  CHECK(open_order == std::vector<NodeId>{101, 100});
  // proximity: site 102 at min cost 6, site 103 at min cost 50
  CHECK(closed_order == std::vector<NodeId>{102, 103});

  SUBCASE("zero-distance closed site ranks first") {
    Instance zero = make_instance({{1, 9, 0}, {2, 9, 5}}, 1, 1, 2);
    DemandOutcome one;
    one.status = FlowStatus::optimal;
    one.located_demand = {0};
    one.assignment = {{0, 100}};
    auto [opens, closeds] = rank_facilities(zero, {100}, one, ObjectiveKind::median);
    CHECK(opens == std::vector<NodeId>{100});
    CHECK(closeds.front() == 102);
  }
  SUBCASE("center burden uses the max assigned cost") {
    // 100 serves one unit at 8; 101 serves two units at 5 each (sum 10)
    Instance two = make_instance({{8, 5, 9}, {9, 5, 9}, {9, 5, 9}}, 3, 2, 3);
    DemandOutcome mixed;
    mixed.status = FlowStatus::optimal;
    mixed.located_demand = {0, 1, 2};
    mixed.assignment = {{0, 100}, {1, 101}, {2, 101}};
    auto [byCenter, ignored] = rank_facilities(two, {100, 101}, mixed, ObjectiveKind::center);
    CHECK(byCenter == std::vector<NodeId>{101, 100});  // max 5 before max 8
    auto [byMedian, ignored2] = rank_facilities(two, {100, 101}, mixed, ObjectiveKind::median);
    CHECK(byMedian == std::vector<NodeId>{100, 101});  // sum 8 before sum 10
  }
}

TEST_CASE("k = n leaves no swaps and counter 0") {
  Instance inst = make_instance({{1, 5}, {2, 4}, {3, 3}, {9, 9}}, 2, 2, 1);
  SearchConfig cfg;
  cfg.objective_kind = ObjectiveKind::median;
  cfg.rng_seed = 5;
  SearchResult result = local_search(inst, cfg);
  CHECK(result.trace.counter == 0);
  CHECK(result.trace.terminated_by == Termination::local_optimum);
  CHECK(result.solution.objective_value == 4);
  CHECK(result.solution.open_facilities == FacilitySet{100, 101});
}

TEST_CASE("search trace contract") {
  std::mt19937_64 rng(61);
  testsupport::RandomToyParams params;
  params.max_m = 8;
  params.max_n = 6;
  for (int round = 0; round < 25; ++round) {
    Instance inst = testsupport::random_toy(rng, params);
    SearchConfig cfg;
    cfg.objective_kind = round % 2 ? ObjectiveKind::center : ObjectiveKind::median;
    cfg.rng_seed = round;
    std::ostringstream stream;
    SearchResult result = local_search(inst, cfg, &stream);

    // strictly decreasing objective history, counter = |history| - 1
    for (std::size_t h = 1; h < result.trace.history.size(); ++h) {
      CHECK(result.trace.history[h].second < result.trace.history[h - 1].second);
    }
    CHECK(result.trace.counter == result.trace.history.size() - 1);
    CHECK(result.trace.counter == result.trace.accepted_swaps.size());

    // final solution re-evaluates to its claimed objective
    CHECK(validate_solution(inst, result.solution).ok());
    Cost again = cfg.objective_kind == ObjectiveKind::median
                     ? evaluate_median(inst, result.solution)
                     : evaluate_center(inst, result.solution);
    CHECK(again == result.solution.objective_value);

    // one trace line per accepted swap
    std::string text = stream.str();
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == result.trace.counter);
  }
}

TEST_CASE("natural termination is a true local optimum") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 12; ++round) {
    Instance inst = testsupport::random_toy(rng, {});
    SearchConfig cfg;
    cfg.objective_kind = round % 2 ? ObjectiveKind::center : ObjectiveKind::median;
    cfg.rng_seed = 100 + round;
    SearchResult result = local_search(inst, cfg);
    REQUIRE(result.trace.terminated_by == Termination::local_optimum);

    const FacilitySet& open = result.solution.open_facilities;
    for (NodeId a : open) {
      for (NodeId b : inst.facility_candidates) {
        if (std::find(open.begin(), open.end(), b) != open.end()) continue;
        FacilitySet swapped;
        for (NodeId j : open) {
          if (j != a) swapped.push_back(j);
        }
        swapped.push_back(b);
        std::sort(swapped.begin(), swapped.end());
        DemandOutcome outcome = cfg.objective_kind == ObjectiveKind::median
                                    ? optimal_demand_median(inst, swapped)
                                    : optimal_demand_center(inst, swapped);
        if (outcome.optimal()) {
          CHECK(outcome.objective >= result.solution.objective_value);
        }
      }
    }
  }
}

TEST_CASE("seed-fixed runs reproduce the full trace") {
  std::mt19937_64 rng(71);
  Instance inst = testsupport::random_toy(rng, {.max_m = 8, .max_n = 6});
  for (RankRule rule : {RankRule::scored, RankRule::random}) {
    SearchConfig cfg;
    cfg.objective_kind = ObjectiveKind::median;
    cfg.rng_seed = 77;
    cfg.rank_rule = rule;
    SearchResult a = local_search(inst, cfg);
    SearchResult b = local_search(inst, cfg);
    CHECK(a.solution.open_facilities == b.solution.open_facilities);
    CHECK(a.solution.objective_value == b.solution.objective_value);
    CHECK(a.trace.accepted_swaps == b.trace.accepted_swaps);
    REQUIRE(a.trace.history.size() == b.trace.history.size());
    for (std::size_t h = 0; h < a.trace.history.size(); ++h) {
      CHECK(a.trace.history[h].second == b.trace.history[h].second);
    }
  }
}

TEST_CASE("iteration cap stops after that many accepted swaps") {
  // descending-cost layout guarantees several improving swaps exist
  Instance inst = make_instance(
      {{9, 9, 5, 1}, {9, 9, 5, 1}, {9, 9, 5, 1}}, 2, 1, 2);
  SearchConfig cfg;
  cfg.objective_kind = ObjectiveKind::median;
  cfg.rng_seed = 0;  // lands on some facility; swaps strictly improve toward 1
  cfg.max_iterations = 1;
  SearchResult result = local_search(inst, cfg);
  if (result.trace.counter > 0) {
    CHECK(result.trace.counter == 1);
    CHECK(result.trace.terminated_by == Termination::iteration_cap);
  }

  cfg.max_iterations = 0;
  SearchResult frozen = local_search(inst, cfg);
  CHECK(frozen.trace.counter == 0);
  CHECK(frozen.trace.terminated_by == Termination::iteration_cap);
}

TEST_CASE("zero time budget reports time_budget termination") {
  Instance inst = make_instance({{5, 1}, {5, 1}}, 1, 1, 1);
  SearchConfig cfg;
  cfg.objective_kind = ObjectiveKind::median;
  cfg.rng_seed = 2;
  cfg.time_budget_s = 0.0;
  SearchResult result = local_search(inst, cfg);
  CHECK(result.trace.terminated_by == Termination::time_budget);
  CHECK(validate_solution(inst, result.solution).ok());
}
