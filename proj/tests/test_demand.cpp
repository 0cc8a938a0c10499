#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "jfdl/demand.hpp"
#include "jfdl/errors.hpp"
#include "jfdl/exact.hpp"
#include "support/oracles.hpp"

using namespace jfdl;
using testsupport::make_instance;

namespace {

Instance four_by_two_toy() {
  return make_instance({{1, 5}, {2, 4}, {3, 3}, {9, 9}}, 2, 2, 1);
}

// The five-region supply layout: total demand 25, regions with bounds
// LE 4, LE 5, GE 2, EQ 6, GE 7 over disjoint member blocks.
Instance figure_instance(std::int64_t d = 25) {
  std::vector<std::vector<Cost>> rows(35, std::vector<Cost>(2, 1));
  Instance inst = make_instance(rows, d, 2, 13);
  RegionSpec spec;
  auto block = [](int from, int count) {
    std::vector<NodeId> ids;
    for (int i = 0; i < count; ++i) ids.push_back(from + i);
    return ids;
  };
  spec.regions.push_back({0, block(0, 6), BoundKind::le, 4});
  spec.regions.push_back({1, block(6, 7), BoundKind::le, 5});
  spec.regions.push_back({2, block(13, 4), BoundKind::ge, 2});
  spec.regions.push_back({3, block(17, 7), BoundKind::eq, 6});
  spec.regions.push_back({4, block(24, 11), BoundKind::ge, 7});
  inst.regions = spec;
  return inst;
}

std::map<std::pair<int, int>, Flow> arc_capacities(const FlowNetwork& net) {
  std::map<std::pair<int, int>, Flow> caps;
  for (const Arc& arc : net.arcs) caps[{arc.tail, arc.head}] += arc.capacity;
  return caps;
}

}  // namespace

TEST_CASE("regional gadget reproduces the five-region supply split") {
  Instance inst = figure_instance();
  FacilitySet open = {100, 101};
  DemandNetwork dn = build_demand_network(inst, open);
  const FlowNetwork& net = dn.net;

  // region nodes follow the source in declaration order: LE, LE, GE, EQ, GE
  auto caps = arc_capacities(net);
  CHECK(net.required_flow == 25);
  CHECK(caps.count(std::pair(0, 3)));  // GE 2 region fed from the source
  CHECK(caps[std::pair(0, 3)] == 2);
  CHECK(caps[std::pair(0, 4)] == 6);  // EQ 6
  CHECK(caps[std::pair(0, 5)] == 7);  // GE 7
  const int dummy = 6;
  CHECK(caps[std::pair(0, dummy)] == 25 - (2 + 6 + 7));  // residual 10
  // dummy feeds the LE regions at their bounds and GE regions at their size
  CHECK(caps[std::pair(dummy, 1)] == 4);
  CHECK(caps[std::pair(dummy, 2)] == 5);
  CHECK(caps[std::pair(dummy, 3)] == 4);   // |R| of the GE 2 region
  CHECK(caps[std::pair(dummy, 5)] == 11);  // |R| of the GE 7 region
  CHECK_FALSE(caps.count(std::pair(dummy, 4)));  // EQ region gets nothing extra

  // no unconstrained demand candidates here, so no pool node
  for (const Arc& arc : net.arcs) {
    if (arc.tail == 0) CHECK(arc.head <= dummy);
  }
}

TEST_CASE("gadget bound overflow is an error") {
  Instance inst = figure_instance(/*d=*/10);  // GE/EQ bounds sum to 15 > 10
  inst.d = 10;
  CHECK_THROWS_AS(build_demand_network(inst, {100, 101}), GadgetInfeasibleError);
}

TEST_CASE("plain network layout without regions") {
  Instance inst = make_instance({{1, 2}, {3, 4}, {5, 6}}, 2, 1, 2);
  FacilitySet open = {100};
  DemandNetwork dn = build_demand_network(inst, open);
  // 3 source arcs + 3 assignment arcs + 1 facility arc
  CHECK(dn.net.arcs.size() == 7);
  CHECK(dn.assign_arcs.size() == 3);
  int unit_source_arcs = 0;
  for (const Arc& arc : dn.net.arcs) {
    if (arc.tail == dn.net.source) {
      CHECK(arc.capacity == 1);
      unit_source_arcs += 1;
    }
    if (arc.head == dn.net.sink) CHECK(arc.capacity == 2);
  }
  CHECK(unit_source_arcs == 3);
}

TEST_CASE("threshold filter keeps only admissible assignment arcs") {
  Instance inst = four_by_two_toy();
  FacilitySet open = {100, 101};
  Cost smallest = 1;
  DemandNetwork dn = build_demand_network(inst, open, smallest);
  CHECK(dn.assign_arcs.size() == 1);  // only c(0, f0) = 1 survives
  CHECK(dn.assign_arcs[0].demand == 0);
  CHECK(dn.assign_arcs[0].facility == 100);
}

TEST_CASE("colocated open facilities lose their demand arcs") {
  Instance inst = make_instance({{0, 2}, {3, 0}, {1, 1}}, 1, 1, 1, /*shared_ids=*/true);
  inst.colocate_forbidden = true;
  DemandNetwork dn = build_demand_network(inst, {0});
  for (const auto& arc : dn.assign_arcs) CHECK(arc.demand != 0);
}

TEST_CASE("median placement on the 4x2 toy") {
  Instance inst = four_by_two_toy();
  DemandOutcome outcome = optimal_demand_median(inst, {100, 101});
  REQUIRE(outcome.optimal());
  CHECK(outcome.objective == 4);
  CHECK(outcome.located_demand == std::vector<NodeId>{0, 2});

  Solution sol = to_solution(outcome, {100, 101}, ObjectiveKind::median);
  CHECK(validate_solution(inst, sol).ok());
  CHECK(evaluate_median(inst, sol) == outcome.objective);
}

TEST_CASE("median with all demand forced onto one facility") {
  Instance inst = make_instance({{2, 9}, {3, 9}, {4, 9}}, 3, 1, 3);
  DemandOutcome outcome = optimal_demand_median(inst, {100});
  REQUIRE(outcome.optimal());
  CHECK(outcome.objective == 2 + 3 + 4);
}

TEST_CASE("GE region forcing an expensive node raises the objective") {
  Instance inst = make_instance({{1, 1}, {2, 2}, {50, 60}, {3, 3}, {4, 4}}, 2, 2, 1);
  DemandOutcome relaxed = optimal_demand_median(inst, {100, 101});
  REQUIRE(relaxed.optimal());

  Instance constrained = inst;
  RegionSpec spec;
  spec.regions.push_back({0, {2}, BoundKind::ge, 1});  // the 50/60 node
  constrained.regions = spec;
  DemandOutcome forced = optimal_demand_median(constrained, {100, 101});
  REQUIRE(forced.optimal());
  CHECK(forced.objective > relaxed.objective);
  CHECK(forced.objective ==
        *testsupport::triple_enumeration_demand(constrained, {100, 101},
                                                ObjectiveKind::median));
  // dropping the gadget never increases the optimum
  CHECK(relaxed.objective <= forced.objective);
}

TEST_CASE("center placement on the 4x2 toy") {
  Instance inst = four_by_two_toy();
  DemandOutcome outcome = optimal_demand_center(inst, {100, 101});
  REQUIRE(outcome.optimal());
  CHECK(outcome.objective == 3);

  Solution sol = to_solution(outcome, {100, 101}, ObjectiveKind::center);
  CHECK(validate_solution(inst, sol).ok());
  CHECK(evaluate_center(inst, sol) == 3);
}

TEST_CASE("center with a single unit takes the cheapest admissible arc") {
  Instance inst = make_instance({{8, 5}, {7, 6}}, 1, 2, 1);
  DemandOutcome outcome = optimal_demand_center(inst, {100, 101});
  REQUIRE(outcome.optimal());
  CHECK(outcome.objective == 5);
}

TEST_CASE("center search is idempotent at the known optimum") {
  Instance inst = four_by_two_toy();
  DemandOutcome first = optimal_demand_center(inst, {100, 101});
  DemandOutcome again = optimal_demand_center(inst, {100, 101}, first.objective);
  REQUIRE(again.optimal());
  CHECK(again.objective == first.objective);
}

TEST_CASE("center incumbent below the optimum reports infeasible") {
  Instance inst = four_by_two_toy();
  DemandOutcome blocked = optimal_demand_center(inst, {100, 101}, Cost{2});
  CHECK_FALSE(blocked.optimal());
}

TEST_CASE("probe trace is ordered and monotone per probe") {
  Instance inst = four_by_two_toy();
  std::ostringstream trace;
  optimal_demand_center(inst, {100, 101}, std::nullopt, &trace);
  CHECK(trace.str().find("probe threshold=") != std::string::npos);
}

TEST_CASE("monotone feasibility across the whole threshold ladder") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 30; ++round) {
    Instance inst = testsupport::random_toy(rng, {.with_regions = round % 2 == 1});
    FacilitySet open = testsupport::random_facility_subset(rng, inst);
    CostIndex index = CostIndex::from_instance(inst);
    bool seen_feasible = false;
    for (Cost threshold : index.unique()) {
      DemandNetwork probe = build_demand_network(inst, open, threshold);
      bool ok = max_flow(probe.net).status == FlowStatus::optimal;
      if (seen_feasible) CHECK(ok);  // once feasible, always feasible
      seen_feasible = seen_feasible || ok;
    }
  }
}

TEST_CASE("flow subroutines agree with the exhaustive demand oracle") {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 120; ++round) {
    testsupport::RandomToyParams params;
    params.with_regions = round % 3 == 0;
    params.shared_ids = round % 4 == 0;
    Instance inst = testsupport::random_toy(rng, params);
    FacilitySet open = testsupport::random_facility_subset(rng, inst);

    for (ObjectiveKind kind : {ObjectiveKind::median, ObjectiveKind::center}) {
      DemandOutcome flow_outcome = kind == ObjectiveKind::median
                                       ? optimal_demand_median(inst, open)
                                       : optimal_demand_center(inst, open);
      DemandOutcome oracle = exact_demand_oracle(inst, open, kind);
      REQUIRE(flow_outcome.optimal() == oracle.optimal());
      if (oracle.optimal()) {
        CHECK(flow_outcome.objective == oracle.objective);
        Solution sol = to_solution(flow_outcome, open, kind);
        CHECK(validate_solution(inst, sol).ok());
      }
    }
  }
}

TEST_CASE("center value never exceeds the median outcome's worst arc") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 40; ++round) {
    Instance inst = testsupport::random_toy(rng, {});
    FacilitySet open = testsupport::random_facility_subset(rng, inst);
    DemandOutcome median = optimal_demand_median(inst, open);
    DemandOutcome center = optimal_demand_center(inst, open);
    if (!median.optimal()) continue;
    REQUIRE(center.optimal());
    NodeIndex index(inst);
    Cost worst = 0;
    for (const auto& [i, j] : median.assignment) {
      worst = std::max(worst, inst.cost(index.row(i), index.col(j)));
    }
    CHECK(center.objective <= worst);
  }
}

TEST_CASE("cost index keeps ties sorted and dedups for the search") {
  CostIndex index({5, 3, 5, 1});
  CHECK(index.sorted() == std::vector<Cost>{1, 3, 5, 5});
  CHECK(index.unique() == std::vector<Cost>{1, 3, 5});
  CHECK(index.unique_index_of(4) == 2);   // first value >= 4
  CHECK(index.unique_index_of(99) == 2);  // clamped to the last index
  CHECK(index.unique_index_of(0) == 0);
  CHECK(index.unique_index_of(3) == 1);
}

TEST_CASE("dropping the regional gadget never raises the median optimum") {
  std::mt19937_64 rng(79);
  int compared = 0;
  for (int round = 0; round < 60; ++round) {
    Instance inst = testsupport::random_toy(rng, {.with_regions = true});
    if (!inst.regions) continue;
    FacilitySet open = testsupport::random_facility_subset(rng, inst);
    DemandOutcome with = optimal_demand_median(inst, open);
    Instance relaxed = inst;
    relaxed.regions.reset();
    DemandOutcome without = optimal_demand_median(relaxed, open);
    if (with.optimal()) {
      REQUIRE(without.optimal());  // a relaxation stays feasible
      CHECK(without.objective <= with.objective);
      compared += 1;
    }
  }
  CHECK(compared > 10);
}

TEST_CASE("regional dead end under colocation reports infeasible") {
  // The only region member is the open facility itself.
  Instance inst = make_instance({{0, 1}, {2, 0}}, 1, 1, 2, /*shared_ids=*/true);
  inst.colocate_forbidden = true;
  RegionSpec spec;
  spec.regions.push_back({0, {0}, BoundKind::ge, 1});
  inst.regions = spec;

  DemandOutcome outcome = optimal_demand_median(inst, {0});
  CHECK_FALSE(outcome.optimal());
  DemandOutcome oracle = exact_demand_oracle(inst, {0}, ObjectiveKind::median);
  CHECK_FALSE(oracle.optimal());
  // moving the facility clears the obstruction
  CHECK(optimal_demand_median(inst, {1}).optimal());
}
