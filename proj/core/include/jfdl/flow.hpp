#pragma once

#include <iosfwd>
#include <vector>

#include "jfdl/fixed_point.hpp"

namespace jfdl {

struct Arc {
  int tail = 0;
  int head = 0;
  Flow capacity = 0;
  Cost cost = 0;
};

/// Explicit directed network with a designated source/sink pair and a
/// required flow value. Immutable once built; each solve keeps its own
/// mutable state, so independent solves may run concurrently.
struct FlowNetwork {
  int node_count = 0;
  int source = 0;
  int sink = 0;
  Flow required_flow = 0;
  std::vector<Arc> arcs;

  int add_arc(int tail, int head, Flow capacity, Cost cost = 0);

  /// Throws std::invalid_argument on self-loops, negative capacities,
  /// out-of-range endpoints, arcs into the source or out of the sink.
  void validate() const;

  /// Text fixture format: `p <nodes> <arcs> <source> <sink> <required>`
  /// followed by one `a <tail> <head> <capacity> <cost>` line per arc.
  void dump(std::ostream& os) const;
  static FlowNetwork parse(std::istream& is);
};

enum class FlowStatus { optimal, infeasible };

/// Arc flows are parallel to `FlowNetwork::arcs` and always integral.
/// When status is optimal, flow_value equals the network's required flow;
/// otherwise flow_value is the maximum attainable (max_flow) or the flow
/// routed before the search got stuck (min_cost_flow).
struct FlowResult {
  FlowStatus status = FlowStatus::infeasible;
  Flow flow_value = 0;
  Cost total_cost = 0;
  std::vector<Flow> arc_flows;
};

/// Maximum s-t flow (Dinic). If the maximum exceeds required_flow the
/// result is truncated back to exactly required_flow along s-t paths.
FlowResult max_flow(const FlowNetwork& net);

/// Minimum-cost flow of value required_flow via successive shortest
/// augmenting paths with node potentials. Requires nonnegative arc costs.
/// Infeasibility (max flow < required) is reported as a status, not an
/// error, since threshold probes rely on it.
FlowResult min_cost_flow(const FlowNetwork& net);

}  // namespace jfdl
