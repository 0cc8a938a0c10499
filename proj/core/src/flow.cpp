#include "jfdl/flow.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

namespace jfdl {

int FlowNetwork::add_arc(int tail, int head, Flow capacity, Cost cost) {
  arcs.push_back(Arc{tail, head, capacity, cost});
  return static_cast<int>(arcs.size()) - 1;
}

void FlowNetwork::validate() const {
  if (node_count < 2) throw std::invalid_argument("network needs at least source and sink");
  auto in_range = [&](int v) { return v >= 0 && v < node_count; };
  if (!in_range(source) || !in_range(sink) || source == sink) {
    throw std::invalid_argument("bad source/sink");
  }
  if (required_flow < 0) throw std::invalid_argument("required flow must be nonnegative");
  for (std::size_t idx = 0; idx < arcs.size(); ++idx) {
    const Arc& arc = arcs[idx];
    if (!in_range(arc.tail) || !in_range(arc.head)) {
      throw std::invalid_argument("arc " + std::to_string(idx) + " endpoint out of range");
    }
    if (arc.tail == arc.head) {
      throw std::invalid_argument("arc " + std::to_string(idx) + " is a self-loop");
    }
    if (arc.capacity < 0) {
      throw std::invalid_argument("arc " + std::to_string(idx) + " has negative capacity");
    }
    if (arc.head == source) {
      throw std::invalid_argument("arc " + std::to_string(idx) + " enters the source");
    }
    if (arc.tail == sink) {
      throw std::invalid_argument("arc " + std::to_string(idx) + " leaves the sink");
    }
  }
}

void FlowNetwork::dump(std::ostream& os) const {
  os << "p " << node_count << ' ' << arcs.size() << ' ' << source << ' ' << sink << ' '
     << required_flow << '\n';
  for (const Arc& arc : arcs) {
    os << "a " << arc.tail << ' ' << arc.head << ' ' << arc.capacity << ' ' << arc.cost << '\n';
  }
}

FlowNetwork FlowNetwork::parse(std::istream& is) {
  FlowNetwork net;
  std::string line;
  std::size_t expected_arcs = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    char tag = 0;
    ls >> tag;
    if (tag == 'p') {
      ls >> net.node_count >> expected_arcs >> net.source >> net.sink >> net.required_flow;
      if (!ls) throw std::invalid_argument("bad problem line: " + line);
      have_header = true;
    } else if (tag == 'a') {
      Arc arc;
      ls >> arc.tail >> arc.head >> arc.capacity >> arc.cost;
      if (!ls) throw std::invalid_argument("bad arc line: " + line);
      net.arcs.push_back(arc);
    } else {
      throw std::invalid_argument("unknown line tag: " + line);
    }
  }
  if (!have_header) throw std::invalid_argument("missing problem line");
  if (net.arcs.size() != expected_arcs) {
    throw std::invalid_argument("arc count mismatch in network dump");
  }
  return net;
}

namespace {

// Residual representation shared by both solvers: arcs stored in pairs,
// forward at 2*i, reverse at 2*i+1.
struct Residual {
  struct Edge {
    int to = 0;
    Flow cap = 0;
    Cost cost = 0;
  };

  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;

  explicit Residual(const FlowNetwork& net) : adj(net.node_count) {
    edges.reserve(net.arcs.size() * 2);
    for (const Arc& arc : net.arcs) {
      adj[arc.tail].push_back(static_cast<int>(edges.size()));
      edges.push_back(Edge{arc.head, arc.capacity, arc.cost});
      adj[arc.head].push_back(static_cast<int>(edges.size()));
      edges.push_back(Edge{arc.tail, 0, -arc.cost});
    }
  }

  // Flow pushed through original arc i equals the reverse edge's capacity.
  Flow flow_on(int arc_index) const { return edges[2 * arc_index + 1].cap; }
};

constexpr Cost kInfCost = std::numeric_limits<Cost>::max() / 4;
constexpr Flow kInfFlow = std::numeric_limits<Flow>::max() / 4;

class Dinic {
 public:
  Dinic(const FlowNetwork& net, Residual& res)
      : res_(res), level_(net.node_count), it_(net.node_count),
        source_(net.source), sink_(net.sink) {}

  Flow run(Flow limit) {
    Flow total = 0;
    while (total < limit && bfs()) {
      std::fill(it_.begin(), it_.end(), 0);
      while (Flow pushed = dfs(source_, limit - total)) {
        total += pushed;
        if (total >= limit) break;
      }
    }
    return total;
  }

 private:
  bool bfs() {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> queue;
    queue.push(source_);
    level_[source_] = 0;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop();
      for (int e : res_.adj[v]) {
        const auto& edge = res_.edges[e];
        if (edge.cap > 0 && level_[edge.to] < 0) {
          level_[edge.to] = level_[v] + 1;
          queue.push(edge.to);
        }
      }
    }
    return level_[sink_] >= 0;
  }

  Flow dfs(int v, Flow limit) {
    if (v == sink_ || limit == 0) return limit;
    for (int& i = it_[v]; i < static_cast<int>(res_.adj[v].size()); ++i) {
      int e = res_.adj[v][i];
      auto& edge = res_.edges[e];
      if (edge.cap > 0 && level_[edge.to] == level_[v] + 1) {
        if (Flow pushed = dfs(edge.to, std::min(limit, edge.cap)); pushed > 0) {
          edge.cap -= pushed;
          res_.edges[e ^ 1].cap += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  Residual& res_;
  std::vector<int> level_;
  std::vector<int> it_;
  int source_;
  int sink_;
};

FlowResult collect(const FlowNetwork& net, const Residual& res, Flow value, FlowStatus status) {
  FlowResult result;
  result.status = status;
  result.flow_value = value;
  result.arc_flows.resize(net.arcs.size());
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    result.arc_flows[i] = res.flow_on(static_cast<int>(i));
    result.total_cost += result.arc_flows[i] * net.arcs[i].cost;
  }
  return result;
}

// Removes `excess` units of s-t flow by peeling positive-flow paths found
// with BFS, so an over-target max flow lands exactly on the required value.
// Flow decomposition guarantees such a path while the s-t value is positive.
void truncate_flow(const FlowNetwork& net, Residual& res, Flow excess) {
  const int nodes = net.node_count;
  std::vector<int> parent_arc(nodes);
  while (excess > 0) {
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::queue<int> queue;
    queue.push(net.source);
    while (!queue.empty() && parent_arc[net.sink] < 0) {
      int v = queue.front();
      queue.pop();
      for (int e : res.adj[v]) {
        if (e % 2 != 0) continue;  // only original-direction edges carry flow
        int arc_index = e / 2;
        int to = res.edges[e].to;
        if (res.flow_on(arc_index) > 0 && parent_arc[to] < 0 && to != net.source) {
          parent_arc[to] = arc_index;
          queue.push(to);
        }
      }
    }
    if (parent_arc[net.sink] < 0) throw std::logic_error("flow decomposition lost an s-t path");
    Flow bottleneck = excess;
    for (int v = net.sink; v != net.source; v = net.arcs[parent_arc[v]].tail) {
      bottleneck = std::min(bottleneck, res.flow_on(parent_arc[v]));
    }
    for (int v = net.sink; v != net.source; v = net.arcs[parent_arc[v]].tail) {
      res.edges[2 * parent_arc[v]].cap += bottleneck;
      res.edges[2 * parent_arc[v] + 1].cap -= bottleneck;
    }
    excess -= bottleneck;
  }
}

}  // namespace

FlowResult max_flow(const FlowNetwork& net) {
  net.validate();
  Residual res(net);
  Dinic dinic(net, res);
  Flow value = dinic.run(kInfFlow);
  if (value >= net.required_flow) {
    if (value > net.required_flow) {
      truncate_flow(net, res, value - net.required_flow);
      value = net.required_flow;
    }
    return collect(net, res, value, FlowStatus::optimal);
  }
  return collect(net, res, value, FlowStatus::infeasible);
}

FlowResult min_cost_flow(const FlowNetwork& net) {
  net.validate();
  for (const Arc& arc : net.arcs) {
    if (arc.cost < 0) throw std::invalid_argument("min_cost_flow requires nonnegative costs");
  }

  const int nodes = net.node_count;
  Residual res(net);
  std::vector<Cost> potential(nodes, 0);  // all costs >= 0, so zero is valid
  std::vector<Cost> dist(nodes);
  std::vector<int> parent_edge(nodes);

  Flow routed = 0;
  while (routed < net.required_flow) {
    // Dijkstra on reduced costs; ties resolved toward the lowest node index
    // by the (distance, node) ordering, which keeps runs deterministic.
    std::fill(dist.begin(), dist.end(), kInfCost);
    std::fill(parent_edge.begin(), parent_edge.end(), -1);
    dist[net.source] = 0;
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0, net.source);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (int e : res.adj[v]) {
        const auto& edge = res.edges[e];
        if (edge.cap <= 0) continue;
        Cost nd = d + edge.cost + potential[v] - potential[edge.to];
        if (nd < dist[edge.to]) {
          dist[edge.to] = nd;
          parent_edge[edge.to] = e;
          heap.emplace(nd, edge.to);
        }
      }
    }
    if (dist[net.sink] >= kInfCost) break;  // no augmenting path left

    for (int v = 0; v < nodes; ++v) {
      if (dist[v] < kInfCost) potential[v] += dist[v];
    }

    Flow push = net.required_flow - routed;
    for (int v = net.sink; v != net.source;) {
      int e = parent_edge[v];
      push = std::min(push, res.edges[e].cap);
      v = res.edges[e ^ 1].to;
    }
    for (int v = net.sink; v != net.source;) {
      int e = parent_edge[v];
      res.edges[e].cap -= push;
      res.edges[e ^ 1].cap += push;
      v = res.edges[e ^ 1].to;
    }
    routed += push;
  }

  return collect(net, res, routed,
                 routed == net.required_flow ? FlowStatus::optimal : FlowStatus::infeasible);
}

}  // namespace jfdl
