#include "ergopt/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <set>

namespace ergopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

std::vector<int> Cycle::vertices(const WeightedDigraph& graph) const {
  std::vector<int> out;
  out.reserve(edges.size());
  for (int e : edges) out.push_back(graph.edge(e).source);
  return out;
}

Word Cycle::symbols(const WeightedDigraph& graph) const {
  Word out;
  out.reserve(edges.size());
  for (int e : edges) out.push_back(graph.edge(e).word.front());
  return out;
}

double Cycle::mean(std::span<const double> weight) const {
  double sum = 0.0;
  for (int e : edges) sum += weight[static_cast<std::size_t>(e)];
  return sum / static_cast<double>(edges.size());
}

Cycle make_cycle(const WeightedDigraph& graph, std::vector<int> edges) {
  if (edges.empty()) throw Error(ErrorCode::InvalidArgument, "a cycle needs at least one edge");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i] < 0 || static_cast<std::size_t>(edges[i]) >= graph.num_edges()) {
      throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(edges[i]) + " is not in the graph");
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& a = graph.edge(edges[i]);
    const Edge& b = graph.edge(edges[(i + 1) % edges.size()]);
    if (a.target != b.source) {
      throw Error(ErrorCode::InvalidArgument, "edges do not chain into a closed walk",
                  {{"position", std::to_string(i)}});
    }
  }
  Cycle cycle;
  const auto period = static_cast<std::int64_t>(edges.size());
  std::vector<BigInt> sums(static_cast<std::size_t>(graph.dim()), BigInt(0));
  double potential = 0.0;
  for (int e : edges) {
    const Edge& edge = graph.edge(e);
    potential += edge.potential;
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += edge.scaled_constraint[i];
  }
  cycle.mean_potential = potential / static_cast<double>(period);
  cycle.rotation_vector.reserve(sums.size());
  for (const auto& s : sums) {
    cycle.rotation_vector.emplace_back(s, BigInt(period) * graph.common_denominator());
  }
  cycle.edges = std::move(edges);
  return cycle;
}

Cycle canonical_rotation(const WeightedDigraph& graph, const Cycle& cycle) {
  const auto verts = cycle.vertices(graph);
  const std::size_t m = verts.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < m; ++r) {
    for (std::size_t i = 0; i < m; ++i) {
      const int a = verts[(r + i) % m];
      const int b = verts[(best + i) % m];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  if (best == 0) return cycle;
  std::vector<int> edges(m);
  for (std::size_t i = 0; i < m; ++i) edges[i] = cycle.edges[(best + i) % m];
  return make_cycle(graph, std::move(edges));
}

Cycle cycle_from_vertices(const WeightedDigraph& graph, std::span<const int> vertices) {
  std::vector<int> edges;
  edges.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto e = graph.find_edge(vertices[i], vertices[(i + 1) % vertices.size()]);
    if (!e) {
      throw Error(ErrorCode::InvalidArgument, "no edge between consecutive cycle vertices",
                  {{"position", std::to_string(i)}});
    }
    edges.push_back(*e);
  }
  return make_cycle(graph, std::move(edges));
}

std::vector<Cycle> enumerate_simple_cycles(const WeightedDigraph& graph, std::size_t cap) {
  const std::size_t n = graph.num_vertices();
  std::vector<std::vector<int>> vertex_cycles;
  std::vector<bool> blocked(n, false);
  std::vector<std::set<int>> blockers(n);
  std::vector<int> stack;

  std::function<void(int)> unblock = [&](int v) {
    blocked[static_cast<std::size_t>(v)] = false;
    auto pending = std::move(blockers[static_cast<std::size_t>(v)]);
    blockers[static_cast<std::size_t>(v)].clear();
    for (int w : pending) {
      if (blocked[static_cast<std::size_t>(w)]) unblock(w);
    }
  };

  // Johnson's circuit search rooted at s over vertices >= s.
  std::function<bool(int, int)> circuit = [&](int v, int s) {
    bool found = false;
    stack.push_back(v);
    blocked[static_cast<std::size_t>(v)] = true;
    for (int e : graph.out_edges(v)) {
      const int w = graph.edge(e).target;
      if (w < s) continue;
      if (w == s) {
        vertex_cycles.push_back(stack);
        if (vertex_cycles.size() > cap) {
          throw Error(ErrorCode::CapExceeded, "more than " + std::to_string(cap) + " simple cycles",
                      {{"count", std::to_string(vertex_cycles.size())}});
        }
        found = true;
      } else if (!blocked[static_cast<std::size_t>(w)]) {
        if (circuit(w, s)) found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (int e : graph.out_edges(v)) {
        const int w = graph.edge(e).target;
        if (w >= s) blockers[static_cast<std::size_t>(w)].insert(v);
      }
    }
    stack.pop_back();
    return found;
  };

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t v = s; v < n; ++v) {
      blocked[v] = false;
      blockers[v].clear();
    }
    circuit(static_cast<int>(s), static_cast<int>(s));
  }

  std::sort(vertex_cycles.begin(), vertex_cycles.end());
  std::vector<Cycle> cycles;
  cycles.reserve(vertex_cycles.size());
  for (const auto& vc : vertex_cycles) cycles.push_back(cycle_from_vertices(graph, vc));
  return cycles;
}

double karp_max_cycle_mean(const WeightedDigraph& graph, std::span<const double> weight) {
  const std::size_t n = graph.num_vertices();
  if (weight.size() != graph.num_edges()) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector does not match the edge count");
  }
  if (n == 0 || graph.num_edges() == 0) throw Error(ErrorCode::NoCycle, "graph has no cycle");
  // best[k][v]: heaviest walk with exactly k edges ending at v, any start.
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(n, kNegInf));
  std::fill(best[0].begin(), best[0].end(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      const Edge& edge = graph.edges()[e];
      const double from = best[k][static_cast<std::size_t>(edge.source)];
      if (from == kNegInf) continue;
      double& to = best[k + 1][static_cast<std::size_t>(edge.target)];
      to = std::max(to, from + weight[e]);
    }
  }
  double lambda = kNegInf;
  for (std::size_t v = 0; v < n; ++v) {
    if (best[n][v] == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (best[k][v] == kNegInf) continue;
      worst = std::min(worst, (best[n][v] - best[k][v]) / static_cast<double>(n - k));
    }
    lambda = std::max(lambda, worst);
  }
  if (lambda == kNegInf) throw Error(ErrorCode::NoCycle, "graph has no cycle");
  return lambda;
}

CriticalGraph critical_graph(const WeightedDigraph& graph, std::span<const double> weight,
                             double eigenvalue) {
  const std::size_t n = graph.num_vertices();
  CriticalGraph cg;
  cg.eigenvalue = eigenvalue;
  cg.closure.assign(n, std::vector<double>(n, kNegInf));
  for (std::size_t v = 0; v < n; ++v) cg.closure[v][v] = 0.0;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    double& cell = cg.closure[static_cast<std::size_t>(edge.source)][static_cast<std::size_t>(edge.target)];
    cell = std::max(cell, weight[e] - eigenvalue);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ik = cg.closure[i][k];
      if (ik == kNegInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double kj = cg.closure[k][j];
        if (kj == kNegInf) continue;
        cg.closure[i][j] = std::max(cg.closure[i][j], ik + kj);
      }
    }
  }
  const double tol = 1e-10 * std::max(1.0, std::abs(eigenvalue));
  cg.critical_edge.assign(graph.num_edges(), false);
  cg.critical_vertex.assign(n, false);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    const double back = cg.closure[static_cast<std::size_t>(edge.target)][static_cast<std::size_t>(edge.source)];
    if (back == kNegInf) continue;
    if (weight[e] - eigenvalue + back >= -tol) {
      cg.critical_edge[e] = true;
      cg.critical_vertex[static_cast<std::size_t>(edge.source)] = true;
      cg.critical_vertex[static_cast<std::size_t>(edge.target)] = true;
    }
  }
  return cg;
}

namespace {

// Can `goal` be reached from `from` along critical edges without touching
// a vertex in `avoid`?
bool reaches(const WeightedDigraph& graph, const std::vector<bool>& critical, int from, int goal,
             const std::vector<bool>& avoid) {
  std::vector<bool> seen(graph.num_vertices(), false);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : graph.out_edges(v)) {
      if (!critical[static_cast<std::size_t>(e)]) continue;
      const int w = graph.edge(e).target;
      if (w == goal) return true;
      if (seen[static_cast<std::size_t>(w)] || avoid[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      stack.push_back(w);
    }
  }
  return false;
}

// Lexicographically smallest simple cycle made of critical edges.
std::vector<int> smallest_critical_cycle(const WeightedDigraph& graph, const std::vector<bool>& critical) {
  const std::size_t n = graph.num_vertices();
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> on_path(n, false);
    on_path[s] = true;
    if (!reaches(graph, critical, static_cast<int>(s), static_cast<int>(s), on_path)) continue;
    std::vector<int> path{static_cast<int>(s)};
    for (;;) {
      const int v = path.back();
      bool closed = false;
      int next = -1;
      for (int e : graph.out_edges(v)) {
        if (!critical[static_cast<std::size_t>(e)]) continue;
        const int w = graph.edge(e).target;
        if (w == static_cast<int>(s)) {
          closed = true;
          break;
        }
      }
      if (closed) return path;
      for (int e : graph.out_edges(v)) {
        if (!critical[static_cast<std::size_t>(e)]) continue;
        const int w = graph.edge(e).target;
        if (on_path[static_cast<std::size_t>(w)]) continue;
        on_path[static_cast<std::size_t>(w)] = true;
        const bool ok = reaches(graph, critical, w, static_cast<int>(s), on_path);
        on_path[static_cast<std::size_t>(w)] = false;
        if (ok) {
          next = w;
          break;
        }
      }
      if (next < 0) break;
      on_path[static_cast<std::size_t>(next)] = true;
      path.push_back(next);
    }
  }
  throw Error(ErrorCode::NoCycle, "no critical cycle found");
}

}  // namespace

MeanCycle max_mean_cycle(const WeightedDigraph& graph, std::span<const double> weight) {
  const double lambda = karp_max_cycle_mean(graph, weight);
  const CriticalGraph cg = critical_graph(graph, weight, lambda);
  MeanCycle result;
  result.witness = cycle_from_vertices(graph, smallest_critical_cycle(graph, cg.critical_edge));
  result.value = result.witness.mean(weight);
  return result;
}

MeanCycle min_mean_cycle(const WeightedDigraph& graph, std::span<const double> weight) {
  std::vector<double> negated(weight.begin(), weight.end());
  for (double& w : negated) w = -w;
  MeanCycle result = max_mean_cycle(graph, negated);
  result.value = -result.value;
  return result;
}

StationaryEdgeMeasure cycle_measure(const Cycle& cycle, const WeightedDigraph& graph) {
  std::vector<double> weights(graph.num_edges(), 0.0);
  const double mass = 1.0 / static_cast<double>(cycle.period());
  for (int e : cycle.edges) {
    if (e < 0 || static_cast<std::size_t>(e) >= graph.num_edges()) {
      throw Error(ErrorCode::InvalidArgument, "cycle edge " + std::to_string(e) + " is not in the graph");
    }
    weights[static_cast<std::size_t>(e)] += mass;
  }
  return make_measure(graph, std::move(weights));
}

std::vector<int> shortest_path_edges(const WeightedDigraph& graph, int from, int to) {
  if (from == to) return {};
  std::vector<int> via(graph.num_vertices(), -1);
  std::vector<bool> seen(graph.num_vertices(), false);
  std::deque<int> queue{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int e : graph.out_edges(v)) {
      const int w = graph.edge(e).target;
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      via[static_cast<std::size_t>(w)] = e;
      if (w == to) {
        std::vector<int> path;
        for (int x = to; x != from; x = graph.edge(via[static_cast<std::size_t>(x)]).source) {
          path.push_back(via[static_cast<std::size_t>(x)]);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  throw Error(ErrorCode::NotStronglyConnected, "vertex " + std::to_string(to) +
                                                   " is unreachable from " + std::to_string(from));
}

}  // namespace ergopt
