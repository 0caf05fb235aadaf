#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ergopt/graph.hpp"
#include "ergopt/stationary_measure.hpp"

namespace ergopt {

// A closed walk in the graph; the support data of a periodic measure.
// Not necessarily simple: periodic orbits found by search may revisit
// vertices.
struct Cycle {
  std::vector<int> edges;
  double mean_potential = 0.0;
  RationalVec rotation_vector;

  std::size_t period() const noexcept { return edges.size(); }
  // Source vertex of each edge, in order.
  std::vector<int> vertices(const WeightedDigraph& graph) const;
  // First symbol of each vertex along the walk: one period of the orbit.
  Word symbols(const WeightedDigraph& graph) const;
  // Mean of an arbitrary per-edge weight, summed in edge order.
  double mean(std::span<const double> weight) const;

  friend bool operator==(const Cycle& a, const Cycle& b) { return a.edges == b.edges; }
};

// Validates chaining and computes the means. Throws InvalidArgument if
// the edges do not form a closed walk.
Cycle make_cycle(const WeightedDigraph& graph, std::vector<int> edges);
// Same walk rotated to start at its smallest source vertex (first
// occurrence, then lexicographically smallest rotation).
Cycle canonical_rotation(const WeightedDigraph& graph, const Cycle& cycle);
Cycle cycle_from_vertices(const WeightedDigraph& graph, std::span<const int> vertices);

inline constexpr std::size_t kDefaultCycleCap = 1'000'000;

// Every simple cycle once (Johnson's circuit search), rotated to its
// smallest vertex, sorted lexicographically by vertex sequence.
// Throws CapExceeded when more than `cap` cycles exist.
std::vector<Cycle> enumerate_simple_cycles(const WeightedDigraph& graph,
                                           std::size_t cap = kDefaultCycleCap);

struct MeanCycle {
  double value = 0.0;
  Cycle witness;
};

// Karp's maximum cycle mean. The witness is the lexicographically smallest
// simple cycle among those attaining the maximum, and `value` is its mean
// recomputed directly from the weights.
MeanCycle max_mean_cycle(const WeightedDigraph& graph, std::span<const double> weight);
MeanCycle min_mean_cycle(const WeightedDigraph& graph, std::span<const double> weight);

// Karp's value alone, no witness.
double karp_max_cycle_mean(const WeightedDigraph& graph, std::span<const double> weight);

// Max-plus closure of the normalized weights w_e - lambda.
struct CriticalGraph {
  double eigenvalue = 0.0;
  // closure[x][y]: best normalized weight of a walk x -> y (0 for x == y
  // via the empty walk); -inf when unreachable.
  std::vector<std::vector<double>> closure;
  std::vector<bool> critical_edge;
  std::vector<bool> critical_vertex;
};

// Edges on maximum-mean cycles, with tolerance 1e-10 * max(1, |lambda|).
CriticalGraph critical_graph(const WeightedDigraph& graph, std::span<const double> weight,
                             double eigenvalue);

// Mass 1/M on each traversed edge (accumulated if an edge repeats).
StationaryEdgeMeasure cycle_measure(const Cycle& cycle, const WeightedDigraph& graph);

// Deterministic shortest path (fewest edges, BFS in vertex order)
// from `from` to `to`; empty when from == to.
std::vector<int> shortest_path_edges(const WeightedDigraph& graph, int from, int to);

}  // namespace ergopt
