#include "ergopt/measure_lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ergopt {

namespace {

// Probability simplex plus flow conservation, one vertex row dropped
// because the rows sum to zero.
lp::LinearProgram stationary_program(const WeightedDigraph& graph) {
  lp::LinearProgram program;
  program.num_vars = graph.num_edges();
  program.objective.assign(program.num_vars, 0.0);
  program.add_row(std::vector<double>(program.num_vars, 1.0), lp::RowSense::Equal, 1.0);
  for (std::size_t v = 0; v + 1 < graph.num_vertices(); ++v) {
    std::vector<double> row(program.num_vars, 0.0);
    for (int e : graph.in_edges(static_cast<int>(v))) row[static_cast<std::size_t>(e)] += 1.0;
    for (int e : graph.out_edges(static_cast<int>(v))) row[static_cast<std::size_t>(e)] -= 1.0;
    program.add_row(std::move(row), lp::RowSense::Equal, 0.0);
  }
  return program;
}

std::vector<double> constraint_row(const WeightedDigraph& graph, std::size_t coordinate) {
  std::vector<double> row(graph.num_edges());
  for (std::size_t e = 0; e < row.size(); ++e) row[e] = graph.edges()[e].constraint_value[coordinate];
  return row;
}

}  // namespace

LpSolution solve_beta_primal(const WeightedDigraph& graph, std::span<const Rational> h) {
  if (h.size() != static_cast<std::size_t>(graph.dim())) {
    throw Error(ErrorCode::DimensionMismatch, "h has dimension " + std::to_string(h.size()) +
                                                  ", constraint has " + std::to_string(graph.dim()));
  }
  lp::LinearProgram program = stationary_program(graph);
  program.objective = graph.potential_weights();
  const std::size_t first_h_row = program.rows.size();
  for (std::size_t i = 0; i < h.size(); ++i) {
    program.add_row(constraint_row(graph, i), lp::RowSense::Equal, to_double(h[i]));
  }
  const lp::Result res = lp::solve(program);
  LpSolution solution;
  if (res.status != lp::Status::Optimal) return solution;
  solution.status = LpStatus::Optimal;
  solution.value = res.value;
  solution.measure = make_measure(graph, res.x);
  solution.dual_multipliers.assign(res.duals.begin() + static_cast<std::ptrdiff_t>(first_h_row), res.duals.end());
  return solution;
}

LpSolution solve_unconstrained(const WeightedDigraph& graph) {
  const auto w = graph.potential_weights();
  return solve_unconstrained(graph, w);
}

LpSolution solve_unconstrained(const WeightedDigraph& graph, std::span<const double> weight) {
  lp::LinearProgram program = stationary_program(graph);
  program.objective.assign(weight.begin(), weight.end());
  const lp::Result res = lp::solve(program);
  LpSolution solution;
  if (res.status != lp::Status::Optimal) return solution;
  solution.status = LpStatus::Optimal;
  solution.value = res.value;
  solution.measure = make_measure(graph, res.x);
  return solution;
}

std::vector<WeightedCycle> decompose_into_cycles(const StationaryEdgeMeasure& measure,
                                                 const WeightedDigraph& graph) {
  const double residual = stationarity_residual(graph, measure.weights);
  if (measure.weights.size() != graph.num_edges() || residual > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "measure is not a stationary probability vector",
                {{"residual", std::to_string(residual)}});
  }
  constexpr double kDust = 1e-13;
  std::vector<double> rest = measure.weights;
  for (double& w : rest) {
    if (w < kDust) w = 0.0;
  }
  std::map<std::vector<int>, WeightedCycle> found;
  for (std::size_t round = 0; round <= graph.num_edges(); ++round) {
    const auto heaviest = std::max_element(rest.begin(), rest.end());
    if (heaviest == rest.end() || *heaviest <= kDust) break;
    // Follow the heaviest outgoing edge until a vertex repeats.
    std::vector<int> position(graph.num_vertices(), -1);
    std::vector<int> walk;
    int v = graph.edge(static_cast<int>(heaviest - rest.begin())).source;
    bool stuck = false;
    while (position[static_cast<std::size_t>(v)] < 0) {
      position[static_cast<std::size_t>(v)] = static_cast<int>(walk.size());
      int best = -1;
      for (int e : graph.out_edges(v)) {
        if (rest[static_cast<std::size_t>(e)] > 0.0 &&
            (best < 0 || rest[static_cast<std::size_t>(e)] > rest[static_cast<std::size_t>(best)])) {
          best = e;
        }
      }
      if (best < 0) {
        stuck = true;
        break;
      }
      walk.push_back(best);
      v = graph.edge(best).target;
    }
    if (stuck) break;
    std::vector<int> cycle_edges(walk.begin() + position[static_cast<std::size_t>(v)], walk.end());
    double mass = rest[static_cast<std::size_t>(cycle_edges.front())];
    for (int e : cycle_edges) mass = std::min(mass, rest[static_cast<std::size_t>(e)]);
    for (int e : cycle_edges) {
      double& w = rest[static_cast<std::size_t>(e)];
      w -= mass;
      if (w < kDust) w = 0.0;
    }
    Cycle cycle = canonical_rotation(graph, make_cycle(graph, std::move(cycle_edges)));
    const double weight = mass * static_cast<double>(cycle.period());
    auto [it, inserted] = found.try_emplace(cycle.edges, WeightedCycle{cycle, 0.0});
    it->second.weight += weight;
  }
  std::vector<WeightedCycle> out;
  out.reserve(found.size());
  for (auto& [key, wc] : found) out.push_back(std::move(wc));
  return out;
}

std::vector<Extent> maximizing_face_extents(const WeightedDigraph& graph, std::span<const double> c) {
  const auto weight = graph.tilted_weights(c);
  const double optimum = max_mean_cycle(graph, weight).value;
  lp::LinearProgram program = stationary_program(graph);
  program.add_row(weight, lp::RowSense::GreaterEqual, optimum - 1e-12 * std::max(1.0, std::abs(optimum)));
  std::vector<Extent> extents;
  for (std::size_t i = 0; i < static_cast<std::size_t>(graph.dim()); ++i) {
    program.objective = constraint_row(graph, i);
    Extent extent;
    program.maximize = false;
    const lp::Result lo = lp::solve(program);
    program.maximize = true;
    const lp::Result hi = lp::solve(program);
    if (lo.status != lp::Status::Optimal || hi.status != lp::Status::Optimal) {
      throw Error(ErrorCode::Infeasible, "maximizing face program failed");
    }
    extent.lo = lo.value;
    extent.hi = std::max(hi.value, lo.value);
    extents.push_back(extent);
  }
  return extents;
}

MarkovChain markov_extension(const StationaryEdgeMeasure& measure, const WeightedDigraph& graph) {
  constexpr double kSupport = 1e-12;
  if (measure.weights.size() != graph.num_edges()) {
    throw Error(ErrorCode::DimensionMismatch, "measure does not match the graph");
  }
  std::vector<double> outflow(graph.num_vertices(), 0.0);
  std::vector<bool> in_support(graph.num_vertices(), false);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    if (measure.weights[e] <= kSupport) continue;
    const Edge& edge = graph.edges()[e];
    outflow[static_cast<std::size_t>(edge.source)] += measure.weights[e];
    in_support[static_cast<std::size_t>(edge.source)] = true;
    in_support[static_cast<std::size_t>(edge.target)] = true;
  }
  MarkovChain chain;
  std::vector<int> index(graph.num_vertices(), -1);
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    if (!in_support[v]) continue;
    if (outflow[v] <= kSupport) {
      throw Error(ErrorCode::InvalidArgument, "support vertex " + std::to_string(v) + " has zero outflow");
    }
    index[v] = static_cast<int>(chain.states.size());
    chain.states.push_back(static_cast<int>(v));
  }
  const std::size_t s = chain.states.size();
  chain.transition.assign(s, std::vector<double>(s, 0.0));
  double total = 0.0;
  for (int v : chain.states) total += outflow[static_cast<std::size_t>(v)];
  for (int v : chain.states) chain.stationary.push_back(outflow[static_cast<std::size_t>(v)] / total);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    if (measure.weights[e] <= kSupport) continue;
    const Edge& edge = graph.edges()[e];
    const auto from = static_cast<std::size_t>(index[static_cast<std::size_t>(edge.source)]);
    const auto to = static_cast<std::size_t>(index[static_cast<std::size_t>(edge.target)]);
    chain.transition[from][to] += measure.weights[e] / outflow[static_cast<std::size_t>(edge.source)];
  }
  return chain;
}

}  // namespace ergopt
