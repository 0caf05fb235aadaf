#include "ergopt/stationary_measure.hpp"

#include <algorithm>
#include <cmath>

namespace ergopt {

StationaryEdgeMeasure make_measure(const WeightedDigraph& graph, std::vector<double> weights) {
  if (weights.size() != graph.num_edges()) {
    throw Error(ErrorCode::DimensionMismatch, "measure has " + std::to_string(weights.size()) +
                                                  " weights for " + std::to_string(graph.num_edges()) + " edges");
  }
  StationaryEdgeMeasure m;
  m.rotation_vector.assign(static_cast<std::size_t>(graph.dim()), 0.0);
  for (std::size_t e = 0; e < weights.size(); ++e) {
    const Edge& edge = graph.edges()[e];
    m.potential_integral += weights[e] * edge.potential;
    for (std::size_t i = 0; i < m.rotation_vector.size(); ++i) {
      m.rotation_vector[i] += weights[e] * edge.constraint_value[i];
    }
  }
  m.weights = std::move(weights);
  return m;
}

double stationarity_residual(const WeightedDigraph& graph, std::span<const double> weights) {
  std::vector<double> balance(graph.num_vertices(), 0.0);
  double total = 0.0;
  double residual = 0.0;
  for (std::size_t e = 0; e < weights.size(); ++e) {
    const Edge& edge = graph.edges()[e];
    balance[static_cast<std::size_t>(edge.source)] -= weights[e];
    balance[static_cast<std::size_t>(edge.target)] += weights[e];
    total += weights[e];
    residual = std::max(residual, -weights[e]);
  }
  residual = std::max(residual, std::abs(total - 1.0));
  for (double b : balance) residual = std::max(residual, std::abs(b));
  return residual;
}

}  // namespace ergopt
