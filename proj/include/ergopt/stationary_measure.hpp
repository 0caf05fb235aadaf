#pragma once

#include <span>
#include <vector>

#include "ergopt/graph.hpp"

namespace ergopt {

// Edge-frequency vector of a shift-invariant probability: the
// (k+1)-cylinder marginals of the measure.
struct StationaryEdgeMeasure {
  std::vector<double> weights;
  std::vector<double> rotation_vector;
  double potential_integral = 0.0;
};

// Fills in the rotation vector and potential integral for `weights`.
StationaryEdgeMeasure make_measure(const WeightedDigraph& graph, std::vector<double> weights);

// max(|sum - 1|, max_v |inflow(v) - outflow(v)|, max negative part).
double stationarity_residual(const WeightedDigraph& graph, std::span<const double> weights);

}  // namespace ergopt
