#pragma once

#include <span>
#include <vector>

#include "ergopt/cycles.hpp"
#include "ergopt/graph.hpp"
#include "ergopt/simplex.hpp"
#include "ergopt/stationary_measure.hpp"

namespace ergopt {

enum class LpStatus { Optimal, Infeasible };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  StationaryEdgeMeasure measure;
  // Multipliers of the rows sum_e mu_e phi_e = h: a supergradient of beta at h.
  std::vector<double> dual_multipliers;
};

// beta(h) = max sum_e mu_e a_e over stationary probability edge vectors
// with sum_e mu_e phi_e = h.
LpSolution solve_beta_primal(const WeightedDigraph& graph, std::span<const Rational> h);
// The same program without the rotation rows: max over all invariant measures.
LpSolution solve_unconstrained(const WeightedDigraph& graph);
LpSolution solve_unconstrained(const WeightedDigraph& graph, std::span<const double> weight);

struct WeightedCycle {
  Cycle cycle;
  double weight = 0.0;
};

// Splits a stationary measure into at most |E| cycle measures with convex
// weights. Throws InvalidArgument when the input is not stationary.
std::vector<WeightedCycle> decompose_into_cycles(const StationaryEdgeMeasure& measure,
                                                 const WeightedDigraph& graph);

struct Extent {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

// Per-coordinate range of the rotation vector over the measures
// maximizing integral of (A - <c, phi>).
std::vector<Extent> maximizing_face_extents(const WeightedDigraph& graph, std::span<const double> c);

struct MarkovChain {
  // Graph vertex ids in the support, ascending; matrices index into this.
  std::vector<int> states;
  std::vector<std::vector<double>> transition;
  std::vector<double> stationary;
};

// P(v, w) = mu_e / outflow(v) on the support of the measure.
MarkovChain markov_extension(const StationaryEdgeMeasure& measure, const WeightedDigraph& graph);

}  // namespace ergopt
