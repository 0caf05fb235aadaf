#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ergopt/cycles.hpp"
#include "ergopt/graph.hpp"
#include "ergopt/measure_lp.hpp"

namespace ergopt {

// Max-plus eigenvector of the graph weights:
//   u(y) = max over edges x -> y of (w_e + u(x)) - eigenvalue.
struct CalibratedSubaction {
  std::vector<double> u;
  double eigenvalue = 0.0;
  std::vector<int> critical_edges;
  std::vector<double> base_weight;
};

CalibratedSubaction calibrated_subaction(const WeightedDigraph& graph,
                                         std::span<const double> weight);

struct SubactionResiduals {
  // max_e (w_e + u(src) - u(tgt) - eigenvalue), should be <= 0.
  double subaction = 0.0;
  // max_y |max_in (w_e + u(src)) - eigenvalue - u(y)|.
  double calibration = 0.0;
  // max over critical edges of |w_e + u(src) - u(tgt) - eigenvalue|.
  double critical = 0.0;
};
SubactionResiduals subaction_residuals(const WeightedDigraph& graph, const CalibratedSubaction& sub);

// Edges where the sub-action inequality is an equality within tol.
std::vector<int> contact_locus(const WeightedDigraph& graph, const CalibratedSubaction& sub,
                               double tol = 1e-9);

// Backward orbit x_0, x_1, ... with an edge x_{j+1} -> x_j attaining the
// calibration maximum at every step. Sums run over the traversed edges.
struct Trajectory {
  std::vector<int> vertices;
  std::vector<int> edges;
  // Prefix sums of phi (scaled by the common denominator) and of the
  // potential; entry k covers the first k edges.
  std::vector<std::vector<std::int64_t>> scaled_phi_sums;
  std::vector<double> potential_sums;
  BigInt denominator{1};

  std::size_t steps() const noexcept { return edges.size(); }
  RationalVec running_phi_mean(std::size_t k) const;
  std::vector<double> running_phi_mean_double(std::size_t k) const;
  double running_potential_mean(std::size_t k) const;
};

Trajectory optimal_trajectory(const WeightedDigraph& graph, const CalibratedSubaction& sub, int x0,
                              std::size_t steps);

struct DifferentialCheck {
  // errors[k-1] = |S_k phi / k - D alpha(c)|.
  std::vector<double> errors;
  bool unique = false;
  std::vector<double> gradient;
  // First step from which the trajectory stays on its terminal cycle.
  std::size_t absorption_step = 0;
  std::size_t period = 0;
};

DifferentialCheck verify_alpha_differential(const WeightedDigraph& graph, std::span<const double> c,
                                            std::size_t steps, int x0);

struct RecurrenceOptions {
  std::size_t max_return = 10'000;
  std::size_t samples = 1'000;
  std::size_t max_attempts = 10'000'000;
  std::vector<double> epsilons{0.5, 0.2, 0.1, 0.05, 0.01};
  std::uint64_t seed = 1;
};

enum class RecurrenceStatus { Ok, NoVisits };

struct RecurrenceStats {
  RecurrenceStatus status = RecurrenceStatus::Ok;
  std::size_t visits = 0;
  // Fraction of visits with a return to the cylinder within max_return
  // steps whose Birkhoff sum is within epsilon of L times the mean.
  std::vector<std::pair<double, double>> fraction_by_epsilon;
  std::vector<double> mean;
};

using SamplingSource = std::variant<Cycle, MarkovChain>;

// Periodic sources are evaluated exactly over one period; Markov sources
// sample one stationary orbit and take its first `samples` visits.
RecurrenceStats recurrence_defect(const WeightedDigraph& graph, const SamplingSource& source,
                                  std::span<const int> cylinder, const RecurrenceOptions& options);

}  // namespace ergopt
