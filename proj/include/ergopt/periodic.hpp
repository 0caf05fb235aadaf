#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ergopt/cycles.hpp"
#include "ergopt/graph.hpp"

namespace ergopt {

struct PeriodicQuery {
  RationalVec r;
  std::size_t max_period = 1;
  std::size_t state_cap = 100'000'000;
};

enum class PeriodicStatus { Found, NotFoundUpToK, InfeasibleR };

struct PeriodicResult {
  PeriodicStatus status = PeriodicStatus::NotFoundUpToK;
  double best_value = 0.0;
  std::optional<Cycle> orbit;
  // by_period[M - 1]: best mean potential over orbits of period M with
  // rotation vector exactly r.
  std::vector<std::optional<double>> by_period;
};

// Exact search over (vertex, length, integer offset) where the offset is
// qQ * S_m phi - m * qQ * r. Throws CapExceeded (with the state bound in
// the context) if the table would exceed state_cap or n > 2.
PeriodicResult best_periodic_with_rotation(const WeightedDigraph& graph, const PeriodicQuery& query);

// gaps[K' - 1] = beta(r) - best value over periods <= K' (+inf before the
// first orbit is found).
std::vector<double> periodic_beta_gap(const WeightedDigraph& graph, std::span<const Rational> r,
                                      std::size_t max_period);

struct PeriodicApproximation {
  RationalVec r;
  Cycle orbit;
  // <c, r> - mean potential of the orbit.
  double value = 0.0;
};

// Periodic orbit nearly minimizing <c, phi> - A. Without want_interior the
// minimum-mean witness itself is returned and value == alpha(c). With
// want_interior the orbit is spliced with a closed walk through the
// interior so that r is interior and value < alpha(c) + epsilon.
PeriodicApproximation alpha_periodic_approx(const WeightedDigraph& graph, std::span<const double> c,
                                            bool want_interior, double epsilon = 1e-3);

}  // namespace ergopt
