#pragma once

#include <cstdint>
#include <random>

#include "ergopt/spec_io.hpp"

namespace ergopt {

// Seeded random systems for property tests and the `check` command.
struct InstanceOptions {
  int min_alphabet = 2;
  int max_alphabet = 4;
  int max_depth = 2;
  int dim = 1;
  std::size_t max_edges = 60;
  // Constraint entries are p/q with 1 <= q <= max_denominator, |p/q| <= 1.
  int max_denominator = 4;
  // Chance that a non-diagonal transition is forbidden.
  double forbid_probability = 0.2;
  // Potential values are multiples of this step in [-1, 1] when > 0
  // (produces ties); uniform reals otherwise.
  double potential_step = 0.0;
};

using Rng = std::mt19937_64;

SftSpec random_sft(Rng& rng, int alphabet, double forbid_probability);
Potential random_potential(Rng& rng, const SftSpec& spec, int depth, double step = 0.0);
Constraint random_constraint(Rng& rng, const SftSpec& spec, int depth, int dim, int max_denominator);

// Redraws until the system builds (cycle, transitive) within max_edges.
SystemSpec random_system(Rng& rng, const InstanceOptions& options = {});

// 3-shift, A(1,2) = A(2,1) = 1 else 0 at depth 1, phi the indicator of
// symbol 0 (the paper's symbols 1, 2, 3 are 0, 1, 2 here).
SystemSpec three_shift_example();

}  // namespace ergopt
