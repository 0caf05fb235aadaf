#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ergopt/spec_io.hpp"

namespace ergopt {

struct FamilyReport {
  std::string name;
  bool pass = true;
  // Largest violation seen (0 when every check holds exactly).
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  // Checks that could not run (e.g. enumeration cap), with the reason.
  std::vector<std::string> skipped;
};

struct CheckReport {
  std::vector<FamilyReport> families;
  bool passed = true;
  std::size_t systems = 0;
};

// Runs every invariant family on the system and on `perturbations`
// seeded random perturbations of its potential and constraint.
CheckReport run_invariant_suite(const SystemSpec& system, std::uint64_t seed, int perturbations = 3);

Json check_report_to_json(const CheckReport& report);

// max over allowed words of |f - g| (Euclidean for vectors).
double sup_distance(const SftSpec& spec, const Potential& f, const Potential& g);
double sup_distance(const SftSpec& spec, const Constraint& f, const Constraint& g);

// Feasible rational targets: convex combinations of support witnesses.
std::vector<RationalVec> sample_feasible_targets(const WeightedDigraph& graph, std::mt19937_64& rng,
                                                 std::size_t count);

}  // namespace ergopt
