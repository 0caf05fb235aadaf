#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ergopt/beta_alpha.hpp"
#include "ergopt/cycles.hpp"
#include "ergopt/graph.hpp"
#include "ergopt/measure_lp.hpp"
#include "ergopt/periodic.hpp"
#include "ergopt/sft.hpp"
#include "ergopt/subaction.hpp"

namespace ergopt {

using Json = nlohmann::json;

// A system as stored in a spec file.
struct SystemSpec {
  SftSpec sft;
  Potential potential;
  Constraint constraint;
};

// Checks shape only (alphabet, square 0/1 matrix). Throws MalformedInput
// whose details list every violation.
SftSpec validate_spec(const Json& raw);

// Full spec file: alphabet, optional transitions, optional potential
// (defaults to 0), constraint. All problems are collected before throwing.
SystemSpec parse_system(const Json& raw);
SystemSpec load_system(const std::filesystem::path& path);
Json to_json(const SystemSpec& system);

WeightedDigraph build_graph(const SystemSpec& system);

// Rationals are written as "p/q" strings; JSON integers are accepted on input.
Rational rational_from_json(const Json& value);
Json rational_to_json(const Rational& value);
Json rational_vec_to_json(std::span<const Rational> values);
RationalVec rational_vec_from_json(const Json& value);

Json cycle_to_json(const WeightedDigraph& graph, const Cycle& cycle);
Json measure_to_json(const WeightedDigraph& graph, const StationaryEdgeMeasure& measure);
Json rotation_set_to_json(const RotationSet& set);
Json beta_to_json(const WeightedDigraph& graph, std::span<const Rational> h, const LpSolution& lp);
Json subaction_to_json(const WeightedDigraph& graph, const CalibratedSubaction& sub,
                       std::span<const int> contact);
Json trajectory_to_json(const WeightedDigraph& graph, const Trajectory& trajectory);
Json periodic_to_json(const WeightedDigraph& graph, std::span<const Rational> r, std::size_t max_period,
                      const PeriodicResult& result);
Json error_to_json(const Error& error);

// Schema check for emitted documents; empty when valid. Kinds are the CLI
// command names plus "error".
std::vector<std::string> validate_document(std::string_view kind, const Json& doc);

}  // namespace ergopt
