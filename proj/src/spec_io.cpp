#include "ergopt/spec_io.hpp"

#include <fstream>
#include <sstream>

namespace ergopt {

namespace {

using Problems = std::vector<std::string>;

std::optional<int> read_int(const Json& obj, const char* key, const std::string& where, Problems& problems,
                            std::optional<int> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (!fallback) problems.push_back(where + ": missing \"" + key + "\"");
    return fallback;
  }
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) {
    problems.push_back(where + ": \"" + key + "\" must be an integer");
    return std::nullopt;
  }
  return v.get<int>();
}

std::optional<double> read_real(const Json& v, const std::string& where, Problems& problems) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return to_double(parse_rational(v.get<std::string>()));
    } catch (const Error&) {
    }
  }
  problems.push_back(where + ": expected a number");
  return std::nullopt;
}

std::optional<RationalVec> read_rational_vec(const Json& v, int dim, const std::string& where,
                                             Problems& problems) {
  if (!v.is_array()) {
    problems.push_back(where + ": expected an array of \"p/q\" strings");
    return std::nullopt;
  }
  if (dim >= 0 && v.size() != static_cast<std::size_t>(dim)) {
    problems.push_back(where + ": has " + std::to_string(v.size()) + " entries, expected dim = " +
                       std::to_string(dim));
    return std::nullopt;
  }
  try {
    return rational_vec_from_json(v);
  } catch (const Error& err) {
    problems.push_back(where + ": " + err.what());
    return std::nullopt;
  }
}

std::optional<Word> read_key(const std::string& key, int depth, int alphabet, const std::string& where,
                             Problems& problems) {
  Word word;
  try {
    word = parse_word(key);
  } catch (const Error&) {
    problems.push_back(where + ": invalid word \"" + key + "\"");
    return std::nullopt;
  }
  if (word.size() != static_cast<std::size_t>(depth + 1)) {
    problems.push_back(where + ": word \"" + key + "\" has length " + std::to_string(word.size()) +
                       ", expected depth + 1 = " + std::to_string(depth + 1));
    return std::nullopt;
  }
  for (int s : word) {
    if (alphabet > 0 && s >= alphabet) {
      problems.push_back(where + ": word \"" + key + "\" uses symbol " + std::to_string(s) +
                         " outside the alphabet");
      return std::nullopt;
    }
  }
  return word;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::MalformedInput, "cannot read spec file", {{"path", path.string()}});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Rational rational_from_json(const Json& value) {
  if (value.is_number_integer()) {
    return value.is_number_unsigned() ? Rational(value.get<std::uint64_t>()) : Rational(value.get<std::int64_t>());
  }
  if (value.is_string()) return parse_rational(value.get<std::string>());
  throw Error(ErrorCode::MalformedInput, "expected a rational \"p/q\" string or an integer",
              {{"value", value.dump()}});
}

Json rational_to_json(const Rational& value) { return to_string(value); }

Json rational_vec_to_json(std::span<const Rational> values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(rational_to_json(v));
  return out;
}

RationalVec rational_vec_from_json(const Json& value) {
  if (!value.is_array()) {
    throw Error(ErrorCode::MalformedInput, "expected an array of rationals", {{"value", value.dump()}});
  }
  RationalVec out;
  for (const auto& v : value) out.push_back(rational_from_json(v));
  return out;
}

SftSpec validate_spec(const Json& raw) {
  Problems problems;
  if (!raw.is_object()) {
    throw Error(ErrorCode::MalformedInput, "spec must be a JSON object");
  }
  const auto alphabet = read_int(raw, "alphabet", "spec", problems);
  if (alphabet && *alphabet <= 0) problems.push_back("spec: alphabet must be positive");
  std::vector<std::vector<bool>> matrix;
  if (raw.contains("transitions")) {
    const Json& t = raw.at("transitions");
    if (!t.is_array()) {
      problems.push_back("transitions: expected a matrix");
    } else {
      if (alphabet && t.size() != static_cast<std::size_t>(*alphabet)) {
        problems.push_back("transitions: has " + std::to_string(t.size()) + " rows, expected " +
                           std::to_string(*alphabet));
      }
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string row = "transitions row " + std::to_string(i);
        std::vector<bool> bits;
        if (!t[i].is_array()) {
          problems.push_back(row + ": expected an array");
          matrix.push_back(bits);
          continue;
        }
        if (alphabet && t[i].size() != static_cast<std::size_t>(*alphabet)) {
          problems.push_back(row + ": has " + std::to_string(t[i].size()) + " entries, expected " +
                             std::to_string(*alphabet));
        }
        for (std::size_t j = 0; j < t[i].size(); ++j) {
          const Json& x = t[i][j];
          if (x.is_boolean()) {
            bits.push_back(x.get<bool>());
          } else if (x.is_number_integer() && (x.get<long long>() == 0 || x.get<long long>() == 1)) {
            bits.push_back(x.get<long long>() == 1);
          } else {
            problems.push_back(row + ", column " + std::to_string(j) + ": entry must be 0 or 1");
            bits.push_back(false);
          }
        }
        matrix.push_back(std::move(bits));
      }
    }
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::MalformedInput, "invalid spec: " + problems.front(), {}, problems);
  }
  if (matrix.empty()) return SftSpec(*alphabet);
  return SftSpec(*alphabet, std::move(matrix));
}

SystemSpec parse_system(const Json& raw) {
  Problems problems;
  std::optional<SftSpec> spec;
  try {
    spec = validate_spec(raw);
  } catch (const Error& err) {
    if (err.details().empty()) {
      problems.push_back(err.what());
    } else {
      problems.insert(problems.end(), err.details().begin(), err.details().end());
    }
  }
  const int alphabet = spec ? spec->alphabet_size() : -1;
  auto check_allowed = [&](const Word& w, const std::string& where) {
    if (spec && !spec->is_allowed(w)) {
      problems.push_back(where + ": word \"" + word_key(w) + "\" is not allowed by the transitions");
      return false;
    }
    return true;
  };

  int pot_depth = 0;
  double pot_default = 0.0;
  std::map<Word, double> pot_values;
  if (raw.is_object() && raw.contains("potential")) {
    const Json& p = raw.at("potential");
    if (!p.is_object()) {
      problems.push_back("potential: expected an object");
    } else {
      const auto d = read_int(p, "depth", "potential", problems, 0);
      if (d && *d < 0) problems.push_back("potential: depth must be nonnegative");
      pot_depth = d.value_or(0) < 0 ? 0 : d.value_or(0);
      if (p.contains("default")) {
        pot_default = read_real(p.at("default"), "potential default", problems).value_or(0.0);
      }
      if (p.contains("words")) {
        if (!p.at("words").is_object()) {
          problems.push_back("potential words: expected an object");
        } else {
          for (const auto& [key, value] : p.at("words").items()) {
            const std::string where = "potential word \"" + key + "\"";
            const auto w = read_key(key, pot_depth, alphabet, "potential", problems);
            const auto v = read_real(value, where, problems);
            if (w && v && check_allowed(*w, "potential")) pot_values[*w] = *v;
          }
        }
      }
    }
  }

  int con_depth = 0;
  int con_dim = 1;
  RationalVec con_default{Rational(0)};
  std::map<Word, RationalVec> con_values;
  if (!raw.is_object() || !raw.contains("constraint")) {
    problems.push_back("spec: missing \"constraint\"");
  } else if (!raw.at("constraint").is_object()) {
    problems.push_back("constraint: expected an object");
  } else {
    const Json& c = raw.at("constraint");
    const auto d = read_int(c, "depth", "constraint", problems, 0);
    if (d && *d < 0) problems.push_back("constraint: depth must be nonnegative");
    con_depth = d.value_or(0) < 0 ? 0 : d.value_or(0);
    std::optional<int> dim;
    if (c.contains("dim")) {
      dim = read_int(c, "dim", "constraint", problems);
    } else if (c.contains("default") && c.at("default").is_array()) {
      dim = static_cast<int>(c.at("default").size());
    } else {
      problems.push_back("constraint: missing \"dim\"");
    }
    if (dim && *dim <= 0) {
      problems.push_back("constraint: dim must be positive");
      dim.reset();
    }
    if (dim) {
      con_dim = *dim;
      con_default = zero_vector(static_cast<std::size_t>(con_dim));
      if (c.contains("default")) {
        if (auto v = read_rational_vec(c.at("default"), con_dim, "constraint default", problems)) {
          con_default = *v;
        }
      }
      if (c.contains("words")) {
        if (!c.at("words").is_object()) {
          problems.push_back("constraint words: expected an object");
        } else {
          for (const auto& [key, value] : c.at("words").items()) {
            const std::string where = "constraint word \"" + key + "\"";
            const auto w = read_key(key, con_depth, alphabet, "constraint", problems);
            const auto v = read_rational_vec(value, con_dim, where, problems);
            if (w && v && check_allowed(*w, "constraint")) con_values[*w] = *v;
          }
        }
      }
    }
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::MalformedInput, "invalid spec: " + problems.front(),
                {{"violations", std::to_string(problems.size())}}, problems);
  }
  return SystemSpec{*spec, Potential(pot_depth, pot_default, std::move(pot_values)),
                    Constraint(con_depth, std::move(con_default), std::move(con_values))};
}

SystemSpec load_system(const std::filesystem::path& path) {
  Json raw;
  try {
    raw = Json::parse(slurp(path));
  } catch (const Json::parse_error& err) {
    throw Error(ErrorCode::MalformedInput, std::string("spec file is not valid JSON: ") + err.what(),
                {{"path", path.string()}});
  }
  return parse_system(raw);
}

Json to_json(const SystemSpec& system) {
  Json out;
  const int n = system.sft.alphabet_size();
  out["alphabet"] = n;
  Json rows = Json::array();
  for (const auto& row : system.sft.transitions()) {
    Json bits = Json::array();
    for (bool b : row) bits.push_back(b ? 1 : 0);
    rows.push_back(bits);
  }
  out["transitions"] = rows;
  Json pot;
  pot["depth"] = system.potential.depth();
  pot["default"] = system.potential.default_value();
  pot["words"] = Json::object();
  for (const auto& [w, v] : system.potential.values()) pot["words"][word_key(w)] = v;
  out["potential"] = pot;
  Json con;
  con["depth"] = system.constraint.depth();
  con["dim"] = system.constraint.dim();
  con["default"] = rational_vec_to_json(system.constraint.default_value());
  con["words"] = Json::object();
  for (const auto& [w, v] : system.constraint.values()) con["words"][word_key(w)] = rational_vec_to_json(v);
  out["constraint"] = con;
  return out;
}

WeightedDigraph build_graph(const SystemSpec& system) {
  return build_graph(system.sft, system.potential, system.constraint);
}

Json cycle_to_json(const WeightedDigraph& graph, const Cycle& cycle) {
  Json out;
  out["word"] = word_key(cycle.symbols(graph));
  out["period"] = cycle.period();
  out["mean_potential"] = cycle.mean_potential;
  out["rotation_vector"] = rational_vec_to_json(cycle.rotation_vector);
  return out;
}

Json measure_to_json(const WeightedDigraph& graph, const StationaryEdgeMeasure& measure) {
  Json out;
  Json edges = Json::object();
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    if (measure.weights[e] > 1e-12) edges[word_key(graph.edges()[e].word)] = measure.weights[e];
  }
  out["edges"] = edges;
  out["rotation_vector"] = measure.rotation_vector;
  out["potential_integral"] = measure.potential_integral;
  return out;
}

Json rotation_set_to_json(const RotationSet& set) {
  Json out;
  out["dim"] = set.dim;
  out["exact"] = set.exact;
  Json vertices = Json::array();
  for (const auto& v : set.polygon) vertices.push_back(rational_vec_to_json(v));
  out["vertices"] = vertices;
  Json samples = Json::array();
  for (const auto& s : set.support_samples) {
    samples.push_back({{"direction", s.direction},
                       {"value", s.value},
                       {"witness", rational_vec_to_json(s.witness)}});
  }
  out["support"] = samples;
  return out;
}

Json beta_to_json(const WeightedDigraph& graph, std::span<const Rational> h, const LpSolution& lp) {
  Json out;
  out["h"] = rational_vec_to_json(h);
  if (lp.status != LpStatus::Optimal) {
    out["status"] = "Infeasible";
    out["beta"] = nullptr;
    return out;
  }
  out["status"] = "Optimal";
  out["beta"] = lp.value;
  out["measure"] = measure_to_json(graph, lp.measure);
  out["dual_multipliers"] = lp.dual_multipliers;
  return out;
}

Json subaction_to_json(const WeightedDigraph& graph, const CalibratedSubaction& sub,
                       std::span<const int> contact) {
  Json out;
  out["eigenvalue"] = sub.eigenvalue;
  Json u = Json::object();
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) u[word_key(graph.vertices()[v])] = sub.u[v];
  out["u"] = u;
  Json critical = Json::array();
  for (int e : sub.critical_edges) critical.push_back(word_key(graph.edge(e).word));
  out["critical_edges"] = critical;
  Json locus = Json::array();
  for (int e : contact) locus.push_back(word_key(graph.edge(e).word));
  out["contact_locus"] = locus;
  return out;
}

Json trajectory_to_json(const WeightedDigraph& graph, const Trajectory& trajectory) {
  Json out;
  out["convention"] = "backward: each listed vertex maps to the previous one under the shift";
  Json vertices = Json::array();
  for (int v : trajectory.vertices) vertices.push_back(word_key(graph.vertices()[static_cast<std::size_t>(v)]));
  out["vertices"] = vertices;
  out["steps"] = trajectory.steps();
  if (trajectory.steps() > 0) {
    out["phi_mean"] = rational_vec_to_json(trajectory.running_phi_mean(trajectory.steps()));
    out["potential_mean"] = trajectory.running_potential_mean(trajectory.steps());
  } else {
    out["phi_mean"] = nullptr;
    out["potential_mean"] = nullptr;
  }
  return out;
}

Json periodic_to_json(const WeightedDigraph& graph, std::span<const Rational> r, std::size_t max_period,
                      const PeriodicResult& result) {
  Json out;
  out["r"] = rational_vec_to_json(r);
  out["K"] = max_period;
  switch (result.status) {
    case PeriodicStatus::Found: out["status"] = "Found"; break;
    case PeriodicStatus::NotFoundUpToK: out["status"] = "NotFoundUpToK"; break;
    case PeriodicStatus::InfeasibleR: out["status"] = "InfeasibleR"; break;
  }
  if (result.orbit) {
    out["best_value"] = result.best_value;
    out["orbit"] = cycle_to_json(graph, *result.orbit);
  } else {
    out["best_value"] = nullptr;
    out["orbit"] = nullptr;
  }
  Json by_period = Json::array();
  for (const auto& v : result.by_period) by_period.push_back(v ? Json(*v) : Json(nullptr));
  out["by_period"] = by_period;
  return out;
}

Json error_to_json(const Error& error) {
  Json out;
  out["code"] = std::string(to_string(error.code()));
  out["message"] = error.what();
  Json context = Json::object();
  for (const auto& [k, v] : error.context()) context[k] = v;
  if (!error.details().empty()) context["violations"] = error.details();
  out["context"] = context;
  return out;
}

namespace {

void require(const Json& doc, const char* key, bool (Json::*pred)() const noexcept, const char* type,
             Problems& problems) {
  if (!doc.contains(key)) {
    problems.push_back(std::string("missing field \"") + key + "\"");
  } else if (!(doc.at(key).*pred)()) {
    problems.push_back(std::string("field \"") + key + "\" must be " + type);
  }
}

void require_rationals(const Json& doc, const char* key, Problems& problems) {
  if (!doc.contains(key)) return;
  try {
    (void)rational_vec_from_json(doc.at(key));
  } catch (const Error&) {
    problems.push_back(std::string("field \"") + key + "\" must hold \"p/q\" strings");
  }
}

bool is_number_or_null(const Json& v) { return v.is_number() || v.is_null(); }

}  // namespace

std::vector<std::string> validate_document(std::string_view kind, const Json& doc) {
  Problems problems;
  if (!doc.is_object()) return {"document must be a JSON object"};
  if (kind == "rotation-set") {
    require(doc, "dim", &Json::is_number_integer, "an integer", problems);
    require(doc, "exact", &Json::is_boolean, "a boolean", problems);
    require(doc, "vertices", &Json::is_array, "an array", problems);
    require(doc, "support", &Json::is_array, "an array", problems);
    if (problems.empty()) {
      for (const auto& v : doc.at("vertices")) {
        try {
          if (rational_vec_from_json(v).size() != doc.at("dim").get<std::size_t>()) {
            problems.push_back("vertex has the wrong dimension");
          }
        } catch (const Error&) {
          problems.push_back("vertex must hold \"p/q\" strings");
        }
      }
    }
  } else if (kind == "beta") {
    require(doc, "h", &Json::is_array, "an array", problems);
    require(doc, "status", &Json::is_string, "a string", problems);
    require_rationals(doc, "h", problems);
    if (doc.contains("beta") && !is_number_or_null(doc.at("beta"))) problems.push_back("beta must be a number");
    if (doc.value("status", "") == "Optimal") {
      require(doc, "measure", &Json::is_object, "an object", problems);
      require(doc, "dual_multipliers", &Json::is_array, "an array", problems);
    }
  } else if (kind == "alpha") {
    require(doc, "c", &Json::is_array, "an array", problems);
    require(doc, "alpha", &Json::is_number, "a number", problems);
    require(doc, "gradient", &Json::is_array, "an array", problems);
    require(doc, "unique", &Json::is_boolean, "a boolean", problems);
    require(doc, "witness", &Json::is_object, "an object", problems);
  } else if (kind == "subaction") {
    require(doc, "eigenvalue", &Json::is_number, "a number", problems);
    require(doc, "u", &Json::is_object, "an object", problems);
    require(doc, "critical_edges", &Json::is_array, "an array", problems);
    require(doc, "contact_locus", &Json::is_array, "an array", problems);
  } else if (kind == "trajectory") {
    require(doc, "vertices", &Json::is_array, "an array", problems);
    require(doc, "steps", &Json::is_number_integer, "an integer", problems);
    require(doc, "convention", &Json::is_string, "a string", problems);
  } else if (kind == "periodic") {
    require(doc, "r", &Json::is_array, "an array", problems);
    require(doc, "K", &Json::is_number_integer, "an integer", problems);
    require(doc, "status", &Json::is_string, "a string", problems);
    require(doc, "by_period", &Json::is_array, "an array", problems);
    require_rationals(doc, "r", problems);
    if (doc.value("status", "") == "Found") {
      require(doc, "orbit", &Json::is_object, "an object", problems);
      require(doc, "best_value", &Json::is_number, "a number", problems);
      if (doc.contains("orbit") && doc.at("orbit").is_object()) {
        require_rationals(doc.at("orbit"), "rotation_vector", problems);
      }
    }
  } else if (kind == "check") {
    require(doc, "families", &Json::is_array, "an array", problems);
    require(doc, "passed", &Json::is_boolean, "a boolean", problems);
    if (doc.contains("families") && doc.at("families").is_array()) {
      for (const auto& f : doc.at("families")) {
        if (!f.is_object() || !f.contains("name") || !f.contains("pass") || !f.contains("max_residual")) {
          problems.push_back("family entries need name, pass and max_residual");
        }
      }
    }
  } else if (kind == "error") {
    require(doc, "code", &Json::is_string, "a string", problems);
    require(doc, "message", &Json::is_string, "a string", problems);
    require(doc, "context", &Json::is_object, "an object", problems);
  } else {
    problems.push_back("unknown document kind \"" + std::string(kind) + "\"");
  }
  return problems;
}

}  // namespace ergopt
