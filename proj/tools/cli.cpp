#include "cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ergopt/invariants.hpp"

namespace ergopt::cli {

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    parts.push_back(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return parts;
}

RationalVec parse_rationals(const std::string& text, const char* flag) {
  RationalVec out;
  for (const auto& part : split(text)) {
    try {
      out.push_back(parse_rational(part));
    } catch (const Error&) {
      throw Error(ErrorCode::MalformedInput, std::string("--") + flag + ": \"" + part + "\" is not a rational",
                  {{"flag", flag}, {"value", part}});
    }
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  for (const auto& part : split(text)) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(v)) {
      // Also accept rationals such as "-1/2".
      try {
        out.push_back(to_double(parse_rational(part)));
        continue;
      } catch (const Error&) {
      }
      throw Error(ErrorCode::MalformedInput, std::string("--") + flag + ": \"" + part + "\" is not a number",
                  {{"flag", flag}, {"value", part}});
    }
    out.push_back(v);
  }
  return out;
}

void require_dim(std::size_t got, int want, const char* flag) {
  if (got != static_cast<std::size_t>(want)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string("--") + flag + " has " + std::to_string(got) + " entries, constraint dim is " +
                    std::to_string(want),
                {{"flag", flag}, {"expected", std::to_string(want)}, {"got", std::to_string(got)}});
  }
}

void require_present(const std::string& value, const char* flag, const std::string& command) {
  if (value.empty()) {
    throw Error(ErrorCode::MalformedInput, command + " requires --" + flag, {{"flag", flag}});
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string csv_rationals_header(const char* prefix, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += std::string(prefix) + std::to_string(i) + ",";
  return out;
}

std::string csv_doubles(std::span<const double> v) {
  std::string out;
  for (double x : v) out += format_double(x) + ",";
  return out;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::Infeasible || code == ErrorCode::InfeasibleR ? 2 : 1;
}

int vertex_from_flag(const WeightedDigraph& graph, const std::string& x0) {
  if (x0.empty()) return 0;
  const auto v = graph.find_vertex(parse_word(x0));
  if (!v) {
    throw Error(ErrorCode::MalformedInput, "--x0 \"" + x0 + "\" is not a vertex of the graph",
                {{"flag", "x0"}, {"block_length", std::to_string(graph.block_length())}});
  }
  return *v;
}

// Points lo + (hi - lo) * i / (grid - 1); a single point sits at lo.
template <typename T>
std::vector<std::vector<T>> grid_points(const std::vector<T>& lo, const std::vector<T>& hi, std::size_t grid) {
  std::vector<std::vector<T>> pts;
  for (std::size_t i = 0; i < grid; ++i) {
    std::vector<T> p(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (grid == 1) {
        p[j] = lo[j];
      } else {
        p[j] = lo[j] + (hi[j] - lo[j]) * T(static_cast<long>(i)) / T(static_cast<long>(grid - 1));
      }
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

RotationSet rotation_set_auto(const WeightedDigraph& graph) {
  if (graph.dim() <= 2) {
    try {
      return rotation_set_exact(graph);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::CapExceeded) throw;
    }
  }
  return rotation_set_sampled(graph, default_directions(graph.dim()));
}

int cmd_rotation_set(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  const RotationSet set = rotation_set_auto(graph);
  if (cfg.output == "csv") {
    std::string header = csv_rationals_header("h", graph.dim());
    header.pop_back();
    out << header << "\n";
    for (const auto& v : set.polygon) {
      std::string row = csv_doubles(to_double(v));
      row.pop_back();
      out << row << "\n";
    }
    return 0;
  }
  out << rotation_set_to_json(set).dump(2) << "\n";
  return 0;
}

int cmd_beta(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  require_present(cfg.h, "h", "beta");
  const RationalVec h = parse_rationals(cfg.h, "h");
  require_dim(h.size(), graph.dim(), "h");
  const LpSolution lp = solve_beta_primal(graph, h);
  if (lp.status != LpStatus::Optimal) {
    throw Error(ErrorCode::Infeasible, "h lies outside the rotation set", {{"h", cfg.h}});
  }
  if (cfg.output == "csv") {
    out << csv_rationals_header("h", graph.dim()) << "beta\n";
    out << csv_doubles(to_double(h)) << format_double(lp.value) << "\n";
    return 0;
  }
  out << beta_to_json(graph, h, lp).dump(2) << "\n";
  return 0;
}

int cmd_alpha(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  require_present(cfg.c, "c", "alpha");
  const auto c = parse_reals(cfg.c, "c");
  require_dim(c.size(), graph.dim(), "c");
  const double value = alpha(graph, c);
  const AlphaGradient grad = alpha_gradient(graph, c);
  if (cfg.output == "csv") {
    out << csv_rationals_header("c", graph.dim()) << "alpha\n";
    out << csv_doubles(c) << format_double(value) << "\n";
    return 0;
  }
  Json doc;
  doc["c"] = c;
  doc["alpha"] = value;
  doc["gradient"] = grad.vector;
  doc["unique"] = grad.unique;
  doc["witness"] = cycle_to_json(graph, grad.witness);
  out << doc.dump(2) << "\n";
  return 0;
}

void emit_curve(const RunConfig& cfg, std::ostream& out, const char* coord, const char* name, int dim,
                const std::vector<std::vector<double>>& points, const std::vector<std::optional<double>>& values) {
  if (cfg.output == "csv") {
    out << csv_rationals_header(coord, dim) << name << "\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      out << csv_doubles(points[i]) << (values[i] ? format_double(*values[i]) : "") << "\n";
    }
    return;
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back({{coord, points[i]}, {name, values[i] ? Json(*values[i]) : Json(nullptr)}});
  }
  out << Json{{"points", rows}}.dump(2) << "\n";
}

int cmd_beta_curve(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  RationalVec lo, hi;
  if (cfg.lo.empty() || cfg.hi.empty()) {
    if (graph.dim() != 1) {
      throw Error(ErrorCode::MalformedInput, "beta-curve needs --lo and --hi when dim > 1");
    }
    const auto ext = rotation_set_exact(graph).polygon;
    lo = ext.front();
    hi = ext.back();
  }
  if (!cfg.lo.empty()) lo = parse_rationals(cfg.lo, "lo");
  if (!cfg.hi.empty()) hi = parse_rationals(cfg.hi, "hi");
  require_dim(lo.size(), graph.dim(), "lo");
  require_dim(hi.size(), graph.dim(), "hi");
  const auto points = grid_points(lo, hi, cfg.grid);
  const auto values = sweep(points.size(), cfg.threads, [&](std::size_t i) -> std::optional<double> {
    const LpSolution lp = solve_beta_primal(graph, points[i]);
    if (lp.status != LpStatus::Optimal) return std::nullopt;
    return lp.value;
  });
  std::vector<std::vector<double>> coords;
  for (const auto& p : points) coords.push_back(to_double(p));
  emit_curve(cfg, out, "h", "beta", graph.dim(), coords, values);
  return 0;
}

int cmd_alpha_curve(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  require_present(cfg.lo, "lo", "alpha-curve");
  require_present(cfg.hi, "hi", "alpha-curve");
  const auto lo = parse_reals(cfg.lo, "lo");
  const auto hi = parse_reals(cfg.hi, "hi");
  require_dim(lo.size(), graph.dim(), "lo");
  require_dim(hi.size(), graph.dim(), "hi");
  const auto points = grid_points(lo, hi, cfg.grid);
  const auto values = sweep(points.size(), cfg.threads,
                            [&](std::size_t i) -> std::optional<double> { return alpha(graph, points[i]); });
  emit_curve(cfg, out, "c", "alpha", graph.dim(), points, values);
  return 0;
}

std::vector<double> weight_for(const RunConfig& cfg, const WeightedDigraph& graph) {
  if (cfg.c.empty()) return graph.potential_weights();
  const auto c = parse_reals(cfg.c, "c");
  require_dim(c.size(), graph.dim(), "c");
  return graph.tilted_weights(c);
}

int cmd_subaction(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  const CalibratedSubaction sub = calibrated_subaction(graph, weight_for(cfg, graph));
  const auto contact = contact_locus(graph, sub);
  if (cfg.output == "csv") {
    out << "vertex,u\n";
    for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
      out << csv_field(word_key(graph.vertices()[v])) << "," << format_double(sub.u[v]) << "\n";
    }
    return 0;
  }
  out << subaction_to_json(graph, sub, contact).dump(2) << "\n";
  return 0;
}

int cmd_trajectory(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  std::vector<double> c(static_cast<std::size_t>(graph.dim()), 0.0);
  if (!cfg.c.empty()) {
    c = parse_reals(cfg.c, "c");
    require_dim(c.size(), graph.dim(), "c");
  }
  const int x0 = vertex_from_flag(graph, cfg.x0);
  const DifferentialCheck check = verify_alpha_differential(graph, c, cfg.steps, x0);
  if (cfg.output == "csv") {
    out << "k,error\n";
    for (std::size_t k = 1; k <= check.errors.size(); ++k) {
      out << k << "," << format_double(check.errors[k - 1]) << "\n";
    }
    return 0;
  }
  const CalibratedSubaction sub = calibrated_subaction(graph, graph.tilted_weights(c));
  Json doc = trajectory_to_json(graph, optimal_trajectory(graph, sub, x0, cfg.steps));
  doc["c"] = c;
  doc["gradient"] = check.gradient;
  doc["unique"] = check.unique;
  doc["absorption_step"] = check.absorption_step;
  doc["final_error"] = check.errors.empty() ? Json(nullptr) : Json(check.errors.back());
  out << doc.dump(2) << "\n";
  return 0;
}

int cmd_periodic(const RunConfig& cfg, const WeightedDigraph& graph, std::ostream& out) {
  require_present(cfg.r, "r", "periodic");
  PeriodicQuery query;
  query.r = parse_rationals(cfg.r, "r");
  require_dim(query.r.size(), graph.dim(), "r");
  query.max_period = cfg.max_period;
  query.state_cap = cfg.state_cap;
  const PeriodicResult res = best_periodic_with_rotation(graph, query);
  if (res.status == PeriodicStatus::InfeasibleR) {
    throw Error(ErrorCode::InfeasibleR, "r lies outside the rotation set", {{"r", cfg.r}});
  }
  const LpSolution lp = solve_beta_primal(graph, query.r);
  std::vector<std::optional<double>> gaps;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : res.by_period) {
    if (v) best = std::max(best, *v);
    gaps.push_back(std::isfinite(best) && lp.status == LpStatus::Optimal ? std::optional(lp.value - best)
                                                                         : std::nullopt);
  }
  if (cfg.output == "csv") {
    out << "K,best_value,gap\n";
    for (std::size_t k = 0; k < res.by_period.size(); ++k) {
      out << k + 1 << "," << (res.by_period[k] ? format_double(*res.by_period[k]) : "") << ","
          << (gaps[k] ? format_double(*gaps[k]) : "") << "\n";
    }
    return 0;
  }
  Json doc = periodic_to_json(graph, query.r, query.max_period, res);
  doc["beta"] = lp.status == LpStatus::Optimal ? Json(lp.value) : Json(nullptr);
  Json g = Json::array();
  for (const auto& x : gaps) g.push_back(x ? Json(*x) : Json(nullptr));
  doc["gaps"] = g;
  out << doc.dump(2) << "\n";
  return 0;
}

int cmd_check(const RunConfig& cfg, const SystemSpec& system, std::ostream& out) {
  const CheckReport report = run_invariant_suite(system, cfg.seed, cfg.perturbations);
  if (cfg.output == "csv") {
    out << "family,pass,max_residual,tolerance,cases\n";
    for (const auto& f : report.families) {
      out << f.name << "," << (f.pass ? "true" : "false") << "," << format_double(f.max_residual) << ","
          << format_double(f.tolerance) << "," << f.cases << "\n";
    }
  } else {
    out << check_report_to_json(report).dump(2) << "\n";
  }
  return report.passed ? 0 : 3;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::vector<std::optional<double>> sweep(std::size_t count, unsigned threads,
                                         const std::function<std::optional<double>(std::size_t)>& f) {
  std::vector<std::optional<double>> results(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = f(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : failures) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.output != "json" && cfg.output != "csv") {
      throw Error(ErrorCode::MalformedInput, "--output must be json or csv", {{"flag", "output"}});
    }
    if (cfg.max_period < 1) throw Error(ErrorCode::MalformedInput, "--K must be at least 1", {{"flag", "K"}});
    // Cheap syntax checks before any work.
    if (!cfg.h.empty()) (void)parse_rationals(cfg.h, "h");
    if (!cfg.r.empty()) (void)parse_rationals(cfg.r, "r");
    if (!cfg.c.empty()) (void)parse_reals(cfg.c, "c");
    const SystemSpec system = load_system(cfg.spec_path);
    if (cfg.command == "check") return cmd_check(cfg, system, out);
    const WeightedDigraph graph = build_graph(system);
    if (cfg.command == "rotation-set") return cmd_rotation_set(cfg, graph, out);
    if (cfg.command == "beta") return cmd_beta(cfg, graph, out);
    if (cfg.command == "alpha") return cmd_alpha(cfg, graph, out);
    if (cfg.command == "beta-curve") return cmd_beta_curve(cfg, graph, out);
    if (cfg.command == "alpha-curve") return cmd_alpha_curve(cfg, graph, out);
    if (cfg.command == "subaction") return cmd_subaction(cfg, graph, out);
    if (cfg.command == "trajectory") return cmd_trajectory(cfg, graph, out);
    if (cfg.command == "periodic") return cmd_periodic(cfg, graph, out);
    throw Error(ErrorCode::MalformedInput, "unknown command \"" + cfg.command + "\"");
  } catch (const Error& e) {
    err << error_to_json(e).dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << error_to_json(Error(ErrorCode::InvalidArgument, e.what())).dump() << "\n";
    return 1;
  }
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained ergodic optimization on subshifts of finite type"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv(kThreadsEnv)) {
    unsigned t = 0;
    const std::string_view s(env);
    if (std::from_chars(s.data(), s.data() + s.size(), t).ec == std::errc() && t > 0) cfg.threads = t;
  }
  app.add_option("--spec", cfg.spec_path, "system spec file (JSON)")->required();
  app.add_option("--h", cfg.h, "target rotation vector, e.g. 1/2 or 1/3,0");
  app.add_option("--c", cfg.c, "dual vector, e.g. -2 or 0.5,1");
  app.add_option("--r", cfg.r, "rational rotation vector for periodic search");
  app.add_option("--grid", cfg.grid, "number of sweep points");
  app.add_option("--lo", cfg.lo, "sweep start");
  app.add_option("--hi", cfg.hi, "sweep end");
  app.add_option("--steps", cfg.steps, "trajectory length");
  app.add_option("--K", cfg.max_period, "maximum period");
  app.add_option("--cap", cfg.state_cap, "periodic search state cap");
  app.add_option("--x0", cfg.x0, "trajectory start vertex word, e.g. 0,1");
  app.add_option("--seed", cfg.seed, "seed for check perturbations");
  app.add_option("--perturbations", cfg.perturbations, "perturbed systems checked alongside the spec");
  app.add_option("--output", cfg.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", cfg.threads, std::string("sweep workers (default from ") + kThreadsEnv + ")")
      ->check(CLI::PositiveNumber);
  const std::pair<const char*, const char*> commands[] = {
      {"rotation-set", "exact rotation set"},
      {"beta", "beta(h) with maximizing measure and multipliers"},
      {"alpha", "alpha(c) with witness cycle and gradient"},
      {"beta-curve", "beta on a grid of h (n = 1)"},
      {"alpha-curve", "alpha on a grid of c (n = 1)"},
      {"subaction", "calibrated sub-action of A - <c, phi>"},
      {"trajectory", "optimal trajectory and average errors"},
      {"periodic", "best periodic orbit with rotation r"},
      {"check", "invariant families on the spec and perturbations"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_to_json(Error(ErrorCode::MalformedInput, e.what())).dump() << "\n";
    return 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace ergopt::cli
