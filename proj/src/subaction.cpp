#include "ergopt/subaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "ergopt/beta_alpha.hpp"

namespace ergopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

CalibratedSubaction calibrated_subaction(const WeightedDigraph& graph, std::span<const double> weight) {
  if (!graph.strongly_connected()) {
    throw Error(ErrorCode::NotStronglyConnected, "calibrated sub-actions need a strongly connected graph");
  }
  if (weight.size() != graph.num_edges()) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector does not match the edge count");
  }
  CalibratedSubaction sub;
  sub.base_weight.assign(weight.begin(), weight.end());
  sub.eigenvalue = max_mean_cycle(graph, weight).value;
  const CriticalGraph cg = critical_graph(graph, weight, sub.eigenvalue);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    if (cg.critical_edge[e]) sub.critical_edges.push_back(static_cast<int>(e));
  }

  // Longest normalized walk from the critical set, |V| Bellman sweeps.
  const std::size_t n = graph.num_vertices();
  sub.u.assign(n, kNegInf);
  int anchor = -1;
  for (std::size_t v = 0; v < n; ++v) {
    if (!cg.critical_vertex[v]) continue;
    sub.u[v] = 0.0;
    if (anchor < 0) anchor = static_cast<int>(v);
  }
  for (std::size_t sweep = 0; sweep < n; ++sweep) {
    bool changed = false;
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      const Edge& edge = graph.edges()[e];
      const double from = sub.u[static_cast<std::size_t>(edge.source)];
      if (from == kNegInf) continue;
      double& to = sub.u[static_cast<std::size_t>(edge.target)];
      const double candidate = from + weight[e] - sub.eigenvalue;
      if (candidate > to) {
        to = candidate;
        changed = true;
      }
    }
    if (!changed) break;
  }
  const double shift = sub.u[static_cast<std::size_t>(anchor)];
  for (double& x : sub.u) x -= shift;
  return sub;
}

SubactionResiduals subaction_residuals(const WeightedDigraph& graph, const CalibratedSubaction& sub) {
  SubactionResiduals res;
  res.subaction = kNegInf;
  std::vector<double> incoming(graph.num_vertices(), kNegInf);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    const double lifted = sub.base_weight[e] + sub.u[static_cast<std::size_t>(edge.source)];
    res.subaction = std::max(res.subaction, lifted - sub.u[static_cast<std::size_t>(edge.target)] - sub.eigenvalue);
    incoming[static_cast<std::size_t>(edge.target)] = std::max(incoming[static_cast<std::size_t>(edge.target)], lifted);
  }
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    res.calibration = std::max(res.calibration, std::abs(incoming[v] - sub.eigenvalue - sub.u[v]));
  }
  for (int e : sub.critical_edges) {
    const Edge& edge = graph.edge(e);
    res.critical = std::max(res.critical, std::abs(sub.base_weight[static_cast<std::size_t>(e)] +
                                                   sub.u[static_cast<std::size_t>(edge.source)] -
                                                   sub.u[static_cast<std::size_t>(edge.target)] - sub.eigenvalue));
  }
  return res;
}

std::vector<int> contact_locus(const WeightedDigraph& graph, const CalibratedSubaction& sub, double tol) {
  std::vector<int> out;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    const double gap = sub.base_weight[e] + sub.u[static_cast<std::size_t>(edge.source)] -
                       sub.u[static_cast<std::size_t>(edge.target)] - sub.eigenvalue;
    if (std::abs(gap) <= tol) out.push_back(static_cast<int>(e));
  }
  return out;
}

RationalVec Trajectory::running_phi_mean(std::size_t k) const {
  RationalVec out;
  for (std::int64_t s : scaled_phi_sums.at(k)) {
    out.emplace_back(BigInt(s), BigInt(static_cast<std::int64_t>(k)) * denominator);
  }
  return out;
}

std::vector<double> Trajectory::running_phi_mean_double(std::size_t k) const {
  std::vector<double> out;
  const double scale = static_cast<double>(k) * to_double(Rational(denominator));
  for (std::int64_t s : scaled_phi_sums.at(k)) out.push_back(static_cast<double>(s) / scale);
  return out;
}

double Trajectory::running_potential_mean(std::size_t k) const {
  return potential_sums.at(k) / static_cast<double>(k);
}

Trajectory optimal_trajectory(const WeightedDigraph& graph, const CalibratedSubaction& sub, int x0,
                              std::size_t steps) {
  if (x0 < 0 || static_cast<std::size_t>(x0) >= graph.num_vertices()) {
    throw Error(ErrorCode::InvalidArgument, "start vertex " + std::to_string(x0) + " is not in the graph");
  }
  Trajectory traj;
  traj.denominator = graph.common_denominator();
  traj.vertices.reserve(steps + 1);
  traj.edges.reserve(steps);
  traj.scaled_phi_sums.reserve(steps + 1);
  traj.potential_sums.reserve(steps + 1);
  traj.vertices.push_back(x0);
  traj.scaled_phi_sums.emplace_back(static_cast<std::size_t>(graph.dim()), 0);
  traj.potential_sums.push_back(0.0);

  // The calibrating predecessor depends only on the vertex.
  std::vector<int> choice(graph.num_vertices(), -1);
  for (std::size_t y = 0; y < graph.num_vertices(); ++y) {
    double best = kNegInf;
    for (int e : graph.in_edges(static_cast<int>(y))) {
      best = std::max(best, sub.base_weight[static_cast<std::size_t>(e)] +
                                sub.u[static_cast<std::size_t>(graph.edge(e).source)]);
    }
    for (int e : graph.in_edges(static_cast<int>(y))) {
      const double value = sub.base_weight[static_cast<std::size_t>(e)] +
                           sub.u[static_cast<std::size_t>(graph.edge(e).source)];
      if (value < best - 1e-9) continue;
      if (choice[y] < 0 || graph.edge(e).source < graph.edge(choice[y]).source) choice[y] = e;
    }
  }
  for (std::size_t j = 0; j < steps; ++j) {
    const int e = choice[static_cast<std::size_t>(traj.vertices.back())];
    const Edge& edge = graph.edge(e);
    traj.edges.push_back(e);
    traj.vertices.push_back(edge.source);
    std::vector<std::int64_t> sum = traj.scaled_phi_sums.back();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += edge.scaled_constraint[i];
    traj.scaled_phi_sums.push_back(std::move(sum));
    traj.potential_sums.push_back(traj.potential_sums.back() + edge.potential);
  }
  return traj;
}

DifferentialCheck verify_alpha_differential(const WeightedDigraph& graph, std::span<const double> c,
                                            std::size_t steps, int x0) {
  const AlphaGradient grad = alpha_gradient(graph, c);
  const auto weight = graph.tilted_weights(c);
  const CalibratedSubaction sub = calibrated_subaction(graph, weight);
  const Trajectory traj = optimal_trajectory(graph, sub, x0, steps);

  DifferentialCheck check;
  check.unique = grad.unique;
  check.gradient = grad.vector;
  check.errors.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto mean = traj.running_phi_mean_double(k);
    double s = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) s += (mean[i] - grad.vector[i]) * (mean[i] - grad.vector[i]);
    check.errors.push_back(std::sqrt(s));
  }
  // The next vertex is a function of the current one, so the first
  // repeated vertex closes the terminal cycle.
  std::vector<std::ptrdiff_t> first_seen(graph.num_vertices(), -1);
  check.absorption_step = steps;
  for (std::size_t j = 0; j < traj.vertices.size(); ++j) {
    auto& seen = first_seen[static_cast<std::size_t>(traj.vertices[j])];
    if (seen >= 0) {
      check.absorption_step = static_cast<std::size_t>(seen);
      check.period = j - static_cast<std::size_t>(seen);
      break;
    }
    seen = static_cast<std::ptrdiff_t>(j);
  }
  return check;
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Symbol and edge streams of an orbit, with the constraint mean.
struct Orbit {
  std::vector<int> symbols;
  std::vector<int> edges;
};

double closest_return(const WeightedDigraph& graph, const Orbit& orbit, std::size_t t,
                      std::span<const int> cylinder, const std::vector<double>& mean,
                      std::size_t max_return, double stop_below) {
  const double denom = to_double(Rational(graph.common_denominator()));
  std::vector<std::int64_t> sum(mean.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t len = 1; len <= max_return; ++len) {
    const Edge& edge = graph.edge(orbit.edges[t + len - 1]);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += edge.scaled_constraint[i];
    bool hit = true;
    for (std::size_t j = 0; j < cylinder.size() && hit; ++j) hit = orbit.symbols[t + len + j] == cylinder[j];
    if (!hit) continue;
    double d2 = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      const double diff = static_cast<double>(sum[i]) / denom - static_cast<double>(len) * mean[i];
      d2 += diff * diff;
    }
    best = std::min(best, std::sqrt(d2));
    if (best < stop_below) break;
  }
  return best;
}

bool visits(const Orbit& orbit, std::size_t t, std::span<const int> cylinder) {
  for (std::size_t j = 0; j < cylinder.size(); ++j) {
    if (orbit.symbols[t + j] != cylinder[j]) return false;
  }
  return true;
}

}  // namespace

RecurrenceStats recurrence_defect(const WeightedDigraph& graph, const SamplingSource& source,
                                  std::span<const int> cylinder, const RecurrenceOptions& options) {
  if (cylinder.empty()) throw Error(ErrorCode::InvalidArgument, "cylinder word must be nonempty");
  RecurrenceStats stats;
  const double smallest_eps =
      options.epsilons.empty() ? 0.0 : *std::min_element(options.epsilons.begin(), options.epsilons.end());
  std::vector<double> closest;
  Orbit orbit;

  if (const Cycle* cycle = std::get_if<Cycle>(&source)) {
    stats.mean = to_double(cycle->rotation_vector);
    const std::size_t period = cycle->period();
    const std::size_t length = period + options.max_return + cylinder.size() + 1;
    for (std::size_t t = 0; t < length; ++t) {
      const int e = cycle->edges[t % period];
      orbit.edges.push_back(e);
      orbit.symbols.push_back(graph.edge(e).word.front());
    }
    for (std::size_t t = 0; t < period; ++t) {
      if (!visits(orbit, t, cylinder)) continue;
      closest.push_back(closest_return(graph, orbit, t, cylinder, stats.mean, options.max_return, smallest_eps));
    }
  } else {
    const MarkovChain& chain = std::get<MarkovChain>(source);
    const std::size_t s = chain.states.size();
    std::vector<std::vector<int>> edge_of(s, std::vector<int>(s, -1));
    stats.mean.assign(static_cast<std::size_t>(graph.dim()), 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        if (chain.transition[i][j] <= 0.0) continue;
        const auto e = graph.find_edge(chain.states[i], chain.states[j]);
        if (!e) throw Error(ErrorCode::InvalidArgument, "Markov transition is not a graph edge");
        edge_of[i][j] = *e;
        const double mass = chain.stationary[i] * chain.transition[i][j];
        for (std::size_t d = 0; d < stats.mean.size(); ++d) {
          stats.mean[d] += mass * graph.edge(*e).constraint_value[d];
        }
      }
    }
    std::mt19937_64 rng(options.seed);
    auto draw = [&](const std::vector<double>& probs) {
      const double x = uniform01(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (x < acc) return i;
      }
      std::size_t last = probs.size() - 1;
      while (last > 0 && probs[last] <= 0.0) --last;
      return last;
    };
    // Each visit starts an independent orbit drawn from the stationary
    // measure conditioned on the cylinder (rejection sampling).
    const std::size_t horizon = options.max_return + cylinder.size() + 1;
    std::size_t attempts = 0;
    while (closest.size() < options.samples && attempts < options.max_attempts) {
      ++attempts;
      orbit.edges.clear();
      orbit.symbols.clear();
      std::size_t state = draw(chain.stationary);
      auto extend = [&](std::size_t length) {
        while (orbit.symbols.size() < length) {
          const std::size_t next = draw(chain.transition[state]);
          const int e = edge_of[state][next];
          orbit.edges.push_back(e);
          orbit.symbols.push_back(graph.edge(e).word.front());
          state = next;
        }
      };
      extend(cylinder.size());
      if (!visits(orbit, 0, cylinder)) continue;
      extend(horizon + 1);
      closest.push_back(closest_return(graph, orbit, 0, cylinder, stats.mean, options.max_return, smallest_eps));
    }
  }

  stats.visits = closest.size();
  if (closest.empty()) {
    stats.status = RecurrenceStatus::NoVisits;
    return stats;
  }
  for (double eps : options.epsilons) {
    const auto good = std::count_if(closest.begin(), closest.end(), [eps](double d) { return d < eps; });
    stats.fraction_by_epsilon.emplace_back(eps, static_cast<double>(good) / static_cast<double>(closest.size()));
  }
  return stats;
}

}  // namespace ergopt
