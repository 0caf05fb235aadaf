#include "ergopt/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergopt/beta_alpha.hpp"
#include "ergopt/measure_lp.hpp"

namespace ergopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Is r inside the rotation set? n = 1 uses the extreme cycles, n = 2 the
// exact polygon, falling back to sampled support values.
bool rotation_feasible(const WeightedDigraph& graph, const RationalVec& r) {
  if (graph.dim() == 1) {
    const std::vector<double> up{1.0};
    const Rational hi = max_mean_cycle(graph, graph.constraint_weights(up)).witness.rotation_vector[0];
    const Rational lo = min_mean_cycle(graph, graph.constraint_weights(up)).witness.rotation_vector[0];
    return lo <= r[0] && r[0] <= hi;
  }
  if (graph.dim() == 2) {
    try {
      const RotationSet set = rotation_set_exact(graph, 100'000);
      const auto& poly = set.polygon;
      if (poly.size() == 1) return poly[0] == r;
      if (poly.size() == 2) {
        const Rational cr = (poly[1][0] - poly[0][0]) * (r[1] - poly[0][1]) -
                            (poly[1][1] - poly[0][1]) * (r[0] - poly[0][0]);
        if (cr != 0) return false;
        return std::min(poly[0][0], poly[1][0]) <= r[0] && r[0] <= std::max(poly[0][0], poly[1][0]) &&
               std::min(poly[0][1], poly[1][1]) <= r[1] && r[1] <= std::max(poly[0][1], poly[1][1]);
      }
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        if ((b[0] - a[0]) * (r[1] - a[1]) - (b[1] - a[1]) * (r[0] - a[0]) < 0) return false;
      }
      return true;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::CapExceeded) throw;
    }
  }
  const auto rd = to_double(r);
  for (const auto& dir : default_directions(graph.dim())) {
    const MeanCycle best = max_mean_cycle(graph, graph.constraint_weights(dir));
    double at_r = 0.0;
    for (std::size_t i = 0; i < rd.size(); ++i) at_r += dir[i] * rd[i];
    if (at_r > best.value + 1e-12) return false;
  }
  return true;
}

}  // namespace

PeriodicResult best_periodic_with_rotation(const WeightedDigraph& graph, const PeriodicQuery& query) {
  const std::size_t n = static_cast<std::size_t>(graph.dim());
  if (query.r.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "r has dimension " + std::to_string(query.r.size()) +
                                                  ", constraint has " + std::to_string(n));
  }
  if (query.max_period < 1) throw Error(ErrorCode::InvalidArgument, "max period K must be >= 1");
  if (n > 2) {
    throw Error(ErrorCode::CapExceeded, "exact periodic search is limited to n <= 2",
                {{"dim", std::to_string(n)}});
  }
  const std::size_t K = query.max_period;
  PeriodicResult result;
  result.by_period.assign(K, std::nullopt);
  if (!rotation_feasible(graph, query.r)) {
    result.status = PeriodicStatus::InfeasibleR;
    return result;
  }

  // Offsets move by q*(Q*phi_e) - Q*(q*r) per edge, an integer vector.
  BigInt q = 1;
  for (const auto& x : query.r) q = lcm(q, boost::multiprecision::denominator(x));
  const BigInt& Q = graph.common_denominator();
  std::vector<std::int64_t> target(n);
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = checked_int64(boost::multiprecision::numerator(query.r[i] * Rational(q * Q)));
  }
  const std::int64_t q64 = checked_int64(q);
  std::vector<std::vector<std::int64_t>> step(graph.num_edges(), std::vector<std::int64_t>(n));
  std::vector<std::int64_t> reach(n, 0);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    for (std::size_t i = 0; i < n; ++i) {
      step[e][i] = checked_int64(BigInt(q64) * graph.edges()[e].scaled_constraint[i] - target[i]);
      reach[i] = std::max(reach[i], step[e][i] < 0 ? -step[e][i] : step[e][i]);
    }
  }
  // A closed walk of length <= K never strays beyond (K/2) * reach.
  std::vector<std::int64_t> radius(n);
  BigInt states = BigInt(K + 1) * graph.num_vertices();
  for (std::size_t i = 0; i < n; ++i) {
    radius[i] = static_cast<std::int64_t>(K / 2) * reach[i];
    states *= 2 * radius[i] + 1;
  }
  if (states > query.state_cap) {
    throw Error(ErrorCode::CapExceeded, "periodic search needs " + states.str() + " states",
                {{"states", states.str()}, {"state_cap", std::to_string(query.state_cap)},
                 {"max_period", std::to_string(K)}});
  }
  const std::size_t width0 = static_cast<std::size_t>(2 * radius[0] + 1);
  const std::size_t width1 = n == 2 ? static_cast<std::size_t>(2 * radius[1] + 1) : 1;
  const std::size_t offsets = width0 * width1;
  const std::size_t nv = graph.num_vertices();
  auto offset_index = [&](std::int64_t t0, std::int64_t t1) -> std::ptrdiff_t {
    if (t0 < -radius[0] || t0 > radius[0]) return -1;
    if (n == 2 && (t1 < -radius[1] || t1 > radius[1])) return -1;
    const auto i0 = static_cast<std::size_t>(t0 + radius[0]);
    const auto i1 = n == 2 ? static_cast<std::size_t>(t1 + radius[1]) : 0;
    return static_cast<std::ptrdiff_t>(i0 * width1 + i1);
  };

  // best_to_start[j][v][t]: heaviest walk of j edges from v back to the
  // start vertex whose offsets sum to -t, over vertices >= start.
  std::vector<double> table((K + 1) * nv * offsets);
  auto cell = [&](std::size_t j, std::size_t v, std::size_t t) -> double& {
    return table[(j * nv + v) * offsets + t];
  };

  double best_value = kNegInf;
  std::size_t best_period = 0;
  for (std::size_t start = 0; start < nv; ++start) {
    std::fill(table.begin(), table.end(), kNegInf);
    cell(0, start, static_cast<std::size_t>(offset_index(0, 0))) = 0.0;
    for (std::size_t j = 1; j <= K; ++j) {
      for (std::size_t v = start; v < nv; ++v) {
        for (int e : graph.out_edges(static_cast<int>(v))) {
          const Edge& edge = graph.edge(e);
          const auto w = static_cast<std::size_t>(edge.target);
          if (w < start) continue;
          const auto& d = step[static_cast<std::size_t>(e)];
          // j remaining edges can only undo an offset of j * reach.
          const std::int64_t span0 = std::min<std::int64_t>(radius[0], static_cast<std::int64_t>(j) * reach[0]);
          const std::int64_t span1 =
              n == 2 ? std::min<std::int64_t>(radius[1], static_cast<std::int64_t>(j) * reach[1]) : 0;
          for (std::int64_t t0 = -span0; t0 <= span0; ++t0) {
            for (std::int64_t t1 = -span1; t1 <= span1; ++t1) {
              const auto next = offset_index(t0 + d[0], n == 2 ? t1 + d[1] : 0);
              if (next < 0) continue;
              const double rest = cell(j - 1, w, static_cast<std::size_t>(next));
              if (rest == kNegInf) continue;
              double& here = cell(j, v, static_cast<std::size_t>(offset_index(t0, t1)));
              here = std::max(here, edge.potential + rest);
            }
          }
        }
      }
    }
    const auto zero = static_cast<std::size_t>(offset_index(0, 0));
    for (std::size_t m = 1; m <= K; ++m) {
      const double sum = cell(m, start, zero);
      if (sum == kNegInf) continue;
      const double mean = sum / static_cast<double>(m);
      auto& slot = result.by_period[m - 1];
      if (!slot || mean > *slot) slot = mean;
      if (mean <= best_value + 1e-12) continue;
      // Rebuild the lexicographically smallest optimal walk.
      std::vector<int> walk;
      std::size_t v = start;
      std::int64_t t0 = 0, t1 = 0;
      for (std::size_t j = m; j > 0; --j) {
        const double want = cell(j, v, static_cast<std::size_t>(offset_index(t0, t1)));
        int chosen = -1;
        for (int e : graph.out_edges(static_cast<int>(v))) {
          const Edge& edge = graph.edge(e);
          if (static_cast<std::size_t>(edge.target) < start) continue;
          const auto& d = step[static_cast<std::size_t>(e)];
          const auto next = offset_index(t0 + d[0], n == 2 ? t1 + d[1] : 0);
          if (next < 0) continue;
          const double rest = cell(j - 1, static_cast<std::size_t>(edge.target), static_cast<std::size_t>(next));
          if (rest == kNegInf) continue;
          if (edge.potential + rest >= want - 1e-12 * std::max(1.0, std::abs(want))) {
            chosen = e;
            break;
          }
        }
        const auto& d = step[static_cast<std::size_t>(chosen)];
        t0 += d[0];
        if (n == 2) t1 += d[1];
        walk.push_back(chosen);
        v = static_cast<std::size_t>(graph.edge(chosen).target);
      }
      result.orbit = make_cycle(graph, std::move(walk));
      best_value = mean;
      best_period = m;
    }
  }
  if (result.orbit) {
    result.status = PeriodicStatus::Found;
    result.best_value = result.orbit->mean_potential;
  }
  (void)best_period;
  return result;
}

std::vector<double> periodic_beta_gap(const WeightedDigraph& graph, std::span<const Rational> r,
                                      std::size_t max_period) {
  const LpSolution beta = solve_beta_primal(graph, r);
  if (beta.status != LpStatus::Optimal) {
    throw Error(ErrorCode::InfeasibleR, "r lies outside the rotation set");
  }
  PeriodicQuery query;
  query.r.assign(r.begin(), r.end());
  query.max_period = max_period;
  const PeriodicResult res = best_periodic_with_rotation(graph, query);
  if (res.status == PeriodicStatus::InfeasibleR) {
    throw Error(ErrorCode::InfeasibleR, "r lies outside the rotation set");
  }
  std::vector<double> gaps;
  double best = kNegInf;
  for (const auto& value : res.by_period) {
    if (value) best = std::max(best, *value);
    gaps.push_back(best == kNegInf ? std::numeric_limits<double>::infinity() : beta.value - best);
  }
  return gaps;
}

namespace {

bool affinely_spanning(std::vector<RationalVec> points, std::size_t dim) {
  if (points.empty()) return false;
  std::vector<RationalVec> rows;
  for (std::size_t i = 1; i < points.size(); ++i) rows.push_back(subtract(points[i], points[0]));
  // Exact Gaussian elimination rank.
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t k = 0; k < dim; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank == dim;
}

bool strictly_interior(const WeightedDigraph& graph, const RationalVec& r) {
  if (graph.dim() == 1) {
    const std::vector<double> up{1.0};
    const Rational hi = max_mean_cycle(graph, graph.constraint_weights(up)).witness.rotation_vector[0];
    const Rational lo = min_mean_cycle(graph, graph.constraint_weights(up)).witness.rotation_vector[0];
    return lo < r[0] && r[0] < hi;
  }
  if (graph.dim() == 2) {
    try {
      const auto poly = rotation_set_exact(graph, 100'000).polygon;
      if (poly.size() < 3) return false;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        if ((b[0] - a[0]) * (r[1] - a[1]) - (b[1] - a[1]) * (r[0] - a[0]) <= 0) return false;
      }
      return true;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::CapExceeded) throw;
    }
  }
  return certify_interior(graph, to_double(r)).margin > 0.0;
}

}  // namespace

PeriodicApproximation alpha_periodic_approx(const WeightedDigraph& graph, std::span<const double> c,
                                            bool want_interior, double epsilon) {
  auto weight = graph.constraint_weights(c);
  for (std::size_t e = 0; e < weight.size(); ++e) weight[e] -= graph.edges()[e].potential;
  const MeanCycle best = min_mean_cycle(graph, weight);
  PeriodicApproximation approx{best.witness.rotation_vector, best.witness, best.value};
  if (!want_interior) return approx;

  const auto directions = default_directions(graph.dim());
  std::vector<Cycle> extremes;
  for (const auto& dir : directions) {
    Cycle w = max_mean_cycle(graph, graph.constraint_weights(dir)).witness;
    if (std::find(extremes.begin(), extremes.end(), w) == extremes.end()) extremes.push_back(std::move(w));
  }
  std::vector<RationalVec> extreme_points;
  for (const auto& cyc : extremes) extreme_points.push_back(cyc.rotation_vector);
  const bool degenerate =
      graph.dim() == 1
          ? is_cohomologous_to_constant(graph, graph.constraint_weights(std::vector<double>{1.0}))
          : !affinely_spanning(extreme_points, static_cast<std::size_t>(graph.dim()));
  if (degenerate) {
    throw Error(ErrorCode::DegenerateRotationSet, "the rotation set has empty interior");
  }
  if (strictly_interior(graph, approx.r)) return approx;

  // Closed walk through every extreme cycle; its rotation vector is a
  // strictly positive combination of them, hence interior.
  const Cycle& witness = best.witness;
  const int home = graph.edge(witness.edges.front()).source;
  std::vector<int> tail;
  int at = home;
  for (const auto& cyc : extremes) {
    const int entry = graph.edge(cyc.edges.front()).source;
    for (int e : shortest_path_edges(graph, at, entry)) tail.push_back(e);
    tail.insert(tail.end(), cyc.edges.begin(), cyc.edges.end());
    at = entry;
  }
  for (int e : shortest_path_edges(graph, at, home)) tail.push_back(e);

  double tail_sum = 0.0;
  for (int e : tail) tail_sum += weight[static_cast<std::size_t>(e)];
  const auto m = static_cast<double>(witness.period());
  const auto l = static_cast<double>(tail.size());
  const double excess = tail_sum - l * best.value;
  double copies = std::max(1.0, std::ceil((excess / epsilon - l) / m) + 1.0);
  if (copies * m > 5e7) {
    throw Error(ErrorCode::InvalidArgument, "epsilon too small for an explicit spliced orbit",
                {{"epsilon", std::to_string(epsilon)}});
  }
  std::vector<int> edges;
  for (std::size_t k = 0; k < static_cast<std::size_t>(copies); ++k) {
    edges.insert(edges.end(), witness.edges.begin(), witness.edges.end());
  }
  edges.insert(edges.end(), tail.begin(), tail.end());
  approx.orbit = make_cycle(graph, std::move(edges));
  approx.r = approx.orbit.rotation_vector;
  approx.value = approx.orbit.mean(weight);
  return approx;
}

}  // namespace ergopt
