#include "ergopt/beta_alpha.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ergopt/simplex.hpp"

namespace ergopt {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_dim(const WeightedDigraph& graph, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(graph.dim())) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has dimension " + std::to_string(size) +
                                                  ", constraint has " + std::to_string(graph.dim()));
  }
}

Rational cross(const RationalVec& o, const RationalVec& a, const RationalVec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

using Point = std::array<double, 2>;

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b[0] - a[0];
  const double dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2, 0.0, 1.0);
  return std::hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

double distance_to_hull(const Point& p, const std::vector<Point>& hull) {
  if (hull.size() == 1) return std::hypot(p[0] - hull[0][0], p[1] - hull[0][1]);
  if (hull.size() == 2) return point_segment_distance(p, hull[0], hull[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % hull.size()];
    const double side = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if (side < 0.0) inside = false;
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

}  // namespace

std::vector<std::vector<double>> default_directions(int dim, int count, std::uint64_t seed) {
  std::vector<std::vector<double>> dirs;
  if (dim == 1) return {{-1.0}, {1.0}};
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / count;
      dirs.push_back({std::cos(angle), std::sin(angle)});
    }
    return dirs;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < count; ++k) {
    std::vector<double> d(static_cast<std::size_t>(dim));
    double norm = 0.0;
    do {
      for (double& x : d) x = normal(rng);
      norm = std::sqrt(dot(d, d));
    } while (norm == 0.0);
    for (double& x : d) x /= norm;
    dirs.push_back(std::move(d));
  }
  return dirs;
}

std::vector<RationalVec> convex_hull(std::vector<RationalVec> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() <= 1) return points;
  const std::size_t dim = points.front().size();
  if (dim == 1) return {points.front(), points.back()};
  if (dim != 2) throw Error(ErrorCode::InvalidArgument, "exact hulls are only available for n <= 2");
  // Andrew's monotone chain; collinear points dropped.
  std::vector<RationalVec> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

double hausdorff_distance(const std::vector<RationalVec>& p, const std::vector<RationalVec>& q) {
  if (p.empty() || q.empty()) throw Error(ErrorCode::InvalidArgument, "empty hull");
  const std::size_t dim = p.front().size();
  if (q.front().size() != dim) throw Error(ErrorCode::DimensionMismatch, "hulls of different dimension");
  if (dim == 1) {
    const double plo = to_double(p.front()[0]), phi = to_double(p.back()[0]);
    const double qlo = to_double(q.front()[0]), qhi = to_double(q.back()[0]);
    return std::max(std::abs(plo - qlo), std::abs(phi - qhi));
  }
  auto to_points = [](const std::vector<RationalVec>& h) {
    std::vector<Point> out;
    for (const auto& v : h) out.push_back({to_double(v[0]), to_double(v[1])});
    return out;
  };
  const auto pp = to_points(p);
  const auto qq = to_points(q);
  double d = 0.0;
  for (const auto& x : pp) d = std::max(d, distance_to_hull(x, qq));
  for (const auto& x : qq) d = std::max(d, distance_to_hull(x, pp));
  return d;
}

RotationSet rotation_set_sampled(const WeightedDigraph& graph,
                                 const std::vector<std::vector<double>>& directions) {
  RotationSet set;
  set.dim = graph.dim();
  for (const auto& dir : directions) {
    require_dim(graph, dir.size(), "direction");
    const MeanCycle best = max_mean_cycle(graph, graph.constraint_weights(dir));
    set.support_samples.push_back({dir, best.value, best.witness.rotation_vector});
  }
  return set;
}

RotationSet rotation_set_exact(const WeightedDigraph& graph, std::size_t cap) {
  if (graph.dim() > 2) {
    throw Error(ErrorCode::InvalidArgument, "exact rotation sets require n <= 2",
                {{"dim", std::to_string(graph.dim())}});
  }
  const auto cycles = enumerate_simple_cycles(graph, cap);
  std::vector<RationalVec> points;
  points.reserve(cycles.size());
  for (const auto& c : cycles) points.push_back(c.rotation_vector);
  RotationSet set = rotation_set_sampled(graph, default_directions(graph.dim()));
  set.polygon = convex_hull(std::move(points));
  set.exact = true;
  return set;
}

double alpha(const WeightedDigraph& graph, std::span<const double> c) {
  require_dim(graph, c.size(), "c");
  auto w = graph.constraint_weights(c);
  for (std::size_t e = 0; e < w.size(); ++e) w[e] -= graph.edges()[e].potential;
  return min_mean_cycle(graph, w).value;
}

InteriorCertificate certify_interior(const WeightedDigraph& graph, std::span<const double> h) {
  require_dim(graph, h.size(), "h");
  InteriorCertificate cert;
  cert.margin = std::numeric_limits<double>::infinity();
  for (const auto& dir : default_directions(graph.dim())) {
    const double support = max_mean_cycle(graph, graph.constraint_weights(dir)).value;
    cert.margin = std::min(cert.margin, support - dot(dir, h));
  }
  cert.interior = cert.margin > 1e-8;
  return cert;
}

double beta_dual(const WeightedDigraph& graph, std::span<const Rational> h_exact, BetaDualOptions options) {
  require_dim(graph, h_exact.size(), "h");
  const std::vector<double> h = to_double(h_exact);
  const InteriorCertificate cert = certify_interior(graph, h);
  if (!cert.interior) {
    throw Error(ErrorCode::NotInterior, "h is not certified interior to the rotation set",
                {{"margin", std::to_string(cert.margin)}});
  }
  const std::size_t n = h.size();
  const double radius = 2.0 * (1.0 + graph.potential_norm()) / cert.margin;

  // g(c) = <c, h> + max mean of (a - <c, phi>) = max over cycles of
  // mean_a + <c, h - rot>; every oracle call returns one exact piece.
  struct Cut {
    std::vector<double> slope;
    double offset;
  };
  std::vector<Cut> cuts;
  auto evaluate = [&](const std::vector<double>& c) {
    const MeanCycle best = max_mean_cycle(graph, graph.tilted_weights(c));
    Cut cut{h, best.witness.mean_potential};
    const auto rot = to_double(best.witness.rotation_vector);
    for (std::size_t i = 0; i < n; ++i) cut.slope[i] -= rot[i];
    cuts.push_back(std::move(cut));
    return dot(c, h) + best.value;
  };

  std::vector<double> c(n, 0.0);
  double upper = evaluate(c);
  double lower = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < options.max_iters; ++iter) {
    // Master: min t s.t. t >= offset + <slope, c>, |c_i| <= radius, with
    // c = z - radius, z in [0, 2 radius], t = t_plus - t_minus.
    lp::LinearProgram master;
    master.num_vars = n + 2;
    master.maximize = false;
    master.objective.assign(n + 2, 0.0);
    master.objective[n] = 1.0;
    master.objective[n + 1] = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(n + 2, 0.0);
      row[i] = 1.0;
      master.add_row(std::move(row), lp::RowSense::LessEqual, 2.0 * radius);
    }
    for (const auto& cut : cuts) {
      std::vector<double> row(n + 2, 0.0);
      double rhs = cut.offset;
      for (std::size_t i = 0; i < n; ++i) {
        row[i] = -cut.slope[i];
        rhs -= cut.slope[i] * radius;
      }
      row[n] = 1.0;
      row[n + 1] = -1.0;
      master.add_row(std::move(row), lp::RowSense::GreaterEqual, rhs);
    }
    const lp::Result res = lp::solve(master, 1e-11);
    if (res.status != lp::Status::Optimal) {
      throw Error(ErrorCode::MaxIters, "cutting-plane master program failed",
                  {{"best_bound", std::to_string(upper)}});
    }
    lower = res.value;
    for (std::size_t i = 0; i < n; ++i) c[i] = res.x[i] - radius;
    // Every minimizer has |c| <= 2 |A| / margin, so the box lower bound is global.
    if (upper - lower <= std::max(options.tol, 1e-12 * (1.0 + std::abs(upper)))) return upper;
    upper = std::min(upper, evaluate(c));
  }
  throw Error(ErrorCode::MaxIters, "cutting-plane method did not converge",
              {{"best_bound", std::to_string(upper)}, {"lower_bound", std::to_string(lower)}});
}

AlphaGradient alpha_gradient(const WeightedDigraph& graph, std::span<const double> c) {
  require_dim(graph, c.size(), "c");
  const auto extents = maximizing_face_extents(graph, c);
  AlphaGradient grad;
  grad.unique = std::all_of(extents.begin(), extents.end(), [](const Extent& e) { return e.width() <= 1e-8; });
  grad.witness = max_mean_cycle(graph, graph.tilted_weights(c)).witness;
  grad.vector = to_double(grad.witness.rotation_vector);
  return grad;
}

FenchelRecord fenchel_check(const WeightedDigraph& graph, std::span<const Rational> h,
                            std::span<const double> c) {
  require_dim(graph, c.size(), "c");
  const LpSolution beta = solve_beta_primal(graph, h);
  if (beta.status != LpStatus::Optimal) {
    throw Error(ErrorCode::Infeasible, "h lies outside the rotation set");
  }
  FenchelRecord rec;
  rec.h.assign(h.begin(), h.end());
  rec.c.assign(c.begin(), c.end());
  rec.beta_h = beta.value;
  rec.alpha_c = alpha(graph, c);
  rec.gap = dot(c, to_double(h)) - rec.beta_h - rec.alpha_c;
  return rec;
}

bool is_cohomologous_to_constant(const WeightedDigraph& graph, std::span<const double> weight) {
  const double hi = max_mean_cycle(graph, weight).value;
  const double lo = min_mean_cycle(graph, weight).value;
  return hi - lo <= 1e-10;
}

}  // namespace ergopt
