#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ergopt/cycles.hpp"
#include "ergopt/graph.hpp"
#include "ergopt/measure_lp.hpp"

namespace ergopt {

struct SupportSample {
  std::vector<double> direction;
  // max over invariant measures of <direction, rotation vector>.
  double value = 0.0;
  RationalVec witness;
};

// The rotation set phi_*(M). When exact, `polygon` holds its vertices:
// ascending for n = 1, counterclockwise for n = 2 (degenerate hulls
// collapse to a segment or a point).
struct RotationSet {
  int dim = 0;
  std::vector<SupportSample> support_samples;
  std::vector<RationalVec> polygon;
  bool exact = false;
};

// Convex hull of all simple-cycle rotation vectors. Requires n <= 2;
// throws CapExceeded if enumeration overflows.
RotationSet rotation_set_exact(const WeightedDigraph& graph, std::size_t cap = kDefaultCycleCap);
// Support function along the given directions via maximum mean cycles.
RotationSet rotation_set_sampled(const WeightedDigraph& graph,
                                 const std::vector<std::vector<double>>& directions);

// Uniform angular grid for n = 2, {-1, +1} for n = 1, seeded random unit
// vectors otherwise.
std::vector<std::vector<double>> default_directions(int dim, int count = 64,
                                                    std::uint64_t seed = 0x5eed);

// Exact convex hull of rational points (n = 1 or 2).
std::vector<RationalVec> convex_hull(std::vector<RationalVec> points);
// Hausdorff distance between two exact hulls of the same dimension.
double hausdorff_distance(const std::vector<RationalVec>& p, const std::vector<RationalVec>& q);

// alpha(c) = min over invariant measures of integral (<c, phi> - A).
double alpha(const WeightedDigraph& graph, std::span<const double> c);

struct InteriorCertificate {
  bool interior = false;
  // min over sampled unit directions of support(c) - <c, h>.
  double margin = 0.0;
};
InteriorCertificate certify_interior(const WeightedDigraph& graph, std::span<const double> h);

struct BetaDualOptions {
  double tol = 1e-9;
  int max_iters = 500;
};

// beta(h) = inf_c [ <c, h> + max mean of (a_e - <c, phi_e>) ] by a cutting
// plane method. Throws NotInterior for h not certified interior and
// MaxIters (with the best bound in the context) on non-convergence.
double beta_dual(const WeightedDigraph& graph, std::span<const Rational> h,
                 BetaDualOptions options = {});

struct AlphaGradient {
  std::vector<double> vector;
  bool unique = false;
  Cycle witness;
};

// Differential of alpha at c when the maximizing face of A - <c, phi>
// has a single rotation vector (face extents within 1e-8).
AlphaGradient alpha_gradient(const WeightedDigraph& graph, std::span<const double> c);

struct FenchelRecord {
  RationalVec h;
  std::vector<double> c;
  double beta_h = 0.0;
  double alpha_c = 0.0;
  // <c, h> - beta(h) - alpha(c); nonnegative up to round-off.
  double gap = 0.0;
};

// Throws Infeasible when h lies outside the rotation set.
FenchelRecord fenchel_check(const WeightedDigraph& graph, std::span<const Rational> h,
                            std::span<const double> c);

// For a locally constant weight: cohomologous to a constant iff every
// cycle has the same mean.
bool is_cohomologous_to_constant(const WeightedDigraph& graph, std::span<const double> weight);

}  // namespace ergopt
