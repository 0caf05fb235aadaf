#include <cmath>

#include "ergopt/invariants.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace testing;

namespace {

PeriodicResult search(const WeightedDigraph& g, RationalVec r, std::size_t k) {
  PeriodicQuery query;
  query.r = std::move(r);
  query.max_period = k;
  return best_periodic_with_rotation(g, query);
}

// qQ S_M phi - M qQ r computed from scratch in integers.
bool exact_offset_zero(const WeightedDigraph& g, const Cycle& orbit, const RationalVec& r) {
  RationalVec sum = zero_vector(r.size());
  for (int e : orbit.edges) sum = add(sum, g.edge(e).constraint);
  return sum == scale(Rational(static_cast<long>(orbit.period())), r);
}

}  // namespace

TEST_CASE("periodic search examples") {
  // A = 1 on the word 0,1; phi = 1_[0].
  const SystemSpec sys{SftSpec(2), Potential(1, 0.0, {{{0, 1}, 1.0}}),
                       Constraint(0, RationalVec{q(0)}, {{{0}, RationalVec{q(1)}}})};
  const auto g = build_graph(sys);
  const auto res = search(g, {q(1, 2)}, 2);
  REQUIRE(res.status == PeriodicStatus::Found);
  CHECK(res.orbit->symbols(g) == Word{0, 1});
  CHECK(res.best_value == 0.5);
  CHECK(res.best_value == res.orbit->mean_potential);

  const auto ex = build_graph(three_shift_example());
  const auto fixed = search(ex, {q(1)}, 1);
  REQUIRE(fixed.status == PeriodicStatus::Found);
  CHECK(fixed.orbit->symbols(ex) == Word{0});
  CHECK(fixed.best_value == 0.0);

  const auto two = build_graph(two_shift(1.0, 0.0, q(1), q(0)));
  CHECK(search(two, {q(3, 2)}, 4).status == PeriodicStatus::InfeasibleR);
  CHECK(search(two, {q(-1, 2)}, 4).status == PeriodicStatus::InfeasibleR);
  CHECK(search(two, {q(1, 3)}, 2).status == PeriodicStatus::NotFoundUpToK);
}

TEST_CASE("periodic beta gap examples") {
  const auto ex = build_graph(three_shift_example());
  const auto gaps = periodic_beta_gap(ex, RationalVec{q(0)}, 2);
  CHECK(std::abs(gaps[0] - 1.0) <= 1e-9);
  CHECK(std::abs(gaps[1]) <= 1e-9);

  const auto two = build_graph(two_shift(1.0, 0.0, q(1), q(0)));
  const auto third = periodic_beta_gap(two, RationalVec{q(1, 3)}, 3);
  CHECK(std::abs(third[2]) <= 1e-9);
  CHECK_THROWS_AS(periodic_beta_gap(two, RationalVec{q(2)}, 3), Error);
}

TEST_CASE("ties prefer shorter periods then smaller words") {
  // Constant potential: every orbit with rotation 1/2 ties.
  const auto g = build_graph(two_shift(0.0, 0.0, q(1), q(0)));
  const auto res = search(g, {q(1, 2)}, 6);
  REQUIRE(res.status == PeriodicStatus::Found);
  CHECK(res.orbit->symbols(g) == Word{0, 1});
}

TEST_CASE("state cap and dimension limits") {
  const auto g = build_graph(three_shift_example());
  PeriodicQuery query;
  query.r = {q(1, 7)};
  query.max_period = 200;
  query.state_cap = 1000;
  try {
    best_periodic_with_rotation(g, query);
    FAIL("expected CapExceeded");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::CapExceeded);
    CHECK(err.context().count("states") == 1);
  }
  const SystemSpec three{SftSpec(2), Potential(0, 0.0), Constraint(0, RationalVec{q(0), q(0), q(1)})};
  CHECK_THROWS_AS(search(build_graph(three), {q(0), q(0), q(1)}, 2), Error);
}

TEST_CASE("dynamic program equals brute force over periodic words") {
  Rng rng(51);
  for (int inst = 0; inst < 30; ++inst) {
    InstanceOptions opt;
    opt.max_alphabet = 3;
    opt.max_depth = 1;
    opt.max_denominator = 2;
    opt.dim = 1 + inst % 2;
    const auto sys = random_system(rng, opt);
    const auto g = build_graph(sys);
    const std::size_t k = opt.dim == 1 ? 8 : 6;
    for (const auto& r : sample_feasible_targets(g, rng, 2)) {
      const auto res = search(g, r, k);
      const auto ref = oracle::best_periodic(sys, r, k);
      CHECK((res.status == PeriodicStatus::Found) == ref.has_value());
      if (res.status == PeriodicStatus::Found && ref) {
        CHECK(std::abs(res.best_value - *ref) <= 1e-12);
        CHECK(exact_offset_zero(g, *res.orbit, r));
        CHECK(res.orbit->rotation_vector == r);
        CHECK(res.best_value <= solve_beta_primal(g, r).value + 1e-9);
      }
    }
  }
}

TEST_CASE("gap sequence is nonincreasing and nonnegative") {
  Rng rng(52);
  for (int inst = 0; inst < 15; ++inst) {
    InstanceOptions opt;
    opt.max_denominator = 1;
    const auto g = build_graph(random_system(rng, opt));
    for (const auto& r : sample_feasible_targets(g, rng, 2)) {
      const auto gaps = periodic_beta_gap(g, r, 24);
      for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (std::isinf(gaps[i])) continue;
        CHECK(gaps[i] >= -1e-9);
        if (i + 1 < gaps.size()) CHECK(gaps[i + 1] <= gaps[i] + 1e-12);
      }
    }
  }
}

TEST_CASE("alpha periodic approximation") {
  const auto ex = build_graph(three_shift_example());
  const auto a0 = alpha_periodic_approx(ex, std::vector<double>{0.0}, false);
  CHECK(a0.r == RationalVec{q(0)});
  CHECK(a0.value == -1.0);
  CHECK(a0.orbit.symbols(ex) == Word{1, 2});

  const SftSpec spec(2);
  const auto cob = add_coboundary(spec, Constraint(0, RationalVec{q(0)}),
                                  Constraint(0, RationalVec{q(0)}, {{{0}, RationalVec{q(1)}}}), RationalVec{q(1, 2)});
  const auto gc = build_graph(spec, Potential(0, 0.0, {{{0}, 1.0}}), cob);
  try {
    alpha_periodic_approx(gc, std::vector<double>{1.0}, true);
    FAIL("expected DegenerateRotationSet");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DegenerateRotationSet);
  }

  Rng rng(53);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int inst = 0; inst < 30; ++inst) {
    InstanceOptions opt;
    opt.dim = 1 + inst % 2;
    const auto g = build_graph(random_system(rng, opt));
    std::vector<double> c(static_cast<std::size_t>(g.dim()));
    for (auto& x : c) x = u(rng);
    const double a = alpha(g, c);
    const auto plain = alpha_periodic_approx(g, c, false);
    CHECK(plain.value == a);
    try {
      const auto inner = alpha_periodic_approx(g, c, true, 1e-3);
      CHECK(inner.value >= a - 1e-12);
      CHECK(inner.value <= a + 1e-3);
      CHECK(inner.r == inner.orbit.rotation_vector);
      CHECK(certify_interior(g, to_double(inner.r)).margin > 0.0);
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::DegenerateRotationSet);
    }
  }
}
