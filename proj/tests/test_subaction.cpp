#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace testing;

TEST_CASE("sub-action on the 2-shift with weight on vertex 0") {
  const auto g = build_graph(two_shift(1.0, 0.0, q(1), q(0)));
  const auto sub = calibrated_subaction(g, g.potential_weights());
  CHECK(sub.eigenvalue == 1.0);
  // Both vertices are reached from the critical loop at 0 with no loss.
  CHECK(sub.u[0] == 0.0);
  CHECK(sub.u[1] == 0.0);
  const auto contact = contact_locus(g, sub);
  CHECK(std::find(contact.begin(), contact.end(), *g.find_edge(0, 0)) != contact.end());
  const auto traj = optimal_trajectory(g, sub, 1, 6);
  CHECK(traj.vertices == std::vector<int>{1, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("constant weight: everything is critical") {
  const auto g = build_graph(two_shift(0.25, 0.25, q(1), q(0)));
  const auto sub = calibrated_subaction(g, g.potential_weights());
  CHECK(sub.eigenvalue == 0.25);
  CHECK(sub.u == std::vector<double>{0.0, 0.0});
  CHECK(contact_locus(g, sub).size() == g.num_edges());
  // Ties resolve to the smallest source.
  CHECK(optimal_trajectory(g, sub, 1, 3).vertices == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("sub-action invariants on random instances") {
  Rng rng(41);
  for (int inst = 0; inst < 60; ++inst) {
    InstanceOptions opt;
    opt.potential_step = inst % 3 == 0 ? 0.5 : 0.0;
    const auto g = build_graph(random_system(rng, opt));
    const auto w = g.potential_weights();
    const auto sub = calibrated_subaction(g, w);
    const auto res = subaction_residuals(g, sub);
    CHECK(res.subaction <= 1e-9);
    CHECK(res.calibration <= 1e-9);
    CHECK(res.critical <= 1e-9);
    double best = -INFINITY;
    for (const auto& c : oracle::cycle_data(g)) best = std::max(best, c.mean_potential);
    CHECK(std::abs(sub.eigenvalue - best) <= 1e-12);
    const auto lp = solve_unconstrained(g);
    CHECK(std::abs(lp.value - sub.eigenvalue) <= 1e-8);
    const auto contact = contact_locus(g, sub);
    for (int e : sub.critical_edges) CHECK(std::find(contact.begin(), contact.end(), e) != contact.end());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (lp.measure.weights[e] > 1e-9) {
        CHECK(std::find(contact.begin(), contact.end(), static_cast<int>(e)) != contact.end());
      }
    }
    const auto traj = optimal_trajectory(g, sub, static_cast<int>(rng() % g.num_vertices()), 50);
    for (std::size_t j = 0; j < traj.steps(); ++j) {
      const Edge& e = g.edge(traj.edges[j]);
      CHECK(e.target == traj.vertices[j]);
      CHECK(e.source == traj.vertices[j + 1]);
      CHECK(std::abs(w[static_cast<std::size_t>(traj.edges[j])] + sub.u[static_cast<std::size_t>(e.source)] -
                     sub.eigenvalue - sub.u[static_cast<std::size_t>(e.target)]) <= 1e-9);
    }
    // Eventually periodic, and the cycle sits in the contact locus.
    const auto tail = std::find(traj.vertices.begin(), traj.vertices.end() - 1, traj.vertices.back());
    for (auto it = tail; it + 1 < traj.vertices.end(); ++it) {
      const std::size_t j = static_cast<std::size_t>(it - traj.vertices.begin());
      CHECK(std::find(contact.begin(), contact.end(), traj.edges[j]) != contact.end());
    }
  }
}

TEST_CASE("coboundary changes keep the contact locus") {
  Rng rng(42);
  for (int inst = 0; inst < 30; ++inst) {
    const auto sys = random_system(rng);
    const auto g = build_graph(sys);
    const SftSpec& spec = sys.sft;
    const auto shifted = add_coboundary(spec, sys.potential.lifted(spec, g.block_length()),
                                        random_potential(rng, spec, g.block_length() - 1), 0.0);
    const auto g2 = build_graph(spec, shifted, sys.constraint);
    REQUIRE(g2.num_edges() == g.num_edges());
    auto words = [](const WeightedDigraph& gr, const std::vector<int>& es) {
      std::vector<Word> out;
      for (int e : es) out.push_back(gr.edge(e).word);
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto s1 = calibrated_subaction(g, g.potential_weights());
    const auto s2 = calibrated_subaction(g2, g2.potential_weights());
    CHECK(std::abs(s1.eigenvalue - s2.eigenvalue) <= 1e-12);
    CHECK(words(g, contact_locus(g, s1)) == words(g2, contact_locus(g2, s2)));
  }
}

TEST_CASE("alpha differential along optimal trajectories") {
  const auto g = build_graph(two_shift(0.0, 0.0, q(1), q(0)));
  const auto check = verify_alpha_differential(g, std::vector<double>{1.0}, 200, 0);
  CHECK(check.unique);
  CHECK(check.gradient[0] == doctest::Approx(0.0));
  for (std::size_t k = 1; k <= check.errors.size(); ++k) CHECK(check.errors[k - 1] <= 1.0 / static_cast<double>(k) + 1e-15);

  const auto ex = verify_alpha_differential(build_graph(three_shift_example()), std::vector<double>{-2.0}, 100, 1);
  CHECK(ex.unique);
  CHECK(ex.gradient[0] == doctest::Approx(1.0));
  CHECK(ex.errors.back() <= 0.02 + 1e-12);

  const auto flat = verify_alpha_differential(g, std::vector<double>{0.0}, 10, 0);
  CHECK_FALSE(flat.unique);
}

TEST_CASE("trajectory error bound after absorption") {
  Rng rng(43);
  int unique_cases = 0;
  for (int inst = 0; inst < 60 && unique_cases < 20; ++inst) {
    const auto g = build_graph(random_system(rng));
    std::vector<double> c{std::uniform_real_distribution<double>(-2.0, 2.0)(rng)};
    const auto check = verify_alpha_differential(g, c, 2000, 0);
    if (!check.unique) continue;
    ++unique_cases;
    const double norm = g.constraint_norm();
    const double bound = 2.0 * norm * static_cast<double>(check.absorption_step + check.period);
    for (std::size_t k = std::max<std::size_t>(check.absorption_step, 1); k <= check.errors.size(); ++k) {
      CHECK(check.errors[k - 1] * static_cast<double>(k) <= bound + 1e-9);
    }
  }
  CHECK(unique_cases > 0);
}

TEST_CASE("recurrence diagnostic") {
  const auto g = build_graph(two_shift(0.0, 0.0, q(1), q(0)));
  const auto two = cycle_from_vertices(g, std::vector<int>{0, 1});
  RecurrenceOptions opt;
  opt.max_return = 4;
  const auto periodic = recurrence_defect(g, two, Word{0}, opt);
  REQUIRE(periodic.status == RecurrenceStatus::Ok);
  for (const auto& [eps, frac] : periodic.fraction_by_epsilon) CHECK(frac == 1.0);

  const auto golden = build_graph(golden_mean(), Potential(0, 0.0), Constraint(0, RationalVec{q(0)}));
  const auto loop = cycle_from_vertices(golden, std::vector<int>{0});
  CHECK(recurrence_defect(golden, loop, Word{1, 1}, opt).status == RecurrenceStatus::NoVisits);
  CHECK(recurrence_defect(golden, loop, Word{1}, opt).status == RecurrenceStatus::NoVisits);
}

TEST_CASE("recurrence estimate matches the exact return probability") {
  const auto g = build_graph(two_shift(0.0, 0.0, q(1), q(0)));
  std::vector<double> uniform(g.num_edges(), 0.25);
  const auto chain = markov_extension(make_measure(g, uniform), g);
  RecurrenceOptions opt;
  opt.max_return = 2000;
  opt.samples = 1000;
  opt.epsilons = {0.1};
  const auto stats = recurrence_defect(g, chain, Word{0}, opt);
  REQUIRE(stats.status == RecurrenceStatus::Ok);
  CHECK(stats.visits == 1000);
  const double exact = oracle::bernoulli_return_probability(2000, 0.1);
  const double sd = std::sqrt(exact * (1.0 - exact) / 1000.0);
  CHECK(std::abs(stats.fraction_by_epsilon[0].second - exact) <= 5.0 * sd + 1e-3);
}
