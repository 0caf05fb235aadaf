// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "ergopt/invariants.hpp"
#include "oracles.hpp"

using namespace ergopt;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

std::pair<Rational, Rational> interval(const WeightedDigraph& g) {
  const auto p = rotation_set_exact(g).polygon;
  return {p.front()[0], p.back()[0]};
}

// 1. Karp against exhaustive enumeration.
Verdict mean_cycles() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto g = build_graph(random_system(rng));
    const auto cycles = oracle::simple_cycles(g);
    for (const auto& w : {g.potential_weights(), g.tilted_weights(std::vector<double>(static_cast<std::size_t>(g.dim()), 0.7))}) {
      double hi = -INFINITY, lo = INFINITY;
      for (const auto& cyc : cycles) {
        double s = 0.0;
        for (std::size_t i = 0; i < cyc.size(); ++i) s += w[static_cast<std::size_t>(*g.find_edge(cyc[i], cyc[(i + 1) % cyc.size()]))];
        hi = std::max(hi, s / static_cast<double>(cyc.size()));
        lo = std::min(lo, s / static_cast<double>(cyc.size()));
      }
      worst = std::max({worst, std::abs(max_mean_cycle(g, w).value - hi), std::abs(min_mean_cycle(g, w).value - lo)});
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs <= 10.0, fmt("200 instances, max |karp - enumeration| = %.3g, %.2f s", worst, secs)};
}

// 2. Primal LP against the cutting-plane dual on interior grids.
Verdict primal_dual() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1002);
  double worst = 0.0;
  int instances = 0, failures = 0;
  while (instances < 50) {
    const auto g = build_graph(random_system(rng));
    const auto [lo, hi] = interval(g);
    if (lo == hi) continue;
    ++instances;
    for (int i = 1; i <= 9; ++i) {
      const RationalVec h{lo + (hi - lo) * Rational(i, 10)};
      const double primal = solve_beta_primal(g, h).value;
      try {
        worst = std::max(worst, std::abs(primal - beta_dual(g, h, {1e-9, 2000})));
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && failures == 0 && secs <= 30.0,
          fmt("50 instances x 9 points, max |primal - dual| = %.3g, dual failures %.0f, %.2f s", worst, failures, secs)};
}

// 3. Fenchel inequality, tight at the LP multipliers.
Verdict fenchel() {
  Rng rng(1003);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  double lower = 0.0, upper = 0.0;
  std::size_t pairs = 0;
  for (int inst = 0; inst < 60; ++inst) {
    InstanceOptions opt;
    opt.dim = 1 + inst % 2;
    const auto g = build_graph(random_system(rng, opt));
    for (const auto& h : sample_feasible_targets(g, rng, 5)) {
      for (int k = 0; k < 10; ++k) {
        std::vector<double> c(static_cast<std::size_t>(g.dim()));
        for (auto& x : c) x = u(rng);
        lower = std::min(lower, fenchel_check(g, h, c).gap);
        ++pairs;
      }
      const auto rec = fenchel_check(g, h, solve_beta_primal(g, h).dual_multipliers);
      lower = std::min(lower, rec.gap);
      upper = std::max(upper, rec.gap);
    }
  }
  return {lower >= -1e-9 && upper <= 1e-6,
          fmt("%.0f random pairs, min gap %.3g; at LP multipliers max gap %.3g", static_cast<double>(pairs), lower, upper)};
}

// 4. Calculus identities.
Verdict calculus() {
  Rng rng(1004);
  double shift = 0.0, scaling = 0.0, monotone = 0.0;
  int translations = 0, translation_failures = 0;
  for (int inst = 0; inst < 50; ++inst) {
    InstanceOptions opt;
    opt.dim = 1 + inst % 2;
    const auto sys = random_system(rng, opt);
    const SftSpec& spec = sys.sft;
    const auto g = build_graph(sys);
    const auto hs = sample_feasible_targets(g, rng, 3);
    const int n = g.dim();

    const double a = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const auto shifted = add_coboundary(spec, sys.potential, random_potential(rng, spec, 1), a);
    const auto g2 = build_graph(spec, shifted, sys.constraint);
    for (const auto& h : hs) {
      shift = std::max(shift, std::abs(solve_beta_primal(g2, h).value - solve_beta_primal(g, h).value - a));
    }
    const std::vector<double> c(static_cast<std::size_t>(n), -0.6);
    shift = std::max(shift, std::abs(alpha(g2, c) - alpha(g, c) + a));

    long num = static_cast<long>(rng() % 6) - 3;
    if (num >= 0) ++num;
    const Rational s(num, 1 + static_cast<long>(rng() % 3));
    std::map<Word, RationalVec> values;
    const Constraint lifted = sys.constraint.lifted(spec, sys.constraint.depth());
    for (const auto& [w, v] : lifted.values()) values.emplace(w, scale(s, v));
    const auto gs = build_graph(spec, sys.potential, Constraint(sys.constraint.depth(), zero_vector(static_cast<std::size_t>(n)), values));
    for (const auto& h : hs) {
      scaling = std::max(scaling, std::abs(solve_beta_primal(gs, scale(s, h)).value - solve_beta_primal(g, h).value));
    }

    const Potential base = sys.potential.lifted(spec, sys.potential.depth());
    Potential bigger = base;
    for (const auto& [w, v] : base.values()) bigger.set(w, v + std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const auto gb = build_graph(spec, bigger, sys.constraint);
    for (const auto& h : hs) {
      monotone = std::max(monotone, solve_beta_primal(g, h).value - solve_beta_primal(gb, h).value);
    }

    RationalVec b;
    for (int i = 0; i < n; ++i) b.emplace_back(static_cast<long>(rng() % 9) - 4, 3);
    const auto moved = add_coboundary(spec, sys.constraint, random_constraint(rng, spec, 1, n, 4), b);
    auto p = rotation_set_exact(g).polygon;
    for (auto& v : p) v = add(v, b);
    ++translations;
    if (p != rotation_set_exact(build_graph(spec, sys.potential, moved)).polygon) ++translation_failures;
  }
  const bool pass = shift <= 1e-9 && scaling <= 1e-9 && monotone <= 1e-9 && translation_failures == 0;
  return {pass, fmt("coboundary shift err %.3g, scaling err %.3g, monotonicity violation %.3g, polygon translations exact %.0f/50",
                    shift, scaling, std::max(0.0, monotone), static_cast<double>(translations - translation_failures))};
}

// 5. Lipschitz bounds.
Verdict lipschitz() {
  Rng rng(1005);
  double hausdorff = -INFINITY, in_phi = -INFINITY, in_a = -INFINITY;
  for (int inst = 0; inst < 50; ++inst) {
    InstanceOptions opt;
    opt.dim = 1 + inst % 2;
    const auto sys = random_system(rng, opt);
    const SftSpec& spec = sys.sft;
    const auto g = build_graph(sys);
    const int n = g.dim();
    const Constraint base = sys.constraint.lifted(spec, sys.constraint.depth());
    Constraint psi = base;
    const Rational size(1 + static_cast<long>(rng() % 4), 8);
    for (const auto& [w, v] : base.values()) {
      RationalVec x = v;
      for (auto& c : x) c += size * Rational(static_cast<long>(rng() % 5) - 2, 2);
      psi.set(w, x);
    }
    const auto gp = build_graph(spec, sys.potential, psi);
    const double d = sup_distance(spec, sys.constraint, psi);
    hausdorff = std::max(hausdorff, hausdorff_distance(rotation_set_exact(g).polygon, rotation_set_exact(gp).polygon) - d);
    std::vector<double> c(static_cast<std::size_t>(n));
    double cn = 0.0;
    for (auto& x : c) {
      x = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
      cn += x * x;
    }
    in_phi = std::max(in_phi, std::abs(alpha(g, c) - alpha(gp, c)) - std::sqrt(cn) * d);
    const Potential pbase = sys.potential.lifted(spec, sys.potential.depth());
    Potential b = pbase;
    for (const auto& [w, v] : pbase.values()) b.set(w, v + std::uniform_real_distribution<double>(-0.5, 0.5)(rng));
    const auto gb = build_graph(spec, b, sys.constraint);
    in_a = std::max(in_a, std::abs(alpha(g, c) - alpha(gb, c)) - sup_distance(spec, sys.potential, b));
  }
  return {hausdorff <= 1e-9 && in_phi <= 1e-9 && in_a <= 1e-9,
          fmt("50 pairs, max excess over bound: hausdorff %.3g, alpha in phi %.3g, alpha in A %.3g", hausdorff, in_phi, in_a)};
}

// 6. Sub-actions.
Verdict subactions() {
  Rng rng(1006);
  double residual = 0.0, eigen = 0.0;
  int support_failures = 0;
  for (int inst = 0; inst < 100; ++inst) {
    InstanceOptions opt;
    opt.potential_step = inst % 2 ? 0.25 : 0.0;
    const auto g = build_graph(random_system(rng, opt));
    const auto w = inst % 3 == 0 ? g.tilted_weights(std::vector<double>{0.5}) : g.potential_weights();
    const auto sub = calibrated_subaction(g, w);
    const auto res = subaction_residuals(g, sub);
    residual = std::max({residual, res.subaction, res.calibration, res.critical});
    const auto lp = solve_unconstrained(g, w);
    eigen = std::max(eigen, std::abs(lp.value - sub.eigenvalue));
    const auto contact = contact_locus(g, sub);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (lp.measure.weights[e] > 1e-9 && std::find(contact.begin(), contact.end(), static_cast<int>(e)) == contact.end()) {
        ++support_failures;
      }
    }
  }
  return {residual <= 1e-9 && eigen <= 1e-8 && support_failures == 0,
          fmt("100 instances, max residual %.3g, |eigenvalue - LP| %.3g, support edges outside contact locus %.0f",
              residual, eigen, support_failures)};
}

// 7. Time averages along optimal trajectories.
Verdict theorem17() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1007);
  int found = 0, draws = 0;
  double final_error = 0.0, rate_excess = -INFINITY;
  while (found < 20 && draws < 1000) {
    ++draws;
    InstanceOptions opt;
    opt.dim = 1 + draws % 2;
    const auto g = build_graph(random_system(rng, opt));
    std::vector<double> c(static_cast<std::size_t>(g.dim()));
    for (auto& x : c) x = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    if (!alpha_gradient(g, c).unique) continue;
    ++found;
    const auto check = verify_alpha_differential(g, c, 100'000, static_cast<int>(rng() % g.num_vertices()));
    final_error = std::max(final_error, check.errors.back());
    const double bound = 2.0 * g.constraint_norm() * static_cast<double>(check.absorption_step + check.period);
    for (std::size_t k = std::max<std::size_t>(check.absorption_step, 1); k <= check.errors.size(); ++k) {
      rate_excess = std::max(rate_excess, check.errors[k - 1] * static_cast<double>(k) - bound);
    }
  }
  const double secs = seconds_since(t0);
  return {found == 20 && final_error <= 1e-3 && rate_excess <= 1e-9 && secs <= 20.0,
          fmt("%.0f unique instances, max error at k=1e5 %.3g, max k*error excess over C %.3g, %.2f s", found,
              final_error, rate_excess, secs)};
}

// 8. The worked three-shift example.
Verdict worked_example() {
  const auto g = build_graph(three_shift_example());
  const auto cycles = oracle::cycle_data(g);
  double err = 0.0;
  const auto at1 = solve_beta_primal(g, RationalVec{Rational(1)});
  const auto at0 = solve_beta_primal(g, RationalVec{Rational(0)});
  err = std::max({err, std::abs(at1.value), std::abs(at0.value - 1.0)});
  bool supports = at1.measure.weights[static_cast<std::size_t>(*g.find_edge(0, 0))] > 1.0 - 1e-9 &&
                  std::abs(at0.measure.weights[static_cast<std::size_t>(*g.find_edge(1, 2))] - 0.5) <= 1e-9 &&
                  std::abs(at0.measure.weights[static_cast<std::size_t>(*g.find_edge(2, 1))] - 0.5) <= 1e-9;
  for (int i = 0; i <= 10; ++i) {
    const Rational h(i, 10);
    const double v = solve_beta_primal(g, RationalVec{h}).value;
    err = std::max({err, std::abs(v - (1.0 - i / 10.0)), std::abs(v - *oracle::beta_from_cycles(cycles, h))});
  }
  for (double c : {-3.0, -2.0, -1.0, 0.0, 1.0}) {
    const double a = alpha(g, std::vector<double>{c});
    err = std::max({err, std::abs(a - std::min(c, -1.0)), std::abs(a - oracle::alpha_from_cycles(cycles, {c}))});
  }
  return {err <= 1e-9 && supports, fmt("max error %.3g over beta(0), beta(1), 11-point beta grid, 5-point alpha grid; supports %s",
                                       err) + (supports ? "ok" : "wrong")};
}

// 9. Periodic orbits with exact rotation numbers.
Verdict periodic() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1009);
  std::vector<SystemSpec> systems{three_shift_example()};
  InstanceOptions opt;
  opt.max_denominator = 1;
  while (systems.size() < 11) {
    auto sys = random_system(rng, opt);
    const auto [lo, hi] = interval(build_graph(sys));
    if (lo < hi) systems.push_back(std::move(sys));
  }
  int queries = 0, converged = 0, inexact = 0, alpha_mismatch = 0;
  double worst_gap = 0.0;
  for (const auto& sys : systems) {
    const auto g = build_graph(sys);
    const auto [lo, hi] = interval(g);
    std::vector<Rational> targets;
    for (long q = 1; q <= 8; ++q) {
      for (long p = -8 * q; p <= 8 * q; ++p) {
        const Rational r(p, q);
        if (boost::multiprecision::denominator(r) == q && lo < r && r < hi) targets.push_back(r);
      }
    }
    std::sort(targets.begin(), targets.end());
    // Three targets spread over the interval.
    std::vector<Rational> chosen;
    for (std::size_t k = 1; k <= 3; ++k) chosen.push_back(targets[(k * targets.size()) / 4]);
    for (const auto& r : chosen) {
      ++queries;
      double best_gap = INFINITY;
      for (std::size_t k : {25, 50, 100, 200}) {
        PeriodicQuery query{{r}, k};
        const auto res = best_periodic_with_rotation(g, query);
        if (res.orbit) {
          RationalVec sum = zero_vector(1);
          for (int e : res.orbit->edges) sum = add(sum, g.edge(e).constraint);
          // q Q S_M phi - M q Q r == 0 in integers.
          const Rational qq = Rational(boost::multiprecision::denominator(r) * g.common_denominator());
          if (qq * sum[0] - qq * Rational(static_cast<long>(res.orbit->period())) * r != 0) ++inexact;
        }
        const auto gaps = periodic_beta_gap(g, RationalVec{r}, k);
        best_gap = std::min(best_gap, *std::min_element(gaps.begin(), gaps.end()));
        if (best_gap <= 1e-6) break;
      }
      worst_gap = std::max(worst_gap, best_gap);
      if (best_gap <= 1e-6) ++converged;
    }
    for (double c : {-1.5, 0.0, 0.8}) {
      const auto approx = alpha_periodic_approx(g, std::vector<double>{c}, false);
      if (approx.value != alpha(g, std::vector<double>{c})) ++alpha_mismatch;
    }
  }
  const double secs = seconds_since(t0);
  return {converged == queries && inexact == 0 && alpha_mismatch == 0,
          fmt("gap <= 1e-6 by K=200 for %.0f/%.0f (instance, r) pairs (worst final gap %.3g); inexact orbits %.0f", converged,
              queries, worst_gap, inexact) +
              fmt("; alpha witness mismatches %.0f; %.2f s", alpha_mismatch, secs)};
}

// 10. Degeneracy detector.
Verdict livsic() {
  Rng rng(1010);
  int coboundaries = 0, flagged = 0, generic = 0, unflagged = 0;
  while (coboundaries < 50) {
    const auto sys = random_system(rng);
    const auto psi = random_constraint(rng, sys.sft, static_cast<int>(rng() % 2), 1, 5);
    const RationalVec b{Rational(static_cast<long>(rng() % 7) - 3, 2)};
    const auto phi = add_coboundary(sys.sft, Constraint(0, zero_vector(1)), psi, b);
    const auto g = build_graph(sys.sft, sys.potential, phi);
    ++coboundaries;
    if (is_cohomologous_to_constant(g, g.constraint_weights(std::vector<double>{1.0}))) ++flagged;
  }
  while (generic < 50) {
    const auto sys = random_system(rng);
    const auto g = build_graph(sys);
    const int k = g.block_length();
    std::vector<Rational> loop_values;
    for (int s = 0; s < sys.sft.alphabet_size(); ++s) {
      if (sys.sft.allows(s, s)) loop_values.push_back(sys.constraint(Word(static_cast<std::size_t>(k + 1), s))[0]);
    }
    std::sort(loop_values.begin(), loop_values.end());
    if (loop_values.size() < 2 || loop_values.front() == loop_values.back()) continue;
    ++generic;
    if (!is_cohomologous_to_constant(g, g.constraint_weights(std::vector<double>{1.0}))) ++unflagged;
  }
  return {flagged == 50 && unflagged == 50,
          fmt("coboundary-plus-constant flagged %.0f/50, distinct-loop constraints passed %.0f/50", flagged, unflagged)};
}

// 11. Recurrence diagnostic for the Bernoulli shift.
Verdict recurrence() {
  const SystemSpec sys{SftSpec(2), Potential(0, 0.0), Constraint(0, zero_vector(1), {{{0}, RationalVec{Rational(1)}}})};
  const auto g = build_graph(sys);
  const auto chain = markov_extension(make_measure(g, std::vector<double>(g.num_edges(), 0.25)), g);
  RecurrenceOptions opt;
  opt.max_return = 10'000;
  opt.samples = 1000;
  opt.epsilons = {0.1};
  const auto stats = recurrence_defect(g, chain, Word{0}, opt);
  const double fraction = stats.fraction_by_epsilon.front().second;
  const double exact = oracle::bernoulli_return_probability(10'000, 0.1);
  return {stats.status == RecurrenceStatus::Ok && fraction >= 0.99,
          fmt("return fraction %.4f over %.0f visits (exact return probability for L_max = 1e4 is %.5f)", fraction,
              static_cast<double>(stats.visits), exact)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"1 mean cycles vs enumeration", mean_cycles},
      {"2 primal-dual beta", primal_dual},
      {"3 Fenchel", fenchel},
      {"4 calculus identities", calculus},
      {"5 Lipschitz bounds", lipschitz},
      {"6 sub-actions", subactions},
      {"7 trajectory averages", theorem17},
      {"8 worked example", worked_example},
      {"9 periodic approximation", periodic},
      {"10 degeneracy detector", livsic},
      {"11 recurrence diagnostic", recurrence},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
