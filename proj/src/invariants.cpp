#include "ergopt/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "ergopt/generators.hpp"

namespace ergopt {

namespace {

class Family {
 public:
  Family(std::string name, double tolerance) {
    report_.name = std::move(name);
    report_.tolerance = tolerance;
  }
  // Records a nonnegative violation amount.
  void record(double violation) {
    ++report_.cases;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    report_.max_residual = std::max(report_.max_residual, violation);
  }
  void skip(std::string reason) { report_.skipped.push_back(std::move(reason)); }
  FamilyReport finish() {
    report_.pass = report_.max_residual <= report_.tolerance;
    return report_;
  }

 private:
  FamilyReport report_;
};

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> random_vector(Rng& rng, int dim, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (double& x : v) x = u(rng);
  return v;
}

Potential perturb(Rng& rng, const SftSpec& spec, const Potential& a, double size) {
  std::uniform_real_distribution<double> u(-size, size);
  const Potential base = a.lifted(spec, a.depth());
  Potential out = base;
  for (const auto& [w, v] : base.values()) out.set(w, v + u(rng));
  return out;
}

Constraint perturb(Rng& rng, const SftSpec& spec, const Constraint& phi, int denominator) {
  std::uniform_int_distribution<int> num(-1, 1);
  const Constraint base = phi.lifted(spec, phi.depth());
  Constraint out = base;
  for (const auto& [w, v] : base.values()) {
    RationalVec x = v;
    for (auto& c : x) c += Rational(num(rng), denominator);
    out.set(w, x);
  }
  return out;
}

Constraint scaled(const SftSpec& spec, const Constraint& phi, const Rational& s) {
  std::map<Word, RationalVec> values;
  const Constraint base = phi.lifted(spec, phi.depth());
  for (const auto& [w, v] : base.values()) values.emplace(w, scale(s, v));
  return Constraint(phi.depth(), scale(s, phi.default_value()), std::move(values));
}

Potential random_coboundary_source(Rng& rng, const SftSpec& spec) {
  return random_potential(rng, spec, 0);
}

double beta_value(const WeightedDigraph& graph, std::span<const Rational> h) {
  const LpSolution lp = solve_beta_primal(graph, h);
  if (lp.status != LpStatus::Optimal) return std::numeric_limits<double>::quiet_NaN();
  return lp.value;
}

void mean_cycle_family(Family& fam, const WeightedDigraph& graph, Rng& rng) {
  std::vector<Cycle> cycles;
  try {
    cycles = enumerate_simple_cycles(graph, 100'000);
  } catch (const Error& err) {
    fam.skip("cycle enumeration over cap");
    return;
  }
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> w = trial == 0 ? graph.potential_weights()
                                       : graph.tilted_weights(random_vector(rng, graph.dim(), 2.0));
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& cyc : cycles) {
      hi = std::max(hi, cyc.mean(w));
      lo = std::min(lo, cyc.mean(w));
    }
    fam.record(std::abs(max_mean_cycle(graph, w).value - hi));
    fam.record(std::abs(min_mean_cycle(graph, w).value - lo));
  }
}

}  // namespace

double sup_distance(const SftSpec& spec, const Potential& f, const Potential& g) {
  const int depth = std::max(f.depth(), g.depth());
  double d = 0.0;
  for (const auto& w : spec.allowed_words(static_cast<std::size_t>(depth + 1))) {
    d = std::max(d, std::abs(f(w) - g(w)));
  }
  return d;
}

double sup_distance(const SftSpec& spec, const Constraint& f, const Constraint& g) {
  const int depth = std::max(f.depth(), g.depth());
  double d = 0.0;
  for (const auto& w : spec.allowed_words(static_cast<std::size_t>(depth + 1))) {
    d = std::max(d, norm(to_double(subtract(f(w), g(w)))));
  }
  return d;
}

std::vector<RationalVec> sample_feasible_targets(const WeightedDigraph& graph, Rng& rng, std::size_t count) {
  const RotationSet set = rotation_set_sampled(graph, default_directions(graph.dim(), 16));
  std::vector<RationalVec> witnesses;
  for (const auto& s : set.support_samples) {
    if (std::find(witnesses.begin(), witnesses.end(), s.witness) == witnesses.end()) {
      witnesses.push_back(s.witness);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, witnesses.size() - 1);
  std::uniform_int_distribution<int> weight(1, 7);
  std::vector<RationalVec> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& a = witnesses[pick(rng)];
    const auto& b = witnesses[pick(rng)];
    const Rational t(weight(rng), 8);
    out.push_back(add(scale(t, a), scale(1 - t, b)));
  }
  return out;
}

CheckReport run_invariant_suite(const SystemSpec& system, std::uint64_t seed, int perturbations) {
  Rng rng(seed);
  std::vector<SystemSpec> systems{system};
  for (int i = 0; i < perturbations; ++i) {
    systems.push_back(SystemSpec{system.sft, perturb(rng, system.sft, system.potential, 0.5),
                                 perturb(rng, system.sft, system.constraint, 4)});
  }

  Family mean_cycle("mean-cycle-oracle", 1e-12);
  Family calculus("beta-alpha-calculus", 1e-9);
  Family concavity("beta-concavity", 1e-8);
  Family fenchel_lower("fenchel-inequality", 1e-9);
  Family fenchel_dual("fenchel-dual-tightness", 1e-6);
  Family lipschitz("lipschitz-bounds", 1e-9);
  Family subaction("subaction-calibration", 1e-9);
  Family eigen_lp("subaction-eigenvalue-vs-lp", 1e-8);
  Family livsic("livsic-detector", 0.0);

  for (const auto& sys : systems) {
    const SftSpec& spec = sys.sft;
    const WeightedDigraph graph = build_graph(sys);
    const int n = graph.dim();
    mean_cycle_family(mean_cycle, graph, rng);

    const auto targets = sample_feasible_targets(graph, rng, 4);

    // Coboundary plus constant on the potential shifts beta by a, alpha by -a.
    {
      const double a = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      const Potential shifted = add_coboundary(spec, sys.potential, random_coboundary_source(rng, spec), a);
      const WeightedDigraph g2 = build_graph(spec, shifted, sys.constraint);
      for (const auto& h : targets) {
        calculus.record(std::abs(beta_value(g2, h) - beta_value(graph, h) - a));
      }
      const auto c = random_vector(rng, n, 2.0);
      calculus.record(std::abs(alpha(g2, c) - alpha(graph, c) + a));
    }
    // beta_{A, s phi}(h) = beta_{A, phi}(h / s).
    {
      const Rational s(std::uniform_int_distribution<int>(1, 5)(rng) * (rng() % 2 ? 1 : -1),
                       std::uniform_int_distribution<int>(1, 3)(rng));
      const WeightedDigraph g2 = build_graph(spec, sys.potential, scaled(spec, sys.constraint, s));
      for (const auto& h : targets) {
        calculus.record(std::abs(beta_value(g2, scale(s, h)) - beta_value(graph, h)));
      }
    }
    // A <= B pointwise gives beta_A <= beta_B.
    {
      const Potential base = sys.potential.lifted(spec, sys.potential.depth());
      Potential b = base;
      std::uniform_real_distribution<double> bump(0.0, 0.5);
      for (const auto& [w, v] : base.values()) b.set(w, v + bump(rng));
      const WeightedDigraph g2 = build_graph(spec, b, sys.constraint);
      for (const auto& h : targets) {
        calculus.record(std::max(0.0, beta_value(graph, h) - beta_value(g2, h)));
      }
    }
    // phi + psi o sigma - psi + b translates the rotation set by b.
    if (n <= 2) {
      RationalVec b;
      for (int i = 0; i < n; ++i) b.emplace_back(std::uniform_int_distribution<int>(-3, 3)(rng), 2);
      const Constraint psi = random_constraint(rng, spec, 0, n, 3);
      const Constraint moved = add_coboundary(spec, sys.constraint, psi, b);
      const WeightedDigraph g2 = build_graph(spec, sys.potential, moved);
      try {
        auto p1 = rotation_set_exact(graph, 100'000).polygon;
        auto p2 = rotation_set_exact(g2, 100'000).polygon;
        for (auto& v : p1) v = add(v, b);
        calculus.record(p1 == p2 ? 0.0 : 1.0);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::CapExceeded) throw;
        calculus.skip("exact rotation set over cap");
      }
      const auto c = random_vector(rng, n, 2.0);
      double cb = 0.0;
      for (int i = 0; i < n; ++i) cb += c[static_cast<std::size_t>(i)] * to_double(b[static_cast<std::size_t>(i)]);
      calculus.record(std::abs(alpha(g2, c) - alpha(graph, c) - cb));
    }

    // Concavity of beta along pairs of targets.
    for (std::size_t i = 0; i + 1 < targets.size(); ++i) {
      const Rational t(1, 3);
      const RationalVec mid = add(scale(t, targets[i]), scale(1 - t, targets[i + 1]));
      const double lhs = beta_value(graph, mid);
      const double rhs = to_double(t) * beta_value(graph, targets[i]) + to_double(1 - t) * beta_value(graph, targets[i + 1]);
      concavity.record(std::max(0.0, rhs - lhs));
    }

    // Fenchel inequality and tightness at the LP multipliers.
    for (const auto& h : targets) {
      for (int k = 0; k < 3; ++k) {
        const FenchelRecord rec = fenchel_check(graph, h, random_vector(rng, n, 3.0));
        fenchel_lower.record(std::max(0.0, -rec.gap));
      }
      const LpSolution lp = solve_beta_primal(graph, h);
      const FenchelRecord tight = fenchel_check(graph, h, lp.dual_multipliers);
      fenchel_lower.record(std::max(0.0, -tight.gap));
      fenchel_dual.record(std::max(0.0, tight.gap));
    }

    // Lipschitz bounds in c, in A and in phi.
    {
      const auto c1 = random_vector(rng, n, 2.0);
      const auto c2 = random_vector(rng, n, 2.0);
      std::vector<double> dc(c1.size());
      for (std::size_t i = 0; i < dc.size(); ++i) dc[i] = c1[i] - c2[i];
      lipschitz.record(std::max(0.0, std::abs(alpha(graph, c1) - alpha(graph, c2)) - graph.constraint_norm() * norm(dc)));

      const Potential b = perturb(rng, spec, sys.potential, 0.3);
      const WeightedDigraph gb = build_graph(spec, b, sys.constraint);
      const double dab = sup_distance(spec, sys.potential, b);
      lipschitz.record(std::max(0.0, std::abs(alpha(graph, c1) - alpha(gb, c1)) - dab));
      for (const auto& h : targets) {
        lipschitz.record(std::max(0.0, std::abs(beta_value(graph, h) - beta_value(gb, h)) - dab));
      }

      const Constraint psi = perturb(rng, spec, sys.constraint, 6);
      const WeightedDigraph gp = build_graph(spec, sys.potential, psi);
      const double dphi = sup_distance(spec, sys.constraint, psi);
      lipschitz.record(std::max(0.0, std::abs(alpha(graph, c1) - alpha(gp, c1)) - norm(c1) * dphi));
      if (n <= 2) {
        try {
          const double hd = hausdorff_distance(rotation_set_exact(graph, 100'000).polygon,
                                               rotation_set_exact(gp, 100'000).polygon);
          lipschitz.record(std::max(0.0, hd - dphi));
        } catch (const Error& err) {
          if (err.code() != ErrorCode::CapExceeded) throw;
          lipschitz.skip("exact rotation set over cap");
        }
      }
    }

    // Calibrated sub-actions.
    for (int k = 0; k < 3; ++k) {
      const auto w = k == 0 ? graph.potential_weights() : graph.tilted_weights(random_vector(rng, n, 2.0));
      const CalibratedSubaction sub = calibrated_subaction(graph, w);
      const SubactionResiduals res = subaction_residuals(graph, sub);
      subaction.record(std::max({0.0, res.subaction, res.calibration, res.critical}));
      const LpSolution lp = solve_unconstrained(graph, w);
      eigen_lp.record(std::abs(lp.value - sub.eigenvalue));
      const auto contact = contact_locus(graph, sub);
      double outside = 0.0;
      for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        if (std::find(contact.begin(), contact.end(), static_cast<int>(e)) == contact.end()) {
          outside = std::max(outside, lp.measure.weights[e]);
        }
      }
      subaction.record(outside);
    }

    // Coboundary plus constant is degenerate; distinct loop means are not.
    {
      const Potential g = random_potential(rng, spec, 1);
      const double a = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      const Potential cob = add_coboundary(spec, Potential(0, 0.0), g, a);
      const WeightedDigraph gc = build_graph(spec, cob, sys.constraint);
      livsic.record(is_cohomologous_to_constant(gc, gc.potential_weights()) ? 0.0 : 1.0);
      std::vector<int> loops;
      for (int s = 0; s < spec.alphabet_size(); ++s) {
        if (spec.allows(s, s)) loops.push_back(s);
      }
      if (loops.size() >= 2) {
        const Potential f(0, 0.0, {{{loops[0]}, 1.0}});
        const WeightedDigraph gf = build_graph(spec, f, sys.constraint);
        livsic.record(is_cohomologous_to_constant(gf, gf.potential_weights()) ? 1.0 : 0.0);
      }
    }
  }

  CheckReport report;
  report.systems = systems.size();
  for (Family* f : {&mean_cycle, &calculus, &concavity, &fenchel_lower, &fenchel_dual, &lipschitz, &subaction,
                    &eigen_lp, &livsic}) {
    report.families.push_back(f->finish());
    report.passed = report.passed && report.families.back().pass;
  }
  return report;
}

Json check_report_to_json(const CheckReport& report) {
  Json out;
  out["passed"] = report.passed;
  out["systems"] = report.systems;
  Json families = Json::array();
  for (const auto& f : report.families) {
    families.push_back({{"name", f.name},
                        {"pass", f.pass},
                        {"max_residual", f.max_residual},
                        {"tolerance", f.tolerance},
                        {"cases", f.cases},
                        {"skipped", f.skipped}});
  }
  out["families"] = families;
  return out;
}

}  // namespace ergopt
