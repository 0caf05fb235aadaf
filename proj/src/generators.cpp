#include "ergopt/generators.hpp"

#include <cmath>

namespace ergopt {

SftSpec random_sft(Rng& rng, int alphabet, double forbid_probability) {
  std::bernoulli_distribution forbid(forbid_probability);
  std::vector<std::vector<bool>> t(static_cast<std::size_t>(alphabet),
                                   std::vector<bool>(static_cast<std::size_t>(alphabet), true));
  for (int i = 0; i < alphabet; ++i) {
    for (int j = 0; j < alphabet; ++j) {
      if (i != j && forbid(rng)) t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = false;
    }
  }
  return SftSpec(alphabet, std::move(t));
}

Potential random_potential(Rng& rng, const SftSpec& spec, int depth, double step) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::map<Word, double> values;
  for (auto& w : spec.allowed_words(static_cast<std::size_t>(depth + 1))) {
    double v = uniform(rng);
    if (step > 0.0) v = std::round(v / step) * step;
    values.emplace(std::move(w), v);
  }
  return Potential(depth, 0.0, std::move(values));
}

Constraint random_constraint(Rng& rng, const SftSpec& spec, int depth, int dim, int max_denominator) {
  std::uniform_int_distribution<int> den(1, max_denominator);
  std::map<Word, RationalVec> values;
  for (auto& w : spec.allowed_words(static_cast<std::size_t>(depth + 1))) {
    RationalVec v;
    for (int i = 0; i < dim; ++i) {
      const int q = den(rng);
      std::uniform_int_distribution<int> num(-q, q);
      v.emplace_back(num(rng), q);
    }
    values.emplace(std::move(w), std::move(v));
  }
  return Constraint(depth, zero_vector(static_cast<std::size_t>(dim)), std::move(values));
}

SystemSpec random_system(Rng& rng, const InstanceOptions& options) {
  std::uniform_int_distribution<int> alphabet(options.min_alphabet, options.max_alphabet);
  std::uniform_int_distribution<int> depth(0, options.max_depth);
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    const int n = alphabet(rng);
    SftSpec spec = random_sft(rng, n, options.forbid_probability);
    const int da = depth(rng);
    const int dp = depth(rng);
    const std::size_t k = static_cast<std::size_t>(std::max({1, da, dp}));
    if (spec.allowed_words(k + 1).size() > options.max_edges) continue;
    SystemSpec system{spec, random_potential(rng, spec, da, options.potential_step),
                      random_constraint(rng, spec, dp, options.dim, options.max_denominator)};
    try {
      (void)build_graph(system);
    } catch (const Error&) {
      continue;
    }
    return system;
  }
  throw Error(ErrorCode::InvalidArgument, "could not draw a valid random system");
}

SystemSpec three_shift_example() {
  SftSpec spec(3);
  Potential a(1, 0.0, {{{1, 2}, 1.0}, {{2, 1}, 1.0}});
  Constraint phi(0, RationalVec{Rational(0)}, {{{0}, RationalVec{Rational(1)}}});
  return SystemSpec{spec, a, phi};
}

}  // namespace ergopt
