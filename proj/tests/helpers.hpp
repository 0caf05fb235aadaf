#pragma once

#include <doctest.h>

#include "ergopt/generators.hpp"
#include "ergopt/invariants.hpp"

namespace testing {

using namespace ergopt;

inline Rational q(long p, long d = 1) { return Rational(p, d); }

// Full 2-shift with A and phi given on single symbols.
inline SystemSpec two_shift(double a0, double a1, Rational phi0, Rational phi1) {
  return SystemSpec{SftSpec(2), Potential(0, 0.0, {{{0}, a0}, {{1}, a1}}),
                    Constraint(0, RationalVec{Rational(0)}, {{{0}, RationalVec{phi0}}, {{1}, RationalVec{phi1}}})};
}

inline SftSpec golden_mean() { return SftSpec(2, {{true, true}, {true, false}}); }

inline const Edge& edge_by_word(const WeightedDigraph& g, const Word& w) {
  for (const auto& e : g.edges()) {
    if (e.word == w) return e;
  }
  FAIL("no edge " << word_key(w));
  return g.edges().front();
}

}  // namespace testing
