#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ergopt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RationalVec = std::vector<Rational>;

// Accepts "p/q" or "p" with optional sign; q must be a positive integer.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);
std::vector<double> to_double(std::span<const Rational> values);

BigInt lcm(const BigInt& a, const BigInt& b);

// Narrowing that throws on overflow instead of wrapping.
std::int64_t checked_int64(const BigInt& value);

RationalVec zero_vector(std::size_t dim);
RationalVec add(const RationalVec& a, const RationalVec& b);
RationalVec subtract(const RationalVec& a, const RationalVec& b);
RationalVec scale(const Rational& s, const RationalVec& v);

}  // namespace ergopt
