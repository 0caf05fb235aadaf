#include "ergopt/rational.hpp"

#include <cctype>
#include <limits>

#include "ergopt/error.hpp"

namespace ergopt {

namespace {

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  BigInt value = 0;
  for (char ch : s) value = value * 10 + (ch - '0');
  return negative ? BigInt(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  const std::string_view num = s.substr(0, slash);
  if (!is_integer_token(num)) {
    throw Error(ErrorCode::MalformedInput, "invalid rational \"" + std::string(text) + "\"",
                {{"value", std::string(text)}});
  }
  if (slash == std::string_view::npos) return Rational(parse_integer(num));
  const std::string_view den = s.substr(slash + 1);
  if (!is_integer_token(den) || den.front() == '-' || den.front() == '+') {
    throw Error(ErrorCode::MalformedInput,
                "invalid rational \"" + std::string(text) + "\": denominator must be a positive integer",
                {{"value", std::string(text)}});
  }
  const BigInt d = parse_integer(den);
  if (d == 0) {
    throw Error(ErrorCode::MalformedInput, "invalid rational \"" + std::string(text) + "\": zero denominator",
                {{"value", std::string(text)}});
  }
  return Rational(parse_integer(num), d);
}

std::string to_string(const Rational& value) {
  const BigInt& n = boost::multiprecision::numerator(value);
  const BigInt& d = boost::multiprecision::denominator(value);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::vector<double> to_double(std::span<const Rational> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

std::int64_t checked_int64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::InvalidArgument, "integer overflow: " + value.str() + " exceeds 64 bits");
  }
  return value.convert_to<std::int64_t>();
}

RationalVec zero_vector(std::size_t dim) { return RationalVec(dim, Rational(0)); }

RationalVec add(const RationalVec& a, const RationalVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sizes differ");
  RationalVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RationalVec subtract(const RationalVec& a, const RationalVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sizes differ");
  RationalVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RationalVec scale(const Rational& s, const RationalVec& v) {
  RationalVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

}  // namespace ergopt
