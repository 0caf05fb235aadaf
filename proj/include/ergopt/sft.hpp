#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergopt/error.hpp"
#include "ergopt/rational.hpp"

namespace ergopt {

using Word = std::vector<int>;

// Words are serialized as comma-separated symbol indices, e.g. "2,3".
std::string word_key(std::span<const int> word);
Word parse_word(std::string_view text);

// One-sided subshift of finite type: alphabet {0, ..., n-1} and the
// allowed one-step transitions. The constructor only checks the shape;
// dynamical requirements (a cycle exists, the recurrent part is strongly
// connected) are reported by dynamics_violations() and enforced when the
// graph is built.
class SftSpec {
 public:
  // Full shift.
  explicit SftSpec(int alphabet_size);
  SftSpec(int alphabet_size, std::vector<std::vector<bool>> transitions);

  int alphabet_size() const noexcept { return alphabet_size_; }
  bool allows(int from, int to) const;
  const std::vector<std::vector<bool>>& transitions() const noexcept { return transitions_; }

  bool is_allowed(std::span<const int> word) const;
  // All allowed words of the given length, in lexicographic order.
  std::vector<Word> allowed_words(std::size_t length) const;

  // Symbols that lie on at least one directed cycle.
  std::vector<int> recurrent_symbols() const;
  std::vector<std::pair<ErrorCode, std::string>> dynamics_violations() const;

 private:
  int alphabet_size_;
  std::vector<std::vector<bool>> transitions_;
};

namespace detail {

inline int value_dim(double) { return 1; }
inline int value_dim(const RationalVec& v) { return static_cast<int>(v.size()); }

inline double value_add(double a, double b) { return a + b; }
inline RationalVec value_add(const RationalVec& a, const RationalVec& b) { return add(a, b); }
inline double value_sub(double a, double b) { return a - b; }
inline RationalVec value_sub(const RationalVec& a, const RationalVec& b) { return subtract(a, b); }

}  // namespace detail

// A function of the first depth+1 coordinates. Potentials are real
// scalars; constraints are exact rational vectors.
template <typename Value>
class LocallyConstantFn {
 public:
  LocallyConstantFn(int depth, Value default_value, std::map<Word, Value> values = {})
      : depth_(depth), dim_(detail::value_dim(default_value)),
        default_(std::move(default_value)), values_(std::move(values)) {
    if (depth_ < 0) {
      throw Error(ErrorCode::InvalidArgument, "depth must be nonnegative");
    }
    for (const auto& [word, value] : values_) {
      check_entry(word, value);
    }
  }

  int depth() const noexcept { return depth_; }
  int dim() const noexcept { return dim_; }
  const Value& default_value() const noexcept { return default_; }
  const std::map<Word, Value>& values() const noexcept { return values_; }

  void set(Word word, Value value) {
    check_entry(word, value);
    values_.insert_or_assign(std::move(word), std::move(value));
  }

  // Looks up the first depth+1 symbols of `coords`.
  const Value& operator()(std::span<const int> coords) const {
    if (coords.size() < static_cast<std::size_t>(depth_ + 1)) {
      throw Error(ErrorCode::InvalidArgument, "word shorter than depth + 1");
    }
    Word key(coords.begin(), coords.begin() + depth_ + 1);
    auto it = values_.find(key);
    return it == values_.end() ? default_ : it->second;
  }

  // Throws MalformedInput listing every key that is not an allowed word.
  void validate(const SftSpec& spec) const {
    std::vector<std::string> bad;
    for (const auto& [word, value] : values_) {
      bool symbols_ok = true;
      for (int s : word) symbols_ok = symbols_ok && s >= 0 && s < spec.alphabet_size();
      if (!symbols_ok || !spec.is_allowed(word)) {
        bad.push_back("word \"" + word_key(word) + "\" is not allowed by the transitions");
      }
    }
    if (!bad.empty()) {
      throw Error(ErrorCode::MalformedInput, "function keys are not allowed words", {}, bad);
    }
  }

  // Same function written out explicitly at a larger depth.
  LocallyConstantFn lifted(const SftSpec& spec, int depth) const {
    if (depth < depth_) {
      throw Error(ErrorCode::InvalidArgument, "cannot lift to a smaller depth");
    }
    std::map<Word, Value> table;
    for (auto& word : spec.allowed_words(static_cast<std::size_t>(depth + 1))) {
      Value v = (*this)(word);
      table.emplace(std::move(word), std::move(v));
    }
    return LocallyConstantFn(depth, default_, std::move(table));
  }

 private:
  void check_entry(const Word& word, const Value& value) const {
    if (word.size() != static_cast<std::size_t>(depth_ + 1)) {
      throw Error(ErrorCode::MalformedInput,
                  "word \"" + word_key(word) + "\" has length " + std::to_string(word.size()) +
                      ", expected depth + 1 = " + std::to_string(depth_ + 1));
    }
    if (detail::value_dim(value) != dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "value for word \"" + word_key(word) + "\" has the wrong dimension");
    }
  }

  int depth_;
  int dim_;
  Value default_;
  std::map<Word, Value> values_;
};

using Potential = LocallyConstantFn<double>;
using Constraint = LocallyConstantFn<RationalVec>;

// f + g∘σ − g + a, written out on every allowed word of length
// max(depth f, depth g + 1) + 1.
template <typename Value>
LocallyConstantFn<Value> add_coboundary(const SftSpec& spec, const LocallyConstantFn<Value>& f,
                                        const LocallyConstantFn<Value>& g, const Value& a) {
  if (f.dim() != g.dim() || detail::value_dim(a) != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "add_coboundary: dimension mismatch",
                {{"f_dim", std::to_string(f.dim())}, {"g_dim", std::to_string(g.dim())}});
  }
  const int depth = std::max(f.depth(), g.depth() + 1);
  std::map<Word, Value> table;
  for (auto& word : spec.allowed_words(static_cast<std::size_t>(depth + 1))) {
    std::span<const int> w(word);
    Value v = detail::value_add(detail::value_add(f(w), detail::value_sub(g(w.subspan(1)), g(w))), a);
    table.emplace(std::move(word), std::move(v));
  }
  return LocallyConstantFn<Value>(depth, detail::value_add(f.default_value(), a), std::move(table));
}

}  // namespace ergopt
