#include "ergopt/sft.hpp"

#include <charconv>

#include "ergopt/graph.hpp"

namespace ergopt {

std::string word_key(std::span<const int> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(word[i]);
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word word;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    std::string_view token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int symbol = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), symbol);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || symbol < 0) {
      throw Error(ErrorCode::MalformedInput, "invalid word \"" + std::string(text) + "\"",
                  {{"word", std::string(text)}});
    }
    word.push_back(symbol);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return word;
}

SftSpec::SftSpec(int alphabet_size)
    : SftSpec(alphabet_size,
              std::vector<std::vector<bool>>(static_cast<std::size_t>(std::max(alphabet_size, 0)),
                                             std::vector<bool>(static_cast<std::size_t>(std::max(alphabet_size, 0)), true))) {}

SftSpec::SftSpec(int alphabet_size, std::vector<std::vector<bool>> transitions)
    : alphabet_size_(alphabet_size), transitions_(std::move(transitions)) {
  if (alphabet_size_ <= 0) {
    throw Error(ErrorCode::MalformedInput, "alphabet size must be positive",
                {{"alphabet", std::to_string(alphabet_size_)}});
  }
  std::vector<std::string> problems;
  if (transitions_.size() != static_cast<std::size_t>(alphabet_size_)) {
    problems.push_back("transition matrix has " + std::to_string(transitions_.size()) +
                       " rows, expected " + std::to_string(alphabet_size_));
  }
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    if (transitions_[i].size() != static_cast<std::size_t>(alphabet_size_)) {
      problems.push_back("transition row " + std::to_string(i) + " has " +
                         std::to_string(transitions_[i].size()) + " entries, expected " +
                         std::to_string(alphabet_size_));
    }
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::MalformedInput, "malformed transition matrix", {}, problems);
  }
}

bool SftSpec::allows(int from, int to) const {
  if (from < 0 || to < 0 || from >= alphabet_size_ || to >= alphabet_size_) return false;
  return transitions_[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
}

bool SftSpec::is_allowed(std::span<const int> word) const {
  for (int s : word) {
    if (s < 0 || s >= alphabet_size_) return false;
  }
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    if (!allows(word[i], word[i + 1])) return false;
  }
  return true;
}

std::vector<Word> SftSpec::allowed_words(std::size_t length) const {
  std::vector<Word> words;
  if (length == 0) return {Word{}};
  for (int s = 0; s < alphabet_size_; ++s) words.push_back({s});
  for (std::size_t len = 1; len < length; ++len) {
    std::vector<Word> next;
    for (const auto& w : words) {
      for (int s = 0; s < alphabet_size_; ++s) {
        if (allows(w.back(), s)) {
          Word ext = w;
          ext.push_back(s);
          next.push_back(std::move(ext));
        }
      }
    }
    words = std::move(next);
  }
  return words;
}

namespace {

std::vector<std::vector<int>> symbol_successors(const SftSpec& spec) {
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(spec.alphabet_size()));
  for (int i = 0; i < spec.alphabet_size(); ++i) {
    for (int j = 0; j < spec.alphabet_size(); ++j) {
      if (spec.allows(i, j)) succ[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  return succ;
}

}  // namespace

std::vector<int> SftSpec::recurrent_symbols() const {
  const auto succ = symbol_successors(*this);
  const auto comp = strongly_connected_components(succ.size(), succ);
  std::vector<int> size(succ.size(), 0);
  for (int c : comp) ++size[static_cast<std::size_t>(c)];
  std::vector<int> out;
  for (int s = 0; s < alphabet_size_; ++s) {
    if (size[static_cast<std::size_t>(comp[static_cast<std::size_t>(s)])] > 1 || allows(s, s)) {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<std::pair<ErrorCode, std::string>> SftSpec::dynamics_violations() const {
  const auto recurrent = recurrent_symbols();
  if (recurrent.empty()) {
    return {{ErrorCode::NoCycle, "transition graph has no directed cycle"}};
  }
  const auto succ = symbol_successors(*this);
  const auto comp = strongly_connected_components(succ.size(), succ);
  const int first = comp[static_cast<std::size_t>(recurrent.front())];
  for (int s : recurrent) {
    if (comp[static_cast<std::size_t>(s)] != first) {
      return {{ErrorCode::NotTransitive,
               "recurrent symbols " + std::to_string(recurrent.front()) + " and " +
                   std::to_string(s) + " are not mutually reachable"}};
    }
  }
  return {};
}

}  // namespace ergopt
