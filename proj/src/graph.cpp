#include "ergopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ergopt {

std::vector<int> strongly_connected_components(std::size_t n,
                                               const std::vector<std::vector<int>>& successors) {
  // Kosaraju with explicit stacks.
  std::vector<std::vector<int>> predecessors(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int w : successors[v]) predecessors[static_cast<std::size_t>(w)].push_back(static_cast<int>(v));
  }
  std::vector<int> order;
  std::vector<bool> seen(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    seen[root] = true;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& succ = successors[static_cast<std::size_t>(v)];
      if (next < succ.size()) {
        const int w = succ[next++];
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  int count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[static_cast<std::size_t>(*it)] >= 0) continue;
    std::vector<int> stack{*it};
    comp[static_cast<std::size_t>(*it)] = count;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : predecessors[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return comp;
}

WeightedDigraph::WeightedDigraph(int block_length, int alphabet_size, std::vector<Word> vertices,
                                 std::vector<Edge> edges)
    : block_length_(block_length),
      alphabet_size_(alphabet_size),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      out_(vertices_.size()),
      in_(vertices_.size()) {
  if (!edges_.empty()) dim_ = static_cast<int>(edges_.front().constraint.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.source < 0 || edge.target < 0 || static_cast<std::size_t>(edge.source) >= vertices_.size() ||
        static_cast<std::size_t>(edge.target) >= vertices_.size()) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    if (static_cast<int>(edge.constraint.size()) != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "edges carry constraints of different dimensions");
    }
    out_[static_cast<std::size_t>(edge.source)].push_back(static_cast<int>(e));
    in_[static_cast<std::size_t>(edge.target)].push_back(static_cast<int>(e));
    for (const auto& value : edge.constraint) {
      common_denominator_ = lcm(common_denominator_, boost::multiprecision::denominator(value));
    }
  }
  for (auto& edge : edges_) {
    edge.scaled_constraint.clear();
    edge.constraint_value.clear();
    for (const auto& value : edge.constraint) {
      const Rational scaled = value * Rational(common_denominator_);
      edge.scaled_constraint.push_back(checked_int64(boost::multiprecision::numerator(scaled)));
      edge.constraint_value.push_back(to_double(value));
    }
  }
  std::vector<std::vector<int>> succ(vertices_.size());
  for (const auto& edge : edges_) succ[static_cast<std::size_t>(edge.source)].push_back(edge.target);
  const auto comp = strongly_connected_components(vertices_.size(), succ);
  strongly_connected_ = !vertices_.empty() &&
                        std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

std::optional<int> WeightedDigraph::find_vertex(std::span<const int> word) const {
  Word key(word.begin(), word.end());
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), key);
  if (it == vertices_.end() || *it != key) return std::nullopt;
  return static_cast<int>(it - vertices_.begin());
}

std::optional<int> WeightedDigraph::find_edge(int source, int target) const {
  if (source < 0 || static_cast<std::size_t>(source) >= out_.size()) return std::nullopt;
  for (int e : out_[static_cast<std::size_t>(source)]) {
    if (edges_[static_cast<std::size_t>(e)].target == target) return e;
  }
  return std::nullopt;
}

std::vector<double> WeightedDigraph::potential_weights() const {
  std::vector<double> w;
  w.reserve(edges_.size());
  for (const auto& e : edges_) w.push_back(e.potential);
  return w;
}

std::vector<double> WeightedDigraph::constraint_weights(std::span<const double> c) const {
  if (c.size() != static_cast<std::size_t>(dim_)) {
    throw Error(ErrorCode::DimensionMismatch, "direction has dimension " + std::to_string(c.size()) +
                                                  ", constraint has " + std::to_string(dim_));
  }
  std::vector<double> w;
  w.reserve(edges_.size());
  for (const auto& e : edges_) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * e.constraint_value[i];
    w.push_back(s);
  }
  return w;
}

std::vector<double> WeightedDigraph::tilted_weights(std::span<const double> c) const {
  auto w = constraint_weights(c);
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = edges_[e].potential - w[e];
  return w;
}

double WeightedDigraph::potential_norm() const {
  double m = 0.0;
  for (const auto& e : edges_) m = std::max(m, std::abs(e.potential));
  return m;
}

double WeightedDigraph::constraint_norm() const {
  double m = 0.0;
  for (const auto& e : edges_) {
    double s = 0.0;
    for (double v : e.constraint_value) s += v * v;
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

WeightedDigraph build_graph(const SftSpec& spec, const Potential& potential,
                            const Constraint& constraint) {
  potential.validate(spec);
  constraint.validate(spec);
  if (constraint.dim() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "constraint must have dimension >= 1");
  }
  const int k = std::max({1, potential.depth(), constraint.depth()});
  std::vector<Word> words = spec.allowed_words(static_cast<std::size_t>(k));
  std::vector<Word> edge_words = spec.allowed_words(static_cast<std::size_t>(k + 1));

  // Iteratively drop vertices lacking an incoming or outgoing edge.
  std::map<Word, bool> alive;
  for (const auto& w : words) alive[w] = true;
  std::vector<bool> edge_alive(edge_words.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    std::map<Word, int> in_count;
    std::map<Word, int> out_count;
    for (std::size_t e = 0; e < edge_words.size(); ++e) {
      if (!edge_alive[e]) continue;
      const Word& ew = edge_words[e];
      Word src(ew.begin(), ew.end() - 1);
      Word tgt(ew.begin() + 1, ew.end());
      if (!alive[src] || !alive[tgt]) {
        edge_alive[e] = false;
        changed = true;
        continue;
      }
      ++out_count[src];
      ++in_count[tgt];
    }
    for (auto& [w, live] : alive) {
      if (live && (in_count[w] == 0 || out_count[w] == 0)) {
        live = false;
        changed = true;
      }
    }
  }
  std::vector<Word> vertices;
  for (const auto& [w, live] : alive) {
    if (live) vertices.push_back(w);
  }
  if (vertices.empty()) {
    throw Error(ErrorCode::NoCycle, "the subshift has no periodic orbit (no invariant measure)");
  }
  std::map<Word, int> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = static_cast<int>(i);

  std::vector<Edge> edges;
  for (std::size_t e = 0; e < edge_words.size(); ++e) {
    if (!edge_alive[e]) continue;
    const Word& ew = edge_words[e];
    Edge edge;
    edge.source = index.at(Word(ew.begin(), ew.end() - 1));
    edge.target = index.at(Word(ew.begin() + 1, ew.end()));
    edge.word = ew;
    edge.potential = potential(ew);
    edge.constraint = constraint(ew);
    edges.push_back(std::move(edge));
  }
  WeightedDigraph graph(k, spec.alphabet_size(), std::move(vertices), std::move(edges));
  if (!graph.strongly_connected()) {
    throw Error(ErrorCode::NotTransitive,
                "the recurrent part of the subshift is not strongly connected",
                {{"vertices", std::to_string(graph.num_vertices())}});
  }
  return graph;
}

}  // namespace ergopt
