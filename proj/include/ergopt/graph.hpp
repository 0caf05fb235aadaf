#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ergopt/rational.hpp"
#include "ergopt/sft.hpp"

namespace ergopt {

struct Edge {
  int source = 0;
  int target = 0;
  // The allowed (k+1)-word this edge stands for.
  Word word;
  double potential = 0.0;
  RationalVec constraint;
  // constraint * common_denominator, exactly.
  std::vector<std::int64_t> scaled_constraint;
  std::vector<double> constraint_value;
};

// Higher-block presentation: vertices are allowed k-words, edges are
// allowed (k+1)-words carrying the potential and constraint values.
// Vertices and edges are sorted lexicographically by word, so vertex
// index order is word order.
class WeightedDigraph {
 public:
  WeightedDigraph(int block_length, int alphabet_size, std::vector<Word> vertices,
                  std::vector<Edge> edges);

  int block_length() const noexcept { return block_length_; }
  int alphabet_size() const noexcept { return alphabet_size_; }
  int dim() const noexcept { return dim_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Word>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<int>& out_edges(int v) const { return out_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& in_edges(int v) const { return in_.at(static_cast<std::size_t>(v)); }
  const BigInt& common_denominator() const noexcept { return common_denominator_; }
  bool strongly_connected() const noexcept { return strongly_connected_; }

  std::optional<int> find_vertex(std::span<const int> word) const;
  std::optional<int> find_edge(int source, int target) const;

  std::vector<double> potential_weights() const;
  // <c, phi_e> per edge.
  std::vector<double> constraint_weights(std::span<const double> c) const;
  // a_e - <c, phi_e> per edge.
  std::vector<double> tilted_weights(std::span<const double> c) const;

  // sup over edges of |a_e|, and of the Euclidean norm of phi_e.
  double potential_norm() const;
  double constraint_norm() const;

 private:
  int block_length_;
  int alphabet_size_;
  int dim_ = 0;
  std::vector<Word> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  BigInt common_denominator_{1};
  bool strongly_connected_ = false;
};

// Builds the higher-block graph with k = max(1, depth A, depth phi),
// prunes vertices without incoming or outgoing edges until none remain,
// and requires the rest to be strongly connected.
// Throws NoCycle when nothing survives, NotTransitive otherwise.
WeightedDigraph build_graph(const SftSpec& spec, const Potential& potential,
                            const Constraint& constraint);

// Strongly connected components (Tarjan), component id per vertex.
std::vector<int> strongly_connected_components(std::size_t num_vertices,
                                               const std::vector<std::vector<int>>& successors);

}  // namespace ergopt
