#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "topicdet/corpus.hpp"

namespace topicdet {

/// Undirected, self-loop-free adjacency over point/document indices.
/// Neighbor lists are sorted and duplicate-free.
class RelationGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  RelationGraph() = default;
  explicit RelationGraph(std::size_t node_count) : adjacency_(node_count) {}

  // Self-loops are discarded, duplicate and reversed edges collapse.
  static RelationGraph from_edges(std::size_t node_count, const std::vector<Edge>& edges);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return edge_count_ == 0; }

  std::span<const std::size_t> neighbors(std::size_t node) const { return adjacency_.at(node); }
  std::size_t degree(std::size_t node) const { return adjacency_.at(node).size(); }
  bool has_edge(std::size_t a, std::size_t b) const;

  // Each edge once, as (smaller, larger), in ascending order.
  std::vector<Edge> edges() const;

  friend bool operator==(const RelationGraph&, const RelationGraph&) = default;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Edge {a, b} for every forward link a -> b; nodes are document positions.
RelationGraph build_relation_graph(const std::vector<Document>& docs);

}  // namespace topicdet
