#include "topicdet/relation_graph.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "topicdet/error.hpp"

namespace topicdet {

RelationGraph RelationGraph::from_edges(std::size_t node_count, const std::vector<Edge>& edges) {
  RelationGraph graph(node_count);
  for (const auto& [a, b] : edges) {
    if (a >= node_count || b >= node_count) {
      fail(ErrorCategory::data, "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") references a node outside [0, " +
                                    std::to_string(node_count) + ")");
    }
    if (a == b) continue;
    graph.adjacency_[a].push_back(b);
    graph.adjacency_[b].push_back(a);
  }
  std::size_t half_edges = 0;
  for (auto& list : graph.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    half_edges += list.size();
  }
  graph.edge_count_ = half_edges / 2;
  return graph;
}

bool RelationGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto& list = adjacency_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<RelationGraph::Edge> RelationGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t a = 0; a < adjacency_.size(); ++a) {
    for (const std::size_t b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

RelationGraph build_relation_graph(const std::vector<Document>& docs) {
  std::unordered_map<std::string, std::size_t> position;
  position.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) position.emplace(docs[i].id, i);

  std::vector<RelationGraph::Edge> edges;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (const std::string& target : docs[i].forwards) {
      const auto it = position.find(target);
      if (it == position.end()) {
        fail(ErrorCategory::data,
             "document '" + docs[i].id + "' forwards unknown document '" + target + "'");
      }
      edges.emplace_back(i, it->second);
    }
  }
  return RelationGraph::from_edges(docs.size(), edges);
}

}  // namespace topicdet
