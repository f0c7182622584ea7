#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topicdet/relation_graph.hpp"
#include "topicdet/synthetic.hpp"

namespace fixture {

struct Cloud {
  Eigen::MatrixXd points;
  topicdet::RelationGraph graph;
  std::vector<std::string> labels;
  std::vector<std::size_t> blob_centers;  // per blob, index of the point nearest its center
};

// Generates the cloud, then locates the point nearest each blob center.
Cloud make_cloud(const topicdet::PointCloudSpec& spec);

// Two 80-point discs in the plane with a 2.0 gap between their rims.
// Clustered with eps 0.4, MinPts 4 (euclidean).
topicdet::PointCloudSpec two_blob_spec();
inline constexpr double kTwoBlobEps = 0.4;
inline constexpr std::size_t kTwoBlobMinPts = 4;

// Five topics, each three 80-point sub-discs separated by gaps of 0.2 and
// 0.45; 40 uniform noise points. Graph edges join consecutive sub-discs of a
// topic through their most central points.
Cloud bridged_topics();
std::vector<double> bridged_topics_sweep();  // 10 eps values
inline constexpr std::size_t kBridgedMinPts = 4;

// Synthetic corpus and embedding specs for the embedding/keyword trend checks.
topicdet::SyntheticCorpusSpec trend_corpus_spec();
topicdet::SyntheticEmbeddingSpec trend_embedding_spec();

}  // namespace fixture
