#include "fixtures.hpp"

namespace fixture {

using topicdet::BlobSpec;
using topicdet::PointCloudSpec;

Cloud make_cloud(const PointCloudSpec& spec) {
  topicdet::PointCloud pc = topicdet::generate_point_cloud(spec);
  Cloud c{std::move(pc.points), std::move(pc.graph), std::move(pc.labels), {}};
  std::size_t begin = 0;
  for (const BlobSpec& b : spec.blobs) {
    const Eigen::Map<const Eigen::RowVectorXd> center(b.center.data(), static_cast<Eigen::Index>(b.center.size()));
    std::size_t best = begin;
    for (std::size_t i = begin; i < begin + b.count; ++i) {
      if ((c.points.row(static_cast<Eigen::Index>(i)) - center).norm() <
          (c.points.row(static_cast<Eigen::Index>(best)) - center).norm()) {
        best = i;
      }
    }
    c.blob_centers.push_back(best);
    begin += b.count;
  }
  return c;
}

PointCloudSpec two_blob_spec() {
  PointCloudSpec s;
  s.dimension = 2;
  s.seed = 11;
  s.blobs.push_back(BlobSpec{{0.0, 0.0}, 1.0, 80, "left"});
  s.blobs.push_back(BlobSpec{{4.0, 0.0}, 1.0, 80, "right"});
  return s;
}

Cloud bridged_topics() {
  constexpr double radius = 0.5;
  constexpr std::size_t per_blob = 80;
  PointCloudSpec s;
  s.dimension = 2;
  s.noise_points = 40;
  s.noise_low = -2.0;
  s.noise_high = 22.0;
  s.seed = 3;
  for (int t = 0; t < 5; ++t) {
    const double x0 = 4.5 * t;
    const double y0 = (t % 2) * 6.0;
    const double xs[3] = {x0, x0 + 2 * radius + 0.2, x0 + 4 * radius + 0.2 + 0.45};
    for (const double x : xs) {
      s.blobs.push_back(BlobSpec{{x, y0}, radius, per_blob, "topic" + std::to_string(t)});
    }
  }
  Cloud c = make_cloud(s);
  std::vector<topicdet::RelationGraph::Edge> edges;
  for (std::size_t t = 0; t < 5; ++t) {
    edges.emplace_back(c.blob_centers[3 * t], c.blob_centers[3 * t + 1]);
    edges.emplace_back(c.blob_centers[3 * t + 1], c.blob_centers[3 * t + 2]);
  }
  c.graph = topicdet::RelationGraph::from_edges(static_cast<std::size_t>(c.points.rows()), edges);
  return c;
}

std::vector<double> bridged_topics_sweep() {
  std::vector<double> eps;
  for (int i = 0; i < 10; ++i) eps.push_back(0.2 + 0.05 * i);
  return eps;
}

topicdet::SyntheticCorpusSpec trend_corpus_spec() {
  topicdet::SyntheticCorpusSpec s;  // 5 topics x 100 documents
  s.seed = 1;
  return s;
}

topicdet::SyntheticEmbeddingSpec trend_embedding_spec() {
  topicdet::SyntheticEmbeddingSpec s;
  s.dim = 32;
  return s;
}

}  // namespace fixture
