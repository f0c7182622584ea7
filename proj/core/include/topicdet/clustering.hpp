#pragma once

// Density clustering over sentence embeddings. RADBSCAN extends DBSCAN's
// density-reachability with relation-graph edges: a point's graph neighbors
// join its expansion worklist regardless of distance.
//
// Scan and worklist order are fixed (ascending point index, FIFO with
// dedup), so border-point assignment is reproducible.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "topicdet/relation_graph.hpp"

namespace topicdet {

enum class DistanceMetric { cosine, euclidean };

std::string_view to_string(DistanceMetric metric) noexcept;
DistanceMetric parse_distance_metric(std::string_view text);

/// Rows are points. Cosine distance (1 - cos) requires nonzero rows.
class PointSet {
 public:
  PointSet(Eigen::MatrixXd points, DistanceMetric metric);

  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  Eigen::Index dim() const noexcept { return points_.cols(); }
  DistanceMetric metric() const noexcept { return metric_; }
  const Eigen::MatrixXd& points() const noexcept { return points_; }

  double distance(std::size_t a, std::size_t b) const;

 private:
  Eigen::MatrixXd points_;
  Eigen::MatrixXd unit_rows_;  // cosine only
  DistanceMetric metric_;
};

struct RadbscanConfig {
  double eps = 0.5;
  std::size_t min_pts = 4;

  void validate() const;
};

enum class PointState : std::uint8_t { undefined, visited, noise };

inline constexpr std::int64_t kNoiseLabel = -1;

struct ClusterAssignment {
  std::vector<std::int64_t> labels;  // dense in [0, cluster_count) or kNoiseLabel
  std::size_t cluster_count = 0;
  std::vector<bool> rescued;         // marked noise first, labeled later
  std::vector<PointState> states;    // final per-point state

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t noise_count() const noexcept;

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

struct RegionQueryResult {
  std::vector<std::size_t> neighbors;  // dist <= eps, includes the point, ascending
  std::vector<std::size_t> related;    // graph neighbors, ascending
};

RegionQueryResult region_query(std::size_t point, const PointSet& points,
                               const RelationGraph& graph, double eps);

/// Mutable per-point bookkeeping shared by the outer scan and expansion.
struct ClusteringState {
  explicit ClusteringState(std::size_t n)
      : states(n, PointState::undefined), labels(n), rescued(n, false) {}

  std::vector<PointState> states;
  std::vector<std::optional<std::int64_t>> labels;
  std::vector<bool> rescued;
};

/// Grows cluster `label` from core point `seed_point` through the worklist
/// `seeds`. Unvisited members are marked visited and queried; core members
/// contribute their eps-neighbors, every member contributes its graph
/// neighbors. Members without a label receive `label`; existing labels are
/// never overwritten.
void expand_cluster(std::size_t seed_point, std::vector<std::size_t> seeds, std::int64_t label,
                    const PointSet& points, const RelationGraph& graph,
                    const RadbscanConfig& config, ClusteringState& state);

/// Core test uses spatial neighbors only; graph neighbors join the seed set
/// after the test.
ClusterAssignment radbscan(const PointSet& points, const RelationGraph& graph,
                           const RadbscanConfig& config);

/// Classic DBSCAN, written independently of radbscan.
ClusterAssignment dbscan(const PointSet& points, const RadbscanConfig& config);

/// Brute-force core-point flags: |{q : dist(p, q) <= eps}| >= min_pts.
std::vector<bool> core_points(const PointSet& points, const RadbscanConfig& config);

struct KMeansResult {
  ClusterAssignment assignment;
  Eigen::MatrixXd centroids;  // k x D
  double inertia = 0.0;       // sum of squared euclidean distances
  std::size_t iterations = 0;
};

/// Lloyd iterations from k-means++ seeding; stops after 100 iterations or when
/// no centroid moves more than 1e-6. Empty clusters are reseeded with the
/// point farthest from its centroid. With several restarts the run with the
/// lowest inertia wins.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    std::size_t restarts = 1);

/// Renumbers labels by first appearance; noise stays noise.
std::vector<std::int64_t> canonical_labels(const std::vector<std::int64_t>& labels);

// CSV "id,label,rescued" with label -1 for noise and rescued in {0,1}.
std::string assignment_to_csv(const std::vector<std::string>& ids, const ClusterAssignment& a);
void write_assignment_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                          const ClusterAssignment& a);

struct AssignmentFile {
  std::vector<std::string> ids;
  std::vector<std::int64_t> labels;
  std::vector<bool> rescued;
};
AssignmentFile read_assignment_csv(const std::filesystem::path& path);

}  // namespace topicdet
