#include "topicdet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

std::string_view to_string(DistanceMetric metric) noexcept {
  return metric == DistanceMetric::cosine ? "cosine" : "euclidean";
}

DistanceMetric parse_distance_metric(std::string_view text) {
  if (text == "cosine") return DistanceMetric::cosine;
  if (text == "euclidean") return DistanceMetric::euclidean;
  fail(ErrorCategory::usage, "unknown distance metric '" + std::string(text) + "'");
}

PointSet::PointSet(Eigen::MatrixXd points, DistanceMetric metric)
    : points_(std::move(points)), metric_(metric) {
  if (points_.rows() < 1) fail(ErrorCategory::data, "point set is empty");
  if (!points_.allFinite()) fail(ErrorCategory::data, "point set has non-finite coordinates");
  if (metric_ == DistanceMetric::cosine) {
    unit_rows_ = points_;
    for (Eigen::Index r = 0; r < points_.rows(); ++r) {
      const double norm = points_.row(r).norm();
      if (norm == 0.0) {
        fail(ErrorCategory::data,
             "cosine distance needs nonzero points; row " + std::to_string(r) + " is zero");
      }
      unit_rows_.row(r) /= norm;
    }
  }
}

double PointSet::distance(std::size_t a, std::size_t b) const {
  const auto ia = static_cast<Eigen::Index>(a);
  const auto ib = static_cast<Eigen::Index>(b);
  if (metric_ == DistanceMetric::cosine) {
    if (a == b) return 0.0;
    return 1.0 - unit_rows_.row(ia).dot(unit_rows_.row(ib));
  }
  return (points_.row(ia) - points_.row(ib)).norm();
}

void RadbscanConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCategory::usage, "eps must be finite and > 0");
  if (min_pts < 1) fail(ErrorCategory::usage, "MinPts must be >= 1");
}

std::size_t ClusterAssignment::noise_count() const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoiseLabel));
}

RegionQueryResult region_query(std::size_t point, const PointSet& points,
                               const RelationGraph& graph, double eps) {
  RegionQueryResult result;
  for (std::size_t q = 0; q < points.size(); ++q) {
    if (points.distance(point, q) <= eps) result.neighbors.push_back(q);
  }
  if (point < graph.node_count()) {
    const auto related = graph.neighbors(point);
    result.related.assign(related.begin(), related.end());
  }
  return result;
}

void expand_cluster(std::size_t seed_point, std::vector<std::size_t> seeds, std::int64_t label,
                    const PointSet& points, const RelationGraph& graph,
                    const RadbscanConfig& config, ClusteringState& state) {
  const std::size_t n = points.size();
  state.labels[seed_point] = label;

  std::vector<bool> enqueued(n, false);
  std::vector<std::size_t> worklist;
  worklist.reserve(seeds.size());
  const auto push = [&](std::size_t q) {
    if (!enqueued[q]) {
      enqueued[q] = true;
      worklist.push_back(q);
    }
  };
  for (const std::size_t q : seeds) push(q);

  for (std::size_t head = 0; head < worklist.size(); ++head) {
    const std::size_t q = worklist[head];
    if (state.states[q] != PointState::visited) {
      const bool was_noise = state.states[q] == PointState::noise;
      state.states[q] = PointState::visited;
      const RegionQueryResult region = region_query(q, points, graph, config.eps);
      if (region.neighbors.size() >= config.min_pts) {
        for (const std::size_t r : region.neighbors) push(r);
      }
      for (const std::size_t r : region.related) push(r);
      if (was_noise && !state.labels[q]) state.rescued[q] = true;
    }
    if (!state.labels[q]) state.labels[q] = label;
  }
}

ClusterAssignment radbscan(const PointSet& points, const RelationGraph& graph,
                           const RadbscanConfig& config) {
  config.validate();
  const std::size_t n = points.size();
  if (graph.node_count() != 0 && graph.node_count() != n) {
    fail(ErrorCategory::data, "relation graph has " + std::to_string(graph.node_count()) +
                                  " nodes for " + std::to_string(n) + " points");
  }

  ClusteringState state(n);
  std::int64_t next_label = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (state.states[p] != PointState::undefined) continue;
    RegionQueryResult region = region_query(p, points, graph, config.eps);
    if (region.neighbors.size() < config.min_pts) {
      state.states[p] = PointState::noise;
      continue;
    }
    const std::int64_t label = next_label++;
    state.states[p] = PointState::visited;
    std::vector<std::size_t> seeds = std::move(region.neighbors);
    seeds.insert(seeds.end(), region.related.begin(), region.related.end());
    expand_cluster(p, std::move(seeds), label, points, graph, config, state);
  }

  ClusterAssignment out;
  out.cluster_count = static_cast<std::size_t>(next_label);
  out.labels.resize(n);
  for (std::size_t p = 0; p < n; ++p) out.labels[p] = state.labels[p].value_or(kNoiseLabel);
  out.rescued = std::move(state.rescued);
  out.states = std::move(state.states);
  return out;
}

ClusterAssignment dbscan(const PointSet& points, const RadbscanConfig& config) {
  config.validate();
  constexpr std::int64_t kUnset = -2;
  const std::size_t n = points.size();

  const auto neighborhood = [&](std::size_t p) {
    std::deque<std::size_t> out;
    for (std::size_t q = 0; q < n; ++q) {
      if (points.distance(p, q) <= config.eps) out.push_back(q);
    }
    return out;
  };

  std::vector<std::int64_t> labels(n, kUnset);
  std::vector<bool> rescued(n, false);
  std::int64_t cluster = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (labels[p] != kUnset) continue;
    std::deque<std::size_t> frontier = neighborhood(p);
    if (frontier.size() < config.min_pts) {
      labels[p] = kNoiseLabel;
      continue;
    }
    labels[p] = cluster;
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      if (labels[q] == kNoiseLabel) {
        labels[q] = cluster;
        rescued[q] = true;
        continue;
      }
      if (labels[q] != kUnset) continue;
      labels[q] = cluster;
      std::deque<std::size_t> more = neighborhood(q);
      if (more.size() >= config.min_pts) frontier.insert(frontier.end(), more.begin(), more.end());
    }
    ++cluster;
  }

  ClusterAssignment out;
  out.cluster_count = static_cast<std::size_t>(cluster);
  out.labels = std::move(labels);
  out.rescued = std::move(rescued);
  out.states.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    out.states[p] = out.labels[p] == kNoiseLabel ? PointState::noise : PointState::visited;
  }
  return out;
}

std::vector<bool> core_points(const PointSet& points, const RadbscanConfig& config) {
  const std::size_t n = points.size();
  std::vector<bool> core(n, false);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t count = 0;
    for (std::size_t q = 0; q < n; ++q) count += points.distance(p, q) <= config.eps ? 1 : 0;
    core[p] = count >= config.min_pts;
  }
  return core;
}

std::vector<std::int64_t> canonical_labels(const std::vector<std::int64_t>& labels) {
  std::unordered_map<std::int64_t, std::int64_t> remap;
  std::vector<std::int64_t> out;
  out.reserve(labels.size());
  for (const std::int64_t l : labels) {
    if (l == kNoiseLabel) {
      out.push_back(kNoiseLabel);
      continue;
    }
    const auto [it, inserted] = remap.try_emplace(l, static_cast<std::int64_t>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

std::string assignment_to_csv(const std::vector<std::string>& ids, const ClusterAssignment& a) {
  if (ids.size() != a.size()) fail(ErrorCategory::data, "assignment and id list differ in length");
  std::string out = "id,label,rescued\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    check_csv_field(ids[i]);
    const bool rescued = i < a.rescued.size() && a.rescued[i];
    out += ids[i] + "," + std::to_string(a.labels[i]) + "," + (rescued ? "1" : "0") + "\n";
  }
  return out;
}

void write_assignment_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                          const ClusterAssignment& a) {
  write_text_file(path, assignment_to_csv(ids, a));
}

AssignmentFile read_assignment_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  AssignmentFile file;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (header) {
      header = false;
      if (fields.size() >= 2 && trim(fields[0]) == "id") continue;
    }
    if (fields.size() != 2 && fields.size() != 3) {
      fail(ErrorCategory::format, path.string() + ":" + std::to_string(line_no) +
                                      ": expected id,label[,rescued]");
    }
    try {
      file.ids.emplace_back(trim(fields[0]));
      file.labels.push_back(parse_int(fields[1]));
      file.rescued.push_back(fields.size() == 3 && parse_int(fields[2]) != 0);
    } catch (const Error& e) {
      fail(ErrorCategory::format, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (file.labels.back() < kNoiseLabel) {
      fail(ErrorCategory::format, path.string() + ":" + std::to_string(line_no) +
                                      ": labels must be >= -1");
    }
  }
  return file;
}

}  // namespace topicdet
