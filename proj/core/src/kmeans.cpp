#include <algorithm>
#include <limits>
#include <random>

#include "topicdet/clustering.hpp"
#include "topicdet/error.hpp"

namespace topicdet {

namespace {

constexpr std::size_t kMaxIterations = 100;
constexpr double kShiftTolerance = 1e-6;

std::size_t nearest(const Eigen::MatrixXd& centroids, const Eigen::RowVectorXd& x, double& best_sq) {
  std::size_t best = 0;
  best_sq = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double sq = (centroids.row(c) - x).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best = static_cast<std::size_t>(c);
    }
  }
  return best;
}

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& points, std::size_t k, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), points.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t pick = first;
    if (c > 0) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
      if (total > 0.0) {
        std::vector<double> weights(n);
        for (std::size_t i = 0; i < n; ++i) weights[i] = chosen[i] ? 0.0 : d2[i];
        pick = std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng);
      } else {
        // Every remaining point coincides with a centroid; take any unused one.
        std::vector<std::size_t> unused;
        for (std::size_t i = 0; i < n; ++i) {
          if (!chosen[i]) unused.push_back(i);
        }
        pick = unused[std::uniform_int_distribution<std::size_t>(0, unused.size() - 1)(rng)];
      }
    }
    chosen[pick] = true;
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.row(static_cast<Eigen::Index>(i)) -
                               centroids.row(static_cast<Eigen::Index>(c)))
                                  .squaredNorm());
    }
  }
  return centroids;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, std::size_t k, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  KMeansResult result;
  result.centroids = plus_plus_seeds(points, k, rng);
  std::vector<std::size_t> assign(n, 0);
  std::vector<double> dist_sq(n, 0.0);

  const auto assign_all = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      assign[i] = nearest(result.centroids, points.row(static_cast<Eigen::Index>(i)), dist_sq[i]);
    }
  };

  assign_all();
  for (result.iterations = 1; result.iterations <= kMaxIterations; ++result.iterations) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(assign[i])) += points.row(static_cast<Eigen::Index>(i));
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Reseed with the point farthest from its centroid among clusters that
      // can spare a member.
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] > 1 && (far == n || dist_sq[i] > dist_sq[far])) far = i;
      }
      if (far == n) continue;
      const auto row = points.row(static_cast<Eigen::Index>(far));
      sums.row(static_cast<Eigen::Index>(assign[far])) -= row;
      --counts[assign[far]];
      sums.row(static_cast<Eigen::Index>(c)) = row;
      counts[c] = 1;
      assign[far] = c;
      dist_sq[far] = 0.0;
    }

    Eigen::MatrixXd updated = result.centroids;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        updated.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
      }
    }
    const double shift = (updated - result.centroids).rowwise().norm().maxCoeff();
    result.centroids = std::move(updated);
    const std::vector<std::size_t> previous = assign;
    assign_all();
    if (shift < kShiftTolerance && assign == previous) break;
  }
  result.iterations = std::min(result.iterations, kMaxIterations);

  result.inertia = 0.0;
  for (const double d : dist_sq) result.inertia += d;
  ClusterAssignment& a = result.assignment;
  a.labels.assign(assign.begin(), assign.end());
  a.cluster_count = k;
  std::vector<bool> used(k, false);
  for (const std::size_t c : assign) used[c] = true;
  if (std::count(used.begin(), used.end(), true) != static_cast<std::ptrdiff_t>(k)) {
    a.labels = canonical_labels(a.labels);
    a.cluster_count = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  }
  a.rescued.assign(n, false);
  a.states.assign(n, PointState::visited);
  return result;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    std::size_t restarts) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n == 0) fail(ErrorCategory::data, "k-means on an empty point set");
  if (k < 1 || k > n) {
    fail(ErrorCategory::usage, "k-means needs 1 <= k <= n (k = " + std::to_string(k) +
                                   ", n = " + std::to_string(n) + ")");
  }
  if (restarts < 1) fail(ErrorCategory::usage, "k-means restarts must be >= 1");
  if (!points.allFinite()) fail(ErrorCategory::data, "k-means input has non-finite values");

  std::mt19937_64 rng(seed);
  KMeansResult best = lloyd(points, k, rng);
  for (std::size_t r = 1; r < restarts; ++r) {
    KMeansResult next = lloyd(points, k, rng);
    if (next.inertia < best.inertia) best = std::move(next);
  }
  return best;
}

}  // namespace topicdet
