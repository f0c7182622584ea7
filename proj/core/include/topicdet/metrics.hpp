#pragma once

// External agreement between a predicted and a true partition of N samples.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "topicdet/clustering.hpp"

namespace topicdet {

/// One cluster id per sample; ids are arbitrary integers.
struct Partition {
  std::vector<std::int64_t> ids;

  std::size_t size() const noexcept { return ids.size(); }
  static Partition from_strings(const std::vector<std::string>& labels);
};

/// Unordered-pair agreement counts. true_positive: same cluster in both;
/// false_positive: same predicted, different true; false_negative: different
/// predicted, same true.
struct PairCounts {
  std::uint64_t true_positive = 0;
  std::uint64_t false_positive = 0;
  std::uint64_t false_negative = 0;
  std::uint64_t true_negative = 0;

  std::uint64_t total() const noexcept {
    return true_positive + false_positive + false_negative + true_negative;
  }
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

PairCounts pair_counts(const Partition& predicted, const Partition& truth);

/// 2 I(pred; truth) / (H(pred) + H(truth)), natural logs. Both partitions
/// single-cluster gives 1.
double nmi(const Partition& predicted, const Partition& truth);

/// (TP + TN) / C(N, 2); 1 when N < 2.
double rand_index(const PairCounts& counts);

/// TP / (TP + FP + FN); 1 when the denominator is zero.
double jaccard(const PairCounts& counts);

/// sqrt(TP/(TP+FP) * TP/(TP+FN)); 1 when no pair is together in either
/// partition, otherwise 0 when TP = 0.
double fmi(const PairCounts& counts);

/// (1/N) sum over predicted clusters of the largest overlap with a true
/// cluster. Not symmetric.
double precision_purity(const Partition& predicted, const Partition& truth);

enum class NoisePolicy { as_one_cluster, as_singletons, exclude };

std::string_view to_string(NoisePolicy policy) noexcept;
NoisePolicy parse_noise_policy(std::string_view text);

struct EvaluationInput {
  Partition predicted;
  Partition truth;
  std::size_t noise_count = 0;  // noise points in the original assignment
};

/// Maps noise labels (kNoiseLabel) before scoring. as_one_cluster pools them
/// into one extra cluster, as_singletons gives each its own cluster, exclude
/// drops those samples from both partitions.
EvaluationInput apply_noise_policy(const std::vector<std::int64_t>& predicted_labels,
                                   const Partition& truth, NoisePolicy policy);

struct MetricReport {
  double nmi = 0.0;
  double ri = 0.0;
  double jc = 0.0;
  double fmi = 0.0;
  double precision = 0.0;
  std::size_t n = 0;
  std::size_t n_noise = 0;
  NoisePolicy policy = NoisePolicy::as_one_cluster;
};

MetricReport evaluate(const std::vector<std::int64_t>& predicted_labels, const Partition& truth,
                      NoisePolicy policy = NoisePolicy::as_one_cluster);

/// "key value" lines in a fixed order.
std::string report_text(const MetricReport& report);
/// {"nmi": .., "ri": .., "jc": .., "fmi": .., "precision": .., "n": ..,
///  "n_noise": .., "policy": ..}
std::string report_json(const MetricReport& report);

}  // namespace topicdet
