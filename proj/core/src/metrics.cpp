#include "topicdet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

namespace {

std::uint64_t choose2(std::uint64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }

// Sparse contingency table with marginals.
struct Contingency {
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> cells;
  std::map<std::int64_t, std::uint64_t> predicted;
  std::map<std::int64_t, std::uint64_t> truth;
  std::uint64_t n = 0;
};

Contingency contingency(const Partition& predicted, const Partition& truth) {
  if (predicted.size() != truth.size()) {
    fail(ErrorCategory::data, "partitions differ in length (" + std::to_string(predicted.size()) +
                                  " vs " + std::to_string(truth.size()) + ")");
  }
  Contingency c;
  c.n = predicted.size();
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    ++c.cells[{predicted.ids[i], truth.ids[i]}];
    ++c.predicted[predicted.ids[i]];
    ++c.truth[truth.ids[i]];
  }
  return c;
}

template <typename Key>
double entropy(const std::map<Key, std::uint64_t>& sizes, double n) {
  double h = 0.0;
  for (const auto& [id, size] : sizes) {
    const double p = static_cast<double>(size) / n;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

Partition Partition::from_strings(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, std::int64_t> ids;
  Partition p;
  p.ids.reserve(labels.size());
  for (const std::string& l : labels) {
    const auto [it, inserted] = ids.try_emplace(l, static_cast<std::int64_t>(ids.size()));
    p.ids.push_back(it->second);
  }
  return p;
}

PairCounts pair_counts(const Partition& predicted, const Partition& truth) {
  const Contingency c = contingency(predicted, truth);
  std::uint64_t together_both = 0;
  for (const auto& [key, count] : c.cells) together_both += choose2(count);
  std::uint64_t together_pred = 0;
  for (const auto& [id, size] : c.predicted) together_pred += choose2(size);
  std::uint64_t together_true = 0;
  for (const auto& [id, size] : c.truth) together_true += choose2(size);

  PairCounts out;
  out.true_positive = together_both;
  out.false_positive = together_pred - together_both;
  out.false_negative = together_true - together_both;
  out.true_negative = choose2(c.n) - together_pred - together_true + together_both;
  return out;
}

double nmi(const Partition& predicted, const Partition& truth) {
  const Contingency c = contingency(predicted, truth);
  if (c.n == 0) fail(ErrorCategory::data, "NMI of empty partitions");
  const double n = static_cast<double>(c.n);
  const double h_pred = entropy(c.predicted, n);
  const double h_true = entropy(c.truth, n);
  if (c.predicted.size() == 1 && c.truth.size() == 1) return 1.0;
  // Ordered tables make identical partitions sum their entropies in the same
  // order, so I = H and the ratio is exactly 1.
  const double mutual = h_pred + h_true - entropy(c.cells, n);
  const double denom = h_pred + h_true;
  if (denom <= 0.0) return 1.0;
  return std::clamp(2.0 * mutual / denom, 0.0, 1.0);
}

double rand_index(const PairCounts& counts) {
  const std::uint64_t total = counts.total();
  if (total == 0) return 1.0;
  return static_cast<double>(counts.true_positive + counts.true_negative) / static_cast<double>(total);
}

double jaccard(const PairCounts& counts) {
  const std::uint64_t denom = counts.true_positive + counts.false_positive + counts.false_negative;
  if (denom == 0) return 1.0;
  return static_cast<double>(counts.true_positive) / static_cast<double>(denom);
}

double fmi(const PairCounts& counts) {
  const std::uint64_t tp = counts.true_positive;
  if (tp + counts.false_positive + counts.false_negative == 0) return 1.0;
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + counts.false_positive);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + counts.false_negative);
  return std::sqrt(precision * recall);
}

double precision_purity(const Partition& predicted, const Partition& truth) {
  const Contingency c = contingency(predicted, truth);
  if (c.n == 0) fail(ErrorCategory::data, "precision of empty partitions");
  std::unordered_map<std::int64_t, std::uint64_t> best;
  for (const auto& [key, count] : c.cells) {
    std::uint64_t& b = best[key.first];
    b = std::max(b, count);
  }
  std::uint64_t total = 0;
  for (const auto& [id, b] : best) total += b;
  return static_cast<double>(total) / static_cast<double>(c.n);
}

std::string_view to_string(NoisePolicy policy) noexcept {
  switch (policy) {
    case NoisePolicy::as_one_cluster:
      return "as-one-cluster";
    case NoisePolicy::as_singletons:
      return "as-singletons";
    case NoisePolicy::exclude:
      return "exclude";
  }
  return "?";
}

NoisePolicy parse_noise_policy(std::string_view text) {
  if (text == "as-one-cluster") return NoisePolicy::as_one_cluster;
  if (text == "as-singletons") return NoisePolicy::as_singletons;
  if (text == "exclude") return NoisePolicy::exclude;
  fail(ErrorCategory::usage, "unknown noise policy '" + std::string(text) +
                                 "' (expected as-one-cluster, as-singletons or exclude)");
}

EvaluationInput apply_noise_policy(const std::vector<std::int64_t>& predicted_labels,
                                   const Partition& truth, NoisePolicy policy) {
  if (predicted_labels.size() != truth.size()) {
    fail(ErrorCategory::data, "assignment has " + std::to_string(predicted_labels.size()) +
                                  " samples but truth has " + std::to_string(truth.size()));
  }
  EvaluationInput out;
  std::int64_t fresh = 0;
  for (const std::int64_t l : predicted_labels) fresh = std::max(fresh, l + 1);
  for (std::size_t i = 0; i < predicted_labels.size(); ++i) {
    const std::int64_t l = predicted_labels[i];
    if (l != kNoiseLabel) {
      out.predicted.ids.push_back(l);
      out.truth.ids.push_back(truth.ids[i]);
      continue;
    }
    ++out.noise_count;
    switch (policy) {
      case NoisePolicy::as_one_cluster:
        out.predicted.ids.push_back(kNoiseLabel);
        out.truth.ids.push_back(truth.ids[i]);
        break;
      case NoisePolicy::as_singletons:
        out.predicted.ids.push_back(fresh++);
        out.truth.ids.push_back(truth.ids[i]);
        break;
      case NoisePolicy::exclude:
        break;
    }
  }
  return out;
}

MetricReport evaluate(const std::vector<std::int64_t>& predicted_labels, const Partition& truth,
                      NoisePolicy policy) {
  const EvaluationInput in = apply_noise_policy(predicted_labels, truth, policy);
  if (in.predicted.size() == 0) fail(ErrorCategory::data, "no samples left to evaluate");
  const PairCounts counts = pair_counts(in.predicted, in.truth);
  MetricReport r;
  r.nmi = nmi(in.predicted, in.truth);
  r.ri = rand_index(counts);
  r.jc = jaccard(counts);
  r.fmi = fmi(counts);
  r.precision = precision_purity(in.predicted, in.truth);
  r.n = in.predicted.size();
  r.n_noise = in.noise_count;
  r.policy = policy;
  return r;
}

std::string report_text(const MetricReport& r) {
  std::string out;
  out += "nmi " + format_double(r.nmi) + "\n";
  out += "ri " + format_double(r.ri) + "\n";
  out += "jc " + format_double(r.jc) + "\n";
  out += "fmi " + format_double(r.fmi) + "\n";
  out += "precision " + format_double(r.precision) + "\n";
  out += "n " + std::to_string(r.n) + "\n";
  out += "n_noise " + std::to_string(r.n_noise) + "\n";
  out += "policy " + std::string(to_string(r.policy)) + "\n";
  return out;
}

std::string report_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["nmi"] = r.nmi;
  j["ri"] = r.ri;
  j["jc"] = r.jc;
  j["fmi"] = r.fmi;
  j["precision"] = r.precision;
  j["n"] = r.n;
  j["n_noise"] = r.n_noise;
  j["policy"] = std::string(to_string(r.policy));
  return j.dump() + "\n";
}

}  // namespace topicdet
