#include "topicdet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "topicdet/error.hpp"

namespace topicdet {

namespace {

std::discrete_distribution<std::size_t> zipf(std::size_t n, double exponent) {
  std::vector<double> weights(n);
  for (std::size_t r = 0; r < n; ++r) weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), exponent);
  return std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
}

std::string document_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "d%05zu", index);
  return buf;
}

// Derives independent streams from one user seed.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

Eigen::VectorXd gaussian_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

void SyntheticCorpusSpec::validate() const {
  if (topics < 1) fail(ErrorCategory::usage, "synthetic corpus needs at least one topic");
  if (!(forward_inter >= 0.0 && forward_inter <= forward_intra && forward_intra <= 1.0)) {
    fail(ErrorCategory::usage, "forward probabilities must satisfy 0 <= inter <= intra <= 1");
  }
  if (min_tokens < 1 || max_tokens < min_tokens) {
    fail(ErrorCategory::usage, "token range must satisfy 1 <= min_tokens <= max_tokens");
  }
  if (vocab_per_topic < 1 && docs_per_topic > 0) {
    fail(ErrorCategory::usage, "topic documents need a nonempty topic vocabulary");
  }
  if (shared_vocab < 1 && (noise_docs > 0 || topic_token_fraction < 1.0)) {
    fail(ErrorCategory::usage, "shared vocabulary is empty but shared tokens are requested");
  }
  if (!(topic_token_fraction >= 0.6 && topic_token_fraction <= 1.0)) {
    fail(ErrorCategory::usage, "topic_token_fraction must lie in [0.6, 1]");
  }
  if (!(zipf_exponent >= 0.0) || !std::isfinite(zipf_exponent)) {
    fail(ErrorCategory::usage, "zipf exponent must be finite and >= 0");
  }
}

std::string topic_label(std::size_t topic) { return "topic" + std::to_string(topic); }

std::string topic_word(std::size_t topic, std::size_t rank) {
  return "t" + std::to_string(topic) + "_w" + std::to_string(rank);
}

std::string shared_word(std::size_t rank) { return "s_w" + std::to_string(rank); }

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  spec.validate();
  SyntheticCorpus out;
  out.planted_vocab.resize(spec.topics);
  for (std::size_t k = 0; k < spec.topics; ++k) {
    for (std::size_t r = 0; r < spec.vocab_per_topic; ++r) out.planted_vocab[k].push_back(topic_word(k, r));
  }
  for (std::size_t r = 0; r < spec.shared_vocab; ++r) out.shared_vocab.push_back(shared_word(r));

  std::mt19937_64 rng = stream(spec.seed, 0);
  std::uniform_int_distribution<std::size_t> length(spec.min_tokens, spec.max_tokens);
  auto topic_dist = zipf(std::max<std::size_t>(spec.vocab_per_topic, 1), spec.zipf_exponent);
  auto shared_dist = zipf(std::max<std::size_t>(spec.shared_vocab, 1), spec.zipf_exponent);

  // Topic membership per document; topics.size() marks a noise document.
  std::vector<std::size_t> group;
  const std::size_t total = spec.topics * spec.docs_per_topic + spec.noise_docs;
  out.docs.reserve(total);
  for (std::size_t k = 0; k <= spec.topics; ++k) {
    const bool noise = k == spec.topics;
    const std::size_t count = noise ? spec.noise_docs : spec.docs_per_topic;
    for (std::size_t i = 0; i < count; ++i) {
      Document doc;
      doc.id = document_id(out.docs.size());
      doc.label = noise ? std::string(kNoiseTruthLabel) : topic_label(k);
      const std::size_t n = length(rng);
      const std::size_t from_topic =
          noise ? 0
                : std::min(n, static_cast<std::size_t>(
                                  std::ceil(spec.topic_token_fraction * static_cast<double>(n) - 1e-9)));
      for (std::size_t t = 0; t < from_topic; ++t) doc.tokens.push_back(out.planted_vocab[k][topic_dist(rng)]);
      for (std::size_t t = from_topic; t < n; ++t) doc.tokens.push_back(out.shared_vocab[shared_dist(rng)]);
      std::shuffle(doc.tokens.begin(), doc.tokens.end(), rng);
      out.docs.push_back(std::move(doc));
      group.push_back(k);
    }
  }

  if (spec.forward_intra > 0.0) {
    std::mt19937_64 links = stream(spec.seed, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t j = 1; j < out.docs.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const bool same = group[i] == group[j] && group[i] != spec.topics;
        const double p = same ? spec.forward_intra : spec.forward_inter;
        if (p > 0.0 && unit(links) < p) out.docs[j].forwards.push_back(out.docs[i].id);
      }
    }
  }
  return out;
}

void SyntheticEmbeddingSpec::validate() const {
  if (dim < 1) fail(ErrorCategory::usage, "embedding dimension must be >= 1");
  if (!(topic_center_norm >= 0.0 && topic_word_spread >= 0.0 && shared_word_norm >= 0.0)) {
    fail(ErrorCategory::usage, "embedding scales must be >= 0");
  }
}

EmbeddingTable generate_synthetic_embeddings(const SyntheticCorpusSpec& corpus,
                                             const SyntheticEmbeddingSpec& spec) {
  spec.validate();
  std::mt19937_64 rng = stream(spec.seed, 2);
  const double per_coord = 1.0 / std::sqrt(static_cast<double>(spec.dim));
  std::vector<std::string> words;
  std::vector<Eigen::VectorXd> rows;
  for (std::size_t k = 0; k < corpus.topics; ++k) {
    Eigen::VectorXd center = gaussian_vector(spec.dim, rng);
    center *= spec.topic_center_norm / std::max(center.norm(), 1e-12);
    for (std::size_t r = 0; r < corpus.vocab_per_topic; ++r) {
      words.push_back(topic_word(k, r));
      rows.push_back(center + gaussian_vector(spec.dim, rng) * (spec.topic_word_spread * per_coord));
    }
  }
  for (std::size_t r = 0; r < corpus.shared_vocab; ++r) {
    words.push_back(shared_word(r));
    rows.push_back(gaussian_vector(spec.dim, rng) * (spec.shared_word_norm * per_coord));
  }
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(spec.dim));
  for (std::size_t i = 0; i < rows.size(); ++i) vectors.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return EmbeddingTable(std::move(words), std::move(vectors));
}

std::size_t PointCloudSpec::total_points() const noexcept {
  std::size_t n = noise_points;
  for (const BlobSpec& b : blobs) n += b.count;
  return n;
}

void PointCloudSpec::validate() const {
  if (dimension < 1) fail(ErrorCategory::usage, "point cloud dimension must be >= 1");
  for (std::size_t b = 0; b < blobs.size(); ++b) {
    if (blobs[b].center.size() != dimension) {
      fail(ErrorCategory::usage, "blob " + std::to_string(b) + " center has wrong dimension");
    }
    if (!(blobs[b].radius >= 0.0)) fail(ErrorCategory::usage, "blob radius must be >= 0");
  }
  const std::size_t n = total_points();
  for (const auto& [a, c] : bridges) {
    if (a >= n || c >= n) {
      fail(ErrorCategory::usage, "bridge edge (" + std::to_string(a) + ", " + std::to_string(c) +
                                     ") is outside the " + std::to_string(n) + " points");
    }
  }
  if (noise_points > 0 && !(noise_low <= noise_high)) {
    fail(ErrorCategory::usage, "noise box needs noise_low <= noise_high");
  }
}

PointCloud generate_point_cloud(const PointCloudSpec& spec) {
  spec.validate();
  std::mt19937_64 rng = stream(spec.seed, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(spec.dimension);

  PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(spec.total_points()), dim);
  Eigen::Index row = 0;
  for (std::size_t b = 0; b < spec.blobs.size(); ++b) {
    const BlobSpec& blob = spec.blobs[b];
    const Eigen::Map<const Eigen::VectorXd> center(blob.center.data(), dim);
    const std::string label = blob.label.empty() ? "blob" + std::to_string(b) : blob.label;
    for (std::size_t i = 0; i < blob.count; ++i, ++row) {
      Eigen::VectorXd direction = gaussian_vector(spec.dimension, rng);
      const double norm = direction.norm();
      const double u = unit(rng);
      const double r = blob.radius * std::pow(u, 1.0 / static_cast<double>(spec.dimension));
      if (blob.radius == 0.0 || norm == 0.0) {
        cloud.points.row(row) = center.transpose();
      } else {
        cloud.points.row(row) = (center + direction * (r / norm)).transpose();
      }
      cloud.labels.push_back(label);
    }
  }
  std::uniform_real_distribution<double> box(spec.noise_low, spec.noise_high);
  for (std::size_t i = 0; i < spec.noise_points; ++i, ++row) {
    for (Eigen::Index c = 0; c < dim; ++c) cloud.points(row, c) = box(rng);
    cloud.labels.emplace_back(kNoiseTruthLabel);
  }
  cloud.graph = RelationGraph::from_edges(spec.total_points(), spec.bridges);
  return cloud;
}

}  // namespace topicdet
