#pragma once

// Seeded generators standing in for a crawled micro-blog corpus: a topic
// corpus with planted vocabularies and forward links, word vectors for that
// vocabulary, and labeled point clouds with explicit bridge edges.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "topicdet/corpus.hpp"
#include "topicdet/embedding_table.hpp"
#include "topicdet/relation_graph.hpp"

namespace topicdet {

inline constexpr const char* kNoiseTruthLabel = "NOISE_TRUE";

struct SyntheticCorpusSpec {
  std::size_t topics = 5;
  std::size_t docs_per_topic = 100;
  std::size_t noise_docs = 0;
  std::size_t vocab_per_topic = 40;
  std::size_t shared_vocab = 60;
  std::size_t min_tokens = 6;
  std::size_t max_tokens = 14;
  // Share of each topic document's tokens drawn from its own vocabulary.
  double topic_token_fraction = 0.7;
  double forward_intra = 0.0;
  double forward_inter = 0.0;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticCorpus {
  std::vector<Document> docs;
  // planted_vocab[k] lists the words reserved for topic k.
  std::vector<std::vector<std::string>> planted_vocab;
  std::vector<std::string> shared_vocab;
};

std::string topic_label(std::size_t topic);
std::string topic_word(std::size_t topic, std::size_t rank);
std::string shared_word(std::size_t rank);

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec);

/// Word vectors for a synthetic vocabulary. Topic words scatter around a
/// per-topic center; shared words are isotropic noise.
struct SyntheticEmbeddingSpec {
  std::size_t dim = 100;
  double topic_center_norm = 1.0;
  double topic_word_spread = 0.6;
  double shared_word_norm = 1.0;
  std::uint64_t seed = 7;

  void validate() const;
};

EmbeddingTable generate_synthetic_embeddings(const SyntheticCorpusSpec& corpus,
                                             const SyntheticEmbeddingSpec& spec);

struct BlobSpec {
  std::vector<double> center;
  double radius = 1.0;
  std::size_t count = 0;
  std::string label;  // defaults to "blob<k>"
};

struct PointCloudSpec {
  std::size_t dimension = 2;
  std::vector<BlobSpec> blobs;
  std::vector<std::pair<std::size_t, std::size_t>> bridges;
  std::size_t noise_points = 0;
  double noise_low = -1.0;
  double noise_high = 1.0;
  std::uint64_t seed = 1;

  std::size_t total_points() const noexcept;
  void validate() const;
};

struct PointCloud {
  Eigen::MatrixXd points;  // one row per point
  RelationGraph graph;
  std::vector<std::string> labels;
};

/// Blob points are uniform in a ball around the center, emitted blob by blob
/// in spec order; uniform box noise follows, labeled NOISE_TRUE.
PointCloud generate_point_cloud(const PointCloudSpec& spec);

}  // namespace topicdet
