#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support/fixtures.hpp"
#include "topicdet/corpus.hpp"
#include "topicdet/error.hpp"
#include "topicdet/synthetic.hpp"

using namespace topicdet;

TEST(SyntheticCorpus, Deterministic) {
  SyntheticCorpusSpec s;
  s.topics = 2;
  s.docs_per_topic = 10;
  s.forward_intra = 0.2;
  EXPECT_EQ(generate_synthetic_corpus(s).docs, generate_synthetic_corpus(s).docs);
  SyntheticCorpusSpec other = s;
  other.seed = 2;
  EXPECT_NE(generate_synthetic_corpus(s).docs, generate_synthetic_corpus(other).docs);
}

TEST(SyntheticCorpus, NoLinkProbabilityNoEdges) {
  SyntheticCorpusSpec s;
  s.forward_intra = 0.0;
  s.forward_inter = 0.0;
  for (const Document& d : generate_synthetic_corpus(s).docs) EXPECT_TRUE(d.forwards.empty());
}

TEST(SyntheticCorpus, IntraEdgeFractionMatchesExpectation) {
  SyntheticCorpusSpec s;  // 5 topics x 100 documents
  s.forward_intra = 0.05;
  s.forward_inter = 0.005;
  const auto corpus = generate_synthetic_corpus(s);
  std::size_t intra = 0, total = 0;
  for (const Document& d : corpus.docs) {
    for (const std::string& f : d.forwards) {
      const auto& target = corpus.docs[static_cast<std::size_t>(std::stoi(f.substr(1)))];
      intra += target.label == d.label;
      ++total;
    }
  }
  const double n = 500.0, within = 5.0 * 100.0 * 99.0 / 2.0;
  const double across = n * (n - 1) / 2.0 - within;
  const double expected = 0.05 * within / (0.05 * within + 0.005 * across);
  const double observed = static_cast<double>(intra) / static_cast<double>(total);
  EXPECT_NEAR(observed, expected, 0.1 * expected);
}

TEST(SyntheticCorpus, LabelsAndPlantedVocabulary) {
  SyntheticCorpusSpec s;
  s.noise_docs = 7;
  const auto corpus = generate_synthetic_corpus(s);
  std::set<std::string> labels;
  std::size_t noise = 0;
  for (const Document& d : corpus.docs) {
    labels.insert(*d.label);
    noise += *d.label == kNoiseTruthLabel;
    EXPECT_GE(d.tokens.size(), s.min_tokens);
    EXPECT_LE(d.tokens.size(), s.max_tokens);
  }
  EXPECT_EQ(labels.size(), 6u);
  EXPECT_EQ(noise, 7u);
  ASSERT_EQ(corpus.planted_vocab.size(), 5u);
  for (const auto& words : corpus.planted_vocab) EXPECT_EQ(words.size(), s.vocab_per_topic);

  // Topic documents carry at least the requested share of topic words.
  for (const Document& d : corpus.docs) {
    if (*d.label == kNoiseTruthLabel) continue;
    const std::size_t k = static_cast<std::size_t>(std::stoi(d.label->substr(5)));
    const std::set<std::string> planted(corpus.planted_vocab[k].begin(), corpus.planted_vocab[k].end());
    std::size_t hits = 0;
    for (const std::string& t : d.tokens) hits += planted.count(t);
    EXPECT_GE(static_cast<double>(hits), s.topic_token_fraction * static_cast<double>(d.tokens.size()) - 1e-9);
  }
}

TEST(SyntheticCorpus, ZeroNoiseHasNoNoiseLabel) {
  for (const Document& d : generate_synthetic_corpus(SyntheticCorpusSpec{}).docs) {
    EXPECT_NE(*d.label, kNoiseTruthLabel);
  }
}

TEST(SyntheticCorpus, SpecValidation) {
  SyntheticCorpusSpec s;
  s.topic_token_fraction = 0.5;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.forward_inter = 0.3;
  s.forward_intra = 0.1;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.min_tokens = 5;
  s.max_tokens = 4;
  EXPECT_THROW(s.validate(), Error);
}

TEST(SyntheticCorpus, RoundTripThroughJsonl) {
  SyntheticCorpusSpec s;
  s.forward_intra = 0.02;
  const auto docs = generate_synthetic_corpus(s).docs;
  const auto back = parse_corpus_jsonl(corpus_to_jsonl(docs), whitespace_tokenizer());
  EXPECT_EQ(back, docs);
}

TEST(SyntheticEmbeddings, CoversVocabularyAndIsDeterministic) {
  SyntheticCorpusSpec cs;
  SyntheticEmbeddingSpec es;
  es.dim = 16;
  const auto a = generate_synthetic_embeddings(cs, es);
  const auto b = generate_synthetic_embeddings(cs, es);
  EXPECT_EQ(a.size(), cs.topics * cs.vocab_per_topic + cs.shared_vocab);
  EXPECT_EQ(a.dim(), 16);
  EXPECT_EQ(a.vectors(), b.vectors());
  EXPECT_NE(a.index_of(topic_word(4, 39)), EmbeddingTable::npos);
  EXPECT_NE(a.index_of(shared_word(0)), EmbeddingTable::npos);
}

TEST(SyntheticEmbeddings, TopicWordsClusterAroundTheirCenter) {
  SyntheticCorpusSpec cs;
  SyntheticEmbeddingSpec es;
  es.dim = 64;
  const auto t = generate_synthetic_embeddings(cs, es);
  const auto row = [&](const std::string& w) { return t.vectors().row(static_cast<Eigen::Index>(t.index_of(w))); };
  const double same = (row(topic_word(0, 0)) - row(topic_word(0, 1))).norm();
  const double other = (row(topic_word(0, 0)) - row(topic_word(1, 0))).norm();
  EXPECT_LT(same, other);
}

TEST(PointCloud, TwoBlobsNoBridge) {
  PointCloudSpec s = fixture::two_blob_spec();
  const auto pc = generate_point_cloud(s);
  EXPECT_TRUE(pc.graph.empty());
  EXPECT_EQ(std::set<std::string>(pc.labels.begin(), pc.labels.end()).size(), 2u);
  EXPECT_EQ(pc.points.rows(), 160);
}

TEST(PointCloud, OneBridgeOneEdge) {
  PointCloudSpec s = fixture::two_blob_spec();
  s.bridges = {{3, 77}};
  const auto pc = generate_point_cloud(s);
  EXPECT_EQ(pc.graph.edge_count(), 1u);
  EXPECT_TRUE(pc.graph.has_edge(77, 3));
}

TEST(PointCloud, RadiusZeroBlobIsItsCenter) {
  PointCloudSpec s;
  s.dimension = 3;
  s.blobs.push_back(BlobSpec{{1.0, -2.0, 0.5}, 0.0, 6, "c"});
  const auto pc = generate_point_cloud(s);
  for (Eigen::Index i = 0; i < 6; ++i) {
    EXPECT_EQ(pc.points(i, 0), 1.0);
    EXPECT_EQ(pc.points(i, 1), -2.0);
    EXPECT_EQ(pc.points(i, 2), 0.5);
  }
}

TEST(PointCloud, BlobPointsInsideRadiusAndNoiseInBox) {
  PointCloudSpec s = fixture::two_blob_spec();
  s.noise_points = 30;
  s.noise_low = -5.0;
  s.noise_high = 5.0;
  const auto pc = generate_point_cloud(s);
  for (Eigen::Index i = 0; i < 80; ++i) EXPECT_LE(pc.points.row(i).norm(), 1.0 + 1e-12);
  for (Eigen::Index i = 160; i < 190; ++i) {
    EXPECT_EQ(pc.labels[static_cast<std::size_t>(i)], kNoiseTruthLabel);
    EXPECT_GE(pc.points.row(i).minCoeff(), -5.0);
    EXPECT_LE(pc.points.row(i).maxCoeff(), 5.0);
  }
}

TEST(PointCloud, BadBridgeRejected) {
  PointCloudSpec s = fixture::two_blob_spec();
  s.bridges = {{0, 160}};
  EXPECT_THROW(s.validate(), Error);
  s = fixture::two_blob_spec();
  s.blobs[0].center = {1.0};
  EXPECT_THROW(s.validate(), Error);
}
