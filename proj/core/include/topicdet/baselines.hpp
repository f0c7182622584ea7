#pragma once

// Corpus-wide encoding: the attention model itself plus the cheap baselines
// it is compared against (plain averaging, unweighted mean/max/min
// concatenation, and averaging of three per-branch keywords).

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "topicdet/corpus.hpp"
#include "topicdet/embedding_table.hpp"
#include "topicdet/panm.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

/// Per-document word weights, kept for keyword extraction.
struct AttentionRecord {
  std::string id;
  std::vector<std::string> tokens;  // in-vocabulary tokens, document order
  std::vector<double> weights;

  friend bool operator==(const AttentionRecord&, const AttentionRecord&) = default;
};

struct CorpusEmbedding {
  LabeledMatrix matrix;
  std::vector<AttentionRecord> attention;
};

/// Row i is the encoding of document i (width 3d).
CorpusEmbedding embed_corpus(const Corpus& corpus, const EmbeddingTable& table,
                             const PanmParams& params, const PoolingSpec& pooling = {});

/// Plain mean of word vectors (width d); attention records are uniform.
CorpusEmbedding baseline_swa(const Corpus& corpus, const EmbeddingTable& table);

/// Unweighted mean/max/min concatenation (width 3d); uniform attention.
CorpusEmbedding baseline_powermean(const Corpus& corpus, const EmbeddingTable& table,
                                   const PoolingSpec& pooling = {});

/// Table rows of the three keywords of an encoded sentence: highest attention
/// weight, most coordinates won in the max block, most coordinates won in the
/// min block. Ties go to the lowest table row.
std::array<std::size_t, 3> branch_keywords(const SentenceEmbedding& sentence);

/// Mean of the three branch keywords' vectors (width d).
CorpusEmbedding baseline_keywords_avg(const Corpus& corpus, const EmbeddingTable& table,
                                      const PanmParams& params, const PoolingSpec& pooling = {});

// JSON lines: {"id": ..., "tokens": [...], "weights": [...]}.
std::string attention_to_jsonl(const std::vector<AttentionRecord>& records);
std::vector<AttentionRecord> parse_attention_jsonl(std::string_view text);
void write_attention(const std::filesystem::path& path, const std::vector<AttentionRecord>& records);
std::vector<AttentionRecord> read_attention(const std::filesystem::path& path);

}  // namespace topicdet
