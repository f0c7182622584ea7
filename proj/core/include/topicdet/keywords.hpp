#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "topicdet/baselines.hpp"
#include "topicdet/corpus.hpp"

namespace topicdet {

struct ScoredKeyword {
  std::string word;
  double score = 0.0;
};

struct ClusterKeywords {
  std::int64_t cluster = 0;
  std::vector<ScoredKeyword> keywords;  // nonincreasing score, unique words
};

using KeywordReport = std::vector<ClusterKeywords>;

/// score(w, C) = (1/|C|) * sum over documents of C of the attention weight
/// carried by w. Top k per cluster; ties prefer the higher document
/// frequency, then the lower vocabulary index. Noise documents are skipped.
///
/// `labels[i]` and `attention[i]` describe the same document.
KeywordReport cluster_keywords(const std::vector<std::int64_t>& labels,
                               const std::vector<AttentionRecord>& attention,
                               const Vocabulary& vocab, std::size_t k = 3);

/// CSV "cluster,rank,word,score" with 1-based ranks.
std::string keywords_to_csv(const KeywordReport& report);
void write_keywords_csv(const std::filesystem::path& path, const KeywordReport& report);

}  // namespace topicdet
