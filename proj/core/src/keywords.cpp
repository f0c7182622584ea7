#include "topicdet/keywords.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "topicdet/clustering.hpp"
#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

KeywordReport cluster_keywords(const std::vector<std::int64_t>& labels,
                               const std::vector<AttentionRecord>& attention,
                               const Vocabulary& vocab, std::size_t k) {
  if (labels.size() != attention.size()) {
    fail(ErrorCategory::data, "keyword extraction: " + std::to_string(labels.size()) +
                                  " labels but " + std::to_string(attention.size()) +
                                  " attention records");
  }
  struct Mass {
    std::unordered_map<std::size_t, double> by_word;
    std::size_t docs = 0;
  };
  std::map<std::int64_t, Mass> clusters;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoiseLabel) continue;
    Mass& mass = clusters[labels[i]];
    ++mass.docs;
    const AttentionRecord& record = attention[i];
    for (std::size_t t = 0; t < record.tokens.size(); ++t) {
      const std::size_t w = vocab.index_of(record.tokens[t]);
      if (w == Vocabulary::npos) {
        fail(ErrorCategory::data, "attention record '" + record.id + "' has token '" +
                                      record.tokens[t] + "' outside the vocabulary");
      }
      mass.by_word[w] += record.weights[t];
    }
  }

  KeywordReport report;
  for (const auto& [cluster, mass] : clusters) {
    std::vector<std::pair<std::size_t, double>> scored(mass.by_word.begin(), mass.by_word.end());
    const double size = static_cast<double>(mass.docs);
    for (auto& entry : scored) entry.second /= size;
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      const std::size_t dfa = vocab.document_frequency(a.first);
      const std::size_t dfb = vocab.document_frequency(b.first);
      if (dfa != dfb) return dfa > dfb;
      return a.first < b.first;
    });
    ClusterKeywords entry;
    entry.cluster = cluster;
    for (std::size_t r = 0; r < std::min(k, scored.size()); ++r) {
      entry.keywords.push_back({vocab.word(scored[r].first), scored[r].second});
    }
    report.push_back(std::move(entry));
  }
  return report;
}

std::string keywords_to_csv(const KeywordReport& report) {
  std::string out = "cluster,rank,word,score\n";
  for (const ClusterKeywords& c : report) {
    for (std::size_t r = 0; r < c.keywords.size(); ++r) {
      check_csv_field(c.keywords[r].word);
      out += std::to_string(c.cluster) + "," + std::to_string(r + 1) + "," + c.keywords[r].word +
             "," + format_double(c.keywords[r].score) + "\n";
    }
  }
  return out;
}

void write_keywords_csv(const std::filesystem::path& path, const KeywordReport& report) {
  write_text_file(path, keywords_to_csv(report));
}

}  // namespace topicdet
