#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topicdet {

/// One short-text post: an ordered list of feature words, the ids of posts it
/// forwards, and an optional ground-truth topic label.
struct Document {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> forwards;
  std::optional<std::string> label;

  friend bool operator==(const Document&, const Document&) = default;
};

/// Dense word <-> index mapping with per-word document frequency.
/// Indices follow first appearance in corpus order.
class Vocabulary {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Vocabulary() = default;
  static Vocabulary build(const std::vector<Document>& docs);

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  bool contains(std::string_view word) const;
  std::size_t index_of(std::string_view word) const;  // npos when absent
  const std::string& word(std::size_t index) const { return words_.at(index); }
  std::size_t document_frequency(std::size_t index) const { return doc_freq_.at(index); }
  const std::vector<std::string>& words() const noexcept { return words_; }

  // FNV-1a over the words in index order; used to pin checkpoints to the
  // vocabulary they were trained against.
  std::uint64_t hash() const noexcept;

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct StopFilterConfig {
  std::set<std::string> stopwords;
  bool drop_numbers = true;
  bool drop_punctuation = true;
  bool drop_mentions = true;
  std::size_t min_document_frequency = 2;

  // Keeps every token; useful for round-tripping generated corpora.
  static StopFilterConfig keep_all();
};

std::set<std::string> read_stopword_file(const std::filesystem::path& path);

bool is_number_token(std::string_view token);
bool is_punctuation_token(std::string_view token);
bool is_mention_token(std::string_view token);

using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;
Tokenizer whitespace_tokenizer();

struct FilterResult {
  std::vector<Document> docs;
  std::size_t dropped_documents = 0;
};

/// Removes filtered tokens, then words below the document-frequency floor,
/// then documents left empty. Forward links to dropped documents are pruned.
/// Idempotent.
FilterResult apply_filter(std::vector<Document> docs, const StopFilterConfig& filter);

struct Corpus {
  std::vector<Document> docs;
  Vocabulary vocab;
  std::size_t dropped_documents = 0;

  std::size_t size() const noexcept { return docs.size(); }
  std::optional<std::size_t> find(std::string_view id) const;
};

/// Checks id uniqueness, self-forwards and dangling forwards. Throws
/// data errors naming the offending ids.
void validate_documents(const std::vector<Document>& docs);

/// Parses JSON-lines records: {"id", "tokens" | "text", "forwards"?, "label"?}.
std::vector<Document> parse_corpus_jsonl(std::string_view text, const Tokenizer& tokenizer);

Corpus make_corpus(std::vector<Document> docs, const StopFilterConfig& filter);

Corpus load_corpus(const std::filesystem::path& path, const StopFilterConfig& filter,
                   const Tokenizer& tokenizer = whitespace_tokenizer());

std::string corpus_to_jsonl(const std::vector<Document>& docs);
void write_corpus(const std::filesystem::path& path, const std::vector<Document>& docs);

}  // namespace topicdet
