#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "topicdet/corpus.hpp"

namespace topicdet {

/// Word vectors, one row per word. Rows are finite; dimension >= 1.
class EmbeddingTable {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> words, Eigen::MatrixXd vectors);

  std::size_t size() const noexcept { return words_.size(); }
  Eigen::Index dim() const noexcept { return vectors_.cols(); }

  std::size_t index_of(std::string_view word) const;
  const std::string& word(std::size_t row) const { return words_.at(row); }
  const std::vector<std::string>& words() const noexcept { return words_; }

  const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
  Eigen::MatrixXd& mutable_vectors() noexcept { return vectors_; }
  auto row(std::size_t r) const { return vectors_.row(static_cast<Eigen::Index>(r)); }

  // Trainers leave frozen tables untouched.
  bool frozen = true;

  /// Subset of rows reordered to vocabulary order. With allow_missing false,
  /// any vocabulary word absent from the table is an error that lists them.
  EmbeddingTable restricted_to(const Vocabulary& vocab, bool allow_missing = false) const;

 private:
  std::vector<std::string> words_;
  Eigen::MatrixXd vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Table rows for a document's tokens, skipping out-of-vocabulary words.
/// Throws a data error naming the document when nothing remains.
std::vector<std::size_t> lookup_rows(const Document& doc, const EmbeddingTable& table);

// word2vec text format: "count dim" header then "word v1 ... vd" lines.
EmbeddingTable parse_word2vec(std::string_view text);
EmbeddingTable read_word2vec(const std::filesystem::path& path);
std::string to_word2vec(const EmbeddingTable& table);
void write_word2vec(const std::filesystem::path& path, const EmbeddingTable& table);

}  // namespace topicdet
