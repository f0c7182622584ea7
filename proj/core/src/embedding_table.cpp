#include "topicdet/embedding_table.hpp"

#include <algorithm>
#include <cmath>

#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

EmbeddingTable::EmbeddingTable(std::vector<std::string> words, Eigen::MatrixXd vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(words_.size()) != vectors_.rows()) {
    fail(ErrorCategory::data, "embedding table has " + std::to_string(words_.size()) +
                                  " words but " + std::to_string(vectors_.rows()) + " rows");
  }
  if (vectors_.cols() < 1) fail(ErrorCategory::data, "embedding dimension must be >= 1");
  if (!vectors_.allFinite()) fail(ErrorCategory::data, "embedding table has non-finite entries");
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      fail(ErrorCategory::data, "embedding table repeats word '" + words_[i] + "'");
    }
  }
}

std::size_t EmbeddingTable::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? npos : it->second;
}

EmbeddingTable EmbeddingTable::restricted_to(const Vocabulary& vocab, bool allow_missing) const {
  std::vector<std::string> words;
  std::vector<std::size_t> rows;
  std::vector<std::string> missing;
  for (const std::string& w : vocab.words()) {
    const std::size_t r = index_of(w);
    if (r == npos) {
      missing.push_back(w);
      continue;
    }
    words.push_back(w);
    rows.push_back(r);
  }
  if (!missing.empty() && !allow_missing) {
    std::string list;
    const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) list += (i ? ", " : "") + missing[i];
    if (shown < missing.size()) list += ", ...";
    fail(ErrorCategory::data, std::to_string(missing.size()) +
                                  " vocabulary words missing from embedding table: " + list);
  }
  if (rows.empty()) fail(ErrorCategory::data, "no vocabulary word has an embedding");
  Eigen::MatrixXd subset(static_cast<Eigen::Index>(rows.size()), dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    subset.row(static_cast<Eigen::Index>(i)) = vectors_.row(static_cast<Eigen::Index>(rows[i]));
  }
  EmbeddingTable out(std::move(words), std::move(subset));
  out.frozen = frozen;
  return out;
}

std::vector<std::size_t> lookup_rows(const Document& doc, const EmbeddingTable& table) {
  std::vector<std::size_t> rows;
  rows.reserve(doc.tokens.size());
  for (const std::string& t : doc.tokens) {
    const std::size_t r = table.index_of(t);
    if (r != EmbeddingTable::npos) rows.push_back(r);
  }
  if (rows.empty()) {
    fail(ErrorCategory::data, "document '" + doc.id + "' has no in-vocabulary tokens");
  }
  return rows;
}

EmbeddingTable parse_word2vec(std::string_view text) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  const auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      line = trim(text.substr(pos, end - pos));
      pos = end + 1;
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) fail(ErrorCategory::format, "word2vec file is empty");
  const auto header = split_whitespace(line);
  if (header.size() != 2) {
    fail(ErrorCategory::format, "word2vec line 1: expected header 'count dim'");
  }
  const std::int64_t count = parse_int(header[0]);
  const std::int64_t dim = parse_int(header[1]);
  if (count < 0 || dim < 1) fail(ErrorCategory::format, "word2vec header: bad count or dim");

  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(count));
  Eigen::MatrixXd vectors(count, dim);
  for (std::int64_t r = 0; r < count; ++r) {
    if (!next_line(line)) {
      fail(ErrorCategory::format, "word2vec file ends after " + std::to_string(r) + " of " +
                                      std::to_string(count) + " rows");
    }
    const auto fields = split_whitespace(line);
    if (static_cast<std::int64_t>(fields.size()) != dim + 1) {
      fail(ErrorCategory::format, "word2vec line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(dim + 1) + " fields");
    }
    words.push_back(fields[0]);
    for (std::int64_t c = 0; c < dim; ++c) {
      vectors(r, c) = parse_double(fields[static_cast<std::size_t>(c + 1)]);
    }
  }
  return EmbeddingTable(std::move(words), std::move(vectors));
}

EmbeddingTable read_word2vec(const std::filesystem::path& path) {
  try {
    return parse_word2vec(read_text_file(path));
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    fail(e.category(), path.string() + ": " + e.what());
  }
}

std::string to_word2vec(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  for (std::size_t r = 0; r < table.size(); ++r) {
    out += table.word(r);
    for (Eigen::Index c = 0; c < table.dim(); ++c) {
      out += ' ';
      out += format_double(table.vectors()(static_cast<Eigen::Index>(r), c));
    }
    out += '\n';
  }
  return out;
}

void write_word2vec(const std::filesystem::path& path, const EmbeddingTable& table) {
  write_text_file(path, to_word2vec(table));
}

}  // namespace topicdet
