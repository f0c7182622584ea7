#include "topicdet/checkpoint.hpp"

#include <cstdio>

#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

namespace {

constexpr std::string_view kMagic = "topicdet-checkpoint";
constexpr std::string_view kVersion = "1";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void append_matrix(std::string& out, std::string_view name, const Eigen::MatrixXd& m) {
  out += "matrix ";
  out += name;
  out += ' ' + std::to_string(m.rows()) + ' ' + std::to_string(m.cols()) + '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::vector<std::string> next(std::string_view what) {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      const std::string_view line = trim(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
      ++line_no_;
      if (!line.empty()) return split_whitespace(line);
    }
    fail(ErrorCategory::format, "checkpoint ends before " + std::string(what));
  }

  std::vector<std::string> expect(std::string_view key, std::size_t values) {
    auto fields = next(key);
    if (fields.size() != values + 1 || fields[0] != key) {
      fail(ErrorCategory::format, "checkpoint line " + std::to_string(line_no_) + ": expected '" +
                                      std::string(key) + "' with " + std::to_string(values) +
                                      " value(s)");
    }
    return fields;
  }

  Eigen::MatrixXd matrix(std::string_view name) {
    const auto header = expect("matrix", 3);
    if (header[1] != name) {
      fail(ErrorCategory::format, "checkpoint line " + std::to_string(line_no_) +
                                      ": expected matrix " + std::string(name) + ", found " +
                                      header[1]);
    }
    const std::int64_t rows = parse_int(header[2]);
    const std::int64_t cols = parse_int(header[3]);
    if (rows < 0 || cols < 0) fail(ErrorCategory::format, "checkpoint: negative matrix shape");
    Eigen::MatrixXd m(rows, cols);
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto values = next("matrix rows");
      if (static_cast<std::int64_t>(values.size()) != cols) {
        fail(ErrorCategory::format, "checkpoint line " + std::to_string(line_no_) + ": matrix " +
                                        std::string(name) + " row has " +
                                        std::to_string(values.size()) + " values, expected " +
                                        std::to_string(cols));
      }
      for (std::int64_t c = 0; c < cols; ++c) m(r, c) = parse_double(values[static_cast<std::size_t>(c)]);
    }
    return m;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string to_text(const Checkpoint& checkpoint) {
  std::string out;
  out += std::string(kMagic) + ' ' + std::string(kVersion) + '\n';
  out += "pooling " + checkpoint.pooling.to_string() + '\n';
  out += "vocab_hash " + hex64(checkpoint.vocab_hash) + '\n';
  out += "vocab_size " + std::to_string(checkpoint.vocab_size) + '\n';
  append_matrix(out, "M", checkpoint.params.attention);
  append_matrix(out, "M1", checkpoint.params.layer1);
  append_matrix(out, "M2", checkpoint.params.layer2);
  append_matrix(out, "M3", checkpoint.params.layer3);
  return out;
}

Checkpoint parse_checkpoint(std::string_view text) {
  LineReader reader(text);
  const auto magic = reader.next("header");
  if (magic.size() != 2 || magic[0] != kMagic) fail(ErrorCategory::format, "not a topicdet checkpoint");
  if (magic[1] != kVersion) fail(ErrorCategory::format, "unsupported checkpoint version " + magic[1]);

  Checkpoint cp;
  const auto pooling = reader.expect("pooling", 3);
  cp.pooling = PoolingSpec::parse(pooling[1] + ' ' + pooling[2] + ' ' + pooling[3]);
  const auto hash = reader.expect("vocab_hash", 1);
  try {
    std::size_t used = 0;
    cp.vocab_hash = std::stoull(hash[1], &used, 16);
    if (used != hash[1].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    fail(ErrorCategory::format, "checkpoint: bad vocab_hash '" + hash[1] + "'");
  }
  cp.vocab_size = static_cast<std::size_t>(parse_int(reader.expect("vocab_size", 1)[1]));
  cp.params.attention = reader.matrix("M");
  cp.params.layer1 = reader.matrix("M1");
  cp.params.layer2 = reader.matrix("M2");
  cp.params.layer3 = reader.matrix("M3");
  try {
    cp.params.validate();
  } catch (const Error& e) {
    fail(ErrorCategory::format, std::string("checkpoint: ") + e.what());
  }
  return cp;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_text_file(path, to_text(checkpoint));
}

Checkpoint read_checkpoint(const std::filesystem::path& path, const Vocabulary* expected) {
  Checkpoint cp;
  try {
    cp = parse_checkpoint(read_text_file(path));
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    fail(e.category(), path.string() + ": " + e.what());
  }
  if (expected != nullptr && expected->hash() != cp.vocab_hash) {
    fail(ErrorCategory::data, path.string() + ": vocabulary hash mismatch (checkpoint " +
                                  hex64(cp.vocab_hash) + ", corpus " + hex64(expected->hash()) +
                                  ")");
  }
  return cp;
}

}  // namespace topicdet
