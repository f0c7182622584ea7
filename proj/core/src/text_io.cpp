#include "topicdet/text_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "topicdet/error.hpp"

namespace topicdet {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

// Iterates non-empty lines, reporting 1-based line numbers.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++line_no;
    if (!trim(line).empty()) fn(trim(line), line_no);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
}

std::vector<std::pair<std::string, std::string>> read_two_column_csv(
    const std::filesystem::path& path, std::string_view first, std::string_view second) {
  const std::string text = read_text_file(path);
  std::vector<std::pair<std::string, std::string>> rows;
  bool header_seen = false;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 2 && trim(fields[0]) == first && trim(fields[1]) == second) return;
    }
    if (fields.size() != 2) {
      fail(ErrorCategory::format, path.string() + ":" + std::to_string(line_no) +
                                      ": expected 2 comma-separated fields");
    }
    rows.emplace_back(std::string(trim(fields[0])), std::string(trim(fields[1])));
  });
  return rows;
}

void write_two_column_csv(const std::filesystem::path& path, std::string_view header,
                          const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out(header);
  out += '\n';
  for (const auto& [a, b] : rows) {
    check_csv_field(a);
    check_csv_field(b);
    out += a;
    out += ',';
    out += b;
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || text.empty()) {
    fail(ErrorCategory::format, "not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) fail(ErrorCategory::format, "non-finite number: '" + std::string(text) + "'");
  return value;
}

std::int64_t parse_int(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorCategory::format, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(delimiter, pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorCategory::io, "write failed for '" + path.string() + "'");
}

void check_csv_field(std::string_view field) {
  if (field.find_first_of(",\n\r") != std::string_view::npos) {
    fail(ErrorCategory::data, "value '" + std::string(field) + "' cannot be stored in a CSV field");
  }
}

std::string to_csv(const LabeledMatrix& matrix) {
  std::string out = "id";
  for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) out += ",v" + std::to_string(c);
  out += '\n';
  for (Eigen::Index r = 0; r < matrix.values.rows(); ++r) {
    const std::string& id = matrix.ids[static_cast<std::size_t>(r)];
    check_csv_field(id);
    out += id;
    for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) {
      out += ',';
      out += format_double(matrix.values(r, c));
    }
    out += '\n';
  }
  return out;
}

LabeledMatrix labeled_matrix_from_csv(std::string_view text) {
  LabeledMatrix matrix;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool header = true;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split(line, ',');
    if (header) {
      header = false;
      if (fields.size() < 2 || trim(fields[0]) != "id") {
        fail(ErrorCategory::format, "matrix CSV line " + std::to_string(line_no) +
                                        ": expected header starting with 'id'");
      }
      width = fields.size() - 1;
      return;
    }
    if (fields.size() != width + 1) {
      fail(ErrorCategory::format, "matrix CSV line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(width + 1) + " fields, got " +
                                      std::to_string(fields.size()));
    }
    matrix.ids.emplace_back(trim(fields[0]));
    std::vector<double>& row = rows.emplace_back();
    row.reserve(width);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      try {
        row.push_back(parse_double(fields[c]));
      } catch (const Error& e) {
        fail(ErrorCategory::format,
             "matrix CSV line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  });
  if (header) fail(ErrorCategory::format, "matrix CSV is empty");
  matrix.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      matrix.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return matrix;
}

void write_matrix_csv(const std::filesystem::path& path, const LabeledMatrix& matrix) {
  write_text_file(path, to_csv(matrix));
}

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
  try {
    return labeled_matrix_from_csv(read_text_file(path));
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::format) throw;
    fail(ErrorCategory::format, path.string() + ": " + e.what());
  }
}

std::vector<IdEdge> read_edge_csv(const std::filesystem::path& path) {
  return read_two_column_csv(path, "id_a", "id_b");
}

void write_edge_csv(const std::filesystem::path& path, const std::vector<IdEdge>& edges) {
  write_two_column_csv(path, "id_a,id_b", edges);
}

std::vector<IdLabel> read_label_csv(const std::filesystem::path& path) {
  return read_two_column_csv(path, "id", "label");
}

void write_label_csv(const std::filesystem::path& path, const std::vector<IdLabel>& labels) {
  write_two_column_csv(path, "id,label", labels);
}

}  // namespace topicdet
