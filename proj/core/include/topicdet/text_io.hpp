#pragma once

// Small text-format helpers shared by every file format in the toolkit:
// shortest round-trip number formatting, delimited-line splitting, and the
// id-keyed CSV layouts (matrix rows, edge lists, label columns).

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace topicdet {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char delimiter);
std::vector<std::string> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

// Rows of a matrix keyed by a string id. CSV layout: header
// "id,v0,...,v{D-1}", then one "id,x0,...,x{D-1}" line per row.
struct LabeledMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
};

std::string to_csv(const LabeledMatrix& matrix);
LabeledMatrix labeled_matrix_from_csv(std::string_view text);
void write_matrix_csv(const std::filesystem::path& path, const LabeledMatrix& matrix);
LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

// Undirected edge list, CSV "id_a,id_b" with that header line.
using IdEdge = std::pair<std::string, std::string>;
std::vector<IdEdge> read_edge_csv(const std::filesystem::path& path);
void write_edge_csv(const std::filesystem::path& path, const std::vector<IdEdge>& edges);

// Per-id string labels, CSV "id,label".
using IdLabel = std::pair<std::string, std::string>;
std::vector<IdLabel> read_label_csv(const std::filesystem::path& path);
void write_label_csv(const std::filesystem::path& path, const std::vector<IdLabel>& labels);

// Throws a data error if the id could not be written into a CSV field.
void check_csv_field(std::string_view field);

}  // namespace topicdet
