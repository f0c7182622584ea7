#include "topicdet/baselines.hpp"

#include <map>

#include <nlohmann/json.hpp>

#include "topicdet/error.hpp"

namespace topicdet {

namespace {

AttentionRecord make_record(const Document& doc, const EmbeddingTable& table,
                            const std::vector<std::size_t>& rows, const Eigen::VectorXd& weights) {
  AttentionRecord record;
  record.id = doc.id;
  record.tokens.reserve(rows.size());
  for (const std::size_t r : rows) record.tokens.push_back(table.word(r));
  record.weights.assign(weights.data(), weights.data() + weights.size());
  return record;
}

CorpusEmbedding allocate(const Corpus& corpus, Eigen::Index width) {
  CorpusEmbedding out;
  out.matrix.values.resize(static_cast<Eigen::Index>(corpus.size()), width);
  out.matrix.ids.reserve(corpus.size());
  out.attention.reserve(corpus.size());
  return out;
}

// Row that wins the most coordinates; ties go to the lowest row.
std::size_t most_coordinates(const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& winners) {
  std::map<std::size_t, std::size_t> counts;
  for (const std::size_t position : winners) ++counts[rows[position]];
  std::size_t best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [row, count] : counts) {
    if (count > best_count) {
      best = row;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

CorpusEmbedding embed_corpus(const Corpus& corpus, const EmbeddingTable& table,
                             const PanmParams& params, const PoolingSpec& pooling) {
  params.validate();
  CorpusEmbedding out = allocate(corpus, 3 * table.dim());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document& doc = corpus.docs[i];
    const std::vector<std::size_t> rows = lookup_rows(doc, table);
    const SentenceEmbedding s = encode_sentence(rows, table, params, pooling);
    out.matrix.ids.push_back(doc.id);
    out.matrix.values.row(static_cast<Eigen::Index>(i)) = s.z.transpose();
    out.attention.push_back(make_record(doc, table, rows, s.weights));
  }
  return out;
}

CorpusEmbedding baseline_swa(const Corpus& corpus, const EmbeddingTable& table) {
  CorpusEmbedding out = allocate(corpus, table.dim());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document& doc = corpus.docs[i];
    const std::vector<std::size_t> rows = lookup_rows(doc, table);
    out.matrix.ids.push_back(doc.id);
    out.matrix.values.row(static_cast<Eigen::Index>(i)) =
        power_mean(gather_rows(table, rows), PoolBranch::mean).transpose();
    const auto n = static_cast<Eigen::Index>(rows.size());
    out.attention.push_back(make_record(doc, table, rows, Eigen::VectorXd::Constant(n, 1.0 / n)));
  }
  return out;
}

CorpusEmbedding baseline_powermean(const Corpus& corpus, const EmbeddingTable& table,
                                   const PoolingSpec& pooling) {
  CorpusEmbedding out = allocate(corpus, 3 * table.dim());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document& doc = corpus.docs[i];
    const std::vector<std::size_t> rows = lookup_rows(doc, table);
    out.matrix.ids.push_back(doc.id);
    out.matrix.values.row(static_cast<Eigen::Index>(i)) =
        encode_unweighted(rows, table, pooling).transpose();
    const auto n = static_cast<Eigen::Index>(rows.size());
    out.attention.push_back(make_record(doc, table, rows, Eigen::VectorXd::Constant(n, 1.0 / n)));
  }
  return out;
}

std::array<std::size_t, 3> branch_keywords(const SentenceEmbedding& sentence) {
  const auto& rows = sentence.rows;
  std::size_t top = 0;
  for (std::size_t t = 1; t < rows.size(); ++t) {
    const double w = sentence.weights[static_cast<Eigen::Index>(t)];
    const double best = sentence.weights[static_cast<Eigen::Index>(top)];
    if (w > best || (w == best && rows[t] < rows[top])) top = t;
  }
  return {rows[top], most_coordinates(rows, sentence.argmax_token),
          most_coordinates(rows, sentence.argmin_token)};
}

CorpusEmbedding baseline_keywords_avg(const Corpus& corpus, const EmbeddingTable& table,
                                      const PanmParams& params, const PoolingSpec& pooling) {
  params.validate();
  CorpusEmbedding out = allocate(corpus, table.dim());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document& doc = corpus.docs[i];
    const std::vector<std::size_t> rows = lookup_rows(doc, table);
    const SentenceEmbedding s = encode_sentence(rows, table, params, pooling);
    const auto keys = branch_keywords(s);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(table.dim());
    for (const std::size_t r : keys) mean += table.row(r).transpose();
    out.matrix.ids.push_back(doc.id);
    out.matrix.values.row(static_cast<Eigen::Index>(i)) = (mean / 3.0).transpose();
    out.attention.push_back(make_record(doc, table, rows, s.weights));
  }
  return out;
}

std::string attention_to_jsonl(const std::vector<AttentionRecord>& records) {
  std::string out;
  for (const AttentionRecord& r : records) {
    nlohmann::json j = nlohmann::json::object();
    j["id"] = r.id;
    j["tokens"] = r.tokens;
    j["weights"] = r.weights;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<AttentionRecord> parse_attention_jsonl(std::string_view text) {
  std::vector<AttentionRecord> records;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      AttentionRecord r;
      r.id = j.at("id").get<std::string>();
      r.tokens = j.at("tokens").get<std::vector<std::string>>();
      r.weights = j.at("weights").get<std::vector<double>>();
      if (r.tokens.size() != r.weights.size()) {
        fail(ErrorCategory::format, "tokens and weights differ in length");
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCategory::format, "attention line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorCategory::format, "attention line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_attention(const std::filesystem::path& path, const std::vector<AttentionRecord>& records) {
  write_text_file(path, attention_to_jsonl(records));
}

std::vector<AttentionRecord> read_attention(const std::filesystem::path& path) {
  try {
    return parse_attention_jsonl(read_text_file(path));
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    fail(e.category(), path.string() + ": " + e.what());
  }
}

}  // namespace topicdet
