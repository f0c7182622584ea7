#include "topicdet/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

namespace {

using nlohmann::json;

// Decodes one UTF-8 code point starting at `pos`; advances `pos`. Invalid
// sequences decode as U+FFFD one byte at a time.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char lead = byte(pos);
  std::size_t length = 1;
  char32_t cp = 0xFFFD;
  if (lead < 0x80) {
    cp = lead;
  } else if ((lead >> 5) == 0x6) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead >> 4) == 0xE) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead >> 3) == 0x1E) {
    length = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + length > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < length; ++i) {
    const unsigned char cont = byte(pos + i);
    if ((cont >> 6) != 0x2) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  pos += length;
  return cp;
}

bool is_punctuation_code_point(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  return (cp >= 0x00A1 && cp <= 0x00BF) ||  // Latin-1 punctuation and symbols
         (cp >= 0x2010 && cp <= 0x205E) ||  // general punctuation
         (cp >= 0x3000 && cp <= 0x303F) ||  // CJK symbols and punctuation
         (cp >= 0xFE30 && cp <= 0xFE4F) ||  // CJK compatibility forms
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65);
}

bool token_filtered(std::string_view token, const StopFilterConfig& filter) {
  if (token.empty()) return true;
  if (filter.stopwords.count(std::string(token)) != 0) return true;
  if (filter.drop_mentions && is_mention_token(token)) return true;
  if (filter.drop_numbers && is_number_token(token)) return true;
  if (filter.drop_punctuation && is_punctuation_token(token)) return true;
  return false;
}

std::string string_field(const json& record, const char* key, std::size_t line_no) {
  const auto& value = record.at(key);
  if (!value.is_string()) {
    fail(ErrorCategory::format,
         "corpus line " + std::to_string(line_no) + ": field '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

std::vector<std::string> string_array_field(const json& record, const char* key,
                                            std::size_t line_no) {
  const auto& value = record.at(key);
  if (!value.is_array()) {
    fail(ErrorCategory::format,
         "corpus line " + std::to_string(line_no) + ": field '" + key + "' must be an array");
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string()) {
      fail(ErrorCategory::format, "corpus line " + std::to_string(line_no) + ": field '" + key +
                                      "' must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

Vocabulary Vocabulary::build(const std::vector<Document>& docs) {
  Vocabulary vocab;
  for (const Document& doc : docs) {
    std::unordered_set<std::size_t> seen;
    for (const std::string& token : doc.tokens) {
      auto [it, inserted] = vocab.index_.try_emplace(token, vocab.words_.size());
      if (inserted) {
        vocab.words_.push_back(token);
        vocab.doc_freq_.push_back(0);
      }
      if (seen.insert(it->second).second) ++vocab.doc_freq_[it->second];
    }
  }
  return vocab;
}

bool Vocabulary::contains(std::string_view word) const {
  return index_.find(std::string(word)) != index_.end();
}

std::size_t Vocabulary::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? npos : it->second;
}

std::uint64_t Vocabulary::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const std::string& w : words_) {
    for (const char c : w) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

StopFilterConfig StopFilterConfig::keep_all() {
  StopFilterConfig filter;
  filter.drop_numbers = false;
  filter.drop_punctuation = false;
  filter.drop_mentions = false;
  filter.min_document_frequency = 1;
  return filter;
}

std::set<std::string> read_stopword_file(const std::filesystem::path& path) {
  std::set<std::string> words;
  for (const std::string& w : split_whitespace(read_text_file(path))) words.insert(w);
  return words;
}

bool is_number_token(std::string_view token) {
  std::size_t i = 0;
  if (i < token.size() && (token[i] == '+' || token[i] == '-')) ++i;
  bool digit = false;
  for (; i < token.size(); ++i) {
    const char c = token[i];
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != '%') {
      return false;
    }
  }
  return digit;
}

bool is_punctuation_token(std::string_view token) {
  if (token.empty()) return false;
  std::size_t pos = 0;
  while (pos < token.size()) {
    if (!is_punctuation_code_point(next_code_point(token, pos))) return false;
  }
  return true;
}

bool is_mention_token(std::string_view token) {
  return token.size() > 1 && token.front() == '@';
}

Tokenizer whitespace_tokenizer() {
  return [](std::string_view text) { return split_whitespace(text); };
}

FilterResult apply_filter(std::vector<Document> docs, const StopFilterConfig& filter) {
  for (Document& doc : docs) {
    std::erase_if(doc.tokens, [&](const std::string& t) { return token_filtered(t, filter); });
  }
  if (filter.min_document_frequency > 1) {
    const Vocabulary vocab = Vocabulary::build(docs);
    for (Document& doc : docs) {
      std::erase_if(doc.tokens, [&](const std::string& t) {
        return vocab.document_frequency(vocab.index_of(t)) < filter.min_document_frequency;
      });
    }
  }

  FilterResult result;
  std::unordered_set<std::string> dropped;
  for (Document& doc : docs) {
    if (doc.tokens.empty()) {
      dropped.insert(doc.id);
      ++result.dropped_documents;
    } else {
      result.docs.push_back(std::move(doc));
    }
  }
  if (!dropped.empty()) {
    for (Document& doc : result.docs) {
      std::erase_if(doc.forwards, [&](const std::string& f) { return dropped.count(f) != 0; });
    }
  }
  return result;
}

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].id == id) return i;
  }
  return std::nullopt;
}

void validate_documents(const std::vector<Document>& docs) {
  std::unordered_set<std::string> ids;
  for (const Document& doc : docs) {
    if (doc.id.empty()) fail(ErrorCategory::data, "document with empty id");
    if (!ids.insert(doc.id).second) {
      fail(ErrorCategory::data, "duplicate document id '" + doc.id + "'");
    }
  }
  for (const Document& doc : docs) {
    for (const std::string& target : doc.forwards) {
      if (target == doc.id) {
        fail(ErrorCategory::data, "document '" + doc.id + "' forwards itself");
      }
      if (ids.count(target) == 0) {
        fail(ErrorCategory::data,
             "document '" + doc.id + "' forwards unknown document '" + target + "'");
      }
    }
  }
}

std::vector<Document> parse_corpus_jsonl(std::string_view text, const Tokenizer& tokenizer) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCategory::format,
           "corpus line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!record.is_object()) {
      fail(ErrorCategory::format, "corpus line " + std::to_string(line_no) + ": expected object");
    }
    if (!record.contains("id")) {
      fail(ErrorCategory::format, "corpus line " + std::to_string(line_no) + ": missing 'id'");
    }

    Document doc;
    doc.id = string_field(record, "id", line_no);
    const bool has_tokens = record.contains("tokens");
    const bool has_text = record.contains("text");
    if (has_tokens == has_text) {
      fail(ErrorCategory::format, "corpus line " + std::to_string(line_no) +
                                      ": exactly one of 'tokens' or 'text' is required");
    }
    doc.tokens = has_tokens ? string_array_field(record, "tokens", line_no)
                            : tokenizer(string_field(record, "text", line_no));
    if (record.contains("forwards")) doc.forwards = string_array_field(record, "forwards", line_no);
    if (record.contains("label") && !record.at("label").is_null()) {
      doc.label = string_field(record, "label", line_no);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

Corpus make_corpus(std::vector<Document> docs, const StopFilterConfig& filter) {
  validate_documents(docs);
  FilterResult filtered = apply_filter(std::move(docs), filter);
  if (filtered.docs.empty()) fail(ErrorCategory::data, "corpus is empty after filtering");
  Corpus corpus;
  corpus.vocab = Vocabulary::build(filtered.docs);
  corpus.docs = std::move(filtered.docs);
  corpus.dropped_documents = filtered.dropped_documents;
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const StopFilterConfig& filter,
                   const Tokenizer& tokenizer) {
  try {
    return make_corpus(parse_corpus_jsonl(read_text_file(path), tokenizer), filter);
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    fail(e.category(), path.string() + ": " + e.what());
  }
}

std::string corpus_to_jsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const Document& doc : docs) {
    json record = json::object();
    record["id"] = doc.id;
    record["tokens"] = doc.tokens;
    if (!doc.forwards.empty()) record["forwards"] = doc.forwards;
    if (doc.label) record["label"] = *doc.label;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<Document>& docs) {
  write_text_file(path, corpus_to_jsonl(docs));
}

}  // namespace topicdet
