#include <gtest/gtest.h>

#include <random>

#include "support/temp_dir.hpp"
#include "topicdet/corpus.hpp"
#include "topicdet/error.hpp"
#include "topicdet/relation_graph.hpp"

using namespace topicdet;

namespace {

Document doc(std::string id, std::vector<std::string> tokens, std::vector<std::string> forwards = {}) {
  Document d;
  d.id = std::move(id);
  d.tokens = std::move(tokens);
  d.forwards = std::move(forwards);
  return d;
}

ErrorCategory category_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCategory::usage;
}

}  // namespace

TEST(LoadCorpus, ForwardsPreserved) {
  TempDir dir;
  const std::vector<Document> docs{doc("d1", {"a", "b"}), doc("d2", {"a", "c"}, {"d1"}), doc("d3", {"b", "c"})};
  write_corpus(dir.file("c.jsonl"), docs);
  const Corpus c = load_corpus(dir.file("c.jsonl"), StopFilterConfig::keep_all());
  ASSERT_EQ(c.docs.size(), 3u);
  EXPECT_EQ(c.docs[1].forwards, std::vector<std::string>{"d1"});
  EXPECT_EQ(c.docs, docs);
}

TEST(LoadCorpus, AllStopwordDocDropped) {
  StopFilterConfig f = StopFilterConfig::keep_all();
  f.stopwords = {"the", "of"};
  const Corpus c = make_corpus({doc("a", {"the", "of"}), doc("b", {"phone", "the"})}, f);
  EXPECT_EQ(c.dropped_documents, 1u);
  ASSERT_EQ(c.docs.size(), 1u);
  EXPECT_EQ(c.docs[0].tokens, std::vector<std::string>{"phone"});
}

TEST(LoadCorpus, MentionsDropped) {
  StopFilterConfig f;
  f.min_document_frequency = 1;
  const Corpus c = make_corpus({doc("a", {"@alice", "phone", "2019", "!", "。"})}, f);
  EXPECT_FALSE(c.vocab.contains("@alice"));
  EXPECT_FALSE(c.vocab.contains("2019"));
  EXPECT_FALSE(c.vocab.contains("!"));
  EXPECT_FALSE(c.vocab.contains("。"));
  EXPECT_TRUE(c.vocab.contains("phone"));
}

TEST(LoadCorpus, MinDocumentFrequency) {
  StopFilterConfig f = StopFilterConfig::keep_all();
  f.min_document_frequency = 2;
  const Corpus c = make_corpus({doc("a", {"x", "y"}), doc("b", {"x", "z"})}, f);
  EXPECT_EQ(c.vocab.words(), std::vector<std::string>{"x"});
  EXPECT_EQ(c.vocab.document_frequency(0), 2u);
}

TEST(LoadCorpus, ForwardToDroppedDocumentPruned) {
  StopFilterConfig f = StopFilterConfig::keep_all();
  f.stopwords = {"rt"};
  const Corpus c = make_corpus({doc("a", {"rt"}), doc("b", {"x"}, {"a"})}, f);
  ASSERT_EQ(c.docs.size(), 1u);
  EXPECT_TRUE(c.docs[0].forwards.empty());
}

TEST(LoadCorpus, Errors) {
  const auto keep = StopFilterConfig::keep_all();
  EXPECT_EQ(category_of([&] { make_corpus({doc("a", {"x"}, {"zz"})}, keep); }), ErrorCategory::data);
  EXPECT_EQ(category_of([&] { make_corpus({doc("a", {"x"}), doc("a", {"y"})}, keep); }), ErrorCategory::data);
  EXPECT_EQ(category_of([&] { make_corpus({doc("a", {"x"}, {"a"})}, keep); }), ErrorCategory::data);
  StopFilterConfig everything = keep;
  everything.stopwords = {"x"};
  EXPECT_EQ(category_of([&] { make_corpus({doc("a", {"x"})}, everything); }), ErrorCategory::data);
}

TEST(LoadCorpus, DanglingForwardNamesBothIds) {
  try {
    make_corpus({doc("a", {"x"}, {"ghost"})}, StopFilterConfig::keep_all());
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'a'"), std::string::npos);
    EXPECT_NE(msg.find("'ghost'"), std::string::npos);
  }
}

TEST(ParseCorpus, MalformedLineReportsLineNumber) {
  try {
    parse_corpus_jsonl("{\"id\":\"a\",\"tokens\":[\"x\"]}\n\n{\"id\": \"b\", tokens}\n", whitespace_tokenizer());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::format);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseCorpus, TextFieldUsesTokenizer) {
  const auto docs = parse_corpus_jsonl("{\"id\":\"a\",\"text\":\"new  phone\\tlaunch\",\"label\":\"t\"}\n",
                                       whitespace_tokenizer());
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].tokens, (std::vector<std::string>{"new", "phone", "launch"}));
  EXPECT_EQ(docs[0].label, "t");
}

TEST(ParseCorpus, TokensAndTextTogetherRejected) {
  EXPECT_THROW(parse_corpus_jsonl("{\"id\":\"a\",\"text\":\"x\",\"tokens\":[\"x\"]}", whitespace_tokenizer()),
               Error);
  EXPECT_THROW(parse_corpus_jsonl("{\"id\":\"a\"}", whitespace_tokenizer()), Error);
  EXPECT_THROW(parse_corpus_jsonl("{\"id\":3,\"tokens\":[]}", whitespace_tokenizer()), Error);
}

TEST(Filter, Idempotent) {
  std::mt19937_64 rng(9);
  const std::vector<std::string> pool{"a", "b", "c", "the", "@x", "12", "!", "d", "e"};
  StopFilterConfig f;
  f.stopwords = {"the"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Document> docs;
    for (int i = 0; i < 12; ++i) {
      std::vector<std::string> t;
      for (std::size_t k = 0; k < 1 + rng() % 5; ++k) t.push_back(pool[rng() % pool.size()]);
      docs.push_back(doc("d" + std::to_string(i), t, i > 0 && rng() % 3 == 0 ? std::vector<std::string>{"d0"}
                                                                                : std::vector<std::string>{}));
    }
    const FilterResult once = apply_filter(docs, f);
    const FilterResult twice = apply_filter(once.docs, f);
    EXPECT_EQ(twice.docs, once.docs);
    EXPECT_EQ(twice.dropped_documents, 0u);
  }
}

TEST(Vocabulary, FirstAppearanceOrderAndHash) {
  const auto v = Vocabulary::build({doc("a", {"b", "a", "b"}), doc("c", {"c", "a"})});
  EXPECT_EQ(v.words(), (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(v.document_frequency(v.index_of("a")), 2u);
  EXPECT_EQ(v.document_frequency(v.index_of("b")), 1u);
  EXPECT_EQ(v.index_of("zzz"), Vocabulary::npos);
  const auto w = Vocabulary::build({doc("a", {"a", "b", "c"})});
  EXPECT_NE(v.hash(), w.hash());
  EXPECT_EQ(v.hash(), Vocabulary::build({doc("q", {"b", "a", "c"})}).hash());
}

TEST(TokenPredicates, Classes) {
  EXPECT_TRUE(is_number_token("42"));
  EXPECT_TRUE(is_number_token("3.14"));
  EXPECT_TRUE(is_number_token("-1"));
  EXPECT_FALSE(is_number_token("4g"));
  EXPECT_TRUE(is_punctuation_token("?!"));
  EXPECT_TRUE(is_punctuation_token("，"));
  EXPECT_FALSE(is_punctuation_token("a!"));
  EXPECT_TRUE(is_mention_token("@someone"));
  EXPECT_FALSE(is_mention_token("@"));
  EXPECT_FALSE(is_mention_token("mail@host"));
}

TEST(RelationGraph, Symmetric) {
  const auto g = build_relation_graph({doc("a", {"x"}, {"b"}), doc("b", {"x"})});
  EXPECT_EQ(std::vector<std::size_t>(g.neighbors(0).begin(), g.neighbors(0).end()), std::vector<std::size_t>{1});
  EXPECT_EQ(std::vector<std::size_t>(g.neighbors(1).begin(), g.neighbors(1).end()), std::vector<std::size_t>{0});
}

TEST(RelationGraph, NoForwardsEmpty) {
  const auto g = build_relation_graph({doc("a", {"x"}), doc("b", {"x"})});
  EXPECT_TRUE(g.empty());
  EXPECT_EQ(g.node_count(), 2u);
}

TEST(RelationGraph, MutualForwardsCollapse) {
  const auto both = build_relation_graph({doc("a", {"x"}, {"b"}), doc("b", {"x"}, {"a"})});
  const auto one = build_relation_graph({doc("a", {"x"}, {"b"}), doc("b", {"x"})});
  EXPECT_EQ(both.edge_count(), 1u);
  EXPECT_EQ(both.degree(0), 1u);
  EXPECT_EQ(both.degree(1), 1u);
  EXPECT_EQ(both, one);
}

TEST(RelationGraph, RandomSymmetry) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<RelationGraph::Edge> edges;
    for (std::size_t e = 0; e < rng() % 80; ++e) edges.emplace_back(rng() % n, rng() % n);
    const auto g = RelationGraph::from_edges(n, edges);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) EXPECT_EQ(g.has_edge(a, b), g.has_edge(b, a));
      EXPECT_FALSE(g.has_edge(a, a));
    }
  }
}
