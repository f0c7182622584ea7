#include "topicdet_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <unordered_map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "topicdet/baselines.hpp"
#include "topicdet/checkpoint.hpp"
#include "topicdet/clustering.hpp"
#include "topicdet/corpus.hpp"
#include "topicdet/embedding_table.hpp"
#include "topicdet/keywords.hpp"
#include "topicdet/metrics.hpp"
#include "topicdet/relation_graph.hpp"
#include "topicdet/synthetic.hpp"
#include "topicdet/text_io.hpp"
#include "topicdet/trainer.hpp"

namespace topicdet::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct FilterOptions {
  std::string stopwords;
  std::size_t min_df = 2;
  bool keep_tokens = false;

  StopFilterConfig config() const {
    StopFilterConfig f;
    if (!stopwords.empty()) f.stopwords = read_stopword_file(stopwords);
    f.min_document_frequency = min_df;
    if (keep_tokens) {
      f.drop_numbers = false;
      f.drop_punctuation = false;
      f.drop_mentions = false;
    }
    return f;
  }
};

void add_filter_options(CLI::App* cmd, FilterOptions& f) {
  cmd->add_option("--stopwords", f.stopwords, "Stopword file, one word per line");
  cmd->add_option("--min-df", f.min_df, "Drop words seen in fewer documents")->capture_default_str();
  cmd->add_flag("--keep-tokens", f.keep_tokens, "Keep numbers, punctuation and @mentions");
}

// ---- gen -----------------------------------------------------------------

using Setter = std::function<void(const json&)>;

void read_object(const json& j, std::string_view section, const std::map<std::string, Setter>& fields) {
  if (!j.is_object()) fail(ErrorCategory::usage, "spec section '" + std::string(section) + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      fail(ErrorCategory::usage, "spec section '" + std::string(section) + "' has unknown key '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const json::exception&) {
      fail(ErrorCategory::usage, "spec key '" + std::string(section) + "." + key + "' has the wrong type");
    }
  }
}

template <class T>
Setter set(T& target) {
  return [&target](const json& v) {
    if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) throw json::type_error::create(302, "expected unsigned", &v);
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw json::type_error::create(302, "expected number", &v);
    }
    target = v.get<T>();
  };
}

SyntheticCorpusSpec corpus_spec(const json& j) {
  SyntheticCorpusSpec s;
  read_object(j, "corpus", {{"topics", set(s.topics)},
                            {"docs_per_topic", set(s.docs_per_topic)},
                            {"noise_docs", set(s.noise_docs)},
                            {"vocab_per_topic", set(s.vocab_per_topic)},
                            {"shared_vocab", set(s.shared_vocab)},
                            {"min_tokens", set(s.min_tokens)},
                            {"max_tokens", set(s.max_tokens)},
                            {"topic_token_fraction", set(s.topic_token_fraction)},
                            {"forward_intra", set(s.forward_intra)},
                            {"forward_inter", set(s.forward_inter)},
                            {"zipf_exponent", set(s.zipf_exponent)},
                            {"seed", set(s.seed)}});
  return s;
}

SyntheticEmbeddingSpec embedding_spec(const json& j) {
  SyntheticEmbeddingSpec s;
  read_object(j, "embeddings", {{"dim", set(s.dim)},
                                {"topic_center_norm", set(s.topic_center_norm)},
                                {"topic_word_spread", set(s.topic_word_spread)},
                                {"shared_word_norm", set(s.shared_word_norm)},
                                {"seed", set(s.seed)}});
  return s;
}

PointCloudSpec point_cloud_spec(const json& j) {
  PointCloudSpec s;
  json blobs = json::array();
  json bridges = json::array();
  read_object(j, "point_cloud", {{"dimension", set(s.dimension)},
                                 {"blobs", [&](const json& v) { blobs = v; }},
                                 {"bridges", [&](const json& v) { bridges = v; }},
                                 {"noise_points", set(s.noise_points)},
                                 {"noise_low", set(s.noise_low)},
                                 {"noise_high", set(s.noise_high)},
                                 {"seed", set(s.seed)}});
  if (!blobs.is_array()) fail(ErrorCategory::usage, "spec key 'point_cloud.blobs' must be an array");
  for (const json& b : blobs) {
    BlobSpec blob;
    read_object(b, "point_cloud.blobs[]", {{"center", set(blob.center)},
                                           {"radius", set(blob.radius)},
                                           {"count", set(blob.count)},
                                           {"label", set(blob.label)}});
    s.blobs.push_back(std::move(blob));
  }
  if (!bridges.is_array()) fail(ErrorCategory::usage, "spec key 'point_cloud.bridges' must be an array");
  for (const json& e : bridges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      fail(ErrorCategory::usage, "each point_cloud bridge must be a pair of point indices");
    }
    s.bridges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return s;
}

std::string point_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%05zu", i);
  return buf;
}

void cmd_gen(const std::string& spec_path, const fs::path& out_dir) {
  json spec;
  try {
    spec = json::parse(read_text_file(spec_path));
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::usage, spec_path + ": spec is not valid JSON (" + e.what() + ")");
  }
  std::optional<json> point_cloud;
  json corpus_json = json::object();
  json embedding_json = json::object();
  read_object(spec, "top level", {{"corpus", [&](const json& v) { corpus_json = v; }},
                                  {"embeddings", [&](const json& v) { embedding_json = v; }},
                                  {"point_cloud", [&](const json& v) { point_cloud = v; }}});
  const SyntheticCorpusSpec cs = corpus_spec(corpus_json);
  const SyntheticEmbeddingSpec es = embedding_spec(embedding_json);
  cs.validate();
  es.validate();
  std::optional<PointCloudSpec> ps;
  if (point_cloud) {
    ps = point_cloud_spec(*point_cloud);
    ps->validate();
  }

  const SyntheticCorpus corpus = generate_synthetic_corpus(cs);
  write_corpus(out_dir / "corpus.jsonl", corpus.docs);
  std::vector<IdLabel> truth;
  std::vector<IdEdge> edges;
  for (const Document& d : corpus.docs) {
    truth.emplace_back(d.id, d.label.value_or(kNoiseTruthLabel));
    for (const std::string& f : d.forwards) edges.emplace_back(d.id, f);
  }
  write_label_csv(out_dir / "truth.csv", truth);
  write_edge_csv(out_dir / "edges.csv", edges);
  write_word2vec(out_dir / "embeddings.txt", generate_synthetic_embeddings(cs, es));

  nlohmann::ordered_json planted;
  planted["topics"] = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < corpus.planted_vocab.size(); ++k) {
    planted["topics"][topic_label(k)] = corpus.planted_vocab[k];
  }
  planted["shared"] = corpus.shared_vocab;
  write_text_file(out_dir / "planted.json", planted.dump(2) + "\n");

  if (ps) {
    const PointCloud cloud = generate_point_cloud(*ps);
    LabeledMatrix m;
    for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) m.ids.push_back(point_id(static_cast<std::size_t>(i)));
    m.values = cloud.points;
    write_matrix_csv(out_dir / "points.csv", m);
    std::vector<IdLabel> point_truth;
    for (std::size_t i = 0; i < cloud.labels.size(); ++i) point_truth.emplace_back(m.ids[i], cloud.labels[i]);
    write_label_csv(out_dir / "points_truth.csv", point_truth);
    std::vector<IdEdge> point_edges;
    for (const auto& [a, b] : cloud.graph.edges()) point_edges.emplace_back(m.ids[a], m.ids[b]);
    write_edge_csv(out_dir / "points_edges.csv", point_edges);
  }
}

// ---- train / embed -------------------------------------------------------

struct TrainOptions {
  std::string corpus;
  std::string embeddings;
  std::string checkpoint;
  std::string loss;
  std::string tuned_embeddings;
  std::string pooling = "mean max min";
  bool fine_tune = false;
  FilterOptions filter;
  TrainConfig config;
};

void cmd_train(const TrainOptions& o) {
  const Corpus corpus = load_corpus(o.corpus, o.filter.config());
  const PoolingSpec pooling = PoolingSpec::parse(o.pooling);
  EmbeddingTable table = read_word2vec(o.embeddings).restricted_to(corpus.vocab, false);
  table.frozen = !o.fine_tune;
  if (!o.tuned_embeddings.empty() && !o.fine_tune) {
    fail(ErrorCategory::usage, "--tuned-embeddings needs --fine-tune");
  }
  const TrainResult result = train(corpus, table, o.config, pooling);
  write_checkpoint(o.checkpoint, Checkpoint{result.params, pooling, corpus.vocab.hash(), corpus.vocab.size()});
  if (!o.loss.empty()) write_text_file(o.loss, loss_trace_csv(result));
  if (!o.tuned_embeddings.empty()) write_word2vec(o.tuned_embeddings, *result.tuned_table);
}

struct EmbedOptions {
  std::string corpus;
  std::string embeddings;
  std::string checkpoint;
  std::string mode = "panm";
  std::string out;
  std::string attention;
  std::string pooling = "mean max min";
  bool skip_vocab_check = false;
  FilterOptions filter;
};

void cmd_embed(const EmbedOptions& o) {
  if (o.mode != "panm" && o.mode != "swa" && o.mode != "kwavg" && o.mode != "powermean") {
    fail(ErrorCategory::usage, "unknown embedding mode '" + o.mode + "' (expected panm, swa, kwavg or powermean)");
  }
  const bool needs_checkpoint = o.mode == "panm" || o.mode == "kwavg";
  if (needs_checkpoint && o.checkpoint.empty()) {
    fail(ErrorCategory::usage, "mode " + o.mode + " needs --checkpoint");
  }
  const Corpus corpus = load_corpus(o.corpus, o.filter.config());
  const EmbeddingTable table = read_word2vec(o.embeddings).restricted_to(corpus.vocab, true);

  std::optional<Checkpoint> ckpt;
  PoolingSpec pooling = PoolingSpec::parse(o.pooling);
  if (!o.checkpoint.empty()) {
    ckpt = read_checkpoint(o.checkpoint, o.skip_vocab_check ? nullptr : &corpus.vocab);
    if (ckpt->params.dim() != table.dim()) {
      fail(ErrorCategory::data, "checkpoint dimension " + std::to_string(ckpt->params.dim()) +
                                    " does not match embedding dimension " + std::to_string(table.dim()));
    }
    pooling = ckpt->pooling;
  }

  CorpusEmbedding e;
  if (o.mode == "panm") {
    e = embed_corpus(corpus, table, ckpt->params, pooling);
  } else if (o.mode == "kwavg") {
    e = baseline_keywords_avg(corpus, table, ckpt->params, pooling);
  } else if (o.mode == "swa") {
    e = baseline_swa(corpus, table);
  } else {
    e = baseline_powermean(corpus, table, pooling);
  }
  write_matrix_csv(o.out, e.matrix);
  if (!o.attention.empty()) write_attention(o.attention, e.attention);
}

// ---- cluster / eval / sweep ----------------------------------------------

std::unordered_map<std::string, std::size_t> index_ids(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!index.emplace(ids[i], i).second) fail(ErrorCategory::data, "id '" + ids[i] + "' appears twice");
  }
  return index;
}

RelationGraph load_graph(const std::string& path, const std::vector<std::string>& ids) {
  if (path.empty()) return RelationGraph(ids.size());
  const auto index = index_ids(ids);
  std::vector<RelationGraph::Edge> edges;
  for (const auto& [a, b] : read_edge_csv(path)) {
    const auto ia = index.find(a);
    const auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      fail(ErrorCategory::data, path + ": edge " + a + "," + b + " names an unknown id");
    }
    edges.emplace_back(ia->second, ib->second);
  }
  return RelationGraph::from_edges(ids.size(), edges);
}

Partition load_truth(const std::string& path, const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::string> by_id;
  for (auto& [id, label] : read_label_csv(path)) {
    if (!by_id.emplace(id, label).second) fail(ErrorCategory::data, path + ": id '" + id + "' appears twice");
  }
  if (by_id.size() != ids.size()) {
    fail(ErrorCategory::data, path + ": truth has " + std::to_string(by_id.size()) + " ids but the input has " +
                                  std::to_string(ids.size()));
  }
  std::vector<std::string> labels;
  labels.reserve(ids.size());
  for (const std::string& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) fail(ErrorCategory::data, path + ": no truth label for id '" + id + "'");
    labels.push_back(it->second);
  }
  return Partition::from_strings(labels);
}

struct ClusterOptions {
  std::string matrix;
  std::string edges;
  std::string algo = "radbscan";
  std::string metric = "cosine";
  std::string out;
  RadbscanConfig config;
  std::optional<std::size_t> k;
  std::uint64_t seed = 1;
  std::size_t restarts = 1;
};

void cmd_cluster(const ClusterOptions& o) {
  if (o.algo != "radbscan" && o.algo != "dbscan" && o.algo != "kmeans") {
    fail(ErrorCategory::usage, "unknown algorithm '" + o.algo + "' (expected radbscan, dbscan or kmeans)");
  }
  if (o.algo == "kmeans" && !o.k) fail(ErrorCategory::usage, "kmeans needs --k");
  const DistanceMetric metric = parse_distance_metric(o.metric);
  const LabeledMatrix m = read_matrix_csv(o.matrix);
  ClusterAssignment a;
  if (o.algo == "kmeans") {
    a = kmeans(m.values, *o.k, o.seed, o.restarts).assignment;
  } else {
    const PointSet points(m.values, metric);
    if (o.algo == "dbscan") {
      a = dbscan(points, o.config);
    } else {
      a = radbscan(points, load_graph(o.edges, m.ids), o.config);
    }
  }
  write_assignment_csv(o.out, m.ids, a);
}

struct EvalOptions {
  std::string assignment;
  std::string truth;
  std::string policy = "as-one-cluster";
  std::string out;
  std::string json;
};

void cmd_eval(const EvalOptions& o, std::ostream& out) {
  const NoisePolicy policy = parse_noise_policy(o.policy);
  const AssignmentFile a = read_assignment_csv(o.assignment);
  const Partition truth = load_truth(o.truth, a.ids);
  const MetricReport r = evaluate(a.labels, truth, policy);
  if (o.out.empty()) {
    out << report_text(r);
  } else {
    write_text_file(o.out, report_text(r));
  }
  if (!o.json.empty()) write_text_file(o.json, report_json(r));
}

struct SweepOptions {
  std::string matrix;
  std::string edges;
  std::string truth;
  std::string metric = "cosine";
  std::string policy = "as-one-cluster";
  std::string out;
  double eps_start = 0.1;
  double eps_stop = 1.0;
  double eps_step = 0.1;
  std::size_t min_pts = 4;
};

std::vector<double> eps_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) fail(ErrorCategory::usage, "sweep step must be > 0");
  if (!(start > 0.0) || !(stop >= start) || !std::isfinite(stop)) {
    fail(ErrorCategory::usage, "sweep needs 0 < eps-start <= eps-stop");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) fail(ErrorCategory::usage, "sweep has too many steps");
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) {
    // Twelve significant digits drop accumulation noise such as 0.30000000000000004.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
    grid.push_back(parse_double(buf));
  }
  return grid;
}

void cmd_sweep(const SweepOptions& o) {
  const std::vector<double> grid = eps_grid(o.eps_start, o.eps_stop, o.eps_step);
  const NoisePolicy policy = parse_noise_policy(o.policy);
  const LabeledMatrix m = read_matrix_csv(o.matrix);
  const PointSet points(m.values, parse_distance_metric(o.metric));
  const RelationGraph graph = load_graph(o.edges, m.ids);
  const Partition truth = load_truth(o.truth, m.ids);

  std::string csv = "eps,algo,n_clusters,nmi\n";
  for (const double eps : grid) {
    RadbscanConfig config;
    config.eps = eps;
    config.min_pts = o.min_pts;
    const auto row = [&](const char* algo, const ClusterAssignment& a) {
      csv += format_double(eps) + "," + algo + "," + std::to_string(a.cluster_count) + "," +
             format_double(evaluate(a.labels, truth, policy).nmi) + "\n";
    };
    row("dbscan", dbscan(points, config));
    row("radbscan", radbscan(points, graph, config));
  }
  write_text_file(o.out, csv);
}

// ---- keywords ------------------------------------------------------------

struct KeywordOptions {
  std::string assignment;
  std::string attention;
  std::string corpus;
  std::string out;
  std::size_t top = 3;
  FilterOptions filter;
};

void cmd_keywords(const KeywordOptions& o) {
  const Corpus corpus = load_corpus(o.corpus, o.filter.config());
  const AssignmentFile a = read_assignment_csv(o.assignment);
  const std::vector<AttentionRecord> records = read_attention(o.attention);
  const auto index = index_ids(a.ids);
  if (records.size() != a.ids.size()) {
    fail(ErrorCategory::data, "assignment has " + std::to_string(a.ids.size()) + " ids but attention has " +
                                  std::to_string(records.size()) + " records");
  }
  std::vector<std::int64_t> labels;
  labels.reserve(records.size());
  for (const AttentionRecord& r : records) {
    const auto it = index.find(r.id);
    if (it == index.end()) fail(ErrorCategory::data, "attention record '" + r.id + "' is not in the assignment");
    labels.push_back(a.labels[it->second]);
  }
  write_keywords_csv(o.out, cluster_keywords(labels, records, corpus.vocab, o.top));
}

}  // namespace

int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::usage:
      return 2;
    case ErrorCategory::io:
      return 3;
    case ErrorCategory::format:
      return 4;
    case ErrorCategory::data:
      return 5;
    case ErrorCategory::training:
      return 6;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topic detection on short texts: PANM sentence embeddings and relation-aware DBSCAN"};
  app.name("topicdet");
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags win");
  app.require_subcommand(1, 1);

  std::string gen_spec;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic corpus, embeddings and point cloud");
  gen->add_option("--spec", gen_spec, "JSON generator spec")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();

  TrainOptions tr;
  CLI::App* train_cmd = app.add_subcommand("train", "Train PANM and write a checkpoint");
  train_cmd->add_option("--corpus", tr.corpus, "Corpus JSONL")->required();
  train_cmd->add_option("--embeddings", tr.embeddings, "word2vec text file")->required();
  train_cmd->add_option("--checkpoint", tr.checkpoint, "Checkpoint output")->required();
  train_cmd->add_option("--loss", tr.loss, "Loss trace CSV output");
  train_cmd->add_option("--epochs", tr.config.epochs)->capture_default_str();
  train_cmd->add_option("--negatives", tr.config.negatives, "Negative samples per document")->capture_default_str();
  train_cmd->add_option("--lr", tr.config.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--batch-size", tr.config.batch_size)->capture_default_str();
  train_cmd->add_option("--hidden1", tr.config.hidden1, "First hidden width (0 = 3d)")->capture_default_str();
  train_cmd->add_option("--hidden2", tr.config.hidden2, "Second hidden width (0 = 3d)")->capture_default_str();
  train_cmd->add_option("--init-scale", tr.config.init_scale)->capture_default_str();
  train_cmd->add_option("--seed", tr.config.seed)->capture_default_str();
  train_cmd->add_option("--pooling", tr.pooling, "Block order of z")->capture_default_str();
  train_cmd->add_flag("--fine-tune", tr.fine_tune, "Update word vectors too");
  train_cmd->add_option("--tuned-embeddings", tr.tuned_embeddings, "word2vec output of fine-tuned vectors");
  add_filter_options(train_cmd, tr.filter);

  EmbedOptions em;
  CLI::App* embed = app.add_subcommand("embed", "Embed every document of a corpus");
  embed->add_option("--corpus", em.corpus, "Corpus JSONL")->required();
  embed->add_option("--embeddings", em.embeddings, "word2vec text file")->required();
  embed->add_option("--checkpoint", em.checkpoint, "Checkpoint (panm, kwavg)");
  embed->add_option("--mode", em.mode, "panm, swa, kwavg or powermean")->capture_default_str();
  embed->add_option("--out", em.out, "Matrix CSV output")->required();
  embed->add_option("--attention", em.attention, "Attention JSONL output");
  embed->add_option("--pooling", em.pooling, "Block order without a checkpoint")->capture_default_str();
  embed->add_flag("--skip-vocab-check", em.skip_vocab_check, "Accept a checkpoint trained on another vocabulary");
  add_filter_options(embed, em.filter);

  ClusterOptions cl;
  std::size_t k = 0;
  CLI::App* cluster = app.add_subcommand("cluster", "Cluster an embedding matrix");
  cluster->add_option("--matrix", cl.matrix, "Matrix CSV")->required();
  cluster->add_option("--edges", cl.edges, "Relation edges CSV (radbscan)");
  cluster->add_option("--algo", cl.algo, "radbscan, dbscan or kmeans")->capture_default_str();
  cluster->add_option("--eps", cl.config.eps)->capture_default_str();
  cluster->add_option("--min-pts", cl.config.min_pts)->capture_default_str();
  cluster->add_option("--metric", cl.metric, "cosine or euclidean")->capture_default_str();
  CLI::Option* k_opt = cluster->add_option("--k", k, "Cluster count (kmeans)");
  cluster->add_option("--seed", cl.seed, "kmeans seed")->capture_default_str();
  cluster->add_option("--restarts", cl.restarts, "kmeans restarts, lowest inertia wins")->capture_default_str();
  cluster->add_option("--out", cl.out, "Assignment CSV output")->required();

  EvalOptions ev;
  CLI::App* eval = app.add_subcommand("eval", "Score an assignment against truth labels");
  eval->add_option("--assignment", ev.assignment, "Assignment CSV")->required();
  eval->add_option("--truth", ev.truth, "Truth CSV id,label")->required();
  eval->add_option("--policy", ev.policy, "as-one-cluster, as-singletons or exclude")->capture_default_str();
  eval->add_option("--out", ev.out, "Text report output (default stdout)");
  eval->add_option("--json", ev.json, "JSON report output");

  SweepOptions sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Run dbscan and radbscan over an eps grid");
  sweep->add_option("--matrix", sw.matrix, "Matrix CSV")->required();
  sweep->add_option("--edges", sw.edges, "Relation edges CSV");
  sweep->add_option("--truth", sw.truth, "Truth CSV id,label")->required();
  sweep->add_option("--eps-start", sw.eps_start)->capture_default_str();
  sweep->add_option("--eps-stop", sw.eps_stop)->capture_default_str();
  sweep->add_option("--eps-step", sw.eps_step)->capture_default_str();
  sweep->add_option("--min-pts", sw.min_pts)->capture_default_str();
  sweep->add_option("--metric", sw.metric)->capture_default_str();
  sweep->add_option("--policy", sw.policy)->capture_default_str();
  sweep->add_option("--out", sw.out, "CSV output eps,algo,n_clusters,nmi")->required();

  KeywordOptions kw;
  CLI::App* keywords = app.add_subcommand("keywords", "Top attention keywords per cluster");
  keywords->add_option("--assignment", kw.assignment, "Assignment CSV")->required();
  keywords->add_option("--attention", kw.attention, "Attention JSONL")->required();
  keywords->add_option("--corpus", kw.corpus, "Corpus JSONL")->required();
  keywords->add_option("--top", kw.top, "Keywords per cluster")->capture_default_str();
  keywords->add_option("--out", kw.out, "Keywords CSV output")->required();
  add_filter_options(keywords, kw.filter);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return exit_code(ErrorCategory::usage);
  }

  try {
    if (gen->parsed()) {
      cmd_gen(gen_spec, gen_out);
    } else if (train_cmd->parsed()) {
      cmd_train(tr);
    } else if (embed->parsed()) {
      cmd_embed(em);
    } else if (cluster->parsed()) {
      if (k_opt->count() > 0) cl.k = k;
      cmd_cluster(cl);
    } else if (eval->parsed()) {
      cmd_eval(ev, out);
    } else if (sweep->parsed()) {
      cmd_sweep(sw);
    } else if (keywords->parsed()) {
      cmd_keywords(kw);
    }
  } catch (const Error& e) {
    err << "error[" << to_string(e.category()) << "]: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::bad_alloc&) {
    err << "error[data]: out of memory\n";
    return exit_code(ErrorCategory::data);
  }
  return 0;
}

}  // namespace topicdet::cli
