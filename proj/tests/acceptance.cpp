// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"
#include "topicdet/baselines.hpp"
#include "topicdet/clustering.hpp"
#include "topicdet/corpus.hpp"
#include "topicdet/error.hpp"
#include "topicdet/keywords.hpp"
#include "topicdet/metrics.hpp"
#include "topicdet/panm.hpp"
#include "topicdet/synthetic.hpp"
#include "topicdet/text_io.hpp"
#include "topicdet/trainer.hpp"
#include "topicdet_cli/cli.hpp"

using namespace topicdet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

EmbeddingTable table_from(const Eigen::MatrixXd& m) {
  std::vector<std::string> words;
  for (Eigen::Index i = 0; i < m.rows(); ++i) words.push_back("w" + std::to_string(i));
  return EmbeddingTable(words, m);
}

// ---- gradients -------------------------------------------------------------

Outcome gradient_check() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::LossInstance inst = oracle::random_instance(rng, 8, 16, 5);
    const PanmParams p = PanmParams::uniform(8, 24, 24, 0.5, rng);
    const PanmGradients g = compute_gradients(inst.anchor, inst.negatives, table_from(inst.table), p, inst.pooling);
    const oracle::NumericGradients num = oracle::central_differences(inst, p);
    worst = std::max({worst, oracle::relative_error(g.attention, num.attention),
                      oracle::relative_error(g.layer1, num.layer1), oracle::relative_error(g.layer2, num.layer2),
                      oracle::relative_error(g.layer3, num.layer3)});
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-4 && elapsed < 10.0,
          fmt("max relative error %.2e over 20 instances (limit 1e-4), %.2f s (limit 10 s)", worst, elapsed)};
}

// ---- clustering reduction --------------------------------------------------

Eigen::MatrixXd random_blobs(std::mt19937_64& rng, std::size_t n, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t blobs = 1 + rng() % 6;
  Eigen::MatrixXd centers(static_cast<Eigen::Index>(blobs), dim);
  for (Eigen::Index i = 0; i < centers.size(); ++i) centers.data()[i] = 5.0 * g(rng);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), dim);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const bool background = rng() % 6 == 0;
    const auto blob = static_cast<Eigen::Index>(rng() % blobs);
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = background ? 8.0 * g(rng) : centers(blob, j) + g(rng);
  }
  return m;
}

// eps drawn from low quantiles of the pairwise-distance distribution.
double quantile_eps(std::mt19937_64& rng, const PointSet& points) {
  std::vector<double> d;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) d.push_back(points.distance(i, j));
  }
  std::sort(d.begin(), d.end());
  const double q = std::uniform_real_distribution<double>(0.005, 0.2)(rng);
  const auto i = static_cast<std::size_t>(q * static_cast<double>(d.size() - 1));
  // Midway to the next distinct distance, so no pair sits on the boundary.
  const auto next = std::upper_bound(d.begin() + static_cast<std::ptrdiff_t>(i), d.end(), d[i]);
  const double eps = next == d.end() ? d[i] * 1.01 : 0.5 * (d[i] + *next);
  return std::max(1e-6, eps);
}

Outcome oracle_reduction() {
  std::mt19937_64 rng(77);
  std::size_t equal = 0, cores_equal = 0, clusters = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20 + rng() % 281;
    const Eigen::Index dim = trial % 2 == 0 ? 2 : 300;
    const bool cosine = rng() % 2 == 0;
    const Eigen::MatrixXd m = random_blobs(rng, n, dim);
    const PointSet points(m, cosine ? DistanceMetric::cosine : DistanceMetric::euclidean);
    RadbscanConfig config;
    config.eps = quantile_eps(rng, points);
    config.min_pts = 1 + rng() % 10;
    const ClusterAssignment a = radbscan(points, RelationGraph(n), config);
    const ClusterAssignment b = dbscan(points, config);
    equal += canonical_labels(a.labels) == canonical_labels(b.labels) && a.cluster_count == b.cluster_count;
    cores_equal += core_points(points, config) == oracle::core_points(m, config.eps, config.min_pts, cosine);
    clusters += b.cluster_count;
  }
  return {equal == 50 && cores_equal == 50,
          fmt("radbscan(empty graph) == dbscan in %zu/50 sets, core points match brute force in %zu/50 "
              "(%zu clusters total)",
              equal, cores_equal, clusters)};
}

// ---- bridge merging --------------------------------------------------------

Outcome bridge_merging() {
  const fixture::Cloud cloud = fixture::make_cloud(fixture::two_blob_spec());
  const PointSet points(cloud.points, DistanceMetric::euclidean);
  RadbscanConfig config;
  config.eps = fixture::kTwoBlobEps;
  config.min_pts = fixture::kTwoBlobMinPts;
  const ClusterAssignment plain = dbscan(points, config);
  const auto graph = RelationGraph::from_edges(points.size(), {{cloud.blob_centers[0], cloud.blob_centers[1]}});
  const ClusterAssignment merged = radbscan(points, graph, config);
  const bool pass = plain.cluster_count == 2 && merged.cluster_count == 1 &&
                    merged.noise_count() <= plain.noise_count();
  return {pass, fmt("dbscan %zu clusters / %zu noise; radbscan with one edge %zu clusters / %zu noise",
                    plain.cluster_count, plain.noise_count(), merged.cluster_count, merged.noise_count())};
}

// ---- eps sweep -------------------------------------------------------------

Outcome eps_sweep() {
  const auto start = Clock::now();
  const fixture::Cloud cloud = fixture::bridged_topics();
  const PointSet points(cloud.points, DistanceMetric::euclidean);
  const Partition truth = Partition::from_strings(cloud.labels);
  std::size_t stable = 0, nmi_wins = 0;
  std::size_t lo = SIZE_MAX, hi = 0;
  std::string counts;
  for (const double eps : fixture::bridged_topics_sweep()) {
    RadbscanConfig config;
    config.eps = eps;
    config.min_pts = fixture::kBridgedMinPts;
    const ClusterAssignment d = dbscan(points, config);
    const ClusterAssignment r = radbscan(points, cloud.graph, config);
    stable += r.cluster_count + 1 >= 5 && r.cluster_count <= 6;
    lo = std::min(lo, d.cluster_count);
    hi = std::max(hi, d.cluster_count);
    nmi_wins += evaluate(r.labels, truth).nmi >= evaluate(d.labels, truth).nmi;
    counts += fmt(" %zu/%zu", d.cluster_count, r.cluster_count);
  }
  const double elapsed = seconds_since(start);
  const bool pass = stable >= 8 && hi - lo >= 3 && nmi_wins >= 8 && elapsed < 120.0;
  return {pass, fmt("radbscan within 5+-1 at %zu/10 steps, dbscan range %zu..%zu, radbscan NMI >= dbscan at "
                    "%zu/10; dbscan/radbscan counts:%s; %.2f s",
                    stable, lo, hi, nmi_wins, counts.c_str(), elapsed)};
}

// ---- metrics ---------------------------------------------------------------

Outcome metrics_oracle() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<std::int64_t> a(n), b(n);
    const std::size_t ka = 1 + rng() % 12, kb = 1 + rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<std::int64_t>(rng() % ka);
      b[i] = rng() % 3 == 0 ? a[i] : static_cast<std::int64_t>(rng() % kb);
    }
    const PairCounts c = pair_counts(Partition{a}, Partition{b});
    const oracle::Pairs o = oracle::enumerate_pairs(a, b);
    if (c.true_positive != o.tp || c.false_positive != o.fp || c.false_negative != o.fn || c.true_negative != o.tn) {
      worst = INFINITY;
    }
    worst = std::max({worst, std::abs(nmi(Partition{a}, Partition{b}) - oracle::nmi(a, b)),
                      std::abs(rand_index(c) - oracle::rand_index(o)), std::abs(jaccard(c) - oracle::jaccard(o)),
                      std::abs(fmi(c) - oracle::fmi(o)),
                      std::abs(precision_purity(Partition{a}, Partition{b}) - oracle::purity(a, b))});
  }
  bool identical_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::int64_t> a(2 + rng() % 199);
    for (auto& l : a) l = static_cast<std::int64_t>(rng() % 7);
    const MetricReport r = evaluate(a, Partition{a});
    identical_ok = identical_ok && r.nmi == 1.0 && r.ri == 1.0 && r.jc == 1.0 && r.fmi == 1.0 && r.precision == 1.0;
  }
  return {worst <= 1e-12 && identical_ok,
          fmt("max deviation from brute force %.2e over 100 pairs (limit 1e-12); identical partitions score 1: %s",
              worst, identical_ok ? "yes" : "no")};
}

// ---- embedding trend and keywords -------------------------------------------

struct TrendData {
  SyntheticCorpus synthetic;
  Corpus corpus;
  Partition truth;
  CorpusEmbedding panm;
  CorpusEmbedding swa;
  double train_seconds = 0.0;
};

TrendData build_trend() {
  TrendData t;
  const SyntheticCorpusSpec cs = fixture::trend_corpus_spec();
  t.synthetic = generate_synthetic_corpus(cs);
  t.corpus = make_corpus(t.synthetic.docs, StopFilterConfig::keep_all());
  const EmbeddingTable table =
      generate_synthetic_embeddings(cs, fixture::trend_embedding_spec()).restricted_to(t.corpus.vocab, false);
  std::vector<std::string> labels;
  for (const Document& d : t.corpus.docs) labels.push_back(d.label.value_or(kNoiseTruthLabel));
  t.truth = Partition::from_strings(labels);
  const auto start = Clock::now();
  const TrainResult trained = train(t.corpus, table, TrainConfig{});
  t.train_seconds = seconds_since(start);
  t.panm = embed_corpus(t.corpus, table, trained.params);
  t.swa = baseline_swa(t.corpus, table);
  return t;
}

constexpr std::size_t kKmeansRestarts = 10;

Outcome embedding_trend(const TrendData& t) {
  const KMeansResult panm = kmeans(t.panm.matrix.values, 5, 1, kKmeansRestarts);
  const KMeansResult swa = kmeans(t.swa.matrix.values, 5, 1, kKmeansRestarts);
  const double nmi_panm = evaluate(panm.assignment.labels, t.truth).nmi;
  const double nmi_swa = evaluate(swa.assignment.labels, t.truth).nmi;
  std::vector<std::int64_t> shuffled = panm.assignment.labels;
  std::mt19937_64 rng(13);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const double nmi_shuffled = evaluate(shuffled, t.truth).nmi;
  const bool pass = t.corpus.size() == 500 && nmi_panm >= nmi_swa && nmi_panm >= nmi_shuffled + 0.2 &&
                    nmi_swa >= nmi_shuffled + 0.2 && t.train_seconds < 300.0;
  return {pass, fmt("K-means NMI panm %.4f, swa %.4f, shuffled %.4f on %zu docs; training %.2f s (limit 300 s)",
                    nmi_panm, nmi_swa, nmi_shuffled, t.corpus.size(), t.train_seconds)};
}

Outcome keyword_planting(const TrendData& t) {
  const KMeansResult km = kmeans(t.panm.matrix.values, 5, 1, kKmeansRestarts);
  const KeywordReport report = cluster_keywords(km.assignment.labels, t.panm.attention, t.corpus.vocab, 3);
  std::map<std::string, std::size_t> topic_index;
  for (std::size_t k = 0; k < t.synthetic.planted_vocab.size(); ++k) topic_index[topic_label(k)] = k;

  std::size_t matched = 0, hits = 0;
  std::string tops;
  for (const ClusterKeywords& c : report) {
    std::map<std::string, std::size_t> votes;
    for (std::size_t i = 0; i < t.corpus.size(); ++i) {
      if (km.assignment.labels[i] == c.cluster) ++votes[t.corpus.docs[i].label.value_or(kNoiseTruthLabel)];
    }
    const auto majority =
        std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    const auto topic = topic_index.find(majority->first);
    if (topic == topic_index.end() || c.keywords.empty()) continue;
    ++matched;
    const auto& planted = t.synthetic.planted_vocab[topic->second];
    const bool hit = std::find(planted.begin(), planted.end(), c.keywords[0].word) != planted.end();
    hits += hit;
    tops += " " + c.keywords[0].word + (hit ? "" : "(miss)");
  }
  return {hits >= 4, fmt("top-1 keyword planted in %zu of %zu matched clusters (need 4):%s", hits, matched,
                         tops.c_str())};
}

// ---- determinism -----------------------------------------------------------

int cli(std::vector<std::string> args, std::string& errors) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  errors += err.str();
  return code;
}

std::map<std::string, std::string> pipeline_run(std::string& errors) {
  TempDir dir;
  const auto f = [&](const char* name) { return dir.file(name); };
  write_text_file(f("spec.json"),
                  R"({"corpus": {"forward_intra": 0.01, "seed": 7}, "embeddings": {"dim": 32, "seed": 7}})");
  int code = cli({"gen", "--spec", f("spec.json"), "--out", dir.path().string()}, errors);
  code |= cli({"train", "--corpus", f("corpus.jsonl"), "--embeddings", f("embeddings.txt"), "--checkpoint",
               f("model.ckpt"), "--seed", "5"},
              errors);
  code |= cli({"embed", "--corpus", f("corpus.jsonl"), "--embeddings", f("embeddings.txt"), "--checkpoint",
               f("model.ckpt"), "--out", f("matrix.csv"), "--attention", f("attention.jsonl")},
              errors);
  code |= cli({"cluster", "--matrix", f("matrix.csv"), "--edges", f("edges.csv"), "--eps", "0.1", "--out",
               f("assignment.csv")},
              errors);
  code |= cli({"eval", "--assignment", f("assignment.csv"), "--truth", f("truth.csv"), "--out", f("report.txt"),
               "--json", f("report.json")},
              errors);
  std::map<std::string, std::string> files;
  if (code != 0) return files;
  for (const char* name : {"model.ckpt", "matrix.csv", "assignment.csv", "report.txt", "report.json"}) {
    files[name] = read_text_file(f(name));
  }
  return files;
}

Outcome determinism() {
  std::string errors;
  const auto first = pipeline_run(errors);
  const auto second = pipeline_run(errors);
  if (first.empty() || second.empty()) return {false, "pipeline failed: " + errors};
  std::string differing;
  for (const auto& [name, bytes] : first) {
    if (second.at(name) != bytes) differing += " " + name;
  }
  return {differing.empty(), differing.empty() ? fmt("checkpoint, matrix, assignment and reports identical across "
                                                     "two runs (%zu files)",
                                                     first.size())
                                               : "differing:" + differing};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %-20s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  };

  report("gradient-check", gradient_check);
  report("oracle-reduction", oracle_reduction);
  report("bridge-merging", bridge_merging);
  report("eps-sweep", eps_sweep);
  report("metrics-oracle", metrics_oracle);
  std::optional<TrendData> trend;
  const auto trend_data = [&]() -> const TrendData& {
    if (!trend) trend = build_trend();
    return *trend;
  };
  report("embedding-trend", [&] { return embedding_trend(trend_data()); });
  report("keyword-planting", [&] { return keyword_planting(trend_data()); });
  report("determinism", determinism);

  std::printf("%d of 8 checks failed\n", failures);
  return failures == 0 ? 0 : 1;
}
