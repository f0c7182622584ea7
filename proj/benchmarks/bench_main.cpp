#include <random>

#include <benchmark/benchmark.h>

#include "topicdet/baselines.hpp"
#include "topicdet/clustering.hpp"
#include "topicdet/metrics.hpp"
#include "topicdet/panm.hpp"
#include "topicdet/synthetic.hpp"
#include "topicdet/trainer.hpp"

using namespace topicdet;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

struct CorpusFixture {
  Corpus corpus;
  EmbeddingTable table;

  explicit CorpusFixture(std::size_t dim) {
    SyntheticCorpusSpec cs;
    SyntheticEmbeddingSpec es;
    es.dim = dim;
    corpus = make_corpus(generate_synthetic_corpus(cs).docs, StopFilterConfig::keep_all());
    table = generate_synthetic_embeddings(cs, es).restricted_to(corpus.vocab, false);
  }
};

RelationGraph random_graph(std::size_t n, std::size_t edges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RelationGraph::Edge> e;
  for (std::size_t i = 0; i < edges; ++i) e.emplace_back(rng() % n, rng() % n);
  return RelationGraph::from_edges(n, e);
}

}  // namespace

static void BM_RegionQuery(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointSet points(gaussian(static_cast<Eigen::Index>(n), 96, 1), DistanceMetric::cosine);
  const RelationGraph graph = random_graph(n, n / 10, 2);
  std::size_t p = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(region_query(p, points, graph, 0.3));
    p = (p + 1) % n;
  }
}
BENCHMARK(BM_RegionQuery)->Arg(500)->Arg(2000);

static void BM_Radbscan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointSet points(gaussian(static_cast<Eigen::Index>(n), 2, 3), DistanceMetric::euclidean);
  const RelationGraph graph = random_graph(n, n / 10, 4);
  RadbscanConfig config;
  config.eps = 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(radbscan(points, graph, config));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_Radbscan)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

static void BM_Dbscan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointSet points(gaussian(static_cast<Eigen::Index>(n), 2, 3), DistanceMetric::euclidean);
  RadbscanConfig config;
  config.eps = 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(dbscan(points, config));
}
BENCHMARK(BM_Dbscan)->Arg(1024);

static void BM_EncodeSentence(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  std::vector<std::string> words;
  for (int i = 0; i < 200; ++i) words.push_back("w" + std::to_string(i));
  const EmbeddingTable table(words, gaussian(200, d, 5));
  std::mt19937_64 rng(6);
  const PanmParams params = PanmParams::uniform(d, 3 * d, 3 * d, 0.1, rng);
  const std::vector<std::size_t> rows{3, 17, 42, 99, 150, 7, 64, 128, 11, 190};
  for (auto _ : state) benchmark::DoNotOptimize(encode_sentence(rows, table, params));
}
BENCHMARK(BM_EncodeSentence)->Arg(32)->Arg(100);

static void BM_Gradients(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  std::vector<std::string> words;
  for (int i = 0; i < 200; ++i) words.push_back("w" + std::to_string(i));
  const EmbeddingTable table(words, gaussian(200, d, 7));
  std::mt19937_64 rng(8);
  const PanmParams params = PanmParams::uniform(d, 3 * d, 3 * d, 0.1, rng);
  const std::vector<std::size_t> anchor{3, 17, 42, 99, 150, 7, 64, 128, 11, 190};
  std::vector<std::vector<std::size_t>> negatives;
  for (int m = 0; m < 20; ++m) negatives.push_back({rng() % 200, rng() % 200, rng() % 200, rng() % 200});
  for (auto _ : state) benchmark::DoNotOptimize(compute_gradients(anchor, negatives, table, params));
}
BENCHMARK(BM_Gradients)->Arg(32)->Arg(100);

static void BM_TrainEpoch(benchmark::State& state) {
  const CorpusFixture f(32);
  TrainConfig config;
  config.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(f.corpus, f.table, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.corpus.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

static void BM_KMeans(benchmark::State& state) {
  const Eigen::MatrixXd points = gaussian(500, 96, 9);
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(points, 5, 1));
}
BENCHMARK(BM_KMeans)->Unit(benchmark::kMillisecond);

static void BM_Evaluate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(10);
  std::vector<std::int64_t> predicted(n), truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    predicted[i] = static_cast<std::int64_t>(rng() % 20) - 1;
    truth[i] = static_cast<std::int64_t>(rng() % 10);
  }
  const Partition t{truth};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(predicted, t));
}
BENCHMARK(BM_Evaluate)->Arg(1000)->Arg(100000);
BENCHMARK_MAIN();
