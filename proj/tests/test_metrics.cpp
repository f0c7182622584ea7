#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "support/oracles.hpp"
#include "topicdet/error.hpp"
#include "topicdet/metrics.hpp"

using namespace topicdet;

namespace {

Partition part(std::vector<std::int64_t> ids) { return Partition{std::move(ids)}; }

std::vector<std::int64_t> random_labels(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::int64_t> out(n);
  for (auto& l : out) l = static_cast<std::int64_t>(rng() % k);
  return out;
}

}  // namespace

TEST(Metrics, FourSampleExample) {
  const Partition pred = part({0, 0, 1, 1});
  const Partition truth = part({0, 0, 0, 1});
  const PairCounts c = pair_counts(pred, truth);
  EXPECT_EQ(c.true_positive, 1u);
  EXPECT_EQ(c.false_positive, 1u);
  EXPECT_EQ(c.false_negative, 2u);
  EXPECT_EQ(c.true_negative, 2u);
  EXPECT_DOUBLE_EQ(rand_index(c), 0.5);
  EXPECT_DOUBLE_EQ(jaccard(c), 0.25);
  EXPECT_NEAR(fmi(c), 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(fmi(c), 0.4082, 1e-4);
  EXPECT_DOUBLE_EQ(precision_purity(pred, truth), 0.75);
  EXPECT_NEAR(nmi(pred, truth), oracle::nmi(pred.ids, truth.ids), 1e-12);
  EXPECT_NEAR(nmi(pred, truth), 0.3437, 1e-4);
}

TEST(Metrics, IdenticalPartitions) {
  const Partition p = part({3, 3, 1, 7, 7, 7});
  const PairCounts c = pair_counts(p, p);
  EXPECT_DOUBLE_EQ(nmi(p, p), 1.0);
  EXPECT_DOUBLE_EQ(rand_index(c), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(c), 1.0);
  EXPECT_DOUBLE_EQ(fmi(c), 1.0);
  EXPECT_DOUBLE_EQ(precision_purity(p, p), 1.0);
}

TEST(Metrics, DegenerateCases) {
  const Partition one = part({0, 0, 0});
  EXPECT_DOUBLE_EQ(nmi(one, one), 1.0);
  const Partition singles = part({0, 1, 2});
  EXPECT_DOUBLE_EQ(nmi(one, singles), 0.0);
  const PairCounts c = pair_counts(singles, singles);
  EXPECT_EQ(c.true_positive + c.false_positive + c.false_negative, 0u);
  EXPECT_DOUBLE_EQ(fmi(c), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(c), 1.0);
  const PairCounts none = pair_counts(part({0, 0, 1, 1}), part({0, 1, 0, 1}));
  EXPECT_EQ(none.true_positive, 0u);
  EXPECT_DOUBLE_EQ(fmi(none), 0.0);
  EXPECT_DOUBLE_EQ(rand_index(pair_counts(part({5}), part({2}))), 1.0);
}

TEST(Metrics, IndependentPartitionsGiveZeroNmi) {
  // Every predicted cluster holds each true class equally often.
  const Partition pred = part({0, 0, 1, 1, 0, 0, 1, 1});
  const Partition truth = part({0, 1, 0, 1, 0, 1, 0, 1});
  EXPECT_NEAR(nmi(pred, truth), 0.0, 1e-15);
}

TEST(Metrics, SymmetryAndRelabeling) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    const auto a = random_labels(rng, n, 1 + rng() % 6);
    const auto b = random_labels(rng, n, 1 + rng() % 6);
    EXPECT_NEAR(nmi(part(a), part(b)), nmi(part(b), part(a)), 1e-12);
    const PairCounts ab = pair_counts(part(a), part(b));
    const PairCounts ba = pair_counts(part(b), part(a));
    EXPECT_EQ(ab.true_positive, ba.true_positive);
    EXPECT_EQ(ab.false_positive, ba.false_negative);
    EXPECT_EQ(ab.total(), n * (n - 1) / 2);

    std::vector<std::int64_t> renamed(a);
    for (auto& l : renamed) l = 100 - 7 * l;
    EXPECT_NEAR(nmi(part(renamed), part(b)), nmi(part(a), part(b)), 1e-12);
    EXPECT_EQ(pair_counts(part(renamed), part(b)), ab);
    EXPECT_DOUBLE_EQ(precision_purity(part(renamed), part(b)), precision_purity(part(a), part(b)));
  }
}

TEST(Metrics, MatchBruteForce) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 120;
    const auto a = random_labels(rng, n, 1 + rng() % 10);
    const auto b = random_labels(rng, n, 1 + rng() % 10);
    const PairCounts c = pair_counts(part(a), part(b));
    const oracle::Pairs o = oracle::enumerate_pairs(a, b);
    EXPECT_EQ(c.true_positive, o.tp);
    EXPECT_EQ(c.false_positive, o.fp);
    EXPECT_EQ(c.false_negative, o.fn);
    EXPECT_EQ(c.true_negative, o.tn);
    EXPECT_NEAR(nmi(part(a), part(b)), oracle::nmi(a, b), 1e-12);
    EXPECT_NEAR(rand_index(c), oracle::rand_index(o), 1e-12);
    EXPECT_NEAR(jaccard(c), oracle::jaccard(o), 1e-12);
    EXPECT_NEAR(fmi(c), oracle::fmi(o), 1e-12);
    EXPECT_NEAR(precision_purity(part(a), part(b)), oracle::purity(a, b), 1e-12);
  }
}

TEST(Metrics, NoisePolicies) {
  const std::vector<std::int64_t> pred{0, 0, -1, -1, 1};
  const Partition truth = part({0, 0, 1, 1, 1});

  const EvaluationInput pooled = apply_noise_policy(pred, truth, NoisePolicy::as_one_cluster);
  EXPECT_EQ(pooled.predicted.ids, (std::vector<std::int64_t>{0, 0, -1, -1, 1}));
  EXPECT_EQ(pooled.noise_count, 2u);

  const EvaluationInput singles = apply_noise_policy(pred, truth, NoisePolicy::as_singletons);
  EXPECT_EQ(singles.predicted.ids, (std::vector<std::int64_t>{0, 0, 2, 3, 1}));

  const EvaluationInput dropped = apply_noise_policy(pred, truth, NoisePolicy::exclude);
  EXPECT_EQ(dropped.predicted.ids, (std::vector<std::int64_t>{0, 0, 1}));
  EXPECT_EQ(dropped.truth.ids, (std::vector<std::int64_t>{0, 0, 1}));

  const MetricReport r = evaluate(pred, truth, NoisePolicy::exclude);
  EXPECT_DOUBLE_EQ(r.nmi, 1.0);
  EXPECT_EQ(r.n, 3u);
  EXPECT_EQ(r.n_noise, 2u);
  EXPECT_DOUBLE_EQ(evaluate(pred, truth, NoisePolicy::as_one_cluster).ri,
                   oracle::rand_index(oracle::enumerate_pairs(pred, truth.ids)));

  EXPECT_THROW(evaluate({-1, -1}, part({0, 1}), NoisePolicy::exclude), Error);
  EXPECT_THROW(evaluate({0}, part({0, 1})), Error);
  EXPECT_EQ(parse_noise_policy("exclude"), NoisePolicy::exclude);
  EXPECT_THROW(parse_noise_policy("drop"), Error);
}

TEST(Metrics, PartitionFromStrings) {
  const Partition p = Partition::from_strings({"sports", "music", "sports", "x"});
  EXPECT_EQ(p.ids[0], p.ids[2]);
  EXPECT_NE(p.ids[0], p.ids[1]);
  EXPECT_NE(p.ids[1], p.ids[3]);
}

TEST(Metrics, Reports) {
  const MetricReport r = evaluate({0, 0, 1, 1}, part({0, 0, 0, 1}));
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_DOUBLE_EQ(j.at("ri").get<double>(), 0.5);
  EXPECT_EQ(j.at("n").get<std::size_t>(), 4u);
  EXPECT_EQ(j.at("policy").get<std::string>(), "as-one-cluster");
  EXPECT_NE(report_text(r).find("jc 0.25"), std::string::npos);
}
