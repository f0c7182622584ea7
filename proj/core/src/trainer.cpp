#include "topicdet/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), salt};
  return std::mt19937_64(seq);
}

class Adam {
 public:
  Adam(const TrainConfig& config, Eigen::Index rows, Eigen::Index cols)
      : config_(config),
        m_(Eigen::MatrixXd::Zero(rows, cols)),
        v_(Eigen::MatrixXd::Zero(rows, cols)) {}

  void step(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, std::size_t t) {
    const double b1 = config_.adam_beta1;
    const double b2 = config_.adam_beta2;
    m_ = b1 * m_ + (1.0 - b1) * grad;
    v_ = b2 * v_ + (1.0 - b2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    const double lr = config_.learning_rate;
    param.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + config_.adam_epsilon);
  }

  // Row-sparse update; untouched rows keep their moments frozen.
  void step_row(Eigen::MatrixXd& param, Eigen::Index row, const Eigen::VectorXd& grad,
                std::size_t t) {
    const double b1 = config_.adam_beta1;
    const double b2 = config_.adam_beta2;
    m_.row(row) = b1 * m_.row(row) + (1.0 - b1) * grad.transpose();
    v_.row(row) = b2 * v_.row(row) + (1.0 - b2) * grad.cwiseProduct(grad).transpose();
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    param.row(row).array() -= config_.learning_rate * (m_.row(row).array() / c1) /
                              ((v_.row(row).array() / c2).sqrt() + config_.adam_epsilon);
  }

 private:
  const TrainConfig& config_;
  Eigen::MatrixXd m_;
  Eigen::MatrixXd v_;
};

bool params_finite(const PanmParams& p) {
  return p.attention.allFinite() && p.layer1.allFinite() && p.layer2.allFinite() &&
         p.layer3.allFinite();
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) fail(ErrorCategory::usage, "epochs must be >= 1");
  if (negatives < 1) fail(ErrorCategory::usage, "negative sample count must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorCategory::usage, "learning rate must be finite and >= 0");
  }
  if (batch_size < 1) fail(ErrorCategory::usage, "batch size must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    fail(ErrorCategory::usage, "Adam moment constants must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) fail(ErrorCategory::usage, "Adam epsilon must be > 0");
  if (!(init_scale >= 0.0)) fail(ErrorCategory::usage, "init scale must be >= 0");
}

TrainResult train(const Corpus& corpus, const EmbeddingTable& input_table,
                  const TrainConfig& config, const PoolingSpec& pooling) {
  config.validate();
  pooling.validate();
  const std::size_t n = corpus.size();
  if (n < 2) fail(ErrorCategory::data, "training needs at least two documents");

  EmbeddingTable table = input_table;
  const bool tune_words = !table.frozen;
  const Eigen::Index d = table.dim();
  const Eigen::Index h1 = config.hidden1 ? static_cast<Eigen::Index>(config.hidden1) : 3 * d;
  const Eigen::Index h2 = config.hidden2 ? static_cast<Eigen::Index>(config.hidden2) : 3 * d;

  std::vector<std::vector<std::size_t>> doc_rows;
  doc_rows.reserve(n);
  for (const Document& doc : corpus.docs) doc_rows.push_back(lookup_rows(doc, table));

  TrainResult result;
  std::mt19937_64 init_rng = stream(config.seed, 10);
  result.params = PanmParams::uniform(d, h1, h2, config.init_scale, init_rng);

  std::mt19937_64 negative_rng = stream(config.seed, 11);
  std::vector<std::vector<std::size_t>> negative_ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    negative_ids[i] = sample_negative_indices(n, i, config.negatives, negative_rng);
  }

  // Frozen words make every unweighted encoding a constant.
  std::vector<Eigen::VectorXd> cached;
  if (!tune_words) {
    cached.reserve(n);
    for (const auto& rows : doc_rows) cached.push_back(encode_unweighted(rows, table, pooling));
  }

  PanmParams& p = result.params;
  Adam adam_attention(config, p.attention.rows(), p.attention.cols());
  Adam adam_l1(config, p.layer1.rows(), p.layer1.cols());
  Adam adam_l2(config, p.layer2.rows(), p.layer2.cols());
  Adam adam_l3(config, p.layer3.rows(), p.layer3.cols());
  std::optional<Adam> adam_words;
  if (tune_words) adam_words.emplace(config, table.vectors().rows(), table.vectors().cols());

  std::mt19937_64 order_rng = stream(config.seed, 12);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> doc_loss(n, 0.0);
  std::size_t updates = 0;

  PanmGradients batch = PanmGradients::zeros_like(p);
  std::map<std::size_t, Eigen::VectorXd> batch_words;
  std::size_t in_batch = 0;

  const auto apply_batch = [&](std::size_t epoch, std::size_t step) {
    if (in_batch == 0) return;
    const double scale = 1.0 / static_cast<double>(in_batch);
    ++updates;
    adam_attention.step(p.attention, batch.attention * scale, updates);
    adam_l1.step(p.layer1, batch.layer1 * scale, updates);
    adam_l2.step(p.layer2, batch.layer2 * scale, updates);
    adam_l3.step(p.layer3, batch.layer3 * scale, updates);
    if (adam_words) {
      for (const auto& [row, grad] : batch_words) {
        adam_words->step_row(table.mutable_vectors(), static_cast<Eigen::Index>(row), grad * scale,
                             updates);
      }
      batch_words.clear();
    }
    if (!params_finite(p) || (tune_words && !table.vectors().allFinite())) {
      fail(ErrorCategory::training, "training diverged: non-finite parameters after epoch " +
                                        std::to_string(epoch) + " step " + std::to_string(step));
    }
    batch = PanmGradients::zeros_like(p);
    in_batch = 0;
  };

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    for (std::size_t step = 1; step <= n; ++step) {
      const std::size_t anchor = order[step - 1];
      PanmGradients g;
      if (tune_words) {
        std::vector<std::vector<std::size_t>> neg_rows;
        neg_rows.reserve(config.negatives);
        for (const std::size_t j : negative_ids[anchor]) neg_rows.push_back(doc_rows[j]);
        g = compute_gradients(doc_rows[anchor], neg_rows, table, p, pooling, true);
      } else {
        std::vector<Eigen::VectorXd> negs;
        negs.reserve(config.negatives);
        for (const std::size_t j : negative_ids[anchor]) negs.push_back(cached[j]);
        g = compute_gradients(doc_rows[anchor], negs, table, p, pooling);
      }
      if (!std::isfinite(g.loss)) {
        fail(ErrorCategory::training, "training diverged: non-finite loss at epoch " +
                                          std::to_string(epoch) + " step " + std::to_string(step));
      }
      if (g.degenerate_norm) ++result.degenerate_steps;
      doc_loss[anchor] = g.loss;
      result.steps.push_back({epoch, step, g.loss});

      batch.attention += g.attention;
      batch.layer1 += g.layer1;
      batch.layer2 += g.layer2;
      batch.layer3 += g.layer3;
      for (auto& [row, grad] : g.words) {
        auto [it, inserted] = batch_words.try_emplace(row, grad);
        if (!inserted) it->second += grad;
      }
      if (++in_batch == config.batch_size) apply_batch(epoch, step);
    }
    apply_batch(epoch, n);

    double total = 0.0;
    for (const double l : doc_loss) total += l;
    result.epoch_mean_loss.push_back(total / static_cast<double>(n));
  }

  if (tune_words) result.tuned_table = std::move(table);
  return result;
}

std::string loss_trace_csv(const TrainResult& result) {
  std::string out = "epoch,step,loss\n";
  for (const LossRecord& r : result.steps) {
    out += std::to_string(r.epoch) + "," + std::to_string(r.step) + "," + format_double(r.loss) + "\n";
  }
  return out;
}

}  // namespace topicdet
