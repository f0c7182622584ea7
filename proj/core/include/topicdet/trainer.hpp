#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topicdet/corpus.hpp"
#include "topicdet/embedding_table.hpp"
#include "topicdet/panm.hpp"

namespace topicdet {

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t negatives = 20;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t batch_size = 1;
  // Zero means 3d.
  std::size_t hidden1 = 0;
  std::size_t hidden2 = 0;
  double init_scale = 0.1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct LossRecord {
  std::size_t epoch = 0;  // 1-based
  std::size_t step = 0;   // 1-based within the epoch
  double loss = 0.0;
};

struct TrainResult {
  PanmParams params;
  std::vector<LossRecord> steps;
  std::vector<double> epoch_mean_loss;
  // Steps where a zero-norm vector entered the loss unnormalized.
  std::size_t degenerate_steps = 0;
  // Present when the input table was not frozen.
  std::optional<EmbeddingTable> tuned_table;
};

/// Adam over the four model matrices, one anchor document per step.
///
/// Each document gets a fixed set of `negatives` other documents, drawn once
/// before the first epoch; the visiting order is reshuffled every epoch.
/// Per-epoch mean loss sums per-document losses in document order, so with a
/// zero learning rate every epoch reports the same value.
///
/// Throws a training error when the loss or parameters become non-finite.
TrainResult train(const Corpus& corpus, const EmbeddingTable& table, const TrainConfig& config,
                  const PoolingSpec& pooling = {});

/// CSV "epoch,step,loss", one row per step.
std::string loss_trace_csv(const TrainResult& result);

}  // namespace topicdet
