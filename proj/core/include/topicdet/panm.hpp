#pragma once

// Attention-weighted power-mean sentence encoder with a three-layer ReLU
// reconstruction head and a max-margin reconstruction loss.
//
// A sentence with word vectors e_1..e_n (rows of E, each in R^d) encodes as
//
//   y   = mean_i e_i
//   s_i = e_i . (M y)            a = softmax(s)
//   z   = [ sum_i a_i e_i ; max_i e_i ; min_i e_i ]        (3d, branch order
//                                                           set by PoolingSpec)
//   zr  = relu(relu(relu(z^T M1) M2) M3)
//
// and is scored against m unweighted negatives (plain mean/max/min) by
//
//   L = sum_i max(0, 1 - <z^, zr^> + <zr^, s_i^>)
//
// where ^ is unit normalization (zero vectors are left as they are).

#include <array>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "topicdet/embedding_table.hpp"

namespace topicdet {

enum class PoolBranch { mean, max, min };

std::string_view to_string(PoolBranch branch) noexcept;
PoolBranch parse_pool_branch(std::string_view text);

/// Order of the three pooled blocks in z. Attention weighting applies to the
/// mean block only; max and min are weight-independent.
struct PoolingSpec {
  std::array<PoolBranch, 3> branches{PoolBranch::mean, PoolBranch::max, PoolBranch::min};

  void validate() const;
  std::size_t block_of(PoolBranch branch) const;  // block b occupies z[b*d, (b+1)*d)
  std::string to_string() const;  // e.g. "mean max min"
  static PoolingSpec parse(std::string_view text);

  friend bool operator==(const PoolingSpec&, const PoolingSpec&) = default;
};

/// Learned matrices. Shapes: attention d x d, layer1 3d x h1, layer2 h1 x h2,
/// layer3 h2 x 3d.
struct PanmParams {
  Eigen::MatrixXd attention;
  Eigen::MatrixXd layer1;
  Eigen::MatrixXd layer2;
  Eigen::MatrixXd layer3;

  Eigen::Index dim() const noexcept { return attention.rows(); }
  Eigen::Index hidden1() const noexcept { return layer1.cols(); }
  Eigen::Index hidden2() const noexcept { return layer2.cols(); }

  static PanmParams zeros(Eigen::Index dim, Eigen::Index hidden1, Eigen::Index hidden2);
  // Entries i.i.d. uniform in [-scale, scale], drawn matrix by matrix in
  // row-major order.
  static PanmParams uniform(Eigen::Index dim, Eigen::Index hidden1, Eigen::Index hidden2,
                            double scale, std::mt19937_64& rng);

  void validate() const;

  friend bool operator==(const PanmParams& a, const PanmParams& b) {
    return a.attention == b.attention && a.layer1 == b.layer1 && a.layer2 == b.layer2 &&
           a.layer3 == b.layer3;
  }
};

/// Stacks table rows (repeats allowed) into an n x d matrix.
Eigen::MatrixXd gather_rows(const EmbeddingTable& table, std::span<const std::size_t> rows);

/// Coordinate-wise mean, max or min over the rows of `vectors`.
Eigen::VectorXd power_mean(const Eigen::MatrixXd& vectors, PoolBranch branch);

/// softmax_i( e_i . (M y) ) with y the arithmetic mean of the rows.
Eigen::VectorXd attention_weights(const Eigen::MatrixXd& vectors, const Eigen::MatrixXd& attention);

/// Numerically stable softmax (max subtracted first).
Eigen::VectorXd softmax(const Eigen::VectorXd& scores);

struct SentenceEmbedding {
  Eigen::VectorXd z;                 // 3d
  Eigen::VectorXd weights;           // one attention weight per token
  std::vector<std::size_t> rows;     // table row of each token, in order
  // Token position supplying each coordinate of the max / min block. Ties go
  // to the lowest table row.
  std::vector<std::size_t> argmax_token;
  std::vector<std::size_t> argmin_token;
};

SentenceEmbedding encode_sentence(std::span<const std::size_t> rows, const EmbeddingTable& table,
                                  const PanmParams& params, const PoolingSpec& pooling = {});

/// Unweighted mean/max/min concatenation; the negative-sample encoding.
Eigen::VectorXd encode_unweighted(std::span<const std::size_t> rows, const EmbeddingTable& table,
                                  const PoolingSpec& pooling = {});

Eigen::VectorXd reconstruct(const Eigen::VectorXd& z, const PanmParams& params);

/// Unit-normalizes unless the norm is zero.
Eigen::VectorXd normalized(const Eigen::VectorXd& v);

double hinge_loss(const Eigen::VectorXd& z, const Eigen::VectorXd& zr,
                  std::span<const Eigen::VectorXd> negatives);

/// Draws `count` documents uniformly with replacement from [0, corpus_size)
/// excluding `anchor`.
std::vector<std::size_t> sample_negative_indices(std::size_t corpus_size, std::size_t anchor,
                                                 std::size_t count, std::mt19937_64& rng);

/// Unweighted encodings of `count` random documents other than `anchor`.
std::vector<Eigen::VectorXd> negative_sample(const std::vector<std::vector<std::size_t>>& doc_rows,
                                             std::size_t anchor, const EmbeddingTable& table,
                                             const PoolingSpec& pooling, std::mt19937_64& rng,
                                             std::size_t count);

struct PanmGradients {
  Eigen::MatrixXd attention;
  Eigen::MatrixXd layer1;
  Eigen::MatrixXd layer2;
  Eigen::MatrixXd layer3;
  // Sparse per-row gradient of the word table, sorted by row; filled only
  // when requested.
  std::vector<std::pair<std::size_t, Eigen::VectorXd>> words;

  double loss = 0.0;
  std::size_t active_terms = 0;
  // Some vector entering the loss had zero norm and was used unnormalized.
  bool degenerate_norm = false;

  static PanmGradients zeros_like(const PanmParams& params);
};

/// Exact gradient of the loss for one anchor sentence and its negatives
/// (given as token-row lists so the word table gradient can be formed).
PanmGradients compute_gradients(std::span<const std::size_t> anchor_rows,
                                const std::vector<std::vector<std::size_t>>& negative_rows,
                                const EmbeddingTable& table, const PanmParams& params,
                                const PoolingSpec& pooling = {}, bool word_gradients = false);

/// Same loss via precomputed negative encodings; no word table gradient.
PanmGradients compute_gradients(std::span<const std::size_t> anchor_rows,
                                std::span<const Eigen::VectorXd> negatives,
                                const EmbeddingTable& table, const PanmParams& params,
                                const PoolingSpec& pooling = {});

}  // namespace topicdet
