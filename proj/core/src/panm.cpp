#include "topicdet/panm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "topicdet/error.hpp"
#include "topicdet/text_io.hpp"

namespace topicdet {

namespace {

Eigen::VectorXd relu(const Eigen::VectorXd& v) { return v.cwiseMax(0.0); }

// Zeroes entries of `grad` whose pre-activation was not positive.
void relu_backward(Eigen::VectorXd& grad, const Eigen::VectorXd& pre) {
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

// Token position of the extreme value per coordinate; ties go to the lowest
// table row, then the earliest position.
std::vector<std::size_t> extreme_tokens(const Eigen::MatrixXd& vectors,
                                        std::span<const std::size_t> rows, bool want_max) {
  const Eigen::Index n = vectors.rows();
  std::vector<std::size_t> best(static_cast<std::size_t>(vectors.cols()), 0);
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    std::size_t b = 0;
    for (Eigen::Index t = 1; t < n; ++t) {
      const double v = vectors(t, c);
      const double cur = vectors(static_cast<Eigen::Index>(b), c);
      const bool better = want_max ? v > cur : v < cur;
      if (better || (v == cur && rows[static_cast<std::size_t>(t)] < rows[b])) {
        b = static_cast<std::size_t>(t);
      }
    }
    best[static_cast<std::size_t>(c)] = b;
  }
  return best;
}

struct Forward {
  Eigen::MatrixXd words;        // n x d
  Eigen::VectorXd context;      // y
  Eigen::VectorXd projected;    // M y
  SentenceEmbedding sentence;
  Eigen::VectorXd h1, r1, h2, r2, h3, zr;
};

Forward forward(std::span<const std::size_t> rows, const EmbeddingTable& table,
                const PanmParams& params, const PoolingSpec& pooling) {
  if (rows.empty()) fail(ErrorCategory::data, "cannot encode an empty sentence");
  if (table.dim() != params.dim()) {
    fail(ErrorCategory::data, "embedding dimension " + std::to_string(table.dim()) +
                                  " does not match model dimension " +
                                  std::to_string(params.dim()));
  }
  Forward f;
  f.words = gather_rows(table, rows);
  f.context = f.words.colwise().mean().transpose();
  f.projected = params.attention * f.context;
  f.sentence.weights = softmax(f.words * f.projected);
  f.sentence.rows.assign(rows.begin(), rows.end());
  f.sentence.argmax_token = extreme_tokens(f.words, rows, true);
  f.sentence.argmin_token = extreme_tokens(f.words, rows, false);

  const Eigen::Index d = f.words.cols();
  f.sentence.z.resize(3 * d);
  for (std::size_t b = 0; b < 3; ++b) {
    const PoolBranch branch = pooling.branches[b];
    auto block = f.sentence.z.segment(static_cast<Eigen::Index>(b) * d, d);
    if (branch == PoolBranch::mean) {
      block = f.words.transpose() * f.sentence.weights;
    } else {
      block = power_mean(f.words, branch);
    }
  }

  f.h1 = params.layer1.transpose() * f.sentence.z;
  f.r1 = relu(f.h1);
  f.h2 = params.layer2.transpose() * f.r1;
  f.r2 = relu(f.h2);
  f.h3 = params.layer3.transpose() * f.r2;
  f.zr = relu(f.h3);
  return f;
}

// d(x/|x|)/dx applied to an upstream gradient; identity when |x| = 0.
Eigen::VectorXd normalize_backward(const Eigen::VectorXd& x, const Eigen::VectorXd& upstream) {
  const double n = x.norm();
  if (n == 0.0) return upstream;
  const Eigen::VectorXd u = x / n;
  return (upstream - u * u.dot(upstream)) / n;
}

struct LossBackward {
  Eigen::VectorXd grad_z;                 // including the reconstruction path
  std::vector<Eigen::VectorXd> grad_neg;  // per negative (zero when inactive)
};

// Loss plus matrix gradients of the reconstruction layers; returns dL/dz and
// dL/ds_i for the caller to push into the encoders.
LossBackward loss_backward(const Forward& f, std::span<const Eigen::VectorXd> negatives,
                           const PanmParams& params, PanmGradients& out) {
  const Eigen::VectorXd& z = f.sentence.z;
  const Eigen::VectorXd zh = normalized(z);
  const Eigen::VectorXd zrh = normalized(f.zr);
  out.degenerate_norm = z.norm() == 0.0 || f.zr.norm() == 0.0;

  const double base = 1.0 - zh.dot(zrh);
  Eigen::VectorXd g_zrh = Eigen::VectorXd::Zero(zrh.size());
  LossBackward back;
  back.grad_neg.assign(negatives.size(), Eigen::VectorXd::Zero(z.size()));
  out.loss = 0.0;
  out.active_terms = 0;
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const Eigen::VectorXd& s = negatives[i];
    if (s.size() != z.size()) fail(ErrorCategory::data, "negative sample has wrong dimension");
    if (s.norm() == 0.0) out.degenerate_norm = true;
    const Eigen::VectorXd sh = normalized(s);
    const double term = base + zrh.dot(sh);
    if (term > 0.0) {
      out.loss += term;
      ++out.active_terms;
      g_zrh += sh - zh;
      back.grad_neg[i] = normalize_backward(s, zrh);
    }
  }
  const Eigen::VectorXd g_zh = -static_cast<double>(out.active_terms) * zrh;

  Eigen::VectorXd g = normalize_backward(f.zr, g_zrh);
  relu_backward(g, f.h3);
  out.layer3 = f.r2 * g.transpose();
  g = params.layer3 * g;
  relu_backward(g, f.h2);
  out.layer2 = f.r1 * g.transpose();
  g = params.layer2 * g;
  relu_backward(g, f.h1);
  out.layer1 = z * g.transpose();
  back.grad_z = params.layer1 * g + normalize_backward(z, g_zh);
  return back;
}

void accumulate(std::map<std::size_t, Eigen::VectorXd>& words, std::size_t row,
                const Eigen::VectorXd& grad) {
  auto [it, inserted] = words.try_emplace(row, grad);
  if (!inserted) it->second += grad;
}

void accumulate_coord(std::map<std::size_t, Eigen::VectorXd>& words, std::size_t row,
                      Eigen::Index dim, Eigen::Index coord, double value) {
  auto [it, inserted] = words.try_emplace(row, Eigen::VectorXd::Zero(dim));
  it->second[coord] += value;
}

// Routes dL/d(unweighted encoding) of one sentence into its word rows.
void unweighted_word_backward(std::span<const std::size_t> rows, const EmbeddingTable& table,
                              const PoolingSpec& pooling, const Eigen::VectorXd& grad,
                              std::map<std::size_t, Eigen::VectorXd>& words) {
  const Eigen::Index d = table.dim();
  const Eigen::MatrixXd vectors = gather_rows(table, rows);
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t b = 0; b < 3; ++b) {
    const Eigen::VectorXd g = grad.segment(static_cast<Eigen::Index>(b) * d, d);
    switch (pooling.branches[b]) {
      case PoolBranch::mean:
        for (const std::size_t r : rows) accumulate(words, r, g * inv_n);
        break;
      case PoolBranch::max:
      case PoolBranch::min: {
        const auto winners = extreme_tokens(vectors, rows, pooling.branches[b] == PoolBranch::max);
        for (Eigen::Index c = 0; c < d; ++c) {
          accumulate_coord(words, rows[winners[static_cast<std::size_t>(c)]], d, c, g[c]);
        }
        break;
      }
    }
  }
}

// Gradient into M (always) and into the anchor's word rows (optionally).
void encoder_backward(const Forward& f, const Eigen::VectorXd& grad_z, const PanmParams& params,
                      const PoolingSpec& pooling, PanmGradients& out,
                      std::map<std::size_t, Eigen::VectorXd>* words) {
  const Eigen::Index d = f.words.cols();
  const Eigen::Index n = f.words.rows();
  const Eigen::VectorXd& a = f.sentence.weights;
  const Eigen::VectorXd g_mean =
      grad_z.segment(static_cast<Eigen::Index>(pooling.block_of(PoolBranch::mean)) * d, d);

  const Eigen::VectorXd c = f.words * g_mean;             // dL/da_i
  const Eigen::VectorXd g_scores = (a.array() * (c.array() - a.dot(c))).matrix();
  const Eigen::VectorXd pulled = f.words.transpose() * g_scores;  // E^T dL/ds
  out.attention = pulled * f.context.transpose();

  if (words == nullptr) return;
  const Eigen::VectorXd via_context = params.attention.transpose() * pulled / static_cast<double>(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd g = a[t] * g_mean + g_scores[t] * f.projected + via_context;
    accumulate(*words, f.sentence.rows[static_cast<std::size_t>(t)], g);
  }
  for (const PoolBranch branch : {PoolBranch::max, PoolBranch::min}) {
    const Eigen::VectorXd g = grad_z.segment(static_cast<Eigen::Index>(pooling.block_of(branch)) * d, d);
    const auto& winners =
        branch == PoolBranch::max ? f.sentence.argmax_token : f.sentence.argmin_token;
    for (Eigen::Index k = 0; k < d; ++k) {
      accumulate_coord(*words, f.sentence.rows[winners[static_cast<std::size_t>(k)]], d, k, g[k]);
    }
  }
}

}  // namespace

std::string_view to_string(PoolBranch branch) noexcept {
  switch (branch) {
    case PoolBranch::mean:
      return "mean";
    case PoolBranch::max:
      return "max";
    case PoolBranch::min:
      return "min";
  }
  return "?";
}

PoolBranch parse_pool_branch(std::string_view text) {
  if (text == "mean") return PoolBranch::mean;
  if (text == "max") return PoolBranch::max;
  if (text == "min") return PoolBranch::min;
  fail(ErrorCategory::format, "unknown pooling branch '" + std::string(text) + "'");
}

void PoolingSpec::validate() const {
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (branches[i] == branches[j]) fail(ErrorCategory::usage, "pooling branches must be distinct");
    }
  }
}

std::size_t PoolingSpec::block_of(PoolBranch branch) const {
  for (std::size_t b = 0; b < 3; ++b) {
    if (branches[b] == branch) return b;
  }
  fail(ErrorCategory::usage, "pooling spec lacks branch '" + std::string(topicdet::to_string(branch)) + "'");
}

std::string PoolingSpec::to_string() const {
  std::string out;
  for (std::size_t b = 0; b < 3; ++b) {
    if (b) out += ' ';
    out += topicdet::to_string(branches[b]);
  }
  return out;
}

PoolingSpec PoolingSpec::parse(std::string_view text) {
  const auto parts = split_whitespace(text);
  if (parts.size() != 3) fail(ErrorCategory::format, "pooling spec needs exactly three branches");
  PoolingSpec spec;
  for (std::size_t b = 0; b < 3; ++b) spec.branches[b] = parse_pool_branch(parts[b]);
  spec.validate();
  return spec;
}

PanmParams PanmParams::zeros(Eigen::Index dim, Eigen::Index hidden1, Eigen::Index hidden2) {
  PanmParams p;
  p.attention = Eigen::MatrixXd::Zero(dim, dim);
  p.layer1 = Eigen::MatrixXd::Zero(3 * dim, hidden1);
  p.layer2 = Eigen::MatrixXd::Zero(hidden1, hidden2);
  p.layer3 = Eigen::MatrixXd::Zero(hidden2, 3 * dim);
  return p;
}

PanmParams PanmParams::uniform(Eigen::Index dim, Eigen::Index hidden1, Eigen::Index hidden2,
                               double scale, std::mt19937_64& rng) {
  PanmParams p = zeros(dim, hidden1, hidden2);
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (Eigen::MatrixXd* m : {&p.attention, &p.layer1, &p.layer2, &p.layer3}) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      for (Eigen::Index c = 0; c < m->cols(); ++c) (*m)(r, c) = dist(rng);
    }
  }
  return p;
}

void PanmParams::validate() const {
  const Eigen::Index d = attention.rows();
  if (d < 1 || attention.cols() != d) fail(ErrorCategory::data, "attention matrix must be d x d");
  if (layer1.rows() != 3 * d || layer1.cols() < 1) fail(ErrorCategory::data, "layer1 must be 3d x h1");
  if (layer2.rows() != layer1.cols() || layer2.cols() < 1) {
    fail(ErrorCategory::data, "layer2 must be h1 x h2");
  }
  if (layer3.rows() != layer2.cols() || layer3.cols() != 3 * d) {
    fail(ErrorCategory::data, "layer3 must be h2 x 3d");
  }
  if (!attention.allFinite() || !layer1.allFinite() || !layer2.allFinite() || !layer3.allFinite()) {
    fail(ErrorCategory::data, "model parameters contain non-finite values");
  }
}

Eigen::MatrixXd gather_rows(const EmbeddingTable& table, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), table.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = table.row(rows[i]);
  }
  return out;
}

Eigen::VectorXd power_mean(const Eigen::MatrixXd& vectors, PoolBranch branch) {
  if (vectors.rows() == 0) fail(ErrorCategory::data, "power mean of an empty set of vectors");
  switch (branch) {
    case PoolBranch::mean:
      return vectors.colwise().mean().transpose();
    case PoolBranch::max:
      return vectors.colwise().maxCoeff().transpose();
    case PoolBranch::min:
      return vectors.colwise().minCoeff().transpose();
  }
  return {};
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
  const double top = scores.maxCoeff();
  Eigen::VectorXd e = (scores.array() - top).exp().matrix();
  return e / e.sum();
}

Eigen::VectorXd attention_weights(const Eigen::MatrixXd& vectors, const Eigen::MatrixXd& attention) {
  if (vectors.rows() == 0) fail(ErrorCategory::data, "attention over an empty sentence");
  const Eigen::VectorXd context = vectors.colwise().mean().transpose();
  return softmax(vectors * (attention * context));
}

SentenceEmbedding encode_sentence(std::span<const std::size_t> rows, const EmbeddingTable& table,
                                  const PanmParams& params, const PoolingSpec& pooling) {
  return forward(rows, table, params, pooling).sentence;
}

Eigen::VectorXd encode_unweighted(std::span<const std::size_t> rows, const EmbeddingTable& table,
                                  const PoolingSpec& pooling) {
  const Eigen::MatrixXd vectors = gather_rows(table, rows);
  const Eigen::Index d = table.dim();
  Eigen::VectorXd s(3 * d);
  for (std::size_t b = 0; b < 3; ++b) {
    s.segment(static_cast<Eigen::Index>(b) * d, d) = power_mean(vectors, pooling.branches[b]);
  }
  return s;
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& z, const PanmParams& params) {
  if (z.size() != params.layer1.rows()) fail(ErrorCategory::data, "reconstruct: z has wrong dimension");
  const Eigen::VectorXd r1 = relu(params.layer1.transpose() * z);
  const Eigen::VectorXd r2 = relu(params.layer2.transpose() * r1);
  return relu(params.layer3.transpose() * r2);
}

Eigen::VectorXd normalized(const Eigen::VectorXd& v) {
  const double n = v.norm();
  return n == 0.0 ? v : Eigen::VectorXd(v / n);
}

double hinge_loss(const Eigen::VectorXd& z, const Eigen::VectorXd& zr,
                  std::span<const Eigen::VectorXd> negatives) {
  if (z.size() != zr.size()) fail(ErrorCategory::data, "hinge loss: z and zr differ in length");
  const Eigen::VectorXd zh = normalized(z);
  const Eigen::VectorXd zrh = normalized(zr);
  const double base = 1.0 - zh.dot(zrh);
  double loss = 0.0;
  for (const Eigen::VectorXd& s : negatives) {
    if (s.size() != z.size()) fail(ErrorCategory::data, "hinge loss: negative has wrong length");
    loss += std::max(0.0, base + zrh.dot(normalized(s)));
  }
  return loss;
}

std::vector<std::size_t> sample_negative_indices(std::size_t corpus_size, std::size_t anchor,
                                                 std::size_t count, std::mt19937_64& rng) {
  if (corpus_size < 2) fail(ErrorCategory::data, "negative sampling needs at least two documents");
  std::uniform_int_distribution<std::size_t> pick(0, corpus_size - 2);
  std::vector<std::size_t> out(count);
  for (std::size_t& i : out) {
    i = pick(rng);
    if (i >= anchor) ++i;
  }
  return out;
}

std::vector<Eigen::VectorXd> negative_sample(const std::vector<std::vector<std::size_t>>& doc_rows,
                                             std::size_t anchor, const EmbeddingTable& table,
                                             const PoolingSpec& pooling, std::mt19937_64& rng,
                                             std::size_t count) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (const std::size_t i : sample_negative_indices(doc_rows.size(), anchor, count, rng)) {
    out.push_back(encode_unweighted(doc_rows[i], table, pooling));
  }
  return out;
}

PanmGradients PanmGradients::zeros_like(const PanmParams& params) {
  PanmGradients g;
  g.attention = Eigen::MatrixXd::Zero(params.attention.rows(), params.attention.cols());
  g.layer1 = Eigen::MatrixXd::Zero(params.layer1.rows(), params.layer1.cols());
  g.layer2 = Eigen::MatrixXd::Zero(params.layer2.rows(), params.layer2.cols());
  g.layer3 = Eigen::MatrixXd::Zero(params.layer3.rows(), params.layer3.cols());
  return g;
}

PanmGradients compute_gradients(std::span<const std::size_t> anchor_rows,
                                std::span<const Eigen::VectorXd> negatives,
                                const EmbeddingTable& table, const PanmParams& params,
                                const PoolingSpec& pooling) {
  const Forward f = forward(anchor_rows, table, params, pooling);
  PanmGradients out;
  const LossBackward back = loss_backward(f, negatives, params, out);
  encoder_backward(f, back.grad_z, params, pooling, out, nullptr);
  return out;
}

PanmGradients compute_gradients(std::span<const std::size_t> anchor_rows,
                                const std::vector<std::vector<std::size_t>>& negative_rows,
                                const EmbeddingTable& table, const PanmParams& params,
                                const PoolingSpec& pooling, bool word_gradients) {
  std::vector<Eigen::VectorXd> negatives;
  negatives.reserve(negative_rows.size());
  for (const auto& rows : negative_rows) negatives.push_back(encode_unweighted(rows, table, pooling));

  const Forward f = forward(anchor_rows, table, params, pooling);
  PanmGradients out;
  const LossBackward back = loss_backward(f, negatives, params, out);
  std::map<std::size_t, Eigen::VectorXd> words;
  encoder_backward(f, back.grad_z, params, pooling, out, word_gradients ? &words : nullptr);
  if (word_gradients) {
    for (std::size_t i = 0; i < negative_rows.size(); ++i) {
      if (back.grad_neg[i].isZero(0.0)) continue;
      unweighted_word_backward(negative_rows[i], table, pooling, back.grad_neg[i], words);
    }
    out.words.assign(words.begin(), words.end());
  }
  return out;
}

}  // namespace topicdet
