// Copyright 2026 The Guji Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "guji/error.hpp"
#include "guji/lm/config.hpp"
#include "guji/rng.hpp"

namespace guji::lm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr char kArchitecture[] = "prenorm-residual;sdpa;relu-ffn;final-ln;no-out-bias";

template <typename Scalar>
struct Block {
  RowVector<Scalar> ln1_gain, ln1_bias;
  Matrix<Scalar> wq, wk, wv, wo;  // embed x embed
  RowVector<Scalar> ln2_gain, ln2_bias;
  Matrix<Scalar> w1;  // embed x ffn
  RowVector<Scalar> b1;
  Matrix<Scalar> w2;  // ffn x embed
  RowVector<Scalar> b2;
};

// All trainable tensors. Gradients use the same type.
template <typename Scalar>
struct Params {
  Matrix<Scalar> tok_emb;  // vocab x embed
  Matrix<Scalar> pos_emb;  // context x embed
  std::vector<Block<Scalar>> blocks;
  RowVector<Scalar> lnf_gain, lnf_bias;
  Matrix<Scalar> w_out;  // embed x vocab

  static Params zeros(const LMConfig& c) {
    const auto d = static_cast<Eigen::Index>(c.embed_dim);
    const auto f = static_cast<Eigen::Index>(c.ffn_dim());
    const auto v = static_cast<Eigen::Index>(c.vocab_size);
    Params p;
    p.tok_emb = Matrix<Scalar>::Zero(v, d);
    p.pos_emb = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(c.context_len), d);
    p.blocks.resize(c.n_layers);
    for (auto& b : p.blocks) {
      b.ln1_gain = b.ln1_bias = b.ln2_gain = b.ln2_bias = b.b2 = RowVector<Scalar>::Zero(d);
      b.wq = b.wk = b.wv = b.wo = Matrix<Scalar>::Zero(d, d);
      b.w1 = Matrix<Scalar>::Zero(d, f);
      b.b1 = RowVector<Scalar>::Zero(f);
      b.w2 = Matrix<Scalar>::Zero(f, d);
    }
    p.lnf_gain = p.lnf_bias = RowVector<Scalar>::Zero(d);
    p.w_out = Matrix<Scalar>::Zero(d, v);
    return p;
  }

  // Visits every tensor in declaration order: f(name, tensor).
  template <typename Self, typename F>
  static void visit(Self& self, F&& f) {
    f("tok_emb", self.tok_emb);
    f("pos_emb", self.pos_emb);
    for (std::size_t i = 0; i < self.blocks.size(); ++i) {
      auto& b = self.blocks[i];
      const std::string pre = "block" + std::to_string(i) + ".";
      f(pre + "ln1_gain", b.ln1_gain);
      f(pre + "ln1_bias", b.ln1_bias);
      f(pre + "wq", b.wq);
      f(pre + "wk", b.wk);
      f(pre + "wv", b.wv);
      f(pre + "wo", b.wo);
      f(pre + "ln2_gain", b.ln2_gain);
      f(pre + "ln2_bias", b.ln2_bias);
      f(pre + "w1", b.w1);
      f(pre + "b1", b.b1);
      f(pre + "w2", b.w2);
      f(pre + "b2", b.b2);
    }
    f("lnf_gain", self.lnf_gain);
    f("lnf_bias", self.lnf_bias);
    f("w_out", self.w_out);
  }

  struct View {
    std::string name;
    Eigen::Index rows, cols;
    std::span<Scalar> values;
  };
  struct ConstView {
    std::string name;
    Eigen::Index rows, cols;
    std::span<const Scalar> values;
  };

  std::vector<View> tensors() {
    std::vector<View> out;
    visit(*this, [&](const std::string& name, auto& t) {
      out.push_back({name, t.rows(), t.cols(), {t.data(), static_cast<std::size_t>(t.size())}});
    });
    return out;
  }
  std::vector<ConstView> tensors() const {
    std::vector<ConstView> out;
    visit(*this, [&](const std::string& name, const auto& t) {
      out.push_back({name, t.rows(), t.cols(), {t.data(), static_cast<std::size_t>(t.size())}});
    });
    return out;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) n += t.values.size();
    return n;
  }

  bool all_finite() const {
    for (const auto& t : tensors()) {
      for (Scalar x : t.values) {
        if (!std::isfinite(x)) return false;
      }
    }
    return true;
  }
};

// Cached activations of one forward pass, consumed by backward().
template <typename Scalar>
struct NormCache {
  Matrix<Scalar> xhat;
  Vector<Scalar> inv_std;
};

template <typename Scalar>
struct BlockCache {
  NormCache<Scalar> ln1, ln2;
  Matrix<Scalar> xn1, q, k, v;
  std::vector<Matrix<Scalar>> attn;  // per head, T x T
  Matrix<Scalar> heads;              // concatenated head outputs, T x embed
  Matrix<Scalar> xn2, hidden_pre, hidden;
};

template <typename Scalar>
struct ForwardCache {
  std::vector<std::size_t> ids;
  std::vector<BlockCache<Scalar>> blocks;
  NormCache<Scalar> lnf;
  Matrix<Scalar> xnf;
  Matrix<Scalar> probs;  // T x vocab
};

namespace detail {

inline constexpr double kNormEps = 1e-5;

template <typename Scalar>
Matrix<Scalar> layer_norm(const Matrix<Scalar>& x, const RowVector<Scalar>& gain,
                          const RowVector<Scalar>& bias, NormCache<Scalar>& cache) {
  const Vector<Scalar> mean = x.rowwise().mean();
  const Matrix<Scalar> centered = x.colwise() - mean;
  const Vector<Scalar> var = centered.array().square().rowwise().mean();
  cache.inv_std = (var.array() + Scalar(kNormEps)).rsqrt();
  cache.xhat = centered.array().colwise() * cache.inv_std.array();
  return (cache.xhat.array().rowwise() * gain.array()).rowwise() + bias.array();
}

template <typename Scalar>
Matrix<Scalar> layer_norm_backward(const Matrix<Scalar>& dy, const RowVector<Scalar>& gain,
                                   const NormCache<Scalar>& cache, RowVector<Scalar>& dgain,
                                   RowVector<Scalar>& dbias) {
  dgain += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
  dbias += dy.colwise().sum();
  const Matrix<Scalar> dxhat = dy.array().rowwise() * gain.array();
  const Vector<Scalar> mean_d = dxhat.rowwise().mean();
  const Vector<Scalar> mean_dx = (dxhat.array() * cache.xhat.array()).rowwise().mean();
  Matrix<Scalar> dx = dxhat.colwise() - mean_d;
  dx -= (cache.xhat.array().colwise() * mean_dx.array()).matrix();
  return dx.array().colwise() * cache.inv_std.array();
}

// Row-wise softmax; -inf entries get probability exactly 0.
template <typename Scalar>
Matrix<Scalar> softmax_rows(const Matrix<Scalar>& logits) {
  Matrix<Scalar> out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const Scalar peak = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - peak).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

}  // namespace detail

// Pre-norm transformer over characters: token + learned position
// embeddings, n_layers of [LN -> multi-head attention -> residual,
// LN -> ReLU FFN -> residual], final LN, bias-free output projection.
// The clm objective masks attention to positions <= i.
template <typename Scalar>
class ToyLM {
 public:
  ToyLM(const LMConfig& config, Objective objective)
      : config_(config), objective_(objective), params_(Params<Scalar>::zeros(config)) {
    config_.validate();
  }

  // Weights and embeddings uniform(-0.02, 0.02) from Rng(config.seed); norm
  // gains 1; biases and the output projection 0 (so a fresh model predicts
  // the uniform distribution).
  static ToyLM initialized(const LMConfig& config, Objective objective) {
    ToyLM model(config, objective);
    Rng rng(config.seed);
    auto fill = [&](auto& t) {
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = Scalar(rng.uniform(-0.02, 0.02));
    };
    auto& p = model.params_;
    fill(p.tok_emb);
    fill(p.pos_emb);
    for (auto& b : p.blocks) {
      b.ln1_gain.setOnes();
      b.ln2_gain.setOnes();
      fill(b.wq);
      fill(b.wk);
      fill(b.wv);
      fill(b.wo);
      fill(b.w1);
      fill(b.w2);
    }
    p.lnf_gain.setOnes();
    return model;
  }

  const LMConfig& config() const { return config_; }
  Objective objective() const { return objective_; }
  Params<Scalar>& params() { return params_; }
  const Params<Scalar>& params() const { return params_; }

  // Per-position next/masked-token distributions, one row per input id.
  Matrix<Scalar> forward(std::span<const std::size_t> ids) const {
    ForwardCache<Scalar> cache;
    forward(ids, cache);
    return std::move(cache.probs);
  }

  void forward(std::span<const std::size_t> ids, ForwardCache<Scalar>& cache) const {
    check_ids(ids);
    const auto T = static_cast<Eigen::Index>(ids.size());
    const auto d = static_cast<Eigen::Index>(config_.embed_dim);
    const auto dh = static_cast<Eigen::Index>(config_.head_dim());
    const Scalar scale = Scalar(1) / std::sqrt(Scalar(dh));
    const auto& p = params_;

    cache.ids.assign(ids.begin(), ids.end());
    Matrix<Scalar> x(T, d);
    for (Eigen::Index t = 0; t < T; ++t) {
      x.row(t) = p.tok_emb.row(static_cast<Eigen::Index>(ids[t])) + p.pos_emb.row(t);
    }
    cache.blocks.resize(p.blocks.size());
    for (std::size_t l = 0; l < p.blocks.size(); ++l) {
      const auto& b = p.blocks[l];
      auto& c = cache.blocks[l];
      c.xn1 = detail::layer_norm(x, b.ln1_gain, b.ln1_bias, c.ln1);
      c.q = c.xn1 * b.wq;
      c.k = c.xn1 * b.wk;
      c.v = c.xn1 * b.wv;
      c.heads.resize(T, d);
      c.attn.resize(config_.n_heads);
      for (std::size_t h = 0; h < config_.n_heads; ++h) {
        const auto col = static_cast<Eigen::Index>(h) * dh;
        Matrix<Scalar> scores = (c.q.middleCols(col, dh) * c.k.middleCols(col, dh).transpose()) * scale;
        if (objective_ == Objective::clm) {
          for (Eigen::Index i = 0; i < T; ++i) {
            for (Eigen::Index j = i + 1; j < T; ++j) scores(i, j) = -std::numeric_limits<Scalar>::infinity();
          }
        }
        c.attn[h] = detail::softmax_rows(scores);
        c.heads.middleCols(col, dh) = c.attn[h] * c.v.middleCols(col, dh);
      }
      x += c.heads * b.wo;
      c.xn2 = detail::layer_norm(x, b.ln2_gain, b.ln2_bias, c.ln2);
      c.hidden_pre = (c.xn2 * b.w1).rowwise() + b.b1;
      c.hidden = c.hidden_pre.cwiseMax(Scalar(0));
      x += (c.hidden * b.w2).rowwise() + b.b2;
    }
    cache.xnf = detail::layer_norm(x, p.lnf_gain, p.lnf_bias, cache.lnf);
    cache.probs = detail::softmax_rows<Scalar>(cache.xnf * p.w_out);
  }

  // Accumulates dL/dparams into `grad` given dL/dlogits (T x vocab).
  void backward(const ForwardCache<Scalar>& cache, const Matrix<Scalar>& dlogits,
                Params<Scalar>& grad) const {
    const auto& p = params_;
    const auto T = static_cast<Eigen::Index>(cache.ids.size());
    const auto dh = static_cast<Eigen::Index>(config_.head_dim());
    const Scalar scale = Scalar(1) / std::sqrt(Scalar(dh));

    grad.w_out.noalias() += cache.xnf.transpose() * dlogits;
    Matrix<Scalar> dxnf = dlogits * p.w_out.transpose();
    Matrix<Scalar> dx = detail::layer_norm_backward(dxnf, p.lnf_gain, cache.lnf, grad.lnf_gain, grad.lnf_bias);

    for (std::size_t l = p.blocks.size(); l-- > 0;) {
      const auto& b = p.blocks[l];
      const auto& c = cache.blocks[l];
      auto& g = grad.blocks[l];

      // feed-forward branch
      g.w2.noalias() += c.hidden.transpose() * dx;
      g.b2 += dx.colwise().sum();
      Matrix<Scalar> dhidden = dx * b.w2.transpose();
      dhidden.array() *= (c.hidden_pre.array() > Scalar(0)).template cast<Scalar>();
      g.w1.noalias() += c.xn2.transpose() * dhidden;
      g.b1 += dhidden.colwise().sum();
      const Matrix<Scalar> dxn2 = dhidden * b.w1.transpose();
      dx += detail::layer_norm_backward(dxn2, b.ln2_gain, c.ln2, g.ln2_gain, g.ln2_bias);

      // attention branch
      g.wo.noalias() += c.heads.transpose() * dx;
      const Matrix<Scalar> dheads = dx * b.wo.transpose();
      Matrix<Scalar> dq(T, dheads.cols()), dk(T, dheads.cols()), dv(T, dheads.cols());
      for (std::size_t h = 0; h < config_.n_heads; ++h) {
        const auto col = static_cast<Eigen::Index>(h) * dh;
        const Matrix<Scalar>& a = c.attn[h];
        const auto dout = dheads.middleCols(col, dh);
        dv.middleCols(col, dh) = a.transpose() * dout;
        const Matrix<Scalar> da = dout * c.v.middleCols(col, dh).transpose();
        const Vector<Scalar> row_dot = (da.array() * a.array()).rowwise().sum();
        const Matrix<Scalar> dscores = (a.array() * (da.colwise() - row_dot).array()) * scale;
        dq.middleCols(col, dh) = dscores * c.k.middleCols(col, dh);
        dk.middleCols(col, dh) = dscores.transpose() * c.q.middleCols(col, dh);
      }
      g.wq.noalias() += c.xn1.transpose() * dq;
      g.wk.noalias() += c.xn1.transpose() * dk;
      g.wv.noalias() += c.xn1.transpose() * dv;
      const Matrix<Scalar> dxn1 = dq * b.wq.transpose() + dk * b.wk.transpose() + dv * b.wv.transpose();
      dx += detail::layer_norm_backward(dxn1, b.ln1_gain, c.ln1, g.ln1_gain, g.ln1_bias);
    }
    for (Eigen::Index t = 0; t < T; ++t) {
      grad.tok_emb.row(static_cast<Eigen::Index>(cache.ids[t])) += dx.row(t);
      grad.pos_emb.row(t) += dx.row(t);
    }
  }

 private:
  void check_ids(std::span<const std::size_t> ids) const {
    if (ids.empty()) throw DataError("forward needs at least one token");
    if (ids.size() > config_.context_len) {
      throw DataError("sequence of " + std::to_string(ids.size()) + " tokens exceeds context_len " +
                      std::to_string(config_.context_len));
    }
    for (std::size_t id : ids) {
      if (id >= config_.vocab_size) throw DataError("token id " + std::to_string(id) + " out of range");
    }
  }

  LMConfig config_;
  Objective objective_;
  Params<Scalar> params_;
};

}  // namespace guji::lm
