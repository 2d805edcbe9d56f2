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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "guji/corpus.hpp"
#include "guji/error.hpp"
#include "guji/lm/model.hpp"
#include "guji/metrics.hpp"
#include "guji/rng.hpp"
#include "guji/utf8.hpp"
#include "guji/vocab.hpp"

namespace guji::lm {

// One training/evaluation sequence: model input plus (position, target id)
// pairs the loss is taken over.
struct Example {
  std::vector<std::size_t> input;
  std::vector<std::pair<std::size_t, std::size_t>> targets;
};

enum class MaskAction { mask, random, keep };

struct MaskedSequence {
  std::vector<std::size_t> input;
  std::vector<std::pair<std::size_t, std::size_t>> targets;  // position -> original id
  std::vector<MaskAction> actions;                           // parallel to targets
};

struct MaskOptions {
  double rate = 0.15;
  std::size_t mask_id = 0;
  std::size_t vocab_size = 0;
  std::size_t first_regular_id = 0;
  std::array<double, 3> split{0.8, 0.1, 0.1};

  static MaskOptions from(const LMConfig& c) {
    return {c.mask_rate, c.mask_id, c.vocab_size, c.first_regular_id, c.mask_split};
  }
};

// Selects each position independently with probability `rate` (redrawing
// the whole selection until at least one position is chosen), then replaces
// a selected token by MASK, by a uniform random regular id, or keeps it,
// with the configured shares.
inline MaskedSequence mask_tokens(std::span<const std::size_t> ids, const MaskOptions& opt, Rng& rng) {
  if (ids.empty()) throw DataError("cannot mask an empty sequence");
  if (!(opt.rate > 0 && opt.rate < 1)) throw UsageError("mask rate must lie in (0, 1)");
  if (opt.first_regular_id >= opt.vocab_size) throw UsageError("no regular ids to sample from");
  std::vector<std::size_t> selected;
  while (selected.empty()) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (rng.uniform() < opt.rate) selected.push_back(i);
    }
  }
  const double total = opt.split[0] + opt.split[1] + opt.split[2];
  const double mask_cut = opt.split[0] / total;
  const double random_cut = (opt.split[0] + opt.split[1]) / total;
  MaskedSequence out;
  out.input.assign(ids.begin(), ids.end());
  for (std::size_t pos : selected) {
    const double u = rng.uniform();
    MaskAction action = MaskAction::keep;
    if (u < mask_cut) {
      action = MaskAction::mask;
      out.input[pos] = opt.mask_id;
    } else if (u < random_cut) {
      action = MaskAction::random;
      out.input[pos] = opt.first_regular_id + rng.below(opt.vocab_size - opt.first_regular_id);
    }
    out.targets.emplace_back(pos, ids[pos]);
    out.actions.push_back(action);
  }
  return out;
}

inline Example mlm_example(MaskedSequence masked) {
  return Example{std::move(masked.input), std::move(masked.targets)};
}

// Next-token targets for every position with a successor.
inline Example clm_example(std::span<const std::size_t> ids) {
  Example ex{std::vector<std::size_t>(ids.begin(), ids.end()), {}};
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) ex.targets.emplace_back(i, ids[i + 1]);
  return ex;
}

template <typename Scalar>
struct LossAndGrad {
  Scalar loss = 0;
  std::size_t count = 0;
  Params<Scalar> grad;
};

// Mean cross-entropy -ln p(target) over all targets of the batch.
template <typename Scalar>
Scalar loss(const ToyLM<Scalar>& model, const std::vector<Example>& batch) {
  Scalar total = 0;
  std::size_t count = 0;
  for (const auto& ex : batch) {
    const Matrix<Scalar> probs = model.forward(ex.input);
    for (const auto& [pos, target] : ex.targets) {
      total -= std::log(probs(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(target)));
      ++count;
    }
  }
  if (count == 0) throw DataError("batch has no prediction targets");
  return total / Scalar(count);
}

template <typename Scalar>
LossAndGrad<Scalar> loss_and_grad(const ToyLM<Scalar>& model, const std::vector<Example>& batch) {
  LossAndGrad<Scalar> out;
  out.grad = Params<Scalar>::zeros(model.config());
  for (const auto& ex : batch) out.count += ex.targets.size();
  if (out.count == 0) throw DataError("batch has no prediction targets");
  const Scalar inv = Scalar(1) / Scalar(out.count);
  ForwardCache<Scalar> cache;
  for (const auto& ex : batch) {
    if (ex.targets.empty()) continue;
    model.forward(ex.input, cache);
    // d(-ln softmax)/dlogits = p - onehot, only on target rows
    Matrix<Scalar> dlogits = Matrix<Scalar>::Zero(cache.probs.rows(), cache.probs.cols());
    for (const auto& [pos, target] : ex.targets) {
      const auto r = static_cast<Eigen::Index>(pos);
      const auto t = static_cast<Eigen::Index>(target);
      out.loss -= std::log(cache.probs(r, t));
      dlogits.row(r) += cache.probs.row(r) * inv;
      dlogits(r, t) -= inv;
    }
    model.backward(cache, dlogits, out.grad);
  }
  out.loss /= Scalar(out.count);
  return out;
}

template <typename Scalar>
Scalar clm_loss(const ToyLM<Scalar>& model, const std::vector<std::vector<std::size_t>>& sequences) {
  std::vector<Example> batch;
  for (const auto& s : sequences) batch.push_back(clm_example(s));
  return loss(model, batch);
}

template <typename Scalar>
Scalar mlm_loss(const ToyLM<Scalar>& model, const std::vector<MaskedSequence>& masked) {
  std::vector<Example> batch;
  for (const auto& m : masked) batch.push_back(Example{m.input, m.targets});
  return loss(model, batch);
}

// Plain SGD with momentum: v = mu * v + g; theta -= lr * v.
template <typename Scalar>
class MomentumSgd {
 public:
  MomentumSgd(const LMConfig& config)
      : lr_(Scalar(config.learning_rate)), mu_(Scalar(config.momentum)),
        velocity_(Params<Scalar>::zeros(config)) {}

  void step(Params<Scalar>& params, const Params<Scalar>& grad) {
    auto p = params.tensors();
    auto v = velocity_.tensors();
    const auto g = grad.tensors();
    for (std::size_t t = 0; t < p.size(); ++t) {
      for (std::size_t i = 0; i < p[t].values.size(); ++i) {
        v[t].values[i] = mu_ * v[t].values[i] + g[t].values[i];
        p[t].values[i] -= lr_ * v[t].values[i];
      }
    }
  }

 private:
  Scalar lr_;
  Scalar mu_;
  Params<Scalar> velocity_;
};

// Characters of every document in order, newlines skipped; characters
// missing from the vocabulary map to `unk_id`.
inline std::vector<std::size_t> encode_corpus(const Corpus& corpus, const Vocab& vocab,
                                              std::size_t unk_id) {
  std::vector<std::size_t> ids;
  for (const auto& doc : corpus.documents()) {
    for (char32_t c : utf8::decode(doc.text)) {
      if (c == U'\n') continue;
      ids.push_back(vocab.id(utf8::encode(c)).value_or(unk_id));
    }
  }
  return ids;
}

// Consecutive non-overlapping windows of context_len tokens (a trailing
// window of at least two tokens is kept).
inline std::vector<std::vector<std::size_t>> training_windows(std::span<const std::size_t> stream,
                                                              std::size_t context_len) {
  std::vector<std::vector<std::size_t>> windows;
  for (std::size_t start = 0; start + 1 < stream.size(); start += context_len) {
    const std::size_t end = std::min(stream.size(), start + context_len);
    windows.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(start),
                         stream.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return windows;
}

struct TrainResult {
  std::vector<double> epoch_losses;  // mean batch loss per epoch
};

// Trains in place. Each epoch shuffles the windows with the run's Rng
// (seeded from config.seed), re-masks them for mlm, and applies one
// momentum step per batch. Single-threaded and deterministic.
template <typename Scalar>
TrainResult train(ToyLM<Scalar>& model, std::span<const std::size_t> stream) {
  const LMConfig& config = model.config();
  if (stream.size() < config.context_len + 1) {
    throw DataError("training stream of " + std::to_string(stream.size()) +
                    " tokens is shorter than context_len + 1 = " +
                    std::to_string(config.context_len + 1));
  }
  auto windows = training_windows(stream, config.context_len);
  Rng rng(config.seed ^ 0x9E3779B97F4A7C15ull);
  MomentumSgd<Scalar> optimizer(config);
  const MaskOptions mask = MaskOptions::from(config);
  TrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(windows, rng);
    double epoch_loss = 0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < windows.size(); start += config.batch_size) {
      const std::size_t end = std::min(windows.size(), start + config.batch_size);
      std::vector<Example> batch;
      for (std::size_t w = start; w < end; ++w) {
        batch.push_back(model.objective() == Objective::clm
                            ? clm_example(windows[w])
                            : mlm_example(mask_tokens(windows[w], mask, rng)));
      }
      const auto step = loss_and_grad(model, batch);
      optimizer.step(model.params(), step.grad);
      if (!model.params().all_finite()) {
        throw DataError("training diverged (non-finite parameters) in epoch " + std::to_string(epoch + 1));
      }
      epoch_loss += static_cast<double>(step.loss);
      ++batches;
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(batches));
  }
  return result;
}

// Conditional probabilities the clm model assigns to every token of the
// stream after the first. Windows of context_len overlap by one token so
// each token is predicted exactly once.
template <typename Scalar>
std::vector<double> next_token_probs(const ToyLM<Scalar>& model, std::span<const std::size_t> stream) {
  const std::size_t len = model.config().context_len;
  std::vector<double> probs;
  for (std::size_t start = 0; start + 1 < stream.size(); start += len - 1) {
    const std::size_t end = std::min(stream.size(), start + len);
    const Matrix<Scalar> p = model.forward(stream.subspan(start, end - start));
    for (std::size_t i = start; i + 1 < end; ++i) {
      probs.push_back(static_cast<double>(p(static_cast<Eigen::Index>(i - start),
                                            static_cast<Eigen::Index>(stream[i + 1]))));
    }
  }
  return probs;
}

// Probabilities of the original tokens at masked positions after one
// masking pass with Rng(seed) over non-overlapping windows.
template <typename Scalar>
std::vector<double> masked_token_probs(const ToyLM<Scalar>& model, std::span<const std::size_t> stream,
                                       std::uint64_t seed) {
  Rng rng(seed);
  const MaskOptions mask = MaskOptions::from(model.config());
  std::vector<double> probs;
  for (std::size_t start = 0; start < stream.size(); start += model.config().context_len) {
    const std::size_t end = std::min(stream.size(), start + model.config().context_len);
    const MaskedSequence m = mask_tokens(stream.subspan(start, end - start), mask, rng);
    const Matrix<Scalar> p = model.forward(m.input);
    for (const auto& [pos, target] : m.targets) {
      probs.push_back(static_cast<double>(p(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(target))));
    }
  }
  return probs;
}

// clm: perplexity of next-token predictions. mlm: pseudo-perplexity over a
// fixed-seed (config.seed) masking pass.
template <typename Scalar>
double eval_perplexity(const ToyLM<Scalar>& model, std::span<const std::size_t> stream) {
  if (stream.size() < 2) throw DataError("held-out stream needs at least two tokens");
  const std::vector<double> probs = model.objective() == Objective::clm
                                        ? next_token_probs(model, stream)
                                        : masked_token_probs(model, stream, model.config().seed);
  return perplexity(probs);
}

}  // namespace guji::lm
