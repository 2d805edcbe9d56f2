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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "guji/error.hpp"
#include "guji/lm/io.hpp"
#include "guji/lm/train.hpp"
#include "guji/metrics.hpp"
#include "lm_support.hpp"
#include "oracles.hpp"

using namespace guji;
using namespace guji::lm;
using guji::test::small_config;

namespace {

bool same_params(const Params<double>& a, const Params<double>& b) {
  const auto ta = a.tensors(), tb = b.tensors();
  if (ta.size() != tb.size()) return false;
  for (std::size_t t = 0; t < ta.size(); ++t) {
    if (ta[t].rows != tb[t].rows || ta[t].cols != tb[t].cols) return false;
    if (!std::equal(ta[t].values.begin(), ta[t].values.end(), tb[t].values.begin())) return false;
  }
  return true;
}

std::vector<std::size_t> periodic_stream(std::size_t n, std::size_t vocab, std::size_t first) {
  std::vector<std::size_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = first + (i * 7 + i / 3) % (vocab - first);
  return s;
}

}  // namespace

TEST_CASE("a fresh model predicts the uniform distribution") {
  for (auto obj : {Objective::mlm, Objective::clm}) {
    const auto c = small_config();
    const auto model = ToyLM<double>::initialized(c, obj);
    const auto probs = model.forward(std::vector<std::size_t>{2, 3, 4, 5});
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      for (Eigen::Index j = 0; j < probs.cols(); ++j) CHECK(probs(i, j) == doctest::Approx(1.0 / 11).epsilon(1e-15));
    }
    CHECK(clm_loss(model, {{2, 3, 4, 5, 6}}) == doctest::Approx(std::log(11.0)).epsilon(1e-14));
    Rng rng(1);
    const auto masked = mask_tokens(std::vector<std::size_t>{2, 3, 4, 5}, MaskOptions::from(c), rng);
    CHECK(mlm_loss(model, {masked}) == doctest::Approx(std::log(11.0)).epsilon(1e-14));
  }
}

TEST_CASE("initialization follows the documented scheme") {
  const auto c = small_config();
  const auto model = ToyLM<double>::initialized(c, Objective::clm);
  const auto& p = model.params();
  CHECK(p.w_out.isZero(0));
  CHECK(p.lnf_gain.isOnes(0));
  CHECK(p.blocks[0].b1.isZero(0));
  CHECK(p.tok_emb.cwiseAbs().maxCoeff() <= 0.02);
  CHECK(p.tok_emb.cwiseAbs().maxCoeff() > 0.0);
  const std::size_t d = 8, f = 32, v = 11, t = 8;
  CHECK(p.parameter_count() == v * d + t * d + 2 * (4 * d + 4 * d * d + d * f + f + f * d + d) + 2 * d + d * v);
}

TEST_CASE("forward rows are distributions and match the naive oracle") {
  for (auto obj : {Objective::mlm, Objective::clm}) {
    const auto c = small_config();
    ToyLM<double> model(c, obj);
    guji::test::randomize(model, 3, 0.5);
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const auto ids = guji::test::random_ids(rng, 1 + rng.below(c.context_len), c.vocab_size);
      const auto probs = model.forward(ids);
      const auto oracle = guji::test::naive_forward(model, ids);
      for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        CHECK(std::fabs(probs.row(i).sum() - 1.0) < 1e-6);
        for (Eigen::Index j = 0; j < probs.cols(); ++j) {
          CHECK(std::fabs(probs(i, j) - oracle[std::size_t(i)][std::size_t(j)]) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("clm outputs never depend on later tokens") {
  const auto c = small_config();
  ToyLM<double> model(c, Objective::clm);
  guji::test::randomize(model, 8, 0.5);
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto ids = guji::test::random_ids(rng, c.context_len, c.vocab_size);
    const auto before = model.forward(ids);
    const std::size_t j = 1 + rng.below(ids.size() - 1);
    ids[j] = (ids[j] + 1 + rng.below(c.vocab_size - 1)) % c.vocab_size;
    const auto after = model.forward(ids);
    for (Eigen::Index i = 0; i < Eigen::Index(j); ++i) CHECK(before.row(i) == after.row(i));
  }
  // the mlm model does look ahead
  ToyLM<double> mlm(c, Objective::mlm);
  guji::test::randomize(mlm, 8, 0.5);
  std::vector<std::size_t> ids{2, 3, 4, 5};
  const auto a = mlm.forward(ids);
  ids[3] = 6;
  CHECK(a.row(0) != mlm.forward(ids).row(0));
}

TEST_CASE("hand-set three-token model") {
  LMConfig c = small_config(3, 2, 1, 4);
  c.mask_id = 0;
  c.first_regular_id = 0;
  ToyLM<double> model(c, Objective::clm);
  // all-zero weights leave the residual stream at 0; the final norm then
  // outputs its bias, so logits = lnf_bias * w_out = [0, ln 2, 0]
  model.params().lnf_bias(0) = 1.0;
  model.params().w_out(0, 1) = std::log(2.0);
  const auto probs = model.forward(std::vector<std::size_t>{0, 1, 2});
  CHECK(probs(2, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(probs(2, 1) == doctest::Approx(0.5).epsilon(1e-15));
  // targets 1 then 2: -(ln 1/2 + ln 1/4) / 2
  CHECK(clm_loss(model, {{0, 1, 2}}) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("a model certain of every target has zero loss and perplexity 1") {
  LMConfig c = small_config(5, 2, 1, 4);
  ToyLM<double> model(c, Objective::clm);
  model.params().lnf_bias(0) = 1.0;
  model.params().w_out(0, 3) = 60.0;
  CHECK(clm_loss(model, {{3, 3, 3, 3}}) < 1e-12);
  const std::vector<std::size_t> stream(40, 3);
  CHECK(eval_perplexity(model, std::span<const std::size_t>(stream)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central differences") {
  for (auto obj : {Objective::mlm, Objective::clm}) {
    const auto c = small_config();
    ToyLM<double> model(c, obj);
    guji::test::randomize(model, 5, 0.5);
    Rng rng(1);
    const auto batch = obj == Objective::clm ? guji::test::clm_batch(rng, c, 3, 6) : guji::test::mlm_batch(rng, c, 3, 6);
    const auto r = guji::test::grad_check(model, batch, 1e-4, 1e-8);
    CHECK(r.parameters == model.params().parameter_count());
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("mask_tokens") {
  const auto c = small_config();
  MaskOptions opt = MaskOptions::from(c);
  const std::vector<std::size_t> ids{2, 3, 4, 5, 6, 7, 8, 9};
  Rng a(12), b(12);
  const auto ma = mask_tokens(ids, opt, a);
  const auto mb = mask_tokens(ids, opt, b);
  CHECK(ma.input == mb.input);
  CHECK(ma.targets == mb.targets);

  opt.rate = 0.001;
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = mask_tokens(std::vector<std::size_t>{4, 5}, opt, rng);
    CHECK(!m.targets.empty());
  }
  opt.rate = 0.5;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = mask_tokens(ids, opt, rng);
    REQUIRE(m.targets.size() == m.actions.size());
    for (std::size_t k = 0; k < m.targets.size(); ++k) {
      const auto [pos, original] = m.targets[k];
      CHECK(original == ids[pos]);
      if (m.actions[k] == MaskAction::mask) CHECK(m.input[pos] == c.mask_id);
      if (m.actions[k] == MaskAction::keep) CHECK(m.input[pos] == ids[pos]);
      if (m.actions[k] == MaskAction::random) {
        CHECK(m.input[pos] >= c.first_regular_id);
        CHECK(m.input[pos] < c.vocab_size);
      }
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      bool selected = false;
      for (const auto& [pos, orig] : m.targets) selected = selected || pos == i;
      if (!selected) CHECK(m.input[i] == ids[i]);
    }
  }
  CHECK_THROWS_AS(mask_tokens(std::vector<std::size_t>{}, opt, rng), DataError);
}

TEST_CASE("pure MASK replacement is one setting away") {
  LMConfig c = small_config();
  c.mask_split = {1, 0, 0};
  Rng rng(2);
  const auto m = mask_tokens(std::vector<std::size_t>(200, 4), MaskOptions::from(c), rng);
  for (auto action : m.actions) CHECK(action == MaskAction::mask);
}

TEST_CASE("forward rejects bad input") {
  const auto model = ToyLM<double>::initialized(small_config(), Objective::clm);
  CHECK_THROWS_AS(model.forward(std::vector<std::size_t>{}), DataError);
  CHECK_THROWS_AS(model.forward(std::vector<std::size_t>(9, 2)), DataError);
  CHECK_THROWS_AS(model.forward(std::vector<std::size_t>{2, 11}), DataError);
}

TEST_CASE("config validation") {
  LMConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.embed_dim = 9;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = small_config();
  c.mask_rate = 1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = small_config();
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  CHECK(default_config(Objective::mlm).batch_size == 32);
  CHECK(default_config(Objective::clm).batch_size == 16);
  CHECK(default_config(Objective::clm).learning_rate == 2e-5);
  CHECK(default_config(Objective::clm).epochs == 5);
  CHECK(default_config(Objective::clm).mask_rate == 0.15);
}

TEST_CASE("training is deterministic and lowers the loss") {
  for (auto obj : {Objective::mlm, Objective::clm}) {
    LMConfig c = small_config(12, 8, 1, 8);
    c.learning_rate = 0.05;
    c.epochs = 4;
    c.batch_size = 4;
    const auto stream = periodic_stream(400, c.vocab_size, c.first_regular_id);
    auto m1 = ToyLM<double>::initialized(c, obj);
    auto m2 = ToyLM<double>::initialized(c, obj);
    const auto r1 = train(m1, std::span<const std::size_t>(stream));
    const auto r2 = train(m2, std::span<const std::size_t>(stream));
    CHECK(r1.epoch_losses.size() == c.epochs);
    CHECK(r1.epoch_losses == r2.epoch_losses);
    CHECK(same_params(m1.params(), m2.params()));
    CHECK(r1.epoch_losses.back() < r1.epoch_losses.front());
    CHECK(m1.params().all_finite());
  }
}

TEST_CASE("training needs more than one window of text") {
  auto model = ToyLM<double>::initialized(small_config(), Objective::clm);
  const std::vector<std::size_t> stream(8, 3);
  CHECK_THROWS_AS(train(model, std::span<const std::size_t>(stream)), DataError);
}

TEST_CASE("clm perplexity equals the metric on extracted probabilities") {
  const auto c = small_config();
  ToyLM<double> model(c, Objective::clm);
  guji::test::randomize(model, 21, 0.5);
  Rng rng(2);
  const auto stream = guji::test::random_ids(rng, 50, c.vocab_size);
  const auto probs = next_token_probs(model, std::span<const std::size_t>(stream));
  CHECK(probs.size() == stream.size() - 1);
  CHECK(guji::test::close_rel(eval_perplexity(model, std::span<const std::size_t>(stream)), perplexity(probs), 1e-9));

  const auto fresh = ToyLM<double>::initialized(c, Objective::clm);
  CHECK(eval_perplexity(fresh, std::span<const std::size_t>(stream)) == doctest::Approx(11.0).epsilon(1e-12));
  const auto fresh_mlm = ToyLM<double>::initialized(c, Objective::mlm);
  CHECK(eval_perplexity(fresh_mlm, std::span<const std::size_t>(stream)) == doctest::Approx(11.0).epsilon(1e-12));
}

TEST_CASE("encode_corpus maps unknown characters and skips newlines") {
  const Vocab vocab({"[PAD]", "[UNK]", "天", "地"}, 2);
  const Corpus corpus({Document{"a.txt", "", "天地\n玄天"}});
  CHECK(encode_corpus(corpus, vocab, 1) == std::vector<std::size_t>{2, 3, 1, 2});
}

TEST_CASE("model files round trip exactly") {
  LMConfig c = small_config();
  c.learning_rate = 0.01;
  ToyLM<double> model(c, Objective::mlm);
  guji::test::randomize(model, 2, 0.5);
  const Vocab vocab({"[PAD]", "[MASK]", "甲", "乙", "丙", "丁", "戊", "己", "庚", "辛", "壬"}, 2);
  std::stringstream buf;
  save_model(buf, model, vocab);
  const std::string bytes = buf.str();
  CHECK(bytes.rfind(std::string("GUJILM\0\1", 8), 0) == 0);
  const SavedModel back = load_model(buf);
  CHECK(back.model.objective() == Objective::mlm);
  CHECK(back.model.config().learning_rate == 0.01);
  CHECK(back.model.config().mask_id == 1);
  CHECK(back.vocab.tokens() == vocab.tokens());
  CHECK(back.vocab.reserved() == 2);
  CHECK(same_params(back.model.params(), model.params()));

  std::stringstream again;
  save_model(again, back.model, back.vocab);
  CHECK(again.str() == bytes);

  std::string bad = bytes;
  bad[0] = 'X';
  std::istringstream bad_magic(bad);
  CHECK_THROWS_AS(load_model(bad_magic), DataError);
  std::istringstream truncated(bytes.substr(0, bytes.size() - 5));
  CHECK_THROWS_AS(load_model(truncated), DataError);
}
