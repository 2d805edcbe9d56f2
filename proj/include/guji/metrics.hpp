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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "guji/label_codec.hpp"

namespace guji {

// Precision/recall/F1 with zero-denominator ratios defined as 0.
struct PRF {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  static PRF from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
};

// Micro-averaged over positions: tp where gold == pred != O, fp where
// pred != O and pred != gold, fn where gold != O and pred != gold.
PRF token_prf(std::span<const std::string> gold, std::span<const std::string> pred);

// Exact (start, end, kind) matching.
PRF span_prf(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred);

// exp(-(1/n) * sum(ln p_i)); every p must lie in (0, 1].
double perplexity(std::span<const double> probs);

enum class BleuSmoothing { none, add1 };

// Clipped n-gram statistics for one or more hypothesis/reference pairs.
// Statistics from separate pairs merge by addition.
struct BleuStats {
  static constexpr std::size_t kMaxOrder = 4;
  std::array<std::size_t, kMaxOrder> matches{};
  std::array<std::size_t, kMaxOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& other);
};

BleuStats bleu_stats(std::u32string_view hyp, std::u32string_view ref);

struct BleuReport {
  std::array<double, BleuStats::kMaxOrder> bleu_n{};      // BLEU1..BLEU4
  std::array<double, BleuStats::kMaxOrder> precisions{};  // p1..p4
  double brevity_penalty = 1;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

BleuReport bleu_from_stats(const BleuStats& stats, BleuSmoothing smoothing = BleuSmoothing::none);

// Character-level, single-reference BLEU.
BleuReport bleu(std::string_view hyp, std::string_view ref,
                BleuSmoothing smoothing = BleuSmoothing::none);

// Pools n-gram counts and lengths over all pairs before scoring.
BleuReport corpus_bleu(const std::vector<std::pair<std::string, std::string>>& pairs,
                       BleuSmoothing smoothing = BleuSmoothing::none);

}  // namespace guji
