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
#include <cmath>
#include <string>
#include <vector>

#include "guji/label_codec.hpp"
#include "guji/metrics.hpp"

// Deliberately naive reference implementations.
namespace guji::test {

inline PRF prf_oracle(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r;
  r.tp = tp, r.fp = fp, r.fn = fn;
  r.precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
  r.recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
  r.f1 = r.precision + r.recall == 0 ? 0.0 : 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

inline PRF token_prf_oracle(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] != "O", p = pred[i] != "O";
    if (g && p && gold[i] == pred[i]) tp++;
    if (p && pred[i] != gold[i]) fp++;
    if (g && pred[i] != gold[i]) fn++;
  }
  return prf_oracle(tp, fp, fn);
}

inline PRF span_prf_oracle(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred) {
  std::size_t tp = 0;
  for (const auto& g : gold) {
    for (const auto& p : pred) {
      if (g.start == p.start && g.end == p.end && g.kind == p.kind) {
        tp++;
        break;
      }
    }
  }
  return prf_oracle(tp, pred.size() - tp, gold.size() - tp);
}

inline std::size_t count_occurrences(const std::u32string& text, const std::u32string& gram) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + gram.size() <= text.size(); ++i) {
    if (text.compare(i, gram.size(), gram) == 0) n++;
  }
  return n;
}

struct BleuOracle {
  std::array<double, 4> bleu{};
  std::array<double, 4> precisions{};
  double bp = 1;
};

// Sentence BLEU by direct enumeration of hypothesis n-grams.
inline BleuOracle bleu_oracle(const std::u32string& hyp, const std::u32string& ref) {
  BleuOracle out;
  double log_sum = 0;
  bool zero = false;
  out.bp = hyp.size() > ref.size() ? 1.0 : std::exp(1.0 - double(ref.size()) / double(hyp.size()));
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t matched = 0, total = 0;
    std::vector<std::u32string> seen;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
      const std::u32string gram = hyp.substr(i, n);
      total++;
      bool already = false;
      for (const auto& s : seen) already = already || s == gram;
      if (already) continue;
      seen.push_back(gram);
      matched += std::min(count_occurrences(hyp, gram), count_occurrences(ref, gram));
    }
    out.precisions[n - 1] = total == 0 ? 0.0 : double(matched) / double(total);
    if (matched == 0) zero = true;
    if (!zero) log_sum += std::log(out.precisions[n - 1]);
    out.bleu[n - 1] = zero ? 0.0 : out.bp * std::exp(log_sum / double(n));
  }
  return out;
}

inline std::size_t lcs_oracle(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
    }
  }
  return dp[a.size()][b.size()];
}

inline bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace guji::test
