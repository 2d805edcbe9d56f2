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

#include "guji/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "guji/error.hpp"
#include "guji/utf8.hpp"

namespace guji {

PRF PRF::from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  const auto d = [](std::size_t x) { return static_cast<double>(x); };
  r.precision = tp + fp == 0 ? 0.0 : d(tp) / d(tp + fp);
  r.recall = tp + fn == 0 ? 0.0 : d(tp) / d(tp + fn);
  r.f1 = r.precision + r.recall == 0 ? 0.0
                                     : 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

PRF token_prf(std::span<const std::string> gold, std::span<const std::string> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " labels but prediction has " +
                    std::to_string(pred.size()));
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] != "O";
    const bool p = pred[i] != "O";
    if (gold[i] == pred[i]) {
      tp += g;
    } else {
      fp += p;
      fn += g;
    }
  }
  return PRF::from_counts(tp, fp, fn);
}

PRF span_prf(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred) {
  const std::set<EntitySpan> g(gold.begin(), gold.end());
  const std::set<EntitySpan> p(pred.begin(), pred.end());
  std::size_t tp = 0;
  for (const auto& s : p) tp += g.count(s);
  return PRF::from_counts(tp, p.size() - tp, g.size() - tp);
}

double perplexity(std::span<const double> probs) {
  if (probs.empty()) throw DataError("perplexity of an empty sequence is undefined");
  double sum = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!(p > 0.0 && p <= 1.0)) {
      throw DataError("probability " + std::to_string(p) + " at index " + std::to_string(i) +
                      " is outside (0, 1]");
    }
    sum += std::log(p);
  }
  return std::exp(-sum / static_cast<double>(probs.size()));
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (std::size_t n = 0; n < kMaxOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

BleuStats bleu_stats(std::u32string_view hyp, std::u32string_view ref) {
  BleuStats stats;
  stats.hyp_len = hyp.size();
  stats.ref_len = ref.size();
  for (std::size_t n = 1; n <= BleuStats::kMaxOrder; ++n) {
    std::map<std::u32string_view, std::size_t> ref_counts;
    for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[ref.substr(i, n)];
    std::map<std::u32string_view, std::size_t> hyp_counts;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[hyp.substr(i, n)];
    std::size_t matched = 0;
    std::size_t total = 0;
    for (const auto& [gram, count] : hyp_counts) {
      total += count;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    stats.matches[n - 1] = matched;
    stats.totals[n - 1] = total;
  }
  return stats;
}

BleuReport bleu_from_stats(const BleuStats& stats, BleuSmoothing smoothing) {
  BleuReport report;
  report.hyp_len = stats.hyp_len;
  report.ref_len = stats.ref_len;
  if (stats.hyp_len == 0) return report;
  report.brevity_penalty =
      stats.hyp_len > stats.ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.hyp_len));
  // The geometric mean of p1..pk is taken as (prod matches / prod totals)^(1/k);
  // the counts are small integers, so low orders come out exact.
  double num = 1;
  double den = 1;
  bool zero = false;
  for (std::size_t n = 0; n < BleuStats::kMaxOrder; ++n) {
    double m = static_cast<double>(stats.matches[n]);
    double t = static_cast<double>(stats.totals[n]);
    if (smoothing == BleuSmoothing::add1 && n > 0) {
      m += 1;
      t += 1;
    }
    report.precisions[n] = t == 0 ? 0.0 : m / t;
    zero = zero || m == 0 || t == 0;
    if (zero) {
      report.bleu_n[n] = 0;
      continue;
    }
    num *= m;
    den *= t;
    const double ratio = num / den;
    const double mean = n == 0 ? ratio : n == 1 ? std::sqrt(ratio) : std::pow(ratio, 1.0 / double(n + 1));
    report.bleu_n[n] = report.brevity_penalty * mean;
  }
  return report;
}

BleuReport bleu(std::string_view hyp, std::string_view ref, BleuSmoothing smoothing) {
  const std::u32string h = utf8::decode(hyp);
  const std::u32string r = utf8::decode(ref);
  if (h.empty() || r.empty()) throw DataError("BLEU needs non-empty hypothesis and reference");
  return bleu_from_stats(bleu_stats(h, r), smoothing);
}

BleuReport corpus_bleu(const std::vector<std::pair<std::string, std::string>>& pairs,
                       BleuSmoothing smoothing) {
  if (pairs.empty()) throw DataError("corpus BLEU needs at least one pair");
  BleuStats total;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::u32string h = utf8::decode(pairs[i].first);
    const std::u32string r = utf8::decode(pairs[i].second);
    if (h.empty() || r.empty()) {
      throw DataError("empty hypothesis or reference in pair " + std::to_string(i));
    }
    total += bleu_stats(h, r);
  }
  return bleu_from_stats(total, smoothing);
}

}  // namespace guji
