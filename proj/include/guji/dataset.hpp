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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "guji/error.hpp"
#include "guji/rng.hpp"

namespace guji {

struct SplitSpec {
  std::vector<std::size_t> ratios;  // at least two, all positive
  std::uint64_t seed = 0;
};

// Parses "99:1" / "8:1:1" (commas also accepted).
std::vector<std::size_t> parse_ratios(std::string_view text);

// Partition sizes by the cumulative floor rule: bucket k ends at
// floor(sum(ratios[0..k]) * n / sum(ratios)).
std::vector<std::size_t> split_sizes(std::size_t n, const std::vector<std::size_t>& ratios);

void validate(const SplitSpec& spec);

// Shuffles a copy of `items` with Rng(spec.seed) and cuts it by
// split_sizes. Deterministic across platforms for a given seed.
template <typename T>
std::vector<std::vector<T>> split(std::vector<T> items, const SplitSpec& spec) {
  validate(spec);
  if (items.empty()) throw DataError("cannot split an empty item list");
  if (spec.ratios.size() > items.size()) {
    throw DataError("split into " + std::to_string(spec.ratios.size()) + " buckets needs at least " +
                    std::to_string(spec.ratios.size()) + " items, got " +
                    std::to_string(items.size()));
  }
  Rng rng(spec.seed);
  shuffle(items, rng);
  std::vector<std::vector<T>> parts;
  auto it = items.begin();
  for (std::size_t size : split_sizes(items.size(), spec.ratios)) {
    parts.emplace_back(std::make_move_iterator(it), std::make_move_iterator(it + size));
    it += size;
  }
  return parts;
}

struct ParallelPair {
  std::string acn;  // ancient Chinese
  std::string mcn;  // modern Chinese
};

enum class SimilarityMetric { lcs, dice };

std::string_view to_string(SimilarityMetric metric);
SimilarityMetric parse_similarity_metric(std::string_view name);

// Length of the longest common subsequence of code points.
std::size_t lcs_length(std::u32string_view a, std::u32string_view b);

// lcs:  2 * LCS(a, b) / (|a| + |b|) over characters.
// dice: 2 * |A ∩ B| / (|A| + |B|) over character-bigram multisets; strings
//       too short for bigrams score 1 when equal and 0 otherwise.
// Both inputs must be non-empty.
double pair_similarity(std::string_view acn, std::string_view mcn,
                       SimilarityMetric metric = SimilarityMetric::lcs);

struct FilterReport {
  std::size_t kept = 0;
  std::size_t dropped_low = 0;
  std::size_t dropped_high = 0;
  double lo = 0;
  double hi = 0;
  SimilarityMetric metric = SimilarityMetric::lcs;
};

struct FilterResult {
  std::vector<ParallelPair> kept;
  FilterReport report;
};

// Keeps pairs with lo <= similarity <= hi, preserving input order.
FilterResult filter_parallel(const std::vector<ParallelPair>& pairs, double lo = 0.85,
                             double hi = 0.98, SimilarityMetric metric = SimilarityMetric::lcs);

// {"acn": ..., "mcn": ...} per line; no other keys.
std::vector<ParallelPair> read_jsonl(const std::filesystem::path& path);
std::vector<ParallelPair> parse_jsonl(std::string_view text);
void write_jsonl(const std::vector<ParallelPair>& pairs, const std::filesystem::path& path);
std::string format_jsonl(const std::vector<ParallelPair>& pairs);

}  // namespace guji
