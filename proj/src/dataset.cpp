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

#include "guji/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>

#include <json.hpp>

#include "guji/utf8.hpp"

namespace guji {

std::vector<std::size_t> parse_ratios(std::string_view text) {
  std::vector<std::size_t> ratios;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find_first_of(":,", start);
    const std::string_view part = text.substr(start, colon - start);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw UsageError("bad ratio list \"" + std::string(text) + "\"");
    }
    ratios.push_back(value);
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  return ratios;
}

void validate(const SplitSpec& spec) {
  if (spec.ratios.size() < 2) throw UsageError("a split needs at least two ratios");
  if (std::find(spec.ratios.begin(), spec.ratios.end(), 0u) != spec.ratios.end()) {
    throw UsageError("split ratios must be positive");
  }
}

std::vector<std::size_t> split_sizes(std::size_t n, const std::vector<std::size_t>& ratios) {
  const std::size_t total = std::accumulate(ratios.begin(), ratios.end(), std::size_t{0});
  std::vector<std::size_t> sizes;
  std::size_t cumulative = 0;
  std::size_t prev = 0;
  for (std::size_t r : ratios) {
    cumulative += r;
    // 128-bit product keeps the floor exact for any realistic n.
    const auto bound = static_cast<std::size_t>(
        static_cast<unsigned __int128>(cumulative) * n / total);
    sizes.push_back(bound - prev);
    prev = bound;
  }
  return sizes;
}

std::string_view to_string(SimilarityMetric metric) {
  return metric == SimilarityMetric::lcs ? "lcs" : "dice";
}

SimilarityMetric parse_similarity_metric(std::string_view name) {
  if (name == "lcs") return SimilarityMetric::lcs;
  if (name == "dice") return SimilarityMetric::dice;
  throw UsageError("unknown similarity metric: " + std::string(name));
}

std::size_t lcs_length(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (char32_t ca : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = ca == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

double bigram_dice(const std::u32string& a, const std::u32string& b) {
  if (a.size() < 2 || b.size() < 2) return a == b ? 1.0 : 0.0;
  std::map<std::pair<char32_t, char32_t>, std::size_t> counts;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) ++counts[{a[i], a[i + 1]}];
  std::size_t shared = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    auto it = counts.find({b[i], b[i + 1]});
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - 2);
}

}  // namespace

double pair_similarity(std::string_view acn, std::string_view mcn, SimilarityMetric metric) {
  const std::u32string a = utf8::decode(acn);
  const std::u32string b = utf8::decode(mcn);
  if (a.empty() || b.empty()) throw DataError("similarity of an empty string is undefined");
  if (metric == SimilarityMetric::dice) return bigram_dice(a, b);
  return 2.0 * static_cast<double>(lcs_length(a, b)) / static_cast<double>(a.size() + b.size());
}

FilterResult filter_parallel(const std::vector<ParallelPair>& pairs, double lo, double hi,
                             SimilarityMetric metric) {
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
    throw UsageError("filter bounds must satisfy 0 <= lo <= hi <= 1");
  }
  FilterResult result;
  result.report.lo = lo;
  result.report.hi = hi;
  result.report.metric = metric;
  for (const auto& pair : pairs) {
    const double sim = pair_similarity(pair.acn, pair.mcn, metric);
    if (sim < lo) {
      ++result.report.dropped_low;
    } else if (sim > hi) {
      ++result.report.dropped_high;
    } else {
      ++result.report.kept;
      result.kept.push_back(pair);
    }
  }
  return result;
}

std::vector<ParallelPair> parse_jsonl(std::string_view text) {
  std::vector<ParallelPair> pairs;
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(lineno);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw DataError(where + ": expected a JSON object");
    for (const char* key : {"acn", "mcn"}) {
      if (!obj.contains(key)) throw DataError(where + ": missing key \"" + key + "\"");
      if (!obj[key].is_string()) throw DataError(where + ": \"" + key + "\" must be a string");
    }
    if (obj.size() != 2) throw DataError(where + ": only \"acn\" and \"mcn\" are allowed");
    ParallelPair pair{obj["acn"].get<std::string>(), obj["mcn"].get<std::string>()};
    if (pair.acn.empty() || pair.mcn.empty()) throw DataError(where + ": empty sentence");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ParallelPair> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_jsonl(text);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_jsonl(const std::vector<ParallelPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    nlohmann::ordered_json obj;
    obj["acn"] = p.acn;
    obj["mcn"] = p.mcn;
    out += obj.dump(-1, ' ', false) + "\n";
  }
  return out;
}

void write_jsonl(const std::vector<ParallelPair>& pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << format_jsonl(pairs);
}

}  // namespace guji
