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
#include <string>
#include <utility>
#include <vector>

#include "guji/label_codec.hpp"
#include "guji/rng.hpp"
#include "guji/utf8.hpp"

namespace guji::test {

inline const std::u32string& han_alphabet() {
  static const std::u32string chars = U"天地玄黃宇宙洪荒日月盈昃辰宿列張子曰學而時習之不亦說乎漢王入秦";
  return chars;
}

inline std::string random_han(Rng& rng, std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(han_alphabet()[rng.below(han_alphabet().size())]);
  return utf8::encode(s);
}

// Text with scheme marks after random characters, never leading or doubled.
inline std::string random_punct_text(Rng& rng, const PunctScheme& scheme) {
  std::vector<char32_t> marks;
  for (const auto& [m, code] : scheme.mark_to_code()) marks.push_back(m);
  const std::size_t len = 1 + rng.below(30);
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i) {
    s.push_back(han_alphabet()[rng.below(han_alphabet().size())]);
    if (rng.uniform() < 0.3) s.push_back(marks[rng.below(marks.size())]);
  }
  return utf8::encode(s);
}

inline std::vector<std::string> random_sentences(Rng& rng) {
  std::vector<std::string> out(1 + rng.below(5));
  for (auto& s : out) s = random_han(rng, 1, 8);
  return out;
}

inline std::vector<TaggedWord> random_words(Rng& rng, const std::vector<std::string>& tags) {
  std::vector<TaggedWord> out(1 + rng.below(8));
  for (auto& w : out) w = {random_han(rng, 1, 4), tags[rng.below(tags.size())]};
  return out;
}

// Sorted, non-overlapping spans over a random text of at most 30 chars.
inline std::pair<std::string, std::vector<EntitySpan>> random_ner(Rng& rng, std::size_t max_spans = 5) {
  static const std::vector<std::string> kinds{"per", "loc", "org", "time"};
  const std::string text = random_han(rng, 1, 30);
  const std::size_t n = utf8::length(text);
  std::vector<EntitySpan> spans;
  std::size_t pos = 0;
  while (pos < n && spans.size() < max_spans) {
    pos += rng.below(4);
    if (pos >= n) break;
    const std::size_t len = 1 + rng.below(std::min<std::size_t>(4, n - pos));
    spans.push_back({pos, pos + len, kinds[rng.below(kinds.size())]});
    pos += len;
  }
  return {text, spans};
}

}  // namespace guji::test
