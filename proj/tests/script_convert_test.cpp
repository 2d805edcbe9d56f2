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

#include <sstream>

#include "guji/corpus.hpp"
#include "guji/error.hpp"
#include "guji/rng.hpp"
#include "guji/script_convert.hpp"
#include "guji/utf8.hpp"
#include "support.hpp"

using namespace guji;

namespace {

CharMap parse_map(const std::string& text) {
  std::istringstream in(text);
  return CharMap::parse(in);
}

const CharMap& bundled() {
  static const CharMap map = load_charmap(guji::test::data_dir() / "charmap.tsv");
  return map;
}

Corpus fixture_corpus() {
  return clean_corpus(load_corpus(guji::test::fixture("corpus"), Script::traditional));
}

}  // namespace

TEST_CASE("charmap first-wins with ambiguity bookkeeping") {
  const CharMap m = parse_map("後\t后\n后\t后\n");
  CHECK(m.s2t().at(U'后') == U'後');
  CHECK(m.ambiguous_s() == std::set<char32_t>{U'后'});
  CHECK(m.t2s().at(U'後') == U'后');
  CHECK(m.t2s().at(U'后') == U'后');
}

TEST_CASE("charmap edge inputs") {
  const CharMap empty = parse_map("");
  CHECK(empty.s2t().empty());
  CHECK(empty.t2s().empty());

  const CharMap once = parse_map("國\t国\n");
  const CharMap twice = parse_map("國\t国\n國\t国\n# comment\n\n");
  CHECK(once.s2t() == twice.s2t());
  CHECK(once.t2s() == twice.t2s());
  CHECK(twice.ambiguous_s().empty());
}

TEST_CASE("charmap errors carry line numbers") {
  auto message = [](const std::string& text) {
    try {
      parse_map(text);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("國\t国\n國国\n").find("line 2") != std::string::npos);
  CHECK(message("國\t国\n學習\t学\n").find("line 2") != std::string::npos);
  CHECK(message("國\t国\t囯\n").find("line 1") != std::string::npos);
  // one traditional form cannot have two simplified forms
  CHECK(message("乾\t干\n乾\t乹\n").find("line 2") != std::string::npos);
}

TEST_CASE("to_simplified and to_traditional examples") {
  const CharMap m = parse_map("後\t后\n后\t后\n");
  CHECK(to_simplified("後世", m) == "后世");
  CHECK(to_simplified("天地", m) == "天地");
  CHECK(to_simplified("", m) == "");
  CHECK(to_traditional("后世", m) == "後世");
  CHECK(to_traditional("天地", m) == "天地");
  CHECK(to_traditional(to_simplified("後", m), m) == "後");
}

TEST_CASE("bundled table invariants") {
  const CharMap& m = bundled();
  CHECK(m.t2s().size() >= 2000);
  for (const auto& [s, t] : m.s2t()) CHECK(m.t2s().at(t) == s);
  for (const auto& [t, s] : m.t2s()) {
    const auto it = m.t2s().find(s);
    if (it != m.t2s().end()) CHECK(it->second == s);
    CHECK(m.s2t().count(s) == 1);
  }
}

TEST_CASE("conversion preserves length and simplification is idempotent") {
  const CharMap& m = bundled();
  std::u32string alphabet;
  for (const auto& [t, s] : m.t2s()) {
    alphabet.push_back(t);
    alphabet.push_back(s);
  }
  alphabet += U"，。甲乙abc";
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::u32string text;
    const auto len = rng.below(40);
    for (std::uint64_t i = 0; i < len; ++i) text.push_back(alphabet[rng.below(alphabet.size())]);
    const std::string raw = utf8::encode(text);
    const std::string simp = to_simplified(raw, m);
    const std::string trad = to_traditional(raw, m);
    CHECK(utf8::length(simp) == text.size());
    CHECK(utf8::length(trad) == text.size());
    CHECK(to_simplified(simp, m) == simp);
  }
}

TEST_CASE("unambiguous characters round trip through the bundled table") {
  const CharMap& m = bundled();
  std::size_t checked = 0;
  for (const auto& [t, s] : m.t2s()) {
    if (m.is_ambiguous(s)) continue;
    CHECK(to_traditional(to_simplified(utf8::encode(t), m), m) == utf8::encode(m.s2t().at(s)));
    if (m.s2t().at(s) == t) ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("tagged ids") {
  CHECK(tagged_id("a/b.txt", Script::simplified) == "a/b.simplified.txt");
  CHECK(tagged_id("a/b.simplified.txt", Script::simplified) == "a/b.simplified.txt");
  CHECK(tagged_id("noext", Script::traditional) == "noext.traditional");
}

TEST_CASE("merge_corpora") {
  const Corpus x = fixture_corpus();
  const Corpus merged_empty = merge_corpora(x, Corpus{});
  CHECK(merged_empty.script() == Script::mixed);
  CHECK(merged_empty.size() == x.size());
  CHECK(merged_empty.total_chars() == x.total_chars());

  const Corpus twin = convert_corpus(x, bundled(), Script::simplified);
  CHECK(twin.script() == Script::simplified);
  CHECK(twin.total_chars() == x.total_chars());
  const Corpus merged = merge_corpora(x, twin);
  CHECK(merged.size() == x.size() + twin.size());
  CHECK(merged.total_chars() == 2 * x.total_chars());
  std::size_t summed = 0;
  for (const auto& [c, n] : corpus_stats(merged)) summed += n;
  CHECK(summed == 2 * x.total_chars());
  for (std::size_t i = 1; i < merged.size(); ++i) {
    CHECK(merged.documents()[i - 1].id < merged.documents()[i].id);
  }
}

TEST_CASE("merge_corpora id collision names the id") {
  const Corpus a({Document{"a.txt", "", "甲", Script::traditional}});
  try {
    merge_corpora(a, a);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("a.traditional.txt") != std::string::npos);
  }
}

TEST_CASE("convert_corpus to simplified changes the fixture text") {
  const Corpus twin = convert_corpus(fixture_corpus(), bundled(), Script::simplified);
  bool found = false;
  for (const auto& doc : twin.documents()) {
    if (doc.text.find("学而时习之") != std::string::npos) found = true;
    CHECK(doc.script == Script::simplified);
  }
  CHECK(found);
}
