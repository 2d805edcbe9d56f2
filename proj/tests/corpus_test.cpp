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

#include <map>
#include <sstream>

#include "guji/corpus.hpp"
#include "guji/error.hpp"
#include "guji/rng.hpp"
#include "guji/utf8.hpp"
#include "support.hpp"

using namespace guji;
using guji::test::TempDir;
using guji::test::write_file;

namespace {

std::map<char32_t, std::size_t> naive_counts(const Corpus& corpus) {
  std::map<char32_t, std::size_t> counts;
  for (const auto& doc : corpus.documents()) {
    for (char32_t c : utf8::decode(doc.text)) counts[c] += 1;
  }
  return counts;
}

Corpus single_doc(const std::string& text) { return Corpus({Document{"a.txt", "a.txt", text}}); }

}  // namespace

TEST_CASE("load_corpus on an empty directory") {
  TempDir dir;
  const Corpus c = load_corpus(dir.path(), Script::unknown);
  CHECK(c.size() == 0);
  CHECK(c.total_chars() == 0);
}

TEST_CASE("load_corpus orders documents by id") {
  TempDir dir;
  write_file(dir / "b.txt", "乙");
  write_file(dir / "a.txt", "甲");
  const Corpus c = load_corpus(dir.path(), Script::traditional);
  REQUIRE(c.size() == 2);
  CHECK(c.documents()[0].id == "a.txt");
  CHECK(c.documents()[1].id == "b.txt");
  CHECK(c.documents()[0].script == Script::traditional);
  CHECK(c.total_chars() == 2);
}

TEST_CASE("load_corpus walks nested trees with relative ids") {
  TempDir dir;
  write_file(dir / "lunyu/xueer.txt", "學而");
  write_file(dir / "lunyu/deep/weizheng.txt", "為政");
  write_file(dir / "daxue.txt", "大學");
  write_file(dir / "notes.md", "ignored");
  const Corpus c = load_corpus(dir.path(), Script::unknown);
  REQUIRE(c.size() == 3);
  CHECK(c.documents()[0].id == "daxue.txt");
  CHECK(c.documents()[1].id == "lunyu/deep/weizheng.txt");
  CHECK(c.documents()[2].id == "lunyu/xueer.txt");
}

TEST_CASE("load_corpus normalizes CRLF and leaves other text alone") {
  TempDir dir;
  write_file(dir / "a.txt", "子曰\r\n學 而\r\n");
  const Corpus c = load_corpus(dir.path(), Script::unknown);
  CHECK(c.documents()[0].text == "子曰\n學 而\n");
}

TEST_CASE("load_corpus reports invalid UTF-8 with path and byte offset") {
  TempDir dir;
  write_file(dir / "bad.txt", "天地\xFF");
  try {
    load_corpus(dir.path(), Script::unknown);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.txt") != std::string::npos);
    CHECK(msg.find("byte offset 6") != std::string::npos);
  }
}

TEST_CASE("load_corpus on a missing root is a data error") {
  TempDir dir;
  CHECK_THROWS_AS(load_corpus(dir / "missing", Script::unknown), DataError);
}

TEST_CASE("Corpus rejects duplicate ids") {
  CHECK_THROWS_AS(Corpus({Document{"a.txt", "", "甲"}, Document{"a.txt", "", "乙"}}), DataError);
}

TEST_CASE("clean_text examples") {
  CHECK(clean_text(std::string("子\0曰", 7)) == "子曰");
  CHECK(clean_text("\xEF\xBB\xBF道可道") == "道可道");
  CHECK(clean_text("天 地\t玄  黃\n") == "天地玄黃\n");
  CHECK(clean_text("漢​王‌‍入�秦") == "漢王入秦");
  CHECK(clean_text("甲　乙 丙") == "甲乙丙");
  CHECK(clean_text("甲͸乙") == "甲乙");  // unassigned
  CHECK(clean_text("甲\x7F乙\x1B") == "甲乙");
  CHECK(clean_text("「子曰」：\n\n") == "「子曰」：\n\n");
  CHECK(clean_text("") == "");
}

TEST_CASE("clean_text is idempotent and never introduces characters") {
  std::u32string alphabet = U"天地玄黃，。\n \t\r\u0007​﻿�　­a1͸\U00020000";
  alphabet.push_back(U'\0');
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::u32string raw;
    const auto len = rng.below(30);
    for (std::uint64_t i = 0; i < len; ++i) raw.push_back(alphabet[rng.below(alphabet.size())]);
    const std::string once = clean_text(utf8::encode(raw));
    CHECK(clean_text(once) == once);
    for (char32_t c : utf8::decode(once)) {
      CHECK(raw.find(c) != std::u32string::npos);
      CHECK((c == U'\n' || c >= 0x20));
    }
  }
}

TEST_CASE("corpus_stats examples") {
  const FrequencyTable t = corpus_stats(single_doc("甲甲乙"));
  REQUIRE(t.size() == 2);
  CHECK(t[0] == std::pair<char32_t, std::size_t>{U'甲', 2});
  CHECK(t[1] == std::pair<char32_t, std::size_t>{U'乙', 1});
  CHECK(corpus_stats(Corpus{}).empty());
}

TEST_CASE("corpus_stats ties break by code point") {
  const FrequencyTable t = corpus_stats(single_doc("丙乙甲"));
  REQUIRE(t.size() == 3);
  CHECK(t[0].first == U'丙');  // U+4E19
  CHECK(t[1].first == U'乙');  // U+4E59
  CHECK(t[2].first == U'甲');  // U+7532
}

TEST_CASE("corpus_stats on the fixture corpus matches a naive counter") {
  const Corpus c = clean_corpus(load_corpus(guji::test::fixture("corpus"), Script::traditional));
  const FrequencyTable t = corpus_stats(c);
  const auto oracle = naive_counts(c);
  CHECK(t.size() == oracle.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(oracle.at(t[i].first) == t[i].second);
    total += t[i].second;
    if (i > 0) {
      CHECK((t[i - 1].second > t[i].second ||
             (t[i - 1].second == t[i].second && t[i - 1].first < t[i].first)));
    }
  }
  CHECK(total == c.total_chars());
  CHECK(c.total_chars() > 200);
}

TEST_CASE("cleaning the fixture removes BOM, zero-width and spaces") {
  const Corpus c = clean_corpus(load_corpus(guji::test::fixture("corpus"), Script::traditional));
  for (const auto& doc : c.documents()) {
    for (char32_t ch : utf8::decode(doc.text)) {
      CHECK(ch != U'﻿');
      CHECK(ch != U'​');
      CHECK(ch != U' ');
      CHECK(ch != U'\t');
      CHECK(ch != U'\r');
    }
  }
  const auto& shiji = c.documents()[1];
  CHECK(shiji.id == "daojia/shiji.txt");
  CHECK(shiji.text == "漢王入秦，秦王子嬰降。項羽引兵西屠咸陽。\n");
}

TEST_CASE("write_stats_tsv escapes newlines") {
  std::ostringstream out;
  write_stats_tsv(corpus_stats(single_doc("甲\n甲")), out);
  CHECK(out.str() == "甲\t2\n\\n\t1\n");
}

TEST_CASE("write_corpus then load_corpus is identity") {
  TempDir dir;
  const Corpus c = clean_corpus(load_corpus(guji::test::fixture("corpus"), Script::traditional));
  write_corpus(c, dir / "out");
  const Corpus back = load_corpus(dir / "out", Script::traditional);
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.documents()[i].id == c.documents()[i].id);
    CHECK(back.documents()[i].text == c.documents()[i].text);
  }
}

TEST_CASE("script names parse") {
  CHECK(parse_script("simplified") == Script::simplified);
  CHECK(parse_script("t") == Script::traditional);
  CHECK(to_string(Script::mixed) == "mixed");
  CHECK_THROWS(parse_script("klingon"));
}
