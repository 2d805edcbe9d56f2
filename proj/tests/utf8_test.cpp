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

#include "guji/error.hpp"
#include "guji/rng.hpp"
#include "guji/utf8.hpp"

using namespace guji;

TEST_CASE("utf8 decode and encode round trip") {
  const std::string text = "a\xC3\xA9\xE5\xAD\x90\xF0\x9F\x98\x80";  // a é 子 😀
  const std::u32string cps = utf8::decode(text);
  REQUIRE(cps == std::u32string{U'a', U'é', U'子', U'\U0001F600'});
  CHECK(utf8::encode(cps) == text);
  CHECK(utf8::length(text) == 4);
  CHECK(utf8::single("子") == U'子');
}

TEST_CASE("utf8 rejects malformed input with byte offsets") {
  struct Case {
    std::string bytes;
    std::size_t offset;
  };
  const Case cases[] = {
      {"ab\xC0\x80", 2},          // overlong NUL
      {"\xE0\x80\xAF", 0},        // overlong slash
      {"x\xED\xA0\x80", 1},       // surrogate
      {"\xF4\x90\x80\x80", 0},    // above U+10FFFF
      {"\xE5\xAD", 0},            // truncated
      {"子\x80", 3},              // stray continuation
      {"\xFF", 0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.offset);
    CHECK(utf8::find_invalid(c.bytes) == c.offset);
    try {
      utf8::decode(c.bytes);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("byte offset " + std::to_string(c.offset)) != std::string::npos);
    }
  }
  CHECK(utf8::find_invalid("天地玄黃") == std::string::npos);
}

TEST_CASE("utf8 single requires exactly one code point") {
  CHECK_THROWS_AS(utf8::single(""), DataError);
  CHECK_THROWS_AS(utf8::single("天地"), DataError);
}

TEST_CASE("utf8 encode/decode agree on random code points") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::u32string cps;
    for (int i = 0; i < 20; ++i) {
      char32_t c;
      do {
        c = static_cast<char32_t>(rng.below(0x110000));
      } while (c >= 0xD800 && c <= 0xDFFF);
      cps.push_back(c);
    }
    CHECK(utf8::decode(utf8::encode(cps)) == cps);
  }
}

TEST_CASE("rng engine follows the standard reference sequence") {
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next();
  CHECK(x == 9981545732273789042ull);
}

TEST_CASE("rng derived draws stay in range") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    CHECK(rng.below(7) < 7);
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
