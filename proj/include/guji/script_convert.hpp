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

#include <filesystem>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "guji/corpus.hpp"

namespace guji {

// Character-level simplified/traditional relation.
//
// Built from "traditional TAB simplified" pairs. When several traditional
// forms share one simplified form, s2t keeps the first listed and the
// simplified character is recorded as ambiguous. Invariants: for every
// s2t(s) = t, t2s(t) = s; every simplified character in the range of t2s is
// a fixed point of t2s, so conversion to simplified is idempotent.
class CharMap {
 public:
  CharMap() = default;

  static CharMap parse(std::istream& in);

  const std::unordered_map<char32_t, char32_t>& s2t() const { return s2t_; }
  const std::unordered_map<char32_t, char32_t>& t2s() const { return t2s_; }
  const std::set<char32_t>& ambiguous_s() const { return ambiguous_s_; }

  bool is_ambiguous(char32_t simplified) const { return ambiguous_s_.count(simplified) != 0; }

 private:
  std::unordered_map<char32_t, char32_t> s2t_;
  std::unordered_map<char32_t, char32_t> t2s_;
  std::set<char32_t> ambiguous_s_;
};

CharMap load_charmap(const std::filesystem::path& path);

std::string to_simplified(std::string_view text, const CharMap& map);
std::string to_traditional(std::string_view text, const CharMap& map);

// Converts every document and retags it (and the corpus) with `target`.
Corpus convert_corpus(const Corpus& corpus, const CharMap& map, Script target);

// Document id with its script tag inserted before the extension
// ("a/b.txt" -> "a/b.simplified.txt"); ids already carrying the tag are
// returned unchanged.
std::string tagged_id(std::string_view id, Script script);

// Union of both corpora with ids suffixed by their document script tag,
// tagged mixed. Throws DataError naming the id on collision.
Corpus merge_corpora(const Corpus& a, const Corpus& b);

}  // namespace guji
