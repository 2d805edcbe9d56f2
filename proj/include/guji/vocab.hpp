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
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "guji/corpus.hpp"

namespace guji {

// Ordered token inventory. Token ids are dense indices; the first
// `reserved()` tokens are special placeholders and the last `added_count()`
// were appended by expansion.
class Vocab {
 public:
  Vocab() = default;
  Vocab(std::vector<std::string> tokens, std::size_t reserved, std::size_t added_count = 0);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t reserved() const { return reserved_; }
  std::size_t added_count() const { return added_count_; }

  std::optional<std::size_t> id(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  const std::string& token(std::size_t id) const { return tokens_.at(id); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t reserved_ = 0;
  std::size_t added_count_ = 0;
};

// Whether a token looks like a special placeholder ("[MASK]", "<unk>").
bool is_special_token(const std::string& token);

// Distinct characters of the corpus excluding '\n', by descending frequency
// then code point. Characters seen fewer than `min_freq` times are dropped.
std::vector<char32_t> extract_chars(const Corpus& corpus, std::size_t min_freq = 1);

// Appends every char not already present, keeping the given order. Existing
// ids never move.
Vocab expand_vocab(const Vocab& base, const std::vector<char32_t>& chars);

// One token per line. The leading run of special tokens becomes reserved().
Vocab read_vocab(const std::filesystem::path& path);
void write_vocab(const Vocab& vocab, const std::filesystem::path& path);

}  // namespace guji
