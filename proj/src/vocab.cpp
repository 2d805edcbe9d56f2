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

#include "guji/vocab.hpp"

#include <fstream>
#include <iterator>

#include "guji/error.hpp"
#include "guji/utf8.hpp"

namespace guji {

Vocab::Vocab(std::vector<std::string> tokens, std::size_t reserved, std::size_t added_count)
    : tokens_(std::move(tokens)), reserved_(reserved), added_count_(added_count) {
  if (reserved_ > tokens_.size() || added_count_ > tokens_.size() - reserved_) {
    throw DataError("vocab bookkeeping exceeds token count");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], i);
    if (!inserted) {
      throw DataError("duplicate token \"" + tokens_[i] + "\" at ids " +
                      std::to_string(it->second) + " and " + std::to_string(i));
    }
  }
}

std::optional<std::size_t> Vocab::id(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool is_special_token(const std::string& token) {
  if (token.size() < 3) return false;
  return (token.front() == '[' && token.back() == ']') ||
         (token.front() == '<' && token.back() == '>');
}

std::vector<char32_t> extract_chars(const Corpus& corpus, std::size_t min_freq) {
  std::vector<char32_t> chars;
  for (const auto& [c, n] : corpus_stats(corpus)) {
    if (c != U'\n' && n >= min_freq) chars.push_back(c);
  }
  return chars;
}

Vocab expand_vocab(const Vocab& base, const std::vector<char32_t>& chars) {
  std::vector<std::string> tokens = base.tokens();
  std::size_t added = 0;
  std::unordered_map<std::string, bool> fresh;
  for (char32_t c : chars) {
    std::string tok = utf8::encode(c);
    if (base.contains(tok) || !fresh.emplace(tok, true).second) continue;
    tokens.push_back(std::move(tok));
    ++added;
  }
  return Vocab(std::move(tokens), base.reserved(), base.added_count() + added);
}

Vocab read_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read vocab " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (const auto bad = utf8::find_invalid(bytes); bad != std::string::npos) {
    throw DataError(path.string() + ": invalid UTF-8 at byte offset " + std::to_string(bad));
  }
  std::vector<std::string> tokens;
  std::unordered_map<std::string, std::size_t> line_of;
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < bytes.size()) {
    auto end = bytes.find('\n', start);
    if (end == std::string::npos) end = bytes.size();
    std::string tok = bytes.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (!tok.empty() && tok.back() == '\r') tok.pop_back();
    if (tok.empty()) {
      throw DataError(path.string() + ": empty token on line " + std::to_string(lineno));
    }
    if (auto [it, inserted] = line_of.emplace(tok, lineno); !inserted) {
      throw DataError(path.string() + ": duplicate token \"" + tok + "\" on lines " +
                      std::to_string(it->second) + " and " + std::to_string(lineno));
    }
    tokens.push_back(std::move(tok));
  }
  std::size_t reserved = 0;
  while (reserved < tokens.size() && is_special_token(tokens[reserved])) ++reserved;
  return Vocab(std::move(tokens), reserved);
}

void write_vocab(const Vocab& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocab " + path.string());
  for (const auto& tok : vocab.tokens()) out << tok << '\n';
  if (!out) throw DataError("cannot write vocab " + path.string());
}

}  // namespace guji
