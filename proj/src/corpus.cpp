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

#include "guji/corpus.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "guji/error.hpp"
#include "guji/utf8.hpp"

namespace guji {

namespace fs = std::filesystem;

std::string_view to_string(Script script) {
  switch (script) {
    case Script::simplified: return "simplified";
    case Script::traditional: return "traditional";
    case Script::mixed: return "mixed";
    case Script::unknown: return "unknown";
  }
  return "unknown";
}

Script parse_script(std::string_view name) {
  if (name == "simplified" || name == "s") return Script::simplified;
  if (name == "traditional" || name == "t") return Script::traditional;
  if (name == "mixed") return Script::mixed;
  if (name == "unknown") return Script::unknown;
  throw UsageError("unknown script tag: " + std::string(name));
}

std::size_t Document::char_count() const { return utf8::length(text); }

Corpus::Corpus(std::vector<Document> documents, Script script)
    : documents_(std::move(documents)), script_(script) {
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (i > 0 && documents_[i].id == documents_[i - 1].id) {
      throw DataError("duplicate document id: " + documents_[i].id);
    }
    total_chars_ += documents_[i].char_count();
  }
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError("cannot read " + path.string());
  return bytes;
}

std::string normalize_newlines(std::string text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    out.push_back(text[i]);
  }
  return out;
}

bool is_invalid(char32_t c) {
  if (c == U'\n') return false;
  if (c == 0xFFFD) return true;
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_CONTROL_CHAR:
    case U_FORMAT_CHAR:
    case U_UNASSIGNED:
      return true;
    default:
      break;
  }
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

}  // namespace

Corpus load_corpus(const fs::path& root, Script script) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw DataError("corpus root is not a directory: " + root.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& path : files) {
    std::string bytes = read_file(path);
    const std::size_t bad = utf8::find_invalid(bytes);
    if (bad != std::string::npos) {
      throw DataError(path.string() + ": invalid UTF-8 at byte offset " + std::to_string(bad));
    }
    docs.push_back(Document{fs::relative(path, root).generic_string(), path.string(),
                            normalize_newlines(std::move(bytes)), script});
  }
  return Corpus(std::move(docs), script);
}

void write_corpus(const Corpus& corpus, const fs::path& root) {
  for (const auto& doc : corpus.documents()) {
    const fs::path target = root / fs::path(doc.id);
    fs::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    out << doc.text;
    if (!out) throw DataError("cannot write " + target.string());
  }
}

std::string clean_text(std::string_view raw) {
  const std::u32string chars = utf8::decode(raw);
  std::u32string kept;
  kept.reserve(chars.size());
  for (char32_t c : chars) {
    if (!is_invalid(c)) kept.push_back(c);
  }
  return utf8::encode(kept);
}

Corpus clean_corpus(const Corpus& corpus) {
  std::vector<Document> docs = corpus.documents();
  for (auto& doc : docs) doc.text = clean_text(doc.text);
  return Corpus(std::move(docs), corpus.script());
}

FrequencyTable corpus_stats(const Corpus& corpus) {
  std::unordered_map<char32_t, std::size_t> counts;
  for (const auto& doc : corpus.documents()) {
    for (char32_t c : utf8::decode(doc.text)) ++counts[c];
  }
  FrequencyTable table(counts.begin(), counts.end());
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return table;
}

void write_stats_tsv(const FrequencyTable& table, std::ostream& out) {
  for (const auto& [c, n] : table) {
    out << (c == U'\n' ? std::string("\\n") : utf8::encode(c)) << '\t' << n << '\n';
  }
}

}  // namespace guji
