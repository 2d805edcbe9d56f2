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
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace guji {

enum class Script { simplified, traditional, mixed, unknown };

std::string_view to_string(Script script);
Script parse_script(std::string_view name);

struct Document {
  std::string id;           // path relative to the corpus root, '/'-separated
  std::string source_path;  // where the text was read from
  std::string text;         // UTF-8, LF line endings
  Script script = Script::unknown;

  std::size_t char_count() const;
};

// Ordered, immutable set of documents. Construction sorts by id and rejects
// duplicate ids.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents, Script script = Script::unknown);

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  std::size_t total_chars() const { return total_chars_; }
  Script script() const { return script_; }

 private:
  std::vector<Document> documents_;
  std::size_t total_chars_ = 0;
  Script script_ = Script::unknown;
};

// Reads every *.txt file under `root` (recursively). Text is validated as
// UTF-8 and CRLF is normalized to LF; no other cleaning happens here.
Corpus load_corpus(const std::filesystem::path& root, Script script);

// Writes each document to root/<id>, creating directories as needed.
void write_corpus(const Corpus& corpus, const std::filesystem::path& root);

// Removes control (except '\n'), format, unassigned, and U+FFFD characters,
// and deletes every whitespace character other than '\n'. Everything else
// is preserved in order. Idempotent.
std::string clean_text(std::string_view raw);

Corpus clean_corpus(const Corpus& corpus);

using FrequencyTable = std::vector<std::pair<char32_t, std::size_t>>;

// Character counts over all documents (newlines included), sorted by count
// descending, then by code point.
FrequencyTable corpus_stats(const Corpus& corpus);

// One "char TAB count" line per entry. A newline character is written as
// the two-character escape "\n" so every entry stays on one line.
void write_stats_tsv(const FrequencyTable& table, std::ostream& out);

}  // namespace guji
