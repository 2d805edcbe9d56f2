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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace guji {

enum class Task { ner, seg_pos, sent_break, punct };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

// A character sequence with one label per character. Labels are checked
// against the task grammar on construction:
//   punct       O | B-<ascii letter>
//   sent_break  O | B
//   seg_pos/ner O | B-<kind> | I-<kind>
class TaggedSentence {
 public:
  TaggedSentence(std::u32string chars, std::vector<std::string> labels, Task task);

  const std::u32string& chars() const { return chars_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Task task() const { return task_; }
  std::size_t size() const { return chars_.size(); }

  friend bool operator==(const TaggedSentence&, const TaggedSentence&) = default;

 private:
  std::u32string chars_;
  std::vector<std::string> labels_;
  Task task_;
};

bool is_valid_label(std::string_view label, Task task);

struct EntitySpan {
  std::size_t start = 0;  // inclusive, in characters
  std::size_t end = 0;    // exclusive
  std::string kind;

  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

std::string to_string(const EntitySpan& span);

// Punctuation mark <-> single-letter code. Marks listed as dropped are
// removed on encode and never restored (paired quotes and brackets cannot
// be placed by the preceding-character convention).
class PunctScheme {
 public:
  PunctScheme() = default;
  PunctScheme(const std::vector<std::pair<char32_t, char>>& codes, std::set<char32_t> dropped);

  // TSV "mark TAB code"; a code of "-" marks the mark as dropped.
  static PunctScheme parse(std::istream& in);

  const std::map<char32_t, char>& mark_to_code() const { return mark_to_code_; }
  const std::map<char, char32_t>& code_to_mark() const { return code_to_mark_; }
  const std::set<char32_t>& dropped() const { return dropped_; }

  bool is_mark(char32_t c) const { return mark_to_code_.count(c) != 0; }
  bool is_dropped(char32_t c) const { return dropped_.count(c) != 0; }

 private:
  std::map<char32_t, char> mark_to_code_;
  std::map<char, char32_t> code_to_mark_;
  std::set<char32_t> dropped_;
};

PunctScheme load_punct_scheme(const std::filesystem::path& path);

// GB/T 15834-2011 marks: 。d ：f ，c 、e ；s ？q ！x …h —m ·p, with paired
// quotes, brackets and title marks dropped.
const PunctScheme& default_punct_scheme();

// Removes scheme marks and labels the character before each mark B-<code>.
// Leading or consecutive marks are a DataError with the character offset.
TaggedSentence encode_punct(std::string_view text, const PunctScheme& scheme);
std::string decode_punct(const TaggedSentence& ts, const PunctScheme& scheme);

// The last character of each sentence is labeled B.
TaggedSentence encode_sent_break(const std::vector<std::string>& sentences);
std::vector<std::string> decode_sent_break(const TaggedSentence& ts);

using TaggedWord = std::pair<std::string, std::string>;  // (word, pos)

// An empty tagset accepts any non-empty tag.
TaggedSentence encode_seg_pos(const std::vector<TaggedWord>& words,
                              const std::set<std::string>& tagset = {});

struct SegPosDecoding {
  std::vector<TaggedWord> words;
  std::size_t repairs = 0;  // dangling I- or O labels that started a new word
};
SegPosDecoding decode_seg_pos(const TaggedSentence& ts);

std::set<std::string> load_tagset(const std::filesystem::path& path);

TaggedSentence encode_ner(std::string_view text, std::vector<EntitySpan> spans);
std::vector<EntitySpan> decode_ner(const TaggedSentence& ts);

// "char TAB label" lines, blank line between sentences.
std::vector<TaggedSentence> read_conll(std::istream& in, Task task);
std::vector<TaggedSentence> read_conll(const std::filesystem::path& path, Task task);
void write_conll(std::ostream& out, const std::vector<TaggedSentence>& sentences);
void write_conll(const std::filesystem::path& path, const std::vector<TaggedSentence>& sentences);

// Line formats used by the encode/decode commands.
//   segpos: space-separated "word/pos" tokens
//   ner:    inline "{text|kind}" brackets, e.g. "{漢王|per}入秦"
//   break:  space-separated sentences
std::vector<TaggedWord> parse_segpos_line(std::string_view line);
std::string format_segpos_line(const std::vector<TaggedWord>& words);
std::pair<std::string, std::vector<EntitySpan>> parse_ner_line(std::string_view line);
std::string format_ner_line(std::u32string_view chars, const std::vector<EntitySpan>& spans);
std::vector<std::string> parse_break_line(std::string_view line);
std::string format_break_line(const std::vector<std::string>& sentences);

}  // namespace guji
