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

#include "guji/label_codec.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "guji/error.hpp"
#include "guji/utf8.hpp"

namespace guji {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::ner: return "ner";
    case Task::seg_pos: return "segpos";
    case Task::sent_break: return "break";
    case Task::punct: return "punct";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  if (name == "ner") return Task::ner;
  if (name == "segpos" || name == "seg_pos") return Task::seg_pos;
  if (name == "break" || name == "sent_break") return Task::sent_break;
  if (name == "punct") return Task::punct;
  throw UsageError("unknown task: " + std::string(name));
}

namespace {

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_valid_kind(std::string_view kind) {
  if (kind.empty()) return false;
  return std::none_of(kind.begin(), kind.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

std::string at(std::size_t i) { return " at index " + std::to_string(i); }

}  // namespace

bool is_valid_label(std::string_view label, Task task) {
  if (label == "O") return true;
  switch (task) {
    case Task::sent_break:
      return label == "B";
    case Task::punct:
      return label.size() == 3 && label.substr(0, 2) == "B-" && is_ascii_letter(label[2]);
    case Task::ner:
    case Task::seg_pos:
      return label.size() > 2 && (label[0] == 'B' || label[0] == 'I') && label[1] == '-' &&
             is_valid_kind(label.substr(2));
  }
  return false;
}

TaggedSentence::TaggedSentence(std::u32string chars, std::vector<std::string> labels, Task task)
    : chars_(std::move(chars)), labels_(std::move(labels)), task_(task) {
  if (chars_.size() != labels_.size()) {
    throw DataError("tagged sentence has " + std::to_string(chars_.size()) + " chars but " +
                    std::to_string(labels_.size()) + " labels");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!is_valid_label(labels_[i], task_)) {
      throw DataError("label \"" + labels_[i] + "\"" + at(i) + " is not valid for task " +
                      std::string(to_string(task_)));
    }
  }
}

std::string to_string(const EntitySpan& span) {
  return "(" + std::to_string(span.start) + "," + std::to_string(span.end) + "," + span.kind + ")";
}

// Punctuation scheme

PunctScheme::PunctScheme(const std::vector<std::pair<char32_t, char>>& codes,
                         std::set<char32_t> dropped)
    : dropped_(std::move(dropped)) {
  for (const auto& [mark, code] : codes) {
    if (!is_ascii_letter(code)) {
      throw DataError("punctuation code for " + utf8::encode(mark) + " must be one ASCII letter");
    }
    if (dropped_.count(mark) || !mark_to_code_.emplace(mark, code).second) {
      throw DataError("punctuation mark " + utf8::encode(mark) + " listed twice");
    }
    if (!code_to_mark_.emplace(code, mark).second) {
      throw DataError(std::string("punctuation code ") + code + " used for two marks");
    }
  }
}

PunctScheme PunctScheme::parse(std::istream& in) {
  std::vector<std::pair<char32_t, char>> codes;
  std::set<char32_t> dropped;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("punctuation scheme line " + std::to_string(lineno) +
                      ": expected \"mark<TAB>code\"");
    }
    const std::string code = line.substr(tab + 1);
    char32_t mark;
    try {
      mark = utf8::single(std::string_view(line).substr(0, tab));
    } catch (const DataError& e) {
      throw DataError("punctuation scheme line " + std::to_string(lineno) + ": " + e.what());
    }
    if (code == "-") {
      if (!dropped.insert(mark).second) {
        throw DataError("punctuation scheme line " + std::to_string(lineno) + ": duplicate mark");
      }
    } else if (code.size() == 1) {
      codes.emplace_back(mark, code[0]);
    } else {
      throw DataError("punctuation scheme line " + std::to_string(lineno) +
                      ": code must be one ASCII letter or \"-\"");
    }
  }
  return PunctScheme(codes, std::move(dropped));
}

PunctScheme load_punct_scheme(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read punctuation scheme " + path.string());
  return PunctScheme::parse(in);
}

const PunctScheme& default_punct_scheme() {
  static const PunctScheme scheme(
      {{U'。', 'd'}, {U'：', 'f'}, {U'，', 'c'}, {U'、', 'e'}, {U'；', 's'},
       {U'？', 'q'}, {U'！', 'x'}, {U'…', 'h'}, {U'—', 'm'}, {U'·', 'p'}},
      {U'「', U'」', U'『', U'』', U'“', U'”', U'‘', U'’', U'《', U'》', U'〈', U'〉',
       U'（', U'）', U'【', U'】'});
  return scheme;
}

TaggedSentence encode_punct(std::string_view text, const PunctScheme& scheme) {
  const std::u32string input = utf8::decode(text);
  std::u32string chars;
  std::vector<std::string> labels;
  bool last_marked = false;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const char32_t c = input[i];
    if (scheme.is_dropped(c)) continue;
    auto it = scheme.mark_to_code().find(c);
    if (it == scheme.mark_to_code().end()) {
      chars.push_back(c);
      labels.emplace_back("O");
      last_marked = false;
      continue;
    }
    if (chars.empty()) {
      throw DataError("punctuation " + utf8::encode(c) + " at char offset " + std::to_string(i) +
                      " has no preceding character");
    }
    if (last_marked) {
      throw DataError("consecutive punctuation " + utf8::encode(c) + " at char offset " +
                      std::to_string(i));
    }
    labels.back() = std::string("B-") + it->second;
    last_marked = true;
  }
  return TaggedSentence(std::move(chars), std::move(labels), Task::punct);
}

std::string decode_punct(const TaggedSentence& ts, const PunctScheme& scheme) {
  if (ts.task() != Task::punct) throw DataError("decode_punct needs a punct sentence");
  std::u32string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.push_back(ts.chars()[i]);
    const std::string& label = ts.labels()[i];
    if (label == "O") continue;
    auto it = scheme.code_to_mark().find(label[2]);
    if (it == scheme.code_to_mark().end()) {
      throw DataError("unknown punctuation label " + label + at(i));
    }
    out.push_back(it->second);
  }
  return utf8::encode(out);
}

// Sentence breaking

TaggedSentence encode_sent_break(const std::vector<std::string>& sentences) {
  std::u32string chars;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::u32string s = utf8::decode(sentences[i]);
    if (s.empty()) throw DataError("empty sentence" + at(i));
    chars += s;
    labels.insert(labels.end(), s.size() - 1, "O");
    labels.emplace_back("B");
  }
  return TaggedSentence(std::move(chars), std::move(labels), Task::sent_break);
}

std::vector<std::string> decode_sent_break(const TaggedSentence& ts) {
  if (ts.task() != Task::sent_break) throw DataError("decode_sent_break needs a break sentence");
  std::vector<std::string> out;
  std::u32string current;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    current.push_back(ts.chars()[i]);
    if (ts.labels()[i] == "B") {
      out.push_back(utf8::encode(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(utf8::encode(current));
  return out;
}

// Segmentation + POS

TaggedSentence encode_seg_pos(const std::vector<TaggedWord>& words,
                              const std::set<std::string>& tagset) {
  std::u32string chars;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& [word, pos] = words[i];
    const std::u32string w = utf8::decode(word);
    if (w.empty()) throw DataError("empty word" + at(i));
    if (!is_valid_kind(pos)) throw DataError("invalid POS tag \"" + pos + "\"" + at(i));
    if (!tagset.empty() && !tagset.count(pos)) {
      throw DataError("POS tag \"" + pos + "\"" + at(i) + " is not in the tagset");
    }
    chars += w;
    labels.push_back("B-" + pos);
    labels.insert(labels.end(), w.size() - 1, "I-" + pos);
  }
  return TaggedSentence(std::move(chars), std::move(labels), Task::seg_pos);
}

SegPosDecoding decode_seg_pos(const TaggedSentence& ts) {
  if (ts.task() != Task::seg_pos) throw DataError("decode_seg_pos needs a segpos sentence");
  SegPosDecoding out;
  std::u32string word;
  std::string pos;
  auto flush = [&] {
    if (!word.empty()) out.words.emplace_back(utf8::encode(word), pos);
    word.clear();
  };
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string& label = ts.labels()[i];
    const char32_t c = ts.chars()[i];
    if (label == "O") {
      flush();
      ++out.repairs;
      word.push_back(c);
      pos = "O";
      flush();
      continue;
    }
    const std::string tag = label.substr(2);
    if (label[0] == 'B' || word.empty() || tag != pos) {
      if (label[0] == 'I') ++out.repairs;
      flush();
      pos = tag;
    }
    word.push_back(c);
  }
  flush();
  return out;
}

std::set<std::string> load_tagset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read tagset " + path.string());
  std::set<std::string> tags;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!is_valid_kind(line)) throw DataError("invalid tag \"" + line + "\" in " + path.string());
    tags.insert(line);
  }
  return tags;
}

// Named entities

TaggedSentence encode_ner(std::string_view text, std::vector<EntitySpan> spans) {
  std::u32string chars = utf8::decode(text);
  std::sort(spans.begin(), spans.end());
  std::vector<std::string> labels(chars.size(), "O");
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const EntitySpan& s = spans[i];
    if (s.start >= s.end || s.end > chars.size()) {
      throw DataError("entity span " + to_string(s) + " is out of bounds for length " +
                      std::to_string(chars.size()));
    }
    if (!is_valid_kind(s.kind)) throw DataError("entity span " + to_string(s) + " has no kind");
    if (i > 0 && spans[i - 1].end > s.start) {
      throw DataError("entity spans " + to_string(spans[i - 1]) + " and " + to_string(s) +
                      " overlap");
    }
    labels[s.start] = "B-" + s.kind;
    for (std::size_t k = s.start + 1; k < s.end; ++k) labels[k] = "I-" + s.kind;
  }
  return TaggedSentence(std::move(chars), std::move(labels), Task::ner);
}

std::vector<EntitySpan> decode_ner(const TaggedSentence& ts) {
  if (ts.task() != Task::ner) throw DataError("decode_ner needs a ner sentence");
  std::vector<EntitySpan> spans;
  bool open = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string& label = ts.labels()[i];
    if (label == "O") {
      open = false;
      continue;
    }
    const std::string kind = label.substr(2);
    if (label[0] == 'I' && open && spans.back().kind == kind) {
      spans.back().end = i + 1;
      continue;
    }
    spans.push_back(EntitySpan{i, i + 1, kind});
    open = true;
  }
  return spans;
}

// CoNLL files

std::vector<TaggedSentence> read_conll(std::istream& in, Task task) {
  std::vector<TaggedSentence> out;
  std::u32string chars;
  std::vector<std::string> labels;
  std::size_t first_line = 1;
  auto flush = [&] {
    if (chars.empty()) return;
    try {
      out.emplace_back(std::move(chars), std::move(labels), task);
    } catch (const DataError& e) {
      throw DataError("sentence starting at line " + std::to_string(first_line) + ": " + e.what());
    }
    chars.clear();
    labels.clear();
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (chars.empty()) first_line = lineno;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("line " + std::to_string(lineno) + ": expected \"char<TAB>label\"");
    }
    try {
      chars.push_back(utf8::single(std::string_view(line).substr(0, tab)));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
    labels.push_back(line.substr(tab + 1));
  }
  flush();
  return out;
}

std::vector<TaggedSentence> read_conll(const std::filesystem::path& path, Task task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return read_conll(in, task);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_conll(std::ostream& out, const std::vector<TaggedSentence>& sentences) {
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (s > 0) out << '\n';
    const auto& ts = sentences[s];
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const char32_t c = ts.chars()[i];
      if (c == U'\t' || c == U'\n' || c == U'\r') {
        throw DataError("character" + at(i) + " cannot be written to a CoNLL file");
      }
      out << utf8::encode(c) << '\t' << ts.labels()[i] << '\n';
    }
  }
}

void write_conll(const std::filesystem::path& path, const std::vector<TaggedSentence>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_conll(out, sentences);
}

// Line formats

namespace {

std::vector<std::string> split_spaces(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::vector<TaggedWord> parse_segpos_line(std::string_view line) {
  std::vector<TaggedWord> words;
  for (const auto& tok : split_spaces(line)) {
    const auto slash = tok.rfind('/');
    if (slash == std::string::npos || slash == 0) {
      throw DataError("expected word/pos, got \"" + tok + "\"");
    }
    words.emplace_back(tok.substr(0, slash), tok.substr(slash + 1));
  }
  return words;
}

std::string format_segpos_line(const std::vector<TaggedWord>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i].first + "/" + words[i].second;
  }
  return out;
}

std::pair<std::string, std::vector<EntitySpan>> parse_ner_line(std::string_view line) {
  const std::u32string in = utf8::decode(line);
  std::u32string text;
  std::vector<EntitySpan> spans;
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] != U'{') {
      text.push_back(in[i++]);
      continue;
    }
    const auto bar = in.find(U'|', i);
    const auto close = in.find(U'}', i);
    if (bar == std::u32string::npos || close == std::u32string::npos || bar > close ||
        bar == i + 1) {
      throw DataError("malformed entity bracket at char offset " + std::to_string(i));
    }
    const std::size_t start = text.size();
    text += in.substr(i + 1, bar - i - 1);
    spans.push_back(EntitySpan{start, text.size(), utf8::encode(in.substr(bar + 1, close - bar - 1))});
    i = close + 1;
  }
  return {utf8::encode(text), std::move(spans)};
}

std::string format_ner_line(std::u32string_view chars, const std::vector<EntitySpan>& spans) {
  std::u32string out;
  std::size_t pos = 0;
  for (const auto& s : spans) {
    out += chars.substr(pos, s.start - pos);
    out += U'{';
    out += chars.substr(s.start, s.end - s.start);
    out += U'|';
    out += utf8::decode(s.kind);
    out += U'}';
    pos = s.end;
  }
  out += chars.substr(pos);
  return utf8::encode(out);
}

std::vector<std::string> parse_break_line(std::string_view line) { return split_spaces(line); }

std::string format_break_line(const std::vector<std::string>& sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out += ' ';
    out += sentences[i];
  }
  return out;
}

}  // namespace guji
