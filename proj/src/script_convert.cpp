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

#include "guji/script_convert.hpp"

#include <fstream>
#include <map>

#include "guji/error.hpp"
#include "guji/utf8.hpp"

namespace guji {

CharMap CharMap::parse(std::istream& in) {
  CharMap map;
  // Simplified chars that already have an s2t entry, with the line it came
  // from; a second distinct traditional form marks them ambiguous.
  std::map<char32_t, std::size_t> t2s_line;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError("charmap line " + std::to_string(lineno) +
                      ": expected \"traditional<TAB>simplified\"");
    }
    char32_t trad;
    char32_t simp;
    try {
      trad = utf8::single(std::string_view(line).substr(0, tab));
      simp = utf8::single(std::string_view(line).substr(tab + 1));
    } catch (const DataError& e) {
      throw DataError("charmap line " + std::to_string(lineno) + ": " + e.what());
    }
    if (auto it = map.t2s_.find(trad); it != map.t2s_.end()) {
      if (it->second != simp) {
        throw DataError("charmap line " + std::to_string(lineno) + ": traditional " +
                        utf8::encode(trad) + " already maps to " + utf8::encode(it->second) +
                        " (line " + std::to_string(t2s_line[trad]) + ")");
      }
      continue;  // duplicate pair
    }
    map.t2s_.emplace(trad, simp);
    t2s_line.emplace(trad, lineno);
    if (auto it = map.s2t_.find(simp); it == map.s2t_.end()) {
      map.s2t_.emplace(simp, trad);
    } else if (it->second != trad) {
      map.ambiguous_s_.insert(simp);
    }
  }
  for (const auto& [trad, simp] : map.t2s_) {
    auto it = map.t2s_.find(simp);
    if (it != map.t2s_.end() && it->second != simp) {
      throw DataError("charmap line " + std::to_string(t2s_line[trad]) + ": simplified " +
                      utf8::encode(simp) + " is itself mapped to " + utf8::encode(it->second) +
                      " (line " + std::to_string(t2s_line[simp]) + ")");
    }
  }
  return map;
}

CharMap load_charmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read charmap " + path.string());
  try {
    return CharMap::parse(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

namespace {

std::string translate(std::string_view text, const std::unordered_map<char32_t, char32_t>& table) {
  std::u32string chars = utf8::decode(text);
  for (char32_t& c : chars) {
    if (auto it = table.find(c); it != table.end()) c = it->second;
  }
  return utf8::encode(chars);
}

}  // namespace

std::string to_simplified(std::string_view text, const CharMap& map) {
  return translate(text, map.t2s());
}

std::string to_traditional(std::string_view text, const CharMap& map) {
  return translate(text, map.s2t());
}

Corpus convert_corpus(const Corpus& corpus, const CharMap& map, Script target) {
  if (target != Script::simplified && target != Script::traditional) {
    throw UsageError("conversion target must be simplified or traditional");
  }
  std::vector<Document> docs = corpus.documents();
  for (auto& doc : docs) {
    doc.text = target == Script::simplified ? to_simplified(doc.text, map)
                                            : to_traditional(doc.text, map);
    doc.script = target;
  }
  return Corpus(std::move(docs), target);
}

std::string tagged_id(std::string_view id, Script script) {
  const std::string tag = "." + std::string(to_string(script));
  const auto slash = id.rfind('/');
  const auto dot = id.rfind('.');
  const bool has_ext = dot != std::string_view::npos && (slash == std::string_view::npos || dot > slash + 1);
  const std::string_view stem = has_ext ? id.substr(0, dot) : id;
  const std::string_view ext = has_ext ? id.substr(dot) : std::string_view{};
  if (stem.size() >= tag.size() && stem.substr(stem.size() - tag.size()) == tag) {
    return std::string(id);
  }
  return std::string(stem) + tag + std::string(ext);
}

Corpus merge_corpora(const Corpus& a, const Corpus& b) {
  std::vector<Document> docs;
  docs.reserve(a.size() + b.size());
  std::map<std::string, const Document*> seen;
  for (const Corpus* part : {&a, &b}) {
    for (const auto& doc : part->documents()) {
      Document copy = doc;
      copy.id = tagged_id(doc.id, doc.script);
      if (!seen.emplace(copy.id, &doc).second) {
        throw DataError("document id collision while merging: " + copy.id);
      }
      docs.push_back(std::move(copy));
    }
  }
  return Corpus(std::move(docs), Script::mixed);
}

}  // namespace guji
