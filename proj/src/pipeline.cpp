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

#include "guji/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>

#include <json.hpp>

#include "guji/dataset.hpp"
#include "guji/digest.hpp"
#include "guji/error.hpp"
#include "guji/script_convert.hpp"
#include "guji/vocab.hpp"

namespace guji {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> stages{"clean", "to_simplified", "to_traditional",
                                               "merge", "vocab",         "split"};
  return stages;
}

namespace {

struct StageSpec {
  std::vector<std::string> deps;  // earlier stages whose outputs are read
  std::string output;
};

const std::map<std::string, StageSpec>& stage_specs() {
  static const std::map<std::string, StageSpec> specs{
      {"clean", {{}, "clean"}},
      {"to_simplified", {{"clean"}, "simplified"}},
      {"to_traditional", {{"clean"}, "traditional"}},
      {"merge", {{"to_simplified", "to_traditional"}, "mixed"}},
      {"vocab", {{"merge"}, "vocab.txt"}},
      {"split", {{"merge"}, "split"}},
  };
  return specs;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::map<std::string, StageRecord> previous_records(const fs::path& manifest) {
  std::map<std::string, StageRecord> out;
  std::ifstream in(manifest);
  if (!in) return out;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& s : j.at("stages")) {
      StageRecord r{s.at("stage"), s.at("input_digest"), s.at("output"), s.at("output_digest")};
      out[r.stage] = r;
    }
  } catch (const nlohmann::json::exception&) {
    out.clear();  // unreadable manifest: rerun everything
  }
  return out;
}

void reset(const fs::path& p) {
  fs::remove_all(p);
}

// Non-empty lines of every document, in corpus order.
std::vector<std::string> corpus_lines(const Corpus& corpus) {
  std::vector<std::string> lines;
  for (const auto& doc : corpus.documents()) {
    std::size_t start = 0;
    while (start <= doc.text.size()) {
      auto end = doc.text.find('\n', start);
      if (end == std::string::npos) end = doc.text.size();
      if (end > start) lines.push_back(doc.text.substr(start, end - start));
      start = end + 1;
    }
  }
  return lines;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

Manifest run_pipeline(const PipelineConfig& config) {
  std::vector<std::string> stages = config.stages.empty() ? pipeline_stages() : config.stages;
  const auto& specs = stage_specs();
  for (std::size_t i = 0; i < stages.size(); ++i) {
    auto it = specs.find(stages[i]);
    if (it == specs.end()) throw UsageError("unknown pipeline stage: " + stages[i]);
    for (const auto& dep : it->second.deps) {
      if (std::find(stages.begin(), stages.begin() + static_cast<std::ptrdiff_t>(i), dep) ==
          stages.begin() + static_cast<std::ptrdiff_t>(i)) {
        throw UsageError("pipeline stage " + stages[i] + " needs " + dep + " earlier in the stage list");
      }
    }
  }
  if (std::find(stages.begin(), stages.end(), "clean") != stages.end() && config.input.empty()) {
    throw UsageError("pipeline needs an input corpus");
  }
  fs::create_directories(config.out);
  const fs::path manifest_path = config.out / "manifest.json";
  const auto previous = config.force ? std::map<std::string, StageRecord>{} : previous_records(manifest_path);

  // Lazily loaded stage outputs.
  std::map<std::string, Corpus> corpora;
  auto corpus_of = [&](const std::string& stage, Script script) -> const Corpus& {
    auto it = corpora.find(stage);
    if (it == corpora.end()) {
      it = corpora.emplace(stage, load_corpus(config.out / specs.at(stage).output, script)).first;
    }
    return it->second;
  };

  Manifest manifest;
  manifest.created = utc_now();
  for (const auto& stage : stages) {
    const StageSpec& spec = specs.at(stage);
    const fs::path output = config.out / spec.output;

    std::uint64_t input_digest = fnv1a64(stage);
    auto mix = [&](std::uint64_t d) { input_digest = fnv1a64(to_hex(d), input_digest); };
    auto mix_text = [&](const std::string& s) { input_digest = fnv1a64(s, input_digest); };
    for (const auto& dep : spec.deps) mix(digest_path(config.out / specs.at(dep).output));
    if (stage == "clean") {
      mix(digest_path(config.input));
      mix_text(std::string(to_string(config.script)));
    } else if (stage == "to_simplified" || stage == "to_traditional") {
      mix(digest_path(config.charmap));
    } else if (stage == "vocab") {
      mix(digest_path(config.base_vocab));
      mix_text("min_freq=" + std::to_string(config.min_freq));
    } else if (stage == "split") {
      std::string r;
      for (auto x : config.ratios) r += std::to_string(x) + ":";
      mix_text("ratios=" + r + ";seed=" + std::to_string(config.seed));
    }

    StageRecord record{stage, to_hex(input_digest), spec.output, "", false};
    if (auto it = previous.find(stage); it != previous.end() && it->second.input_digest == record.input_digest &&
                                        it->second.output_digest == to_hex(digest_path(output))) {
      record.output_digest = it->second.output_digest;
      record.skipped = true;
      manifest.stages.push_back(record);
      continue;
    }

    if (stage == "clean") {
      const Corpus cleaned = clean_corpus(load_corpus(config.input, config.script));
      reset(output);
      write_corpus(cleaned, output);
      corpora.insert_or_assign(stage, cleaned);
    } else if (stage == "to_simplified" || stage == "to_traditional") {
      const CharMap map = load_charmap(config.charmap);
      const Script target = stage == "to_simplified" ? Script::simplified : Script::traditional;
      const Corpus converted = convert_corpus(corpus_of("clean", config.script), map, target);
      reset(output);
      write_corpus(converted, output);
      corpora.insert_or_assign(stage, converted);
    } else if (stage == "merge") {
      const Corpus merged = merge_corpora(corpus_of("to_simplified", Script::simplified),
                                          corpus_of("to_traditional", Script::traditional));
      reset(output);
      write_corpus(merged, output);
      corpora.insert_or_assign(stage, merged);
    } else if (stage == "vocab") {
      const Vocab base = read_vocab(config.base_vocab);
      const Vocab expanded = expand_vocab(base, extract_chars(corpus_of("merge", Script::mixed), config.min_freq));
      write_vocab(expanded, output);
    } else if (stage == "split") {
      const auto parts = split(corpus_lines(corpus_of("merge", Script::mixed)), SplitSpec{config.ratios, config.seed});
      reset(output);
      fs::create_directories(output);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string name = parts.size() == 2   ? (i == 0 ? "train" : "valid")
                                 : parts.size() == 3 ? (i == 0 ? "train" : i == 1 ? "valid" : "test")
                                                     : "part" + std::to_string(i);
        write_lines(output / (name + ".txt"), parts[i]);
      }
    }
    record.output_digest = to_hex(digest_path(output));
    manifest.stages.push_back(record);
  }

  ordered_json j;
  j["tool"] = "guji";
  j["manifest_format"] = 1;
  j["created"] = manifest.created;
  j["digest"] = "fnv1a64";
  j["stages"] = ordered_json::array();
  for (const auto& r : manifest.stages) {
    j["stages"].push_back({{"stage", r.stage},
                           {"input_digest", r.input_digest},
                           {"output", r.output},
                           {"output_digest", r.output_digest},
                           {"skipped", r.skipped}});
  }
  std::ofstream out(manifest_path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("cannot write " + manifest_path.string());
  return manifest;
}

}  // namespace guji
