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

#include "guji/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "guji/corpus.hpp"
#include "guji/dataset.hpp"
#include "guji/error.hpp"
#include "guji/label_codec.hpp"
#include "guji/lm/io.hpp"
#include "guji/lm/train.hpp"
#include "guji/metrics.hpp"
#include "guji/pipeline.hpp"
#include "guji/script_convert.hpp"
#include "guji/utf8.hpp"
#include "guji/vocab.hpp"

#ifndef GUJI_VERSION
#define GUJI_VERSION "0.0.0"
#endif

namespace guji::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string version_string() {
  return std::string("guji ") + GUJI_VERSION + " (model format 1, manifest format 1)";
}

namespace {

// Option names whose config-file values are paths, resolved against the
// config file's directory.
bool is_path_key(const std::string& key) {
  static const std::set<std::string> keys{"in", "out", "input", "charmap", "base_vocab", "base",
                                          "chars", "gold", "pred", "pairs", "model", "corpus",
                                          "vocab", "scheme", "tagset", "report", "json", "a",
                                          "b", "heldout"};
  return keys.count(key) != 0;
}

std::string option_flag(const std::string& key) {
  std::string name = key;
  for (char& c : name) {
    if (c == '_') c = '-';
  }
  return "--" + name;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::optional<std::string> flag_value(const std::vector<std::string>& args, const std::string& flag) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind(flag + "=", 0) == 0) return args[i].substr(flag.size() + 1);
  }
  return std::nullopt;
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ',';
      out += scalar_text(v[i]);
    }
    return out;
  }
  return v.dump();
}

// Appends "--key value" for every config-file key not already given as a
// flag. Unknown keys are a usage error.
std::vector<std::string> merge_config(std::vector<std::string> args, CLI::App* sub) {
  const auto path = flag_value(args, "--config");
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config " + *path);
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + *path + " is not valid JSON: " + e.what());
  }
  if (!config.is_object()) throw UsageError("config " + *path + " must be a JSON object");
  const fs::path base = fs::path(*path).parent_path();
  for (const auto& [key, value] : config.items()) {
    const std::string flag = option_flag(key);
    CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || key == "config") {
      throw UsageError("unknown config key \"" + key + "\" for " + sub->get_name());
    }
    if (has_flag(args, flag)) continue;
    if (opt->get_expected_min() == 0) {
      if (value.is_boolean() && value.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string text = scalar_text(value);
    if (is_path_key(key) && value.is_string() && fs::path(text).is_relative()) {
      text = (base / text).lexically_normal().string();
    }
    args.push_back(flag);
    args.push_back(text);
  }
  return args;
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
  if (opt->count() > 0) return value;
  if (const char* env = std::getenv("GUJI_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("GUJI_SEED is not an unsigned integer: ") + env);
    }
  }
  return value;
}

// Resolved options of a subcommand plus the tool version.
ordered_json run_record(const CLI::App* sub, const std::string& command) {
  ordered_json settings = ordered_json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_min() == 0) {
        settings[name] = true;
      } else {
        std::string joined;
        for (std::size_t i = 0; i < results.size(); ++i) joined += (i ? "," : "") + results[i];
        settings[name] = joined;
      }
    } else if (!opt->get_default_str().empty()) {
      settings[name] = opt->get_default_str();
    }
  }
  ordered_json j;
  j["tool"] = "guji";
  j["version"] = GUJI_VERSION;
  j["command"] = command;
  j["config"] = settings;
  return j;
}

void write_record(const ordered_json& record, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << record.dump(2) << '\n';
  if (!out) throw DataError("cannot write " + path.string());
}

// Directory outputs get out/run.json; file outputs get <file>.run.json.
void record_dir_run(const CLI::App* sub, const std::string& command, const fs::path& dir) {
  write_record(run_record(sub, command), dir / "run.json");
}
void record_file_run(const CLI::App* sub, const std::string& command, const fs::path& file) {
  write_record(run_record(sub, command), fs::path(file.string() + ".run.json"));
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto bad = utf8::find_invalid(line); bad != std::string::npos) {
      throw DataError(path.string() + ": invalid UTF-8 on line " + std::to_string(lineno));
    }
    lines.push_back(line);
  }
  return lines;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::ofstream open_out(const fs::path& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Vocab lm_vocab_for(const Corpus& corpus) {
  return expand_vocab(Vocab({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"}, 5), extract_chars(corpus));
}

// Gold/pred CoNLL pair scoring at token or span level.
ordered_json score_tagging(Task task, const std::string& level, const fs::path& gold_path,
                           const fs::path& pred_path) {
  const auto gold = read_conll(gold_path, task);
  const auto pred = read_conll(pred_path, task);
  if (gold.size() != pred.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences but prediction has " +
                    std::to_string(pred.size()));
  }
  PRF prf;
  if (level == "token") {
    std::vector<std::string> g, p;
    for (std::size_t s = 0; s < gold.size(); ++s) {
      if (gold[s].chars() != pred[s].chars()) {
        throw DataError("sentence " + std::to_string(s + 1) + " differs between gold and prediction");
      }
      g.insert(g.end(), gold[s].labels().begin(), gold[s].labels().end());
      p.insert(p.end(), pred[s].labels().begin(), pred[s].labels().end());
    }
    prf = token_prf(g, p);
  } else if (level == "span") {
    if (task != Task::ner && task != Task::seg_pos) {
      throw UsageError("span-level scoring is available for ner and segpos only");
    }
    auto spans_of = [&](const TaggedSentence& ts) {
      if (task == Task::ner) return decode_ner(ts);
      std::vector<EntitySpan> spans;
      std::size_t pos = 0;
      for (const auto& [word, tag] : decode_seg_pos(ts).words) {
        const std::size_t len = utf8::length(word);
        spans.push_back(EntitySpan{pos, pos + len, tag});
        pos += len;
      }
      return spans;
    };
    std::vector<EntitySpan> g, p;
    std::size_t offset = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
      if (gold[s].chars() != pred[s].chars()) {
        throw DataError("sentence " + std::to_string(s + 1) + " differs between gold and prediction");
      }
      for (auto span : spans_of(gold[s])) {
        span.start += offset, span.end += offset;
        g.push_back(span);
      }
      for (auto span : spans_of(pred[s])) {
        span.start += offset, span.end += offset;
        p.push_back(span);
      }
      offset += gold[s].size();
    }
    prf = span_prf(g, p);
  } else {
    throw UsageError("level must be token or span");
  }
  ordered_json j;
  j["task"] = std::string(to_string(task));
  j["level"] = level;
  j["tp"] = prf.tp;
  j["fp"] = prf.fp;
  j["fn"] = prf.fn;
  j["precision"] = prf.precision;
  j["recall"] = prf.recall;
  j["f1"] = prf.f1;
  return j;
}

ordered_json score_mt(const fs::path& pairs_path, BleuSmoothing smoothing) {
  std::ifstream in(pairs_path, std::ios::binary);
  if (!in) throw DataError("cannot read " + pairs_path.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      pairs.emplace_back(obj.at("hyp").get<std::string>(), obj.at("ref").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(pairs_path.string() + ": line " + std::to_string(lineno) +
                      ": expected {\"hyp\": ..., \"ref\": ...}: " + e.what());
    }
  }
  if (pairs.empty()) throw DataError(pairs_path.string() + ": no hyp/ref pairs");
  const BleuReport r = corpus_bleu(pairs, smoothing);
  ordered_json j;
  j["task"] = "mt";
  j["level"] = "corpus";
  j["tokenization"] = "character";
  j["smoothing"] = smoothing == BleuSmoothing::add1 ? "add1" : "none";
  j["bleu"] = r.bleu_n;
  j["precisions"] = r.precisions;
  j["brevity_penalty"] = r.brevity_penalty;
  j["hyp_len"] = r.hyp_len;
  j["ref_len"] = r.ref_len;
  return j;
}

void print_score_table(const ordered_json& j, std::ostream& out) {
  if (j["task"] == "mt") {
    out << "BLEU1\tBLEU2\tBLEU3\tBLEU4\tBP\n";
    for (const auto& b : j["bleu"]) out << format_double(b.get<double>()) << '\t';
    out << format_double(j["brevity_penalty"].get<double>()) << '\n';
    return;
  }
  out << "task\tlevel\ttp\tfp\tfn\tP\tR\tF1\n";
  out << j["task"].get<std::string>() << '\t' << j["level"].get<std::string>() << '\t'
      << j["tp"].get<std::size_t>() << '\t' << j["fp"].get<std::size_t>() << '\t'
      << j["fn"].get<std::size_t>() << '\t' << format_double(j["precision"].get<double>()) << '\t'
      << format_double(j["recall"].get<double>()) << '\t' << format_double(j["f1"].get<double>())
      << '\n';
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus engineering and evaluation toolkit for classical Chinese", "guji"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print tool and format versions");

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file of option values (flags override)");
  };

  // ingest
  std::string in, output, script_name = "unknown";
  auto* ingest = app.add_subcommand("ingest", "Load and clean a directory of .txt files");
  ingest->add_option("--in", in, "Raw corpus directory")->required();
  ingest->add_option("--out", output, "Cleaned corpus directory")->required();
  ingest->add_option("--script", script_name, "Script tag: simplified|traditional|mixed|unknown");
  add_config(ingest);

  // stats
  auto* stats = app.add_subcommand("stats", "Character frequency table as TSV");
  stats->add_option("--in", in, "Corpus directory")->required();
  stats->add_option("--out", output, "TSV output file (default: stdout)");
  add_config(stats);

  // convert
  std::string to, charmap_path;
  auto* convert = app.add_subcommand("convert", "Convert a corpus between scripts");
  convert->add_option("--to", to, "Target script: s|t")->required()->check(CLI::IsMember({"s", "t"}));
  convert->add_option("--charmap", charmap_path, "traditional<TAB>simplified table")->required();
  convert->add_option("--in", in, "Input corpus directory")->required();
  convert->add_option("--out", output, "Output corpus directory")->required();
  add_config(convert);

  // merge
  std::string a_dir, b_dir, a_script = "simplified", b_script = "traditional";
  auto* merge = app.add_subcommand("merge", "Merge two corpora into a mixed corpus");
  merge->add_option("--a", a_dir, "First corpus directory")->required();
  merge->add_option("--b", b_dir, "Second corpus directory")->required();
  merge->add_option("--a-script", a_script, "Script tag of the first corpus");
  merge->add_option("--b-script", b_script, "Script tag of the second corpus");
  merge->add_option("--out", output, "Merged corpus directory")->required();
  add_config(merge);

  // vocab
  std::string base_path, chars_path;
  std::size_t min_freq = 1;
  auto* vocab = app.add_subcommand("vocab", "Extract or expand a vocabulary");
  vocab->require_subcommand(1);
  auto* vextract = vocab->add_subcommand("extract", "Corpus characters by frequency, one per line");
  vextract->add_option("--in", in, "Corpus directory")->required();
  vextract->add_option("--out", output, "Output file")->required();
  vextract->add_option("--min-freq", min_freq, "Drop characters seen fewer times");
  add_config(vextract);
  auto* vexpand = vocab->add_subcommand("expand", "Append new corpus characters to a base vocabulary");
  vexpand->add_option("--base", base_path, "Base vocabulary file")->required();
  vexpand->add_option("--in", in, "Corpus directory to draw characters from");
  vexpand->add_option("--chars", chars_path, "Character list file (output of vocab extract)");
  vexpand->add_option("--out", output, "Expanded vocabulary file")->required();
  vexpand->add_option("--min-freq", min_freq, "Drop characters seen fewer times");
  add_config(vexpand);

  // split
  std::string ratios_text = "99:1";
  std::uint64_t seed = 0;
  auto* split_cmd = app.add_subcommand("split", "Deterministic seeded split of the lines of a file");
  split_cmd->add_option("--in", in, "Input file, one item per line")->required();
  split_cmd->add_option("--out", output, "Output directory")->required();
  split_cmd->add_option("--ratios", ratios_text, "Ratios such as 99:1 or 8:1:1");
  auto* split_seed = split_cmd->add_option("--seed", seed, "Shuffle seed (fallback: GUJI_SEED)");
  add_config(split_cmd);

  // encode / decode
  std::string task_name, scheme_path, tagset_path;
  bool strict = false;
  auto* encode = app.add_subcommand("encode", "Annotated text lines to CoNLL labels");
  encode->add_option("--task", task_name, "ner|segpos|break|punct")->required();
  encode->add_option("--in", in, "Annotated text, one sentence per line")->required();
  encode->add_option("--out", output, "CoNLL output file")->required();
  encode->add_option("--scheme", scheme_path, "Punctuation scheme TSV (default: built-in)");
  encode->add_option("--tagset", tagset_path, "POS tagset, one tag per line");
  encode->add_flag("--strict", strict, "Fail on the first invalid line instead of skipping it");
  add_config(encode);
  auto* decode = app.add_subcommand("decode", "CoNLL labels to annotated text lines");
  decode->add_option("--task", task_name, "ner|segpos|break|punct")->required();
  decode->add_option("--in", in, "CoNLL input file")->required();
  decode->add_option("--out", output, "Annotated text output file")->required();
  decode->add_option("--scheme", scheme_path, "Punctuation scheme TSV (default: built-in)");
  add_config(decode);

  // filter
  double lo = 0.85, hi = 0.98;
  std::string metric_name = "lcs", report_path;
  auto* filter = app.add_subcommand("filter", "Keep parallel pairs inside a similarity band");
  filter->add_option("--in", in, "JSONL pairs")->required();
  filter->add_option("--out", output, "Kept JSONL pairs")->required();
  filter->add_option("--lo", lo, "Lower bound (inclusive)");
  filter->add_option("--hi", hi, "Upper bound (inclusive)");
  filter->add_option("--metric", metric_name, "lcs|dice")->check(CLI::IsMember({"lcs", "dice"}));
  filter->add_option("--report", report_path, "JSON report file (default: <out>.report.json)");
  add_config(filter);

  // score
  std::string gold_path, pred_path, pairs_path, level = "token", smooth = "none", json_path,
                                                 format = "table";
  auto* score = app.add_subcommand("score", "P/R/F1 for tagging tasks, BLEU for translation");
  score->add_option("--task", task_name, "ner|segpos|break|punct|mt")->required();
  score->add_option("--gold", gold_path, "Gold CoNLL file");
  score->add_option("--pred", pred_path, "Predicted CoNLL file");
  score->add_option("--pairs", pairs_path, "JSONL of {\"hyp\", \"ref\"} pairs (task mt)");
  score->add_option("--level", level, "token|span")->check(CLI::IsMember({"token", "span"}));
  score->add_option("--smooth", smooth, "BLEU smoothing: none|add1")->check(CLI::IsMember({"none", "add1"}));
  score->add_option("--json", json_path, "Also write the JSON report here");
  score->add_option("--format", format, "Standard output format: table|json")
      ->check(CLI::IsMember({"table", "json"}));
  add_config(score);

  // train-toy
  lm::LMConfig lm_config;
  std::string objective_name, corpus_dir, vocab_path, heldout_dir, mask_split_text = "80,10,10";
  auto* train = app.add_subcommand("train-toy", "Train the toy character LM");
  train->add_option("--objective", objective_name, "mlm|clm")->required()->check(CLI::IsMember({"mlm", "clm"}));
  train->add_option("--corpus", corpus_dir, "Training corpus directory")->required();
  train->add_option("--out", output, "Output directory")->required();
  train->add_option("--vocab", vocab_path, "Vocabulary file (default: built from the corpus)");
  train->add_option("--heldout", heldout_dir, "Held-out corpus directory to evaluate after training");
  train->add_option("--embed-dim", lm_config.embed_dim);
  train->add_option("--context-len", lm_config.context_len);
  train->add_option("--n-heads", lm_config.n_heads);
  train->add_option("--n-layers", lm_config.n_layers);
  train->add_option("--learning-rate", lm_config.learning_rate);
  train->add_option("--momentum", lm_config.momentum);
  train->add_option("--epochs", lm_config.epochs);
  auto* batch_opt = train->add_option("--batch-size", lm_config.batch_size, "Default 32 (mlm) / 16 (clm)");
  train->add_option("--mask-rate", lm_config.mask_rate);
  train->add_option("--mask-split", mask_split_text, "MASK,random,keep shares");
  auto* train_seed = train->add_option("--seed", seed, "Seed (fallback: GUJI_SEED)");
  add_config(train);

  // eval-ppl
  std::string model_path;
  auto* eval = app.add_subcommand("eval-ppl", "Perplexity of a trained model on a corpus");
  eval->add_option("--model", model_path, "model.bin from train-toy, or its output directory")->required();
  eval->add_option("--corpus", corpus_dir, "Held-out corpus directory")->required();
  add_config(eval);

  // pipeline
  PipelineConfig pipe;
  std::string input_dir, base_vocab_path, stages_text;
  bool force = false;
  auto* pipeline = app.add_subcommand("pipeline", "clean -> convert -> merge -> vocab -> split");
  pipeline->add_option("--input", input_dir, "Raw corpus directory");
  pipeline->add_option("--charmap", charmap_path, "traditional<TAB>simplified table");
  pipeline->add_option("--base-vocab", base_vocab_path, "Base vocabulary to expand");
  pipeline->add_option("--out", output, "Output directory")->required();
  pipeline->add_option("--script", script_name, "Script of the raw corpus");
  pipeline->add_option("--ratios", ratios_text, "Split ratios");
  auto* pipe_seed = pipeline->add_option("--seed", seed, "Split seed (fallback: GUJI_SEED)");
  pipeline->add_option("--min-freq", min_freq, "Vocabulary expansion cutoff");
  pipeline->add_option("--stages", stages_text, "Comma-separated stage list (default: all)");
  pipeline->add_flag("--force", force, "Rerun stages even when unchanged");
  add_config(pipeline);

  try {
    std::vector<std::string> args = raw_args;
    if (!args.empty() && args[0].rfind("-", 0) != 0) {
      CLI::App* sub = app.get_subcommand_no_throw(args[0]);
      if (sub != nullptr && args.size() > 1 && !sub->get_subcommands({}).empty()) {
        CLI::App* nested = sub->get_subcommand_no_throw(args[1]);
        if (nested != nullptr) sub = nested;
      }
      if (sub != nullptr) args = merge_config(std::move(args), sub);
    }
    if (args.size() == 1 && args[0] == "--version") {
      out << version_string() << '\n';
      return kExitOk;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      if (show_version && args.size() == 1) {
        out << version_string() << '\n';
        return kExitOk;
      }
      err << "guji: " << e.what() << "\n\n" << app.help();
      return kExitUsage;
    }

    if (ingest->parsed()) {
      const Corpus cleaned = clean_corpus(load_corpus(in, parse_script(script_name)));
      write_corpus(cleaned, output);
      record_dir_run(ingest, "ingest", output);
      err << "ingest: " << cleaned.size() << " documents, " << cleaned.total_chars() << " characters\n";
    } else if (stats->parsed()) {
      const FrequencyTable table = corpus_stats(load_corpus(in, Script::unknown));
      if (output.empty()) {
        write_stats_tsv(table, out);
      } else {
        auto file = open_out(output);
        write_stats_tsv(table, file);
      }
    } else if (convert->parsed()) {
      const CharMap map = load_charmap(charmap_path);
      const Script target = to == "s" ? Script::simplified : Script::traditional;
      const Script source = to == "s" ? Script::traditional : Script::simplified;
      const Corpus converted = convert_corpus(load_corpus(in, source), map, target);
      write_corpus(converted, output);
      record_dir_run(convert, "convert", output);
    } else if (merge->parsed()) {
      const Corpus merged = merge_corpora(load_corpus(a_dir, parse_script(a_script)),
                                          load_corpus(b_dir, parse_script(b_script)));
      write_corpus(merged, output);
      record_dir_run(merge, "merge", output);
      err << "merge: " << merged.size() << " documents, " << merged.total_chars() << " characters\n";
    } else if (vextract->parsed()) {
      const auto chars = extract_chars(load_corpus(in, Script::unknown), min_freq);
      std::vector<std::string> tokens;
      for (char32_t c : chars) tokens.push_back(utf8::encode(c));
      ensure_parent(output);
      write_vocab(Vocab(std::move(tokens), 0), output);
      record_file_run(vextract, "vocab extract", output);
      err << "vocab extract: " << chars.size() << " characters\n";
    } else if (vexpand->parsed()) {
      if (in.empty() == chars_path.empty()) throw UsageError("vocab expand needs exactly one of --in or --chars");
      std::vector<char32_t> chars;
      if (!in.empty()) {
        chars = extract_chars(load_corpus(in, Script::unknown), min_freq);
      } else {
        const Vocab listed = read_vocab(chars_path);
        for (const auto& tok : listed.tokens()) chars.push_back(utf8::single(tok));
      }
      const Vocab base = read_vocab(base_path);
      const Vocab expanded = expand_vocab(base, chars);
      ensure_parent(output);
      write_vocab(expanded, output);
      record_file_run(vexpand, "vocab expand", output);
      err << "vocab expand: " << base.size() << " base tokens, " << expanded.added_count() - base.added_count()
          << " added, " << expanded.size() << " total\n";
    } else if (split_cmd->parsed()) {
      std::vector<std::string> items;
      for (auto& line : read_lines(in)) {
        if (!line.empty()) items.push_back(std::move(line));
      }
      const SplitSpec spec{parse_ratios(ratios_text), resolve_seed(split_seed, seed)};
      if (split_seed->count() == 0) split_seed->default_val(spec.seed);
      const auto parts = split(std::move(items), spec);
      fs::create_directories(output);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string name = parts.size() == 2   ? (i == 0 ? "train" : "valid")
                                 : parts.size() == 3 ? (i == 0 ? "train" : i == 1 ? "valid" : "test")
                                                     : "part" + std::to_string(i);
        auto file = open_out(fs::path(output) / (name + ".txt"));
        for (const auto& item : parts[i]) file << item << '\n';
      }
      record_dir_run(split_cmd, "split", output);
    } else if (encode->parsed()) {
      const Task task = parse_task(task_name);
      const PunctScheme scheme = scheme_path.empty() ? default_punct_scheme() : load_punct_scheme(scheme_path);
      const std::set<std::string> tagset = tagset_path.empty() ? std::set<std::string>{} : load_tagset(tagset_path);
      std::vector<TaggedSentence> sentences;
      std::size_t skipped = 0;
      const auto lines = read_lines(in);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
          switch (task) {
            case Task::punct: sentences.push_back(encode_punct(lines[i], scheme)); break;
            case Task::sent_break: sentences.push_back(encode_sent_break(parse_break_line(lines[i]))); break;
            case Task::seg_pos: sentences.push_back(encode_seg_pos(parse_segpos_line(lines[i]), tagset)); break;
            case Task::ner: {
              auto [text, spans] = parse_ner_line(lines[i]);
              sentences.push_back(encode_ner(text, std::move(spans)));
              break;
            }
          }
        } catch (const DataError& e) {
          if (strict) throw DataError(in + ": line " + std::to_string(i + 1) + ": " + e.what());
          err << "encode: skipping line " << i + 1 << ": " << e.what() << '\n';
          ++skipped;
        }
      }
      ensure_parent(output);
      write_conll(fs::path(output), sentences);
      record_file_run(encode, "encode", output);
      err << "encode: " << sentences.size() << " sentences, " << skipped << " skipped\n";
    } else if (decode->parsed()) {
      const Task task = parse_task(task_name);
      const PunctScheme scheme = scheme_path.empty() ? default_punct_scheme() : load_punct_scheme(scheme_path);
      auto file = open_out(output);
      std::size_t repairs = 0;
      for (const auto& ts : read_conll(fs::path(in), task)) {
        switch (task) {
          case Task::punct: file << decode_punct(ts, scheme) << '\n'; break;
          case Task::sent_break: file << format_break_line(decode_sent_break(ts)) << '\n'; break;
          case Task::seg_pos: {
            const auto decoded = decode_seg_pos(ts);
            repairs += decoded.repairs;
            file << format_segpos_line(decoded.words) << '\n';
            break;
          }
          case Task::ner: file << format_ner_line(ts.chars(), decode_ner(ts)) << '\n'; break;
        }
      }
      if (task == Task::seg_pos) err << "decode: " << repairs << " label repairs\n";
    } else if (filter->parsed()) {
      const auto metric = parse_similarity_metric(metric_name);
      const FilterResult result = filter_parallel(read_jsonl(in), lo, hi, metric);
      ensure_parent(output);
      write_jsonl(result.kept, output);
      ordered_json report;
      report["metric"] = std::string(to_string(metric));
      report["bounds"] = "inclusive";
      report["lo"] = lo;
      report["hi"] = hi;
      report["kept"] = result.report.kept;
      report["dropped_low"] = result.report.dropped_low;
      report["dropped_high"] = result.report.dropped_high;
      write_record(report, report_path.empty() ? fs::path(output + ".report.json") : fs::path(report_path));
      record_file_run(filter, "filter", output);
      err << "filter: kept " << result.report.kept << ", dropped " << result.report.dropped_low << " low, "
          << result.report.dropped_high << " high\n";
    } else if (score->parsed()) {
      ordered_json report;
      if (task_name == "mt") {
        if (pairs_path.empty()) throw UsageError("score --task mt needs --pairs");
        report = score_mt(pairs_path, smooth == "add1" ? BleuSmoothing::add1 : BleuSmoothing::none);
      } else {
        if (gold_path.empty() || pred_path.empty()) throw UsageError("score needs --gold and --pred");
        report = score_tagging(parse_task(task_name), level, gold_path, pred_path);
      }
      if (!json_path.empty()) write_record(report, json_path);
      if (format == "json") {
        out << report.dump(2) << '\n';
      } else {
        print_score_table(report, out);
      }
    } else if (train->parsed()) {
      const auto objective = lm::parse_objective(objective_name);
      if (batch_opt->count() == 0) batch_opt->default_val(lm::default_config(objective).batch_size);
      lm_config.seed = resolve_seed(train_seed, seed);
      if (train_seed->count() == 0) train_seed->default_val(lm_config.seed);
      {
        std::vector<double> shares;
        std::stringstream ss(mask_split_text);
        std::string part;
        while (std::getline(ss, part, ',')) shares.push_back(std::stod(part));
        if (shares.size() != 3) throw UsageError("--mask-split needs three comma-separated shares");
        lm_config.mask_split = {shares[0], shares[1], shares[2]};
      }
      const Corpus corpus = clean_corpus(load_corpus(corpus_dir, Script::unknown));
      const Vocab lm_vocab = vocab_path.empty() ? lm_vocab_for(corpus) : read_vocab(vocab_path);
      const auto unk = lm_vocab.id("[UNK]");
      const auto mask = lm_vocab.id("[MASK]");
      if (!unk) throw DataError("vocabulary has no [UNK] token");
      if (objective == lm::Objective::mlm && !mask) throw DataError("vocabulary has no [MASK] token");
      lm_config.vocab_size = lm_vocab.size();
      lm_config.mask_id = mask.value_or(0);
      lm_config.first_regular_id = lm_vocab.reserved() < lm_vocab.size() ? lm_vocab.reserved() : 0;
      lm_config.validate();
      auto model = lm::ToyLM<double>::initialized(lm_config, objective);
      const auto stream = lm::encode_corpus(corpus, lm_vocab, *unk);
      const auto result = lm::train(model, std::span<const std::size_t>(stream));
      fs::create_directories(output);
      lm::save_model(fs::path(output) / "model.bin", model, lm_vocab);
      write_vocab(lm_vocab, fs::path(output) / "vocab.txt");
      auto csv = open_out(fs::path(output) / "loss.csv");
      csv << "epoch,loss\n";
      for (std::size_t e = 0; e < result.epoch_losses.size(); ++e) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu,%.10f\n", e + 1, result.epoch_losses[e]);
        csv << buf;
      }
      record_dir_run(train, "train-toy", output);
      if (!heldout_dir.empty()) {
        const Corpus heldout = clean_corpus(load_corpus(heldout_dir, Script::unknown));
        const auto held = lm::encode_corpus(heldout, lm_vocab, *unk);
        out << "perplexity\t" << format_double(lm::eval_perplexity(model, std::span<const std::size_t>(held)))
            << '\n';
      }
    } else if (eval->parsed()) {
      fs::path model_file(model_path);
      if (fs::is_directory(model_file)) model_file /= "model.bin";
      const lm::SavedModel saved = lm::load_model(model_file);
      const auto unk = saved.vocab.id("[UNK]");
      if (!unk) throw DataError("model vocabulary has no [UNK] token");
      const Corpus corpus = clean_corpus(load_corpus(corpus_dir, Script::unknown));
      const auto stream = lm::encode_corpus(corpus, saved.vocab, *unk);
      out << "perplexity\t" << format_double(lm::eval_perplexity(saved.model, std::span<const std::size_t>(stream)))
          << '\n';
    } else if (pipeline->parsed()) {
      pipe.input = input_dir;
      pipe.charmap = charmap_path;
      pipe.base_vocab = base_vocab_path;
      pipe.out = output;
      pipe.script = script_name == "unknown" ? Script::traditional : parse_script(script_name);
      pipe.ratios = parse_ratios(ratios_text);
      pipe.seed = resolve_seed(pipe_seed, seed);
      pipe.min_freq = min_freq;
      pipe.force = force;
      if (!stages_text.empty()) {
        std::stringstream ss(stages_text);
        std::string s;
        while (std::getline(ss, s, ',')) pipe.stages.push_back(s);
      }
      const Manifest manifest = run_pipeline(pipe);
      for (const auto& r : manifest.stages) {
        err << "pipeline: " << r.stage << (r.skipped ? " (unchanged)" : "") << " -> " << r.output << " "
            << r.output_digest << '\n';
      }
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "guji: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "guji: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "guji: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace guji::cli
