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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "guji/corpus.hpp"

namespace guji {

// Fixture-scale corpus pipeline:
//   clean -> to_simplified, to_traditional -> merge -> vocab -> split
// Each stage writes under `out` and reads only outputs of earlier stages.
struct PipelineConfig {
  std::filesystem::path input;       // raw corpus directory
  std::filesystem::path charmap;     // traditional TAB simplified table
  std::filesystem::path base_vocab;  // vocabulary to expand
  std::filesystem::path out;
  Script script = Script::traditional;  // script of the raw corpus
  std::vector<std::size_t> ratios{99, 1};
  std::uint64_t seed = 0;
  std::size_t min_freq = 1;
  std::vector<std::string> stages;  // empty = all, in canonical order
  bool force = false;               // rerun stages even when unchanged
};

const std::vector<std::string>& pipeline_stages();

struct StageRecord {
  std::string stage;
  std::string input_digest;
  std::string output;  // path relative to `out`
  std::string output_digest;
  bool skipped = false;
};

struct Manifest {
  std::string created;  // UTC timestamp; the only clock-dependent field
  std::vector<StageRecord> stages;
};

// Runs the declared stages in order and writes out/manifest.json. A stage
// whose input digest and existing output digest match the previous
// manifest is skipped unless `force` is set.
Manifest run_pipeline(const PipelineConfig& config);

}  // namespace guji
