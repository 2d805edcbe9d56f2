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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "guji/error.hpp"

namespace guji::lm {

enum class Objective { mlm, clm };

inline std::string_view to_string(Objective objective) {
  return objective == Objective::mlm ? "mlm" : "clm";
}

inline Objective parse_objective(std::string_view name) {
  if (name == "mlm") return Objective::mlm;
  if (name == "clm") return Objective::clm;
  throw UsageError("unknown objective: " + std::string(name));
}

// Hyperparameters. Defaults: lr 2e-5, 5 epochs, batch 32 (mlm) / 16 (clm),
// 15% masking, on a small model.
struct LMConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 64;
  std::size_t context_len = 128;
  std::size_t n_heads = 2;
  std::size_t n_layers = 2;
  double learning_rate = 2e-5;
  double momentum = 0.9;
  std::size_t epochs = 5;
  std::size_t batch_size = 32;
  double mask_rate = 0.15;
  // Shares of selected positions replaced by MASK, by a random token, or
  // left unchanged.
  std::array<double, 3> mask_split{0.8, 0.1, 0.1};
  std::size_t mask_id = 0;
  // Random replacements are drawn from [first_regular_id, vocab_size).
  std::size_t first_regular_id = 0;
  std::uint64_t seed = 0;

  std::size_t ffn_dim() const { return 4 * embed_dim; }
  std::size_t head_dim() const { return embed_dim / n_heads; }

  void validate() const {
    auto fail = [](const std::string& what) { throw UsageError("invalid LM config: " + what); };
    if (vocab_size == 0 || embed_dim == 0 || context_len == 0 || n_heads == 0 ||
        n_layers == 0 || epochs == 0 || batch_size == 0) {
      fail("all counts must be positive");
    }
    if (context_len < 2) fail("context_len must be at least 2");
    if (embed_dim % n_heads != 0) fail("embed_dim must be divisible by n_heads");
    if (!(mask_rate > 0 && mask_rate < 1)) fail("mask_rate must lie in (0, 1)");
    if (!(learning_rate > 0)) fail("learning_rate must be positive");
    if (!(momentum >= 0 && momentum < 1)) fail("momentum must lie in [0, 1)");
    if (mask_id >= vocab_size) fail("mask_id out of range");
    if (first_regular_id >= vocab_size) fail("first_regular_id out of range");
    double total = 0;
    for (double s : mask_split) {
      if (s < 0) fail("mask_split shares must be non-negative");
      total += s;
    }
    if (total <= 0) fail("mask_split must have a positive share");
  }
};

inline LMConfig default_config(Objective objective) {
  LMConfig config;
  config.batch_size = objective == Objective::mlm ? 32 : 16;
  return config;
}

}  // namespace guji::lm
