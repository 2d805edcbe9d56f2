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

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "guji/lm/model.hpp"
#include "guji/vocab.hpp"

namespace guji::lm {

// Binary model container, all integers and floats little-endian:
//
//   magic        8 bytes  "GUJILM\0\1"
//   arch         u32 length + bytes (kArchitecture)
//   objective    u32      0 = mlm, 1 = clm
//   counts       u64 x 9  vocab_size embed_dim context_len n_heads n_layers
//                         epochs batch_size mask_id first_regular_id
//   seed         u64
//   reals        f64 x 6  learning_rate momentum mask_rate mask_split[0..2]
//   vocab        u64 count, then per token u32 length + UTF-8 bytes
//   tensors      u64 count, then per tensor u64 rows, u64 cols and
//                rows*cols f64 values in row-major order, in
//                Params::visit order
struct SavedModel {
  ToyLM<double> model;
  Vocab vocab;  // empty when the model was saved without one
};

void save_model(std::ostream& out, const ToyLM<double>& model, const Vocab& vocab);
void save_model(const std::filesystem::path& path, const ToyLM<double>& model, const Vocab& vocab);
SavedModel load_model(std::istream& in);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace guji::lm
