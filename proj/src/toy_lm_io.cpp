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

#include "guji/lm/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "guji/error.hpp"

namespace guji::lm {
namespace {

constexpr char kMagic[8] = {'G', 'U', 'J', 'I', 'L', 'M', '\0', '\1'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  void le(std::uint64_t v, int n) {
    char buf[8];
    for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(buf, n);
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string bytes() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw DataError("model file is truncated");
  }

 private:
  std::uint64_t le(int n) {
    unsigned char buf[8];
    read(reinterpret_cast<char*>(buf), static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }
  std::istream& in_;
};

}  // namespace

void save_model(std::ostream& out, const ToyLM<double>& model, const Vocab& vocab) {
  const LMConfig& c = model.config();
  Writer w(out);
  out.write(kMagic, sizeof kMagic);
  w.bytes(kArchitecture);
  w.u32(model.objective() == Objective::mlm ? 0 : 1);
  for (std::size_t v : {c.vocab_size, c.embed_dim, c.context_len, c.n_heads, c.n_layers, c.epochs,
                        c.batch_size, c.mask_id, c.first_regular_id}) {
    w.u64(v);
  }
  w.u64(c.seed);
  for (double v : {c.learning_rate, c.momentum, c.mask_rate, c.mask_split[0], c.mask_split[1],
                   c.mask_split[2]}) {
    w.f64(v);
  }
  w.u64(vocab.size());
  for (const auto& tok : vocab.tokens()) w.bytes(tok);
  const auto tensors = model.params().tensors();
  w.u64(tensors.size());
  for (const auto& t : tensors) {
    w.u64(static_cast<std::uint64_t>(t.rows));
    w.u64(static_cast<std::uint64_t>(t.cols));
    // storage is column-major; emit row-major
    for (Eigen::Index r = 0; r < t.rows; ++r) {
      for (Eigen::Index col = 0; col < t.cols; ++col) {
        w.f64(t.values[static_cast<std::size_t>(col * t.rows + r)]);
      }
    }
  }
  if (!out) throw DataError("failed writing model");
}

void save_model(const std::filesystem::path& path, const ToyLM<double>& model, const Vocab& vocab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(out, model, vocab);
}

SavedModel load_model(std::istream& in) {
  Reader r(in);
  char magic[sizeof kMagic];
  r.read(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw DataError("not a guji model file");
  const std::string arch = r.bytes();
  if (arch != kArchitecture) throw DataError("unsupported model architecture \"" + arch + "\"");
  const std::uint32_t objective = r.u32();
  if (objective > 1) throw DataError("bad objective tag in model file");
  LMConfig c;
  for (std::size_t* field : {&c.vocab_size, &c.embed_dim, &c.context_len, &c.n_heads, &c.n_layers,
                             &c.epochs, &c.batch_size, &c.mask_id, &c.first_regular_id}) {
    *field = static_cast<std::size_t>(r.u64());
  }
  c.seed = r.u64();
  for (double* field : {&c.learning_rate, &c.momentum, &c.mask_rate, &c.mask_split[0],
                        &c.mask_split[1], &c.mask_split[2]}) {
    *field = r.f64();
  }
  const std::uint64_t n_tokens = r.u64();
  std::vector<std::string> tokens;
  for (std::uint64_t i = 0; i < n_tokens; ++i) tokens.push_back(r.bytes());
  std::size_t reserved = 0;
  while (reserved < tokens.size() && is_special_token(tokens[reserved])) ++reserved;
  SavedModel saved{ToyLM<double>(c, objective == 0 ? Objective::mlm : Objective::clm),
                   Vocab(std::move(tokens), reserved)};
  auto tensors = saved.model.params().tensors();
  if (r.u64() != tensors.size()) throw DataError("model file tensor count does not match its config");
  for (auto& t : tensors) {
    const auto rows = static_cast<Eigen::Index>(r.u64());
    const auto cols = static_cast<Eigen::Index>(r.u64());
    if (rows != t.rows || cols != t.cols) {
      throw DataError("tensor " + t.name + " has the wrong shape in the model file");
    }
    for (Eigen::Index row = 0; row < rows; ++row) {
      for (Eigen::Index col = 0; col < cols; ++col) {
        t.values[static_cast<std::size_t>(col * rows + row)] = r.f64();
      }
    }
  }
  return saved;
}

SavedModel load_model(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) throw DataError(path.string() + " is a directory, not a model file");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return load_model(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace guji::lm
