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

#include "guji/digest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <vector>

namespace guji {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ull;
  }
  return state;
}

namespace {

std::uint64_t digest_file(const fs::path& path, std::uint64_t state) {
  std::ifstream in(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64(bytes, state);
}

}  // namespace

std::uint64_t digest_path(const fs::path& path) {
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) return digest_file(path, 0xcbf29ce484222325ull);
  if (!fs::is_directory(path, ec)) return 0;
  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), path).generic_string());
  }
  std::sort(files.begin(), files.end());
  std::uint64_t state = 0xcbf29ce484222325ull;
  for (const auto& rel : files) {
    state = fnv1a64(rel, state);
    state = fnv1a64(std::string_view("\0", 1), state);
    state = digest_file(path / rel, state);
  }
  return state;
}

std::string to_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

}  // namespace guji
