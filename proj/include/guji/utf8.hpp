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
#include <string>
#include <string_view>

namespace guji::utf8 {

// Decodes UTF-8 into code points. Throws DataError naming the byte offset of
// the first invalid sequence (overlong forms and surrogates are invalid).
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
std::string encode(char32_t c);

// Byte offset of the first invalid sequence, or npos when valid.
std::size_t find_invalid(std::string_view bytes);

// Number of code points; input must be valid.
std::size_t length(std::string_view bytes);

// Decodes exactly one code point; throws DataError otherwise.
char32_t single(std::string_view bytes);

}  // namespace guji::utf8
