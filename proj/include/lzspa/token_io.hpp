// Copyright 2026 The lzspa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef LZSPA_TOKEN_IO_HPP_
#define LZSPA_TOKEN_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzspa/types.hpp"

namespace lzspa {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Token files come in two formats:
//   raw  every byte is a symbol of the 256-symbol alphabet;
//   int  a header line "alphabet <A>" followed by whitespace-separated
//        integers in [0, A).
// kAuto picks int when the file starts with the header, raw otherwise.
enum class TokenFormat { kAuto, kRaw, kInt };

TokenFormat parse_token_format(const std::string& name);

Sequence parse_tokens(const std::string& content, TokenFormat format = TokenFormat::kAuto);
std::string format_tokens(const Sequence& seq, TokenFormat format);

Sequence read_tokens(const std::filesystem::path& path, TokenFormat format = TokenFormat::kAuto);
// kAuto writes raw for 256-symbol sequences and int otherwise.
void write_tokens(const std::filesystem::path& path, const Sequence& seq,
                  TokenFormat format = TokenFormat::kAuto);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace lzspa

#endif  // LZSPA_TOKEN_IO_HPP_
