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


#include <doctest.h>

#include <filesystem>

#include "lzspa/token_io.hpp"

using namespace lzspa;

TEST_CASE("int token files") {
  const Sequence s = parse_tokens("alphabet 5\n0 4 3\n2  1\n", TokenFormat::kAuto);
  CHECK(s.alphabet().size() == 5);
  CHECK(s.to_digits() == "04321");
  CHECK(parse_tokens(format_tokens(s, TokenFormat::kInt)) == s);
  CHECK_THROWS_AS(parse_tokens("alphabet 3\n0 3\n", TokenFormat::kInt), AlphabetError);
  CHECK_THROWS_AS(parse_tokens("alphabet 3\n0 x\n", TokenFormat::kInt), std::invalid_argument);
  CHECK_THROWS_AS(parse_tokens("0 1 2\n", TokenFormat::kInt), std::invalid_argument);
}

TEST_CASE("raw token files use the byte alphabet") {
  const std::string text = "hello\n";
  const Sequence s = parse_tokens(text, TokenFormat::kAuto);
  CHECK(s.alphabet().size() == 256);
  CHECK(s[0] == 'h');
  CHECK(format_tokens(s, TokenFormat::kAuto) == text);
  CHECK_THROWS_AS(format_tokens(parse_tokens("alphabet 300\n0 299", TokenFormat::kInt), TokenFormat::kRaw),
                  AlphabetError);
  CHECK(parse_token_format("int") == TokenFormat::kInt);
  CHECK_THROWS(parse_token_format("csv"));
}

TEST_CASE("file helpers report I/O failures") {
  const auto dir = std::filesystem::temp_directory_path() / "lzspa_token_io_test";
  std::filesystem::create_directories(dir);
  const Sequence s = parse_tokens("alphabet 90\n89 0 45\n");
  write_tokens(dir / "t.txt", s);
  CHECK(read_tokens(dir / "t.txt") == s);
  CHECK_THROWS_AS(read_tokens(dir / "missing.txt"), IoError);
  CHECK_THROWS_AS(write_text(dir / "no" / "such" / "dir.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}
