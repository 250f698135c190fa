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


#include "lzspa/token_io.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace lzspa {
namespace {

constexpr std::string_view kHeader = "alphabet";

bool has_header(const std::string& content) {
  std::size_t i = 0;
  while (i < content.size() && (content[i] == ' ' || content[i] == '\t')) ++i;
  return content.compare(i, kHeader.size(), kHeader) == 0;
}

std::uint64_t parse_uint(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

Sequence parse_int_tokens(const std::string& content) {
  std::istringstream in(content);
  std::string word;
  in >> word;
  if (word != kHeader) throw std::invalid_argument("integer token file must start with 'alphabet <A>'");
  if (!(in >> word)) throw std::invalid_argument("missing alphabet size");
  const std::uint64_t a = parse_uint(word, "alphabet size");
  if (a < 2 || a > (std::uint64_t{1} << 32)) throw std::invalid_argument("alphabet size out of range");
  const Alphabet alphabet(static_cast<std::size_t>(a));
  std::vector<Symbol> tokens;
  while (in >> word) {
    const std::uint64_t v = parse_uint(word, "token");
    if (v >= a) throw AlphabetError("token " + word + " outside alphabet of size " + std::to_string(a));
    tokens.push_back(static_cast<Symbol>(v));
  }
  return Sequence(alphabet, std::move(tokens));
}

}  // namespace

TokenFormat parse_token_format(const std::string& name) {
  if (name == "auto") return TokenFormat::kAuto;
  if (name == "raw") return TokenFormat::kRaw;
  if (name == "int") return TokenFormat::kInt;
  throw std::invalid_argument("unknown token format '" + name + "' (auto, raw, int)");
}

Sequence parse_tokens(const std::string& content, TokenFormat format) {
  if (format == TokenFormat::kInt || (format == TokenFormat::kAuto && has_header(content))) {
    return parse_int_tokens(content);
  }
  std::vector<Symbol> tokens(content.size());
  for (std::size_t i = 0; i < content.size(); ++i) tokens[i] = static_cast<unsigned char>(content[i]);
  return Sequence(Alphabet(256), std::move(tokens));
}

std::string format_tokens(const Sequence& seq, TokenFormat format) {
  if (format == TokenFormat::kAuto) format = seq.alphabet().size() == 256 ? TokenFormat::kRaw : TokenFormat::kInt;
  if (format == TokenFormat::kRaw) {
    if (seq.alphabet().size() > 256) throw AlphabetError("raw token files hold at most 256 symbols");
    std::string out(seq.size(), '\0');
    for (std::size_t i = 0; i < seq.size(); ++i) out[i] = static_cast<char>(seq[i]);
    return out;
  }
  std::string out = std::string(kHeader) + " " + std::to_string(seq.alphabet().size()) + "\n";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out += std::to_string(seq[i]);
    out += (i + 1) % 32 == 0 || i + 1 == seq.size() ? '\n' : ' ';
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

Sequence read_tokens(const std::filesystem::path& path, TokenFormat format) {
  return parse_tokens(read_text(path), format);
}

void write_tokens(const std::filesystem::path& path, const Sequence& seq, TokenFormat format) {
  write_text(path, format_tokens(seq, format));
}

}  // namespace lzspa
