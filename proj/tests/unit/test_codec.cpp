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

#include <numeric>

#include "lzspa/codec.hpp"
#include "lzspa/random.hpp"

using namespace lzspa;

namespace {

Sequence skewed_seq(Rng& rng, std::size_t n, std::size_t a) {
  // Geometric-ish symbol law so the coder sees both likely and rare symbols.
  std::vector<double> p(a);
  for (std::size_t i = 0; i < a; ++i) p[i] = std::pow(0.8, static_cast<double>(i));
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
  Sequence seq{Alphabet(a)};
  for (std::size_t i = 0; i < n; ++i) seq.push_back(rng.sample(p));
  return seq;
}

}  // namespace

TEST_CASE("quantized tables keep every symbol codable") {
  const std::vector<double> p = {1.0, 0.0, 0.0};
  const FrequencyTable t = quantize(p);
  CHECK(t.cum.back() == (std::uint64_t{1} << 32));
  for (auto f : t.freq) CHECK(f >= 1);
  const std::vector<double> q = {0.25, 0.25, 0.5};
  const FrequencyTable u = quantize(q);
  CHECK(u.cum.back() == (std::uint64_t{1} << 32));
  CHECK(u.freq[2] > u.freq[0]);
}

TEST_CASE("range coder round-trips extreme frequency tables") {
  Rng rng(3);
  std::vector<FrequencyTable> tables;
  tables.push_back(quantize(std::vector<double>{1.0 - 1e-12, 1e-12}));
  tables.push_back(quantize(std::vector<double>{0.5, 0.5}));
  tables.push_back(quantize(std::vector<double>(256, 1.0 / 256)));
  std::vector<std::pair<std::size_t, Symbol>> msgs;
  RangeEncoder enc;
  for (int i = 0; i < 20000; ++i) {
    const std::size_t t = rng.below(tables.size());
    const Symbol s = static_cast<Symbol>(rng.below(tables[t].freq.size()));
    msgs.emplace_back(t, s);
    enc.encode(tables[t].cum[s], tables[t].freq[s]);
  }
  const auto bytes = enc.finish();
  RangeDecoder dec(bytes);
  for (const auto& [t, s] : msgs) REQUIRE(dec.decode(tables[t]) == s);
}

TEST_CASE("adaptive coding is lossless and tracks the log loss") {
  Rng rng(1);
  for (std::size_t a : {2u, 4u, 90u, 256u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Sequence seq = skewed_seq(rng, rng.below(3000), a);
      const EncodedStream stream = compress_adaptive(seq, 0.5);
      const EncodedStream parsed = from_bytes(to_bytes(stream));
      CHECK(parsed.header == stream.header);
      REQUIRE(decompress(parsed) == seq);
      if (seq.empty()) continue;
      LZTransformSpa m(seq.alphabet(), SpaFamily::dirichlet(0.5));
      const double loss = m.evaluate_log_loss(seq).total_bits;
      const double bits = static_cast<double>(stream.payload_bits());
      CHECK(bits >= loss - 16.0);
      CHECK(bits <= loss + 64.0);
    }
  }
}

TEST_CASE("static coding needs the matching model") {
  Rng rng(2);
  LZTransformSpa m(Alphabet(4), SpaFamily::dirichlet(0.5));
  m.train(skewed_seq(rng, 20000, 4));
  m.freeze();
  const Sequence seq = skewed_seq(rng, 5000, 4);
  const EncodedStream s = compress_static(m, seq);
  CHECK(decompress(s, &m) == seq);
  const double loss = m.evaluate_frozen(seq).total_bits;
  CHECK(static_cast<double>(s.payload_bits()) <= loss + 64.0);
  CHECK_THROWS_AS(decompress(s), std::invalid_argument);

  LZTransformSpa other(Alphabet(4), SpaFamily::dirichlet(0.5));
  other.train(skewed_seq(rng, 100, 4));
  other.freeze();
  CHECK_THROWS_AS(decompress(s, &other), MismatchError);
  LZTransformSpa unfrozen(Alphabet(4), SpaFamily::dirichlet(0.5));
  CHECK_THROWS_AS(compress_static(unfrozen, seq), std::logic_error);
}

TEST_CASE("container rejects damage") {
  Rng rng(4);
  const auto bytes = to_bytes(compress_adaptive(skewed_seq(rng, 500, 3), 0.5));
  auto corrupt = bytes;
  corrupt[30] ^= 0x10;
  CHECK_THROWS_AS(from_bytes(corrupt), FormatError);
  auto magic = bytes;
  magic[1] = 'X';
  CHECK_THROWS_AS(from_bytes(magic), FormatError);
  const std::vector<std::uint8_t> cut(bytes.begin(), bytes.end() - 5);
  CHECK_THROWS_AS(from_bytes(cut), FormatError);
}

TEST_CASE("encode_payload leaves the model where it started") {
  Rng rng(5);
  LZTransformSpa m(Alphabet(2), SpaFamily::dirichlet(0.5));
  m.train(skewed_seq(rng, 1000, 2));
  const LZ78Tree before = m.tree();
  const Sequence seq = skewed_seq(rng, 300, 2);
  const auto payload = encode_payload(m, seq);
  CHECK(m.tree() == before);
  CHECK(decode_payload(payload, seq.size(), m) == seq);
  CHECK(m.tree() == before);
}
