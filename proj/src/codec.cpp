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

#include "lzspa/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "bytes.hpp"

namespace lzspa {

namespace {

constexpr int kCoderBits = 56;
constexpr std::uint64_t kTop = std::uint64_t{1} << kCoderBits;
constexpr std::uint64_t kLowMask = kTop - 1;
constexpr std::uint64_t kBottom = std::uint64_t{1} << (kCoderBits - 8);
constexpr char kContainerMagic[4] = {'L', 'Z', 'A', 'C'};

}  // namespace

FrequencyTable quantize(std::span<const double> probs) {
  const std::size_t a = probs.size();
  constexpr std::uint64_t total = std::uint64_t{1} << FrequencyTable::kFrequencyBits;
  const double spread = static_cast<double>(total - a);
  FrequencyTable t;
  t.freq.resize(a);
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a; ++i) {
    const double p = std::clamp(probs[i], 0.0, 1.0);
    t.freq[i] = 1 + static_cast<std::uint64_t>(std::floor(p * spread));
    sum += t.freq[i];
  }
  if (sum > total) {
    // Only reachable when the input does not sum to one.
    throw std::invalid_argument("quantize: probabilities sum above one");
  }
  const auto top = static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  t.freq[top] += total - sum;
  t.cum.resize(a + 1);
  t.cum[0] = 0;
  for (std::size_t i = 0; i < a; ++i) t.cum[i + 1] = t.cum[i] + t.freq[i];
  return t;
}

void RangeEncoder::shift_low() {
  if (low_ < (std::uint64_t{0xFF} << (kCoderBits - 8)) || low_ >= kTop) {
    const auto carry = static_cast<std::uint8_t>(low_ >> kCoderBits);
    if (first_) {
      first_ = false;  // the leading byte is always zero
    } else {
      out_.push_back(static_cast<std::uint8_t>(cache_ + carry));
    }
    for (; pending_ > 1; --pending_) out_.push_back(static_cast<std::uint8_t>(0xFF + carry));
    pending_ = 0;
    cache_ = static_cast<std::uint8_t>((low_ >> (kCoderBits - 8)) & 0xFF);
  }
  ++pending_;
  low_ = (low_ << 8) & kLowMask;
}

void RangeEncoder::encode(std::uint64_t cum, std::uint64_t freq) {
  const std::uint64_t r = range_ >> FrequencyTable::kFrequencyBits;
  low_ += r * cum;
  range_ = r * freq;
  while (range_ < kBottom) {
    range_ <<= 8;
    shift_low();
    ++shifts_;
  }
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  // Pick the point of [low, low + range) with the most trailing zero bits.
  int tail = 0;
  for (int s = kCoderBits; s >= 0; --s) {
    const std::uint64_t m = (std::uint64_t{1} << s) - 1;
    const std::uint64_t v = (low_ + m) & ~m;
    if (v - low_ < range_) {
      low_ = v;
      tail = kCoderBits - s;
      break;
    }
  }
  for (int i = 0; i < kCoderBits / 8 + 1; ++i) shift_low();
  const std::uint64_t keep = (8 * shifts_ + static_cast<std::uint64_t>(tail) + 7) / 8;
  while (out_.size() > keep && out_.back() == 0) out_.pop_back();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> payload) : in_(payload) {
  for (int i = 0; i < kCoderBits / 8; ++i) code_ = (code_ << 8) | next_byte();
}

Symbol RangeDecoder::decode(const FrequencyTable& table) {
  const std::uint64_t r = range_ >> FrequencyTable::kFrequencyBits;
  const std::uint64_t total = table.cum.back();
  const std::uint64_t v = std::min(code_ / r, total - 1);
  const auto it = std::upper_bound(table.cum.begin(), table.cum.end(), v);
  const auto s = static_cast<Symbol>((it - table.cum.begin()) - 1);
  code_ -= r * table.cum[s];
  range_ = r * table.freq[s];
  while (range_ < kBottom) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return s;
}

std::vector<std::uint8_t> encode_payload(Spa& model, const Sequence& seq) {
  if (seq.alphabet().size() != model.alphabet_size()) {
    throw AlphabetError("sequence alphabet does not match the coding model");
  }
  ScopedRestore guard(model);
  RangeEncoder enc;
  for (Symbol s : seq.tokens()) {
    const Pmf p = model.next_dist();
    if (!(p[s] > 0.0)) throw std::domain_error("model assigns zero probability to a coded symbol");
    const FrequencyTable t = quantize(p.probs());
    enc.encode(t.cum[s], t.freq[s]);
    model.observe(s);
  }
  return enc.finish();
}

Sequence decode_payload(std::span<const std::uint8_t> payload, std::size_t length, Spa& model) {
  ScopedRestore guard(model);
  const Alphabet alphabet(model.alphabet_size());
  std::vector<Symbol> out;
  out.reserve(length);
  RangeDecoder dec(payload);
  for (std::size_t i = 0; i < length; ++i) {
    const Pmf p = model.next_dist();
    const Symbol s = dec.decode(quantize(p.probs()));
    out.push_back(s);
    model.observe(s);
  }
  return Sequence(alphabet, std::move(out));
}

EncodedStream compress_adaptive(const Sequence& seq, double gamma) {
  LZTransformSpa model(seq.alphabet(), SpaFamily::dirichlet(gamma));
  EncodedStream stream;
  stream.header = StreamHeader{CodecMode::kAdaptive,
                               static_cast<std::uint32_t>(seq.alphabet().size()),
                               seq.size(),
                               SpaKind::kDirichlet,
                               gamma,
                               0};
  stream.payload = encode_payload(model, seq);
  return stream;
}

EncodedStream compress_static(const LZTransformSpa& model, const Sequence& seq) {
  if (!model.frozen()) throw std::logic_error("static compression requires a frozen model");
  LZTransformSpa coder = model;
  coder.begin_sequence();
  EncodedStream stream;
  stream.header = StreamHeader{CodecMode::kStatic,
                               static_cast<std::uint32_t>(seq.alphabet().size()),
                               seq.size(),
                               model.family().kind(),
                               model.family().gamma(),
                               model.model_hash()};
  stream.payload = encode_payload(coder, seq);
  return stream;
}

Sequence decompress(const EncodedStream& stream, const LZTransformSpa* model) {
  const StreamHeader& h = stream.header;
  if (h.mode == CodecMode::kAdaptive) {
    if (h.kind != SpaKind::kDirichlet) throw FormatError(FormatErrc::kCorrupt, "adaptive stream kind");
    LZTransformSpa fresh(Alphabet(h.alphabet_size), SpaFamily::dirichlet(h.gamma));
    return decode_payload(stream.payload, h.length, fresh);
  }
  if (model == nullptr) throw std::invalid_argument("static stream needs its model");
  if (model->alphabet_size() != h.alphabet_size) {
    throw AlphabetError("model alphabet does not match the stream");
  }
  if (model->model_hash() != h.model_hash) {
    throw MismatchError("stream was encoded with a different model");
  }
  LZTransformSpa coder = *model;
  coder.begin_sequence();
  return decode_payload(stream.payload, h.length, coder);
}

std::vector<std::uint8_t> to_bytes(const EncodedStream& stream) {
  const StreamHeader& h = stream.header;
  detail::ByteWriter w;
  w.raw(kContainerMagic, 4);
  w.u8(kContainerVersion);
  w.u8(static_cast<std::uint8_t>(h.mode));
  w.u8(static_cast<std::uint8_t>(h.kind));
  w.u8(0);
  w.u32(h.alphabet_size);
  w.u64(h.length);
  w.f64(h.gamma);
  w.u64(h.model_hash);
  w.u64(stream.payload.size());
  w.bytes(stream.payload);
  const std::uint32_t crc = detail::crc32(w.buffer());
  w.u32(crc);
  return std::move(w.buffer());
}

EncodedStream from_bytes(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  const auto magic = r.bytes(4);
  if (std::memcmp(magic.data(), kContainerMagic, 4) != 0) {
    throw FormatError(FormatErrc::kVersion, "not an lzspa stream");
  }
  const std::uint8_t version = r.u8();
  if (version != kContainerVersion) {
    throw FormatError(FormatErrc::kVersion, "stream version " + std::to_string(version));
  }
  EncodedStream s;
  const std::uint8_t mode = r.u8();
  const std::uint8_t kind = r.u8();
  r.u8();
  s.header.alphabet_size = r.u32();
  s.header.length = r.u64();
  s.header.gamma = r.f64();
  s.header.model_hash = r.u64();
  const std::uint64_t payload_len = r.u64();
  if (r.remaining() < 4 || r.remaining() - 4 < payload_len) {
    throw FormatError(FormatErrc::kTruncated, "payload shorter than declared");
  }
  const auto payload = r.bytes(payload_len);
  const std::size_t body_end = r.position();
  const std::uint32_t stored = r.u32();
  if (detail::crc32(bytes.first(body_end)) != stored) {
    throw FormatError(FormatErrc::kChecksum, "stream checksum mismatch");
  }
  if (r.remaining() != 0) throw FormatError(FormatErrc::kCorrupt, "trailing bytes");
  if (mode > 1) throw FormatError(FormatErrc::kCorrupt, "unknown coding mode");
  if (kind > 1) throw FormatError(FormatErrc::kCorrupt, "unknown inner SPA kind");
  if (s.header.alphabet_size < 2) throw FormatError(FormatErrc::kCorrupt, "alphabet size below 2");
  s.header.mode = static_cast<CodecMode>(mode);
  s.header.kind = static_cast<SpaKind>(kind);
  s.payload.assign(payload.begin(), payload.end());
  return s;
}

}  // namespace lzspa
