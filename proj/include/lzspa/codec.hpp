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

#ifndef LZSPA_CODEC_HPP_
#define LZSPA_CODEC_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "lzspa/lz_transform.hpp"
#include "lzspa/spa.hpp"
#include "lzspa/types.hpp"

namespace lzspa {

// PMF quantized to integer frequencies summing to 2^kFrequencyBits. Every
// symbol keeps a frequency of at least one.
struct FrequencyTable {
  static constexpr int kFrequencyBits = 32;
  std::vector<std::uint64_t> freq;
  std::vector<std::uint64_t> cum;  // cum[a] = sum of freq[0..a)
};

FrequencyTable quantize(std::span<const double> probs);

// Byte-oriented range coder: 56-bit interval, carry propagation through a
// cached byte plus a run of pending 0xFF bytes.
class RangeEncoder {
 public:
  void encode(std::uint64_t cum, std::uint64_t freq);
  // Flushes the shortest tail that pins the final interval. Zero bytes past
  // the coded length are dropped; the decoder reads zeros past the end.
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint64_t range_ = (std::uint64_t{1} << 56) - 1;
  std::uint8_t cache_ = 0;
  std::uint64_t pending_ = 1;
  bool first_ = true;
  std::uint64_t shifts_ = 0;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> payload);
  Symbol decode(const FrequencyTable& table);

 private:
  std::uint8_t next_byte() { return pos_ < in_.size() ? in_[pos_++] : 0; }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint64_t code_ = 0;
  std::uint64_t range_ = (std::uint64_t{1} << 56) - 1;
};

enum class CodecMode : std::uint8_t { kAdaptive = 0, kStatic = 1 };

struct StreamHeader {
  CodecMode mode = CodecMode::kAdaptive;
  std::uint32_t alphabet_size = 0;
  std::uint64_t length = 0;
  SpaKind kind = SpaKind::kDirichlet;
  double gamma = 0.5;
  std::uint64_t model_hash = 0;  // static mode only

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

struct EncodedStream {
  StreamHeader header;
  std::vector<std::uint8_t> payload;

  std::size_t payload_bits() const { return payload.size() * 8; }
};

// Arithmetic-codes `seq` with the predictions of `model`, starting from the
// model's current state. The model is restored before returning.
std::vector<std::uint8_t> encode_payload(Spa& model, const Sequence& seq);
// Inverse of encode_payload: the decoder must start from the same model state.
Sequence decode_payload(std::span<const std::uint8_t> payload, std::size_t length, Spa& model);

// Adaptive mode: an empty LZ78-transformed Dirichlet(gamma) model on both ends.
EncodedStream compress_adaptive(const Sequence& seq, double gamma);
// Static mode: a frozen model shared out of band, identified by its hash.
EncodedStream compress_static(const LZTransformSpa& model, const Sequence& seq);
Sequence decompress(const EncodedStream& stream, const LZTransformSpa* model = nullptr);

// Container: magic "LZAC", version, mode, inner kind, alphabet size, n, gamma,
// model hash, payload length, payload, CRC-32 of everything before it.
std::vector<std::uint8_t> to_bytes(const EncodedStream& stream);
EncodedStream from_bytes(std::span<const std::uint8_t> bytes);

inline constexpr std::uint8_t kContainerVersion = 1;

}  // namespace lzspa

#endif  // LZSPA_CODEC_HPP_
