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

#include "lzspa/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace lzspa {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size < 2) {
    throw AlphabetError("alphabet size must be at least 2, got " + std::to_string(size));
  }
}

void Alphabet::check(Symbol s) const {
  if (!contains(s)) {
    throw AlphabetError("symbol " + std::to_string(s) + " outside alphabet of size " +
                        std::to_string(size_));
  }
}

Sequence::Sequence(Alphabet alphabet, std::vector<Symbol> tokens)
    : alphabet_(alphabet), tokens_(std::move(tokens)) {
  for (Symbol s : tokens_) alphabet_.check(s);
}

Sequence Sequence::from_digits(Alphabet alphabet, std::string_view digits) {
  std::vector<Symbol> tokens;
  tokens.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw AlphabetError(std::string("not a digit: ") + c);
    tokens.push_back(static_cast<Symbol>(c - '0'));
  }
  return Sequence(alphabet, std::move(tokens));
}

void Sequence::push_back(Symbol s) {
  alphabet_.check(s);
  tokens_.push_back(s);
}

Sequence Sequence::prefix(std::size_t n) const {
  return slice(0, std::min(n, tokens_.size()));
}

Sequence Sequence::slice(std::size_t begin, std::size_t length) const {
  if (begin > tokens_.size() || length > tokens_.size() - begin) {
    throw std::out_of_range("sequence slice out of range");
  }
  Sequence out(alphabet_);
  out.tokens_.assign(tokens_.begin() + static_cast<std::ptrdiff_t>(begin),
                     tokens_.begin() + static_cast<std::ptrdiff_t>(begin + length));
  return out;
}

Sequence Sequence::concat(const Sequence& other) const {
  if (!(other.alphabet_ == alphabet_)) throw AlphabetError("cannot concatenate across alphabets");
  Sequence out = *this;
  out.tokens_.insert(out.tokens_.end(), other.tokens_.begin(), other.tokens_.end());
  return out;
}

std::string Sequence::to_digits() const {
  std::string out;
  out.reserve(tokens_.size());
  for (Symbol s : tokens_) {
    if (s > 9) throw AlphabetError("symbol has no single-digit form");
    out.push_back(static_cast<char>('0' + s));
  }
  return out;
}

Pmf Pmf::uniform(std::size_t size) {
  return Pmf(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Pmf Pmf::point_mass(std::size_t size, Symbol at) {
  std::vector<double> p(size, 0.0);
  p.at(at) = 1.0;
  return Pmf(std::move(p));
}

bool Pmf::is_valid(double tol) const {
  if (probs_.empty()) return false;
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

Symbol Pmf::argmax() const {
  // std::max_element returns the first maximum, i.e. the lowest index.
  return static_cast<Symbol>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

double surprisal_bits(double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log2(p);
}

double entropy_of_counts(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double empirical_entropy_mu0(std::span<const Symbol> tokens, std::size_t alphabet_size) {
  if (tokens.empty()) throw std::invalid_argument("empirical entropy of an empty sequence");
  std::vector<std::uint64_t> hist(alphabet_size, 0);
  for (Symbol s : tokens) ++hist.at(s);
  return entropy_of_counts(hist);
}

double empirical_entropy_mu0(const Sequence& seq) {
  return empirical_entropy_mu0(seq.tokens(), seq.alphabet().size());
}

namespace {

// Sum over context buckets of |bucket| * H(bucket), in bits.
template <typename Map>
double bucket_loss(const Map& buckets) {
  double total = 0.0;
  for (const auto& [ctx, hist] : buckets) {
    std::uint64_t size = 0;
    for (auto c : hist) size += c;
    total += static_cast<double>(size) * entropy_of_counts(hist);
  }
  return total;
}

}  // namespace

double markov_entropy_mu_k(const Sequence& seq, std::size_t k) {
  const std::size_t n = seq.size();
  if (k >= n) {
    throw std::invalid_argument("markov order k=" + std::to_string(k) +
                                " must be smaller than the sequence length " + std::to_string(n));
  }
  const std::size_t a = seq.alphabet().size();
  const auto tokens = seq.tokens();

  // Contexts fit in a 64-bit base-A code whenever A^k < 2^63.
  const bool packable = static_cast<double>(k) * std::log2(static_cast<double>(a)) < 63.0;
  double total = 0.0;
  if (packable) {
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> buckets;
    for (std::size_t t = k; t < n; ++t) {
      std::uint64_t code = 0;
      for (std::size_t j = t - k; j < t; ++j) code = code * a + tokens[j];
      auto& hist = buckets[code];
      if (hist.empty()) hist.assign(a, 0);
      ++hist[tokens[t]];
    }
    total = bucket_loss(buckets);
  } else {
    std::map<std::vector<Symbol>, std::vector<std::uint64_t>> buckets;
    for (std::size_t t = k; t < n; ++t) {
      std::vector<Symbol> ctx(tokens.begin() + static_cast<std::ptrdiff_t>(t - k),
                              tokens.begin() + static_cast<std::ptrdiff_t>(t));
      auto& hist = buckets[ctx];
      if (hist.empty()) hist.assign(a, 0);
      ++hist[tokens[t]];
    }
    total = bucket_loss(buckets);
  }
  return total / static_cast<double>(n);
}

}  // namespace lzspa
