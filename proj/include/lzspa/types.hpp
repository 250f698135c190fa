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

#ifndef LZSPA_TYPES_HPP_
#define LZSPA_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lzspa {

using Symbol = std::uint32_t;

// Raised when two artifacts that must agree (model, stream, data) do not.
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a symbol or sequence does not belong to the expected alphabet.
class AlphabetError : public MismatchError {
 public:
  using MismatchError::MismatchError;
};

// A finite alphabet {0, ..., size-1}.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool contains(Symbol s) const noexcept { return s < size_; }
  void check(Symbol s) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

// An ordered, validated list of symbols over an alphabet.
class Sequence {
 public:
  explicit Sequence(Alphabet alphabet) : alphabet_(alphabet) {}
  Sequence(Alphabet alphabet, std::vector<Symbol> tokens);

  // Digits '0'..'9' map to symbols 0..9; handy for small worked examples.
  static Sequence from_digits(Alphabet alphabet, std::string_view digits);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Symbol> tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  Symbol operator[](std::size_t i) const { return tokens_[i]; }

  void push_back(Symbol s);

  Sequence prefix(std::size_t n) const;
  Sequence slice(std::size_t begin, std::size_t length) const;
  Sequence concat(const Sequence& other) const;

  std::string to_digits() const;

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Symbol> tokens_;
};

// A probability vector on the alphabet simplex.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(std::vector<double> probs) : probs_(std::move(probs)) {}

  static Pmf uniform(std::size_t size);
  static Pmf point_mass(std::size_t size, Symbol at);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  double& operator[](std::size_t i) { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::vector<double>& mutable_probs() noexcept { return probs_; }

  // Non-negative entries summing to one within `tol`.
  bool is_valid(double tol = 1e-9) const;
  Symbol argmax() const;

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  std::vector<double> probs_;
};

struct LogLossReport {
  double total_bits = 0.0;
  double per_symbol_bits = 0.0;
  std::size_t length = 0;
};

// log2(1/p), +infinity for p == 0.
double surprisal_bits(double p);

// Shannon entropy in bits of a histogram of counts.
double entropy_of_counts(std::span<const std::uint64_t> counts);

// Zero-order empirical entropy: the per-symbol loss of the best iid predictor.
double empirical_entropy_mu0(std::span<const Symbol> tokens, std::size_t alphabet_size);
double empirical_entropy_mu0(const Sequence& seq);

// Best per-symbol loss of any order-k Markov predictor in hindsight. The
// first k symbols cost nothing and the total is normalized by the full length.
double markov_entropy_mu_k(const Sequence& seq, std::size_t k);

}  // namespace lzspa

#endif  // LZSPA_TYPES_HPP_
