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


#ifndef LZSPA_EVALUATION_HPP_
#define LZSPA_EVALUATION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "lzspa/lz_transform.hpp"
#include "lzspa/random.hpp"
#include "lzspa/spa.hpp"
#include "lzspa/types.hpp"

namespace lzspa {

// A known source law: iid or first-order Markov.
class SourceSpec {
 public:
  enum class Kind { kIid, kMarkov1 };

  static SourceSpec iid(std::vector<double> pmf);
  static SourceSpec markov1(std::vector<std::vector<double>> transition, std::vector<double> initial);

  Kind kind() const noexcept { return kind_; }
  std::size_t alphabet_size() const noexcept { return initial_.size(); }
  // The iid pmf, or the Markov initial law.
  const std::vector<double>& initial() const noexcept { return initial_; }
  const std::vector<std::vector<double>>& transition() const noexcept { return transition_; }

  // P(x_{t} = s | previous symbol); `prev` is ignored for iid sources and for t = 0.
  double conditional(Symbol s, const Symbol* prev) const;
  double probability(std::span<const Symbol> xs) const;
  Sequence sample(std::size_t n, Rng& rng) const;

 private:
  Kind kind_ = Kind::kIid;
  std::vector<double> initial_;
  std::vector<std::vector<double>> transition_;
};

inline constexpr std::size_t kMaxKlStates = std::size_t{1} << 20;

// D(P_{X^n} || Q_{X^n}) in bits by enumerating all of A^n (at most 2^20
// sequences). Q is the frozen model parsed from the root.
double exact_kl(const SourceSpec& source, const LZTransformSpa& model, std::size_t n);
// Same for an arbitrary SPA starting from its current state; the state is
// restored afterwards.
double exact_kl(const SourceSpec& source, Spa& model, std::size_t n);

// Normalized symbol histogram of a sequence.
std::vector<double> histogram(const Sequence& seq);

// Earth mover's distance between two histograms on the ordered alphabet with
// unit spacing: sum over symbols of |CDF_a - CDF_b|. Inputs are normalized.
double wasserstein_1d(std::span<const double> hist_a, std::span<const double> hist_b);

struct ConvergenceConfig {
  std::vector<double> gammas = {0.05};
  std::vector<std::size_t> m_grid = {100, 1000, 10000};
  std::size_t n = 4;
  std::size_t seeds = 5;
  std::uint64_t base_seed = 0;
  double final_threshold = 0.05;
  double noise_band = 0.10;  // relative tolerance for the single allowed inversion
  unsigned threads = 1;
};

struct ConvergenceRow {
  double gamma = 0.0;
  std::size_t m = 0;
  std::size_t seed = 0;
  double kl_bits = 0.0;
};

struct ConvergenceSummary {
  double gamma = 0.0;
  std::vector<std::size_t> m_grid;
  std::vector<double> median_kl;
  std::size_t inversions = 0;
  bool trend_ok = false;      // non-increasing, one inversion inside the noise band allowed
  bool final_ok = false;      // last median below the threshold
  bool all_nonnegative = false;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSummary> summaries;  // one per gamma
};

// For every (m, seed) trains a fresh model on m independent length-n source
// sequences, freezes it and computes the exhaustive KL at each gamma.
ConvergenceReport convergence_experiment(const SourceSpec& source, const ConvergenceConfig& config);

double median(std::vector<double> values);

}  // namespace lzspa

#endif  // LZSPA_EVALUATION_HPP_
