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

#ifndef LZSPA_FILTERING_HPP_
#define LZSPA_FILTERING_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lzspa/random.hpp"
#include "lzspa/spa.hpp"
#include "lzspa/types.hpp"

namespace lzspa {

// Discrete memoryless channel. Row x, column z holds P(Z = z | X = x).
//
// The clean-to-noisy map on distributions is P_Z = Pi^T P_X. Its left
// inverse, written Pi^{-T} below, is (Pi Pi^T)^{-1} Pi; it exists whenever
// Pi has full row rank, which covers square invertible channels and
// channels with more outputs than inputs.
class Channel {
 public:
  explicit Channel(const std::vector<std::vector<double>>& rows);

  static Channel identity(std::size_t size);
  static Channel binary_symmetric(double crossover);
  // X in {-1,+1} (symbols 0,1) plus equiprobable +-1 noise, giving
  // Z in {-2,0,+2} (symbols 0,1,2).
  static Channel additive_pm1_noise();

  std::size_t input_size() const noexcept { return static_cast<std::size_t>(pi_.rows()); }
  std::size_t output_size() const noexcept { return static_cast<std::size_t>(pi_.cols()); }
  double operator()(Symbol x, Symbol z) const { return pi_(x, z); }

  const Eigen::MatrixXd& matrix() const noexcept { return pi_; }
  const Eigen::MatrixXd& inverse_transpose() const noexcept { return inv_t_; }

  std::vector<double> to_input(std::span<const double> p_z) const;   // Pi^{-T} p_z
  std::vector<double> to_output(std::span<const double> p_x) const;  // Pi^T p_x

  // max |Pi^{-T}| entry times |A_X|.
  double c1() const;
  // max |Pi^{-T} Pi^T - I| entry.
  double inversion_residual() const;

  std::vector<std::vector<double>> rows() const;

 private:
  Eigen::MatrixXd pi_;
  Eigen::MatrixXd inv_t_;
};

// Loss Lambda(x, x_hat): rows are clean symbols, columns reconstructions.
class LossMatrix {
 public:
  explicit LossMatrix(const std::vector<std::vector<double>>& rows);

  static LossMatrix hamming(std::size_t size);
  // (value[x] - estimate[x_hat])^2 over real embeddings of both alphabets.
  static LossMatrix squared(std::span<const double> source_values,
                            std::span<const double> estimate_values);

  std::size_t source_size() const noexcept { return rows_.size(); }
  std::size_t estimate_size() const noexcept { return rows_.front().size(); }
  double operator()(Symbol x, Symbol x_hat) const { return rows_[x][x_hat]; }
  double max() const noexcept { return max_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::vector<double>> rows_;
  double max_ = 0.0;
};

// argmin_{x_hat} sum_x Lambda(x, x_hat) p(x); ties go to the lowest index.
Symbol bayes_response(std::span<const double> p_x, const LossMatrix& loss);

struct ClampedPmf {
  Pmf pmf;
  double clamp = 0.0;  // total negative mass removed before renormalizing
};

// Floors negative entries at zero and renormalizes. An all-zero input yields
// the uniform PMF.
ClampedPmf clamp_to_simplex(std::vector<double> v);

// Posterior of X_t given Z_t = z when P_{Z_t} = p_z:
//   Pi(., z) (Pi^{-T} p_z)(.) / p_z(z), clamped to the simplex.
ClampedPmf posterior_map(std::span<const double> p_z, const Channel& channel, Symbol z);

struct FilterRegime {
  enum class Kind { kCausal, kDelay, kLookahead };
  Kind kind = Kind::kCausal;
  std::size_t param = 0;  // delay d >= 1, or look-ahead l >= 0

  static FilterRegime causal() { return {Kind::kCausal, 0}; }
  static FilterRegime delay(std::size_t d) { return {Kind::kDelay, d}; }
  static FilterRegime lookahead(std::size_t l) { return {Kind::kLookahead, l}; }
  // "causal", "delay:<d>" or "lookahead:<l>".
  static FilterRegime parse(std::string_view text);
  std::string to_string() const;
};

struct FilterOutput {
  std::vector<Symbol> estimates;
  double max_clamp = 0.0;
};

// Mismatched causal filter: at each t the SPA's prediction of Z_t is pushed
// through the posterior map with the observed Z_t; the SPA then observes Z_t.
// `spa` is advanced through the whole noisy sequence.
FilterOutput causal_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                           std::span<const Symbol> noisy);

enum class Marginalization { kAuto, kExact, kMonteCarlo };

struct DelayOptions {
  std::size_t delay = 1;
  std::size_t mc_samples = 1000;
  std::uint64_t seed = 0;
  Marginalization method = Marginalization::kAuto;
  // kAuto enumerates exactly while |A_Z|^(d-1) stays at or below this.
  std::size_t exact_limit = 4096;
};

// Prediction of the symbol `steps` positions ahead, marginalizing the
// intermediate symbols by exhaustive enumeration. The SPA is left unchanged.
Pmf marginal_prediction_exact(Spa& spa, std::size_t steps);
// Same, estimated from `samples` sampled continuations. Continuations that
// share a prefix share the SPA work, so the cost is bounded by the number of
// distinct prefixes rather than samples * steps.
Pmf marginal_prediction_mc(Spa& spa, std::size_t steps, std::size_t samples, Rng& rng);

// Delayed filter: x_hat_t = Bayes response to Pi^{-T} Q(Z_t | Z^{t-d}).
FilterOutput delayed_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                            std::span<const Symbol> noisy, const DelayOptions& options);

// Look-ahead filter: Q(Z_t | Z^{t-1}, Z_{t+1}^{t+l}) by Bayes' rule over SPA
// rollouts, then the posterior map with the observed Z_t. Near the end of the
// sequence the window shrinks to the symbols available.
FilterOutput lookahead_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                              std::span<const Symbol> noisy, std::size_t lookahead);

// Runs the filter for `regime` (delay regime uses `delay_options` except for d).
FilterOutput run_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                        std::span<const Symbol> noisy, const FilterRegime& regime,
                        DelayOptions delay_options = {});

// First-order Markov source over the clean alphabet.
struct MarkovSource {
  std::vector<std::vector<double>> transition;  // transition[x][x']
  std::vector<double> initial;

  static MarkovSource symmetric_binary(double flip);
  std::size_t size() const { return initial.size(); }
  void validate() const;
};

// The true law of the noisy process as an SPA: forward recursion over the
// hidden Markov state. Used as the "known distribution" plug-in.
class HmmPredictiveSpa final : public Spa {
 public:
  HmmPredictiveSpa(MarkovSource source, Channel channel);

  std::size_t alphabet_size() const override { return channel_.output_size(); }
  Pmf next_dist() const override;
  void observe(Symbol z) override;
  void reset() override;
  void snapshot() override { saved_.push_back(predicted_x_); }
  void restore() override;
  void release() override;
  std::unique_ptr<Spa> clone() const override { return std::make_unique<HmmPredictiveSpa>(*this); }

  const std::vector<double>& predicted_state() const noexcept { return predicted_x_; }

 private:
  MarkovSource source_;
  Channel channel_;
  std::vector<double> predicted_x_;  // P(X_t | Z^{t-1})
  std::vector<std::vector<double>> saved_;
};

struct OracleResult {
  std::vector<Symbol> estimates;
  std::vector<Pmf> posteriors;  // P(X_t | observed window)
  double expected_loss = 0.0;   // mean over t of the posterior expected loss
};

// Bayes-optimal filter for a known Markov source computed directly in the
// clean-state domain: forward recursion (causal), forward recursion on the
// truncated prefix pushed d steps ahead (delay), forward-backward over the
// window (look-ahead).
OracleResult dp_optimal_filter(const MarkovSource& source, const Channel& channel,
                               const LossMatrix& loss, std::span<const Symbol> noisy,
                               const FilterRegime& regime);

struct ExcessLossBound {
  double c1 = 0.0;
  double lambda_max = 0.0;
  double kl_per_symbol = 0.0;  // bits
  double factor = 1.0;         // 1, d or 1 + l
  double value = 0.0;
};

// sqrt(2 C1 Lambda_max) * sqrt(factor * kl / n).
ExcessLossBound excess_loss_bound(double kl_bits, std::size_t n, const Channel& channel,
                                  const LossMatrix& loss, const FilterRegime& regime);

struct MarkovChannelSample {
  Sequence clean;  // 0 -> -1, 1 -> +1
  Sequence noisy;  // 0 -> -2, 1 -> 0, 2 -> +2
};

// Symmetric binary Markov source with flip probability p, started from its
// stationary law, observed through additive_pm1_noise().
MarkovChannelSample simulate_markov_channel(double flip, std::size_t n, std::uint64_t seed);

// Squared error on the {-1,+1} embedding with reconstructions {-1, 0, +1}.
LossMatrix markov_experiment_loss();

double mean_loss(std::span<const Symbol> clean, std::span<const Symbol> estimates,
                 const LossMatrix& loss);

}  // namespace lzspa

#endif  // LZSPA_FILTERING_HPP_
