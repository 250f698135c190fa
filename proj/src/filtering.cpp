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


#include "lzspa/filtering.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lzspa {
namespace {

constexpr double kRowTolerance = 1e-9;

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

void check_noisy(std::span<const Symbol> noisy, const Channel& channel, const Spa& spa) {
  if (spa.alphabet_size() != channel.output_size()) {
    throw AlphabetError("SPA alphabet does not match the channel output alphabet");
  }
  for (Symbol z : noisy) {
    if (z >= channel.output_size()) throw AlphabetError("noisy symbol outside the channel output");
  }
}

void check_loss(const Channel& channel, const LossMatrix& loss) {
  if (loss.source_size() != channel.input_size()) {
    throw std::invalid_argument("loss rows do not match the channel input alphabet");
  }
}

// p_{t} -> p_{t} T
std::vector<double> push_forward(const MarkovSource& src, std::span<const double> p) {
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    for (std::size_t y = 0; y < p.size(); ++y) out[y] += p[x] * src.transition[x][y];
  }
  return out;
}

double normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (s > 0.0) {
    for (double& x : v) x /= s;
  }
  return s;
}

void mc_accumulate(Spa& spa, std::size_t steps, std::size_t count, Rng& rng,
                   std::vector<double>& acc) {
  const Pmf p = spa.next_dist();
  if (steps == 0) {
    for (std::size_t a = 0; a < acc.size(); ++a) acc[a] += static_cast<double>(count) * p[a];
    return;
  }
  // Same draws as Rng::sample, compared on the 53-bit integer grid.
  std::vector<std::uint64_t> bound;
  std::vector<Symbol> label;
  double acc_p = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    acc_p += p[a];
    bound.push_back(acc_p >= 1.0 ? std::uint64_t{1} << 53 : static_cast<std::uint64_t>(std::ceil(std::ldexp(acc_p, 53))));
    label.push_back(static_cast<Symbol>(a));
  }
  bound.back() = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::size_t> drawn(p.size(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t u = rng.next() >> 11;
    std::size_t j = 0;
    for (std::size_t b = 0; b + 1 < bound.size(); ++b) j += u >= bound[b] ? 1 : 0;
    ++drawn[label[j]];
  }
  for (std::size_t a = 0; a < drawn.size(); ++a) {
    if (drawn[a] == 0) continue;
    spa.snapshot();
    spa.observe(static_cast<Symbol>(a));
    mc_accumulate(spa, steps - 1, drawn[a], rng, acc);
    spa.restore();
  }
}

void exact_accumulate(Spa& spa, std::size_t steps, double weight, std::vector<double>& acc) {
  const Pmf p = spa.next_dist();
  if (steps == 0) {
    for (std::size_t a = 0; a < acc.size(); ++a) acc[a] += weight * p[a];
    return;
  }
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    spa.snapshot();
    spa.observe(static_cast<Symbol>(a));
    exact_accumulate(spa, steps - 1, weight * p[a], acc);
    spa.restore();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Channel

Channel::Channel(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty channel matrix");
  const std::size_t nx = rows.size();
  const std::size_t nz = rows.front().size();
  if (nx < 2 || nz < 2) throw std::invalid_argument("channel alphabets need at least two symbols");
  pi_.resize(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nz));
  for (std::size_t x = 0; x < nx; ++x) {
    if (rows[x].size() != nz) throw std::invalid_argument("ragged channel matrix");
    double sum = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      const double v = rows[x][z];
      if (!(v >= 0.0) || v > 1.0) throw std::invalid_argument("channel entries must lie in [0, 1]");
      pi_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(z)) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw std::invalid_argument("channel rows must sum to one");
    }
  }
  if (nz < nx) throw std::invalid_argument("channel has fewer outputs than inputs; not invertible");
  const Eigen::MatrixXd gram = pi_ * pi_.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (lu.rank() < static_cast<Eigen::Index>(nx)) {
    throw std::invalid_argument("channel matrix does not have full row rank");
  }
  inv_t_ = lu.solve(pi_);
  if (inversion_residual() > 1e-9) {
    throw std::invalid_argument("channel matrix is too ill-conditioned to invert");
  }
}

Channel Channel::identity(std::size_t size) {
  std::vector<std::vector<double>> rows(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) rows[i][i] = 1.0;
  return Channel(rows);
}

Channel Channel::binary_symmetric(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 1.0)) {
    throw std::invalid_argument("crossover probability must lie in [0, 1]");
  }
  return Channel({{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
}

Channel Channel::additive_pm1_noise() { return Channel({{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}}); }

std::vector<double> Channel::to_input(std::span<const double> p_z) const {
  if (p_z.size() != output_size()) throw AlphabetError("distribution size != channel output size");
  const Eigen::Map<const Eigen::VectorXd> v(p_z.data(), static_cast<Eigen::Index>(p_z.size()));
  const Eigen::VectorXd r = inv_t_ * v;
  return {r.data(), r.data() + r.size()};
}

std::vector<double> Channel::to_output(std::span<const double> p_x) const {
  if (p_x.size() != input_size()) throw AlphabetError("distribution size != channel input size");
  const Eigen::Map<const Eigen::VectorXd> v(p_x.data(), static_cast<Eigen::Index>(p_x.size()));
  const Eigen::VectorXd r = pi_.transpose() * v;
  return {r.data(), r.data() + r.size()};
}

double Channel::c1() const { return inv_t_.cwiseAbs().maxCoeff() * static_cast<double>(input_size()); }

double Channel::inversion_residual() const {
  const Eigen::MatrixXd prod = inv_t_ * pi_.transpose();
  const auto n = static_cast<Eigen::Index>(input_size());
  return (prod - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

std::vector<std::vector<double>> Channel::rows() const {
  std::vector<std::vector<double>> out(input_size(), std::vector<double>(output_size()));
  for (std::size_t x = 0; x < input_size(); ++x) {
    for (std::size_t z = 0; z < output_size(); ++z) {
      out[x][z] = pi_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(z));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loss

LossMatrix::LossMatrix(const std::vector<std::vector<double>>& rows) : rows_(rows) {
  if (rows_.empty() || rows_.front().empty()) throw std::invalid_argument("empty loss matrix");
  for (const auto& r : rows_) {
    if (r.size() != rows_.front().size()) throw std::invalid_argument("ragged loss matrix");
    for (double v : r) {
      if (!std::isfinite(v)) throw std::invalid_argument("loss entries must be finite");
      max_ = std::max(max_, v);
    }
  }
}

LossMatrix LossMatrix::hamming(std::size_t size) {
  std::vector<std::vector<double>> rows(size, std::vector<double>(size, 1.0));
  for (std::size_t i = 0; i < size; ++i) rows[i][i] = 0.0;
  return LossMatrix(rows);
}

LossMatrix LossMatrix::squared(std::span<const double> source_values,
                               std::span<const double> estimate_values) {
  std::vector<std::vector<double>> rows(source_values.size(),
                                        std::vector<double>(estimate_values.size()));
  for (std::size_t x = 0; x < source_values.size(); ++x) {
    for (std::size_t e = 0; e < estimate_values.size(); ++e) {
      const double d = source_values[x] - estimate_values[e];
      rows[x][e] = d * d;
    }
  }
  return LossMatrix(rows);
}

Symbol bayes_response(std::span<const double> p_x, const LossMatrix& loss) {
  if (p_x.size() != loss.source_size()) throw AlphabetError("posterior size != loss rows");
  Symbol best = 0;
  double best_risk = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < loss.estimate_size(); ++e) {
    double risk = 0.0;
    for (std::size_t x = 0; x < p_x.size(); ++x) risk += p_x[x] * loss(static_cast<Symbol>(x), static_cast<Symbol>(e));
    if (risk < best_risk) {
      best_risk = risk;
      best = static_cast<Symbol>(e);
    }
  }
  return best;
}

ClampedPmf clamp_to_simplex(std::vector<double> v) {
  ClampedPmf out;
  double sum = 0.0;
  for (double& x : v) {
    if (x < 0.0 || std::isnan(x)) {
      out.clamp += std::isnan(x) ? 0.0 : -x;
      x = 0.0;
    }
    sum += x;
  }
  if (sum <= 0.0) {
    out.pmf = Pmf::uniform(v.size());
    return out;
  }
  for (double& x : v) x /= sum;
  out.pmf = Pmf(std::move(v));
  return out;
}

ClampedPmf posterior_map(std::span<const double> p_z, const Channel& channel, Symbol z) {
  if (z >= channel.output_size()) throw AlphabetError("observed symbol outside the channel output");
  const std::vector<double> px = channel.to_input(p_z);
  std::vector<double> post(px.size());
  // p_z(z) only rescales; a zero value would be a zero-probability event, so
  // the clamp-and-normalize step absorbs it either way.
  const double pz = p_z[z] > 0.0 ? p_z[z] : 1.0;
  for (std::size_t x = 0; x < px.size(); ++x) post[x] = channel(static_cast<Symbol>(x), z) * px[x] / pz;
  return clamp_to_simplex(std::move(post));
}

// ---------------------------------------------------------------------------
// Regimes

FilterRegime FilterRegime::parse(std::string_view text) {
  if (text == "causal") return causal();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view name = text.substr(0, colon);
    const std::string_view num = text.substr(colon + 1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec == std::errc() && ptr == num.data() + num.size() && !num.empty()) {
      if (name == "delay" && value >= 1) return delay(value);
      if (name == "lookahead") return lookahead(value);
    }
  }
  throw std::invalid_argument("bad filter regime '" + std::string(text) +
                              "' (expected causal, delay:<d> with d >= 1, or lookahead:<l>)");
}

std::string FilterRegime::to_string() const {
  switch (kind) {
    case Kind::kCausal: return "causal";
    case Kind::kDelay: return "delay:" + std::to_string(param);
    case Kind::kLookahead: return "lookahead:" + std::to_string(param);
  }
  return "causal";
}

// ---------------------------------------------------------------------------
// Mismatched filters

FilterOutput causal_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                           std::span<const Symbol> noisy) {
  check_noisy(noisy, channel, spa);
  check_loss(channel, loss);
  FilterOutput out;
  out.estimates.reserve(noisy.size());
  for (Symbol z : noisy) {
    const Pmf q = spa.next_dist();
    const ClampedPmf post = posterior_map(q.probs(), channel, z);
    out.max_clamp = std::max(out.max_clamp, post.clamp);
    out.estimates.push_back(bayes_response(post.pmf.probs(), loss));
    spa.observe(z);
  }
  return out;
}

Pmf marginal_prediction_exact(Spa& spa, std::size_t steps) {
  std::vector<double> acc(spa.alphabet_size(), 0.0);
  exact_accumulate(spa, steps, 1.0, acc);
  return Pmf(std::move(acc));
}

Pmf marginal_prediction_mc(Spa& spa, std::size_t steps, std::size_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
  std::vector<double> acc(spa.alphabet_size(), 0.0);
  mc_accumulate(spa, steps, samples, rng, acc);
  for (double& v : acc) v /= static_cast<double>(samples);
  return Pmf(std::move(acc));
}

FilterOutput delayed_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                            std::span<const Symbol> noisy, const DelayOptions& options) {
  check_noisy(noisy, channel, spa);
  check_loss(channel, loss);
  const std::size_t d = options.delay;
  if (d == 0) throw std::invalid_argument("delay must be at least 1");
  if (d > noisy.size()) throw std::invalid_argument("delay exceeds the sequence length");
  bool exact = false;
  switch (options.method) {
    case Marginalization::kExact: exact = true; break;
    case Marginalization::kMonteCarlo: exact = false; break;
    case Marginalization::kAuto:
      exact = checked_power(channel.output_size(), d - 1, options.exact_limit) <= options.exact_limit;
      break;
  }
  Rng rng(options.seed);
  FilterOutput out;
  out.estimates.reserve(noisy.size());
  std::size_t observed = 0;
  for (std::size_t t = 1; t <= noisy.size(); ++t) {
    const std::size_t target = t > d ? t - d : 0;
    while (observed < target) spa.observe(noisy[observed++]);
    const std::size_t steps = t - 1 - observed;
    const Pmf q = steps == 0 ? spa.next_dist()
                  : exact    ? marginal_prediction_exact(spa, steps)
                             : marginal_prediction_mc(spa, steps, options.mc_samples, rng);
    const ClampedPmf px = clamp_to_simplex(channel.to_input(q.probs()));
    out.max_clamp = std::max(out.max_clamp, px.clamp);
    out.estimates.push_back(bayes_response(px.pmf.probs(), loss));
  }
  while (observed < noisy.size()) spa.observe(noisy[observed++]);
  return out;
}

FilterOutput lookahead_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                              std::span<const Symbol> noisy, std::size_t lookahead) {
  check_noisy(noisy, channel, spa);
  check_loss(channel, loss);
  const std::size_t n = noisy.size();
  const std::size_t az = channel.output_size();
  FilterOutput out;
  out.estimates.reserve(n);
  std::vector<double> logw(az);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t window = std::min(lookahead, n - 1 - t);
    Pmf q = spa.next_dist();
    if (window > 0) {
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < az; ++a) {
        if (q[a] <= 0.0) {
          logw[a] = -std::numeric_limits<double>::infinity();
          continue;
        }
        double lw = std::log(q[a]);
        spa.snapshot();
        spa.observe(static_cast<Symbol>(a));
        for (std::size_t j = 1; j <= window && std::isfinite(lw); ++j) {
          lw += std::log(spa.prob(noisy[t + j]));
          if (j < window) spa.observe(noisy[t + j]);
        }
        spa.restore();
        logw[a] = lw;
        top = std::max(top, lw);
      }
      if (std::isfinite(top)) {
        std::vector<double> w(az);
        for (std::size_t a = 0; a < az; ++a) w[a] = std::exp(logw[a] - top);
        normalize(w);
        q = Pmf(std::move(w));
      }
    }
    const ClampedPmf post = posterior_map(q.probs(), channel, noisy[t]);
    out.max_clamp = std::max(out.max_clamp, post.clamp);
    out.estimates.push_back(bayes_response(post.pmf.probs(), loss));
    spa.observe(noisy[t]);
  }
  return out;
}

FilterOutput run_filter(Spa& spa, const Channel& channel, const LossMatrix& loss,
                        std::span<const Symbol> noisy, const FilterRegime& regime,
                        DelayOptions delay_options) {
  switch (regime.kind) {
    case FilterRegime::Kind::kCausal: return causal_filter(spa, channel, loss, noisy);
    case FilterRegime::Kind::kDelay:
      delay_options.delay = regime.param;
      return delayed_filter(spa, channel, loss, noisy, delay_options);
    case FilterRegime::Kind::kLookahead:
      return lookahead_filter(spa, channel, loss, noisy, regime.param);
  }
  throw std::invalid_argument("unknown filter regime");
}

// ---------------------------------------------------------------------------
// Known-source filters

MarkovSource MarkovSource::symmetric_binary(double flip) {
  if (!(flip >= 0.0 && flip <= 1.0)) throw std::invalid_argument("flip probability must lie in [0, 1]");
  return MarkovSource{{{1.0 - flip, flip}, {flip, 1.0 - flip}}, {0.5, 0.5}};
}

void MarkovSource::validate() const {
  const std::size_t n = initial.size();
  if (n < 2 || transition.size() != n) throw std::invalid_argument("malformed Markov source");
  auto check_row = [](std::span<const double> row) {
    double s = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw std::invalid_argument("negative probability in Markov source");
      s += v;
    }
    if (std::abs(s - 1.0) > kRowTolerance) throw std::invalid_argument("Markov source rows must sum to one");
  };
  check_row(initial);
  for (const auto& r : transition) {
    if (r.size() != n) throw std::invalid_argument("ragged transition matrix");
    check_row(r);
  }
}

HmmPredictiveSpa::HmmPredictiveSpa(MarkovSource source, Channel channel)
    : source_(std::move(source)), channel_(std::move(channel)) {
  source_.validate();
  if (source_.size() != channel_.input_size()) {
    throw std::invalid_argument("Markov source size != channel input size");
  }
  predicted_x_ = source_.initial;
}

Pmf HmmPredictiveSpa::next_dist() const { return Pmf(channel_.to_output(predicted_x_)); }

void HmmPredictiveSpa::observe(Symbol z) {
  if (z >= channel_.output_size()) throw AlphabetError("symbol outside the channel output");
  std::vector<double> post(predicted_x_.size());
  for (std::size_t x = 0; x < post.size(); ++x) post[x] = predicted_x_[x] * channel_(static_cast<Symbol>(x), z);
  if (normalize(post) <= 0.0) throw std::domain_error("observed symbol has zero probability under the model");
  predicted_x_ = push_forward(source_, post);
}

void HmmPredictiveSpa::reset() {
  predicted_x_ = source_.initial;
  saved_.clear();
}

void HmmPredictiveSpa::restore() {
  if (saved_.empty()) throw std::logic_error("restore() without a matching snapshot()");
  predicted_x_ = std::move(saved_.back());
  saved_.pop_back();
}

void HmmPredictiveSpa::release() {
  if (saved_.empty()) throw std::logic_error("release() without a matching snapshot()");
  saved_.pop_back();
}

OracleResult dp_optimal_filter(const MarkovSource& source, const Channel& channel,
                               const LossMatrix& loss, std::span<const Symbol> noisy,
                               const FilterRegime& regime) {
  source.validate();
  check_loss(channel, loss);
  if (source.size() != channel.input_size()) throw std::invalid_argument("Markov source size != channel input size");
  const std::size_t n = noisy.size();
  const std::size_t nx = source.size();
  for (Symbol z : noisy) {
    if (z >= channel.output_size()) throw AlphabetError("noisy symbol outside the channel output");
  }

  // predicted[t] = P(X_{t+1} | Z^t), filtered[t] = P(X_{t+1} | Z^{t+1}), 0-based.
  std::vector<std::vector<double>> predicted(n + 1), filtered(n);
  predicted[0] = source.initial;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> post(nx);
    for (std::size_t x = 0; x < nx; ++x) post[x] = predicted[t][x] * channel(static_cast<Symbol>(x), noisy[t]);
    if (normalize(post) <= 0.0) throw std::domain_error("noisy sequence has zero probability under the source");
    filtered[t] = post;
    predicted[t + 1] = push_forward(source, post);
  }

  OracleResult out;
  out.estimates.reserve(n);
  out.posteriors.reserve(n);
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> p;
    switch (regime.kind) {
      case FilterRegime::Kind::kCausal: p = filtered[t]; break;
      case FilterRegime::Kind::kDelay: {
        const std::size_t d = regime.param;
        if (d == 0 || d > n) throw std::invalid_argument("delay must lie in [1, n]");
        const std::size_t observed = t + 1 > d ? t + 1 - d : 0;
        p = predicted[observed];
        for (std::size_t k = observed; k < t; ++k) p = push_forward(source, p);
        break;
      }
      case FilterRegime::Kind::kLookahead: {
        const std::size_t end = std::min(n - 1, t + regime.param);
        std::vector<double> beta(nx, 1.0);
        for (std::size_t j = end; j > t; --j) {
          std::vector<double> next(nx, 0.0);
          for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t y = 0; y < nx; ++y) {
              next[x] += source.transition[x][y] * channel(static_cast<Symbol>(y), noisy[j]) * beta[y];
            }
          }
          normalize(next);
          beta = std::move(next);
        }
        p.resize(nx);
        for (std::size_t x = 0; x < nx; ++x) p[x] = filtered[t][x] * beta[x];
        normalize(p);
        break;
      }
    }
    const Symbol e = bayes_response(p, loss);
    for (std::size_t x = 0; x < nx; ++x) total += p[x] * loss(static_cast<Symbol>(x), e);
    out.estimates.push_back(e);
    out.posteriors.emplace_back(std::move(p));
  }
  out.expected_loss = n == 0 ? 0.0 : total / static_cast<double>(n);
  return out;
}

ExcessLossBound excess_loss_bound(double kl_bits, std::size_t n, const Channel& channel,
                                  const LossMatrix& loss, const FilterRegime& regime) {
  if (n == 0) throw std::invalid_argument("bound needs n > 0");
  ExcessLossBound b;
  b.c1 = channel.c1();
  b.lambda_max = loss.max();
  b.kl_per_symbol = std::max(0.0, kl_bits) / static_cast<double>(n);
  switch (regime.kind) {
    case FilterRegime::Kind::kCausal: b.factor = 1.0; break;
    case FilterRegime::Kind::kDelay: b.factor = static_cast<double>(regime.param); break;
    case FilterRegime::Kind::kLookahead: b.factor = 1.0 + static_cast<double>(regime.param); break;
  }
  b.value = std::sqrt(2.0 * b.c1 * b.lambda_max) * std::sqrt(b.factor * b.kl_per_symbol);
  return b;
}

MarkovChannelSample simulate_markov_channel(double flip, std::size_t n, std::uint64_t seed) {
  if (!(flip >= 0.0 && flip <= 1.0)) throw std::invalid_argument("flip probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Symbol> x(n), z(n);
  Symbol state = rng.bernoulli(0.5) ? 1 : 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0 && rng.bernoulli(flip)) state ^= 1U;
    x[t] = state;
    z[t] = state + (rng.bernoulli(0.5) ? 1U : 0U);
  }
  return {Sequence(Alphabet(2), std::move(x)), Sequence(Alphabet(3), std::move(z))};
}

LossMatrix markov_experiment_loss() {
  const double source[] = {-1.0, 1.0};
  const double estimate[] = {-1.0, 0.0, 1.0};
  return LossMatrix::squared(source, estimate);
}

double mean_loss(std::span<const Symbol> clean, std::span<const Symbol> estimates,
                 const LossMatrix& loss) {
  if (clean.size() != estimates.size()) throw std::invalid_argument("length mismatch");
  if (clean.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) total += loss(clean[i], estimates[i]);
  return total / static_cast<double>(clean.size());
}

}  // namespace lzspa
