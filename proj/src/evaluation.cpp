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


#include "lzspa/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace lzspa {
namespace {

void check_pmf(std::span<const double> p, const char* what) {
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative probability");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument(std::string(what) + ": does not sum to one");
}

void check_feasible(std::size_t a, std::size_t n) {
  std::size_t states = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (states > kMaxKlStates / a) throw std::invalid_argument("A^n exceeds the 2^20 enumeration limit");
    states *= a;
  }
}

struct KlWalker {
  const SourceSpec& source;
  std::size_t n;
  double kl = 0.0;

  // Model provides q(s) at the current state plus push(s) / pop().
  template <typename Model>
  void walk(Model& model, std::size_t depth, const Symbol* prev, double p, double log_ratio) {
    if (depth == n) {
      kl += p * log_ratio;
      return;
    }
    for (Symbol s = 0; s < source.alphabet_size(); ++s) {
      const double ps = source.conditional(s, prev);
      if (ps <= 0.0) continue;
      const double qs = model.q(s);
      if (qs <= 0.0) {
        kl = std::numeric_limits<double>::infinity();
        return;
      }
      model.push(s);
      walk(model, depth + 1, &s, p * ps, log_ratio + std::log2(ps / qs));
      model.pop();
    }
  }
};

struct FrozenView {
  explicit FrozenView(const LZTransformSpa& m) : model(m) {}

  const LZTransformSpa& model;
  std::vector<ParseCursor> stack{ParseCursor{}};
  Pmf cached;
  NodeId cached_node = static_cast<NodeId>(-1);

  double q(Symbol s) {
    const NodeId node = stack.back().node;
    if (node != cached_node) {
      cached = model.dist_at(node);
      cached_node = node;
    }
    return cached[s];
  }
  void push(Symbol s) { stack.push_back(model.advance(stack.back(), s)); }
  void pop() { stack.pop_back(); }
};

struct SpaView {
  Spa& spa;
  double q(Symbol s) { return spa.prob(s); }
  void push(Symbol s) {
    spa.snapshot();
    spa.observe(s);
  }
  void pop() { spa.restore(); }
};

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SourceSpec SourceSpec::iid(std::vector<double> pmf) {
  check_pmf(pmf, "iid source");
  Alphabet(pmf.size());
  SourceSpec s;
  s.kind_ = Kind::kIid;
  s.initial_ = std::move(pmf);
  return s;
}

SourceSpec SourceSpec::markov1(std::vector<std::vector<double>> transition, std::vector<double> initial) {
  check_pmf(initial, "Markov initial law");
  Alphabet(initial.size());
  if (transition.size() != initial.size()) throw std::invalid_argument("transition matrix size mismatch");
  for (const auto& row : transition) {
    if (row.size() != initial.size()) throw std::invalid_argument("ragged transition matrix");
    check_pmf(row, "Markov transition row");
  }
  SourceSpec s;
  s.kind_ = Kind::kMarkov1;
  s.initial_ = std::move(initial);
  s.transition_ = std::move(transition);
  return s;
}

double SourceSpec::conditional(Symbol s, const Symbol* prev) const {
  if (s >= alphabet_size()) throw AlphabetError("symbol outside the source alphabet");
  if (kind_ == Kind::kIid || prev == nullptr) return initial_[s];
  return transition_[*prev][s];
}

double SourceSpec::probability(std::span<const Symbol> xs) const {
  double p = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) p *= conditional(xs[i], i == 0 ? nullptr : &xs[i - 1]);
  return p;
}

Sequence SourceSpec::sample(std::size_t n, Rng& rng) const {
  std::vector<Symbol> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = (kind_ == Kind::kIid || i == 0) ? rng.sample(initial_) : rng.sample(transition_[xs[i - 1]]);
  }
  return Sequence(Alphabet(alphabet_size()), std::move(xs));
}

double exact_kl(const SourceSpec& source, const LZTransformSpa& model, std::size_t n) {
  if (model.alphabet_size() != source.alphabet_size()) throw AlphabetError("model/source alphabet mismatch");
  check_feasible(source.alphabet_size(), n);
  KlWalker w{source, n};
  FrozenView view{model};
  w.walk(view, 0, nullptr, 1.0, 0.0);
  return w.kl;
}

double exact_kl(const SourceSpec& source, Spa& model, std::size_t n) {
  if (model.alphabet_size() != source.alphabet_size()) throw AlphabetError("model/source alphabet mismatch");
  check_feasible(source.alphabet_size(), n);
  KlWalker w{source, n};
  SpaView view{model};
  w.walk(view, 0, nullptr, 1.0, 0.0);
  return w.kl;
}

std::vector<double> histogram(const Sequence& seq) {
  std::vector<double> h(seq.alphabet().size(), 0.0);
  for (Symbol s : seq.tokens()) h[s] += 1.0;
  if (!seq.empty()) {
    for (double& v : h) v /= static_cast<double>(seq.size());
  }
  return h;
}

double wasserstein_1d(std::span<const double> hist_a, std::span<const double> hist_b) {
  if (hist_a.size() != hist_b.size()) throw std::invalid_argument("histogram length mismatch");
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < hist_a.size(); ++i) {
    if (!(hist_a[i] >= 0.0) || !(hist_b[i] >= 0.0)) throw std::invalid_argument("negative histogram entry");
    sa += hist_a[i];
    sb += hist_b[i];
  }
  if (!(sa > 0.0) || !(sb > 0.0)) throw std::invalid_argument("empty histogram");
  double ca = 0.0, cb = 0.0, total = 0.0;
  for (std::size_t i = 0; i + 1 < hist_a.size(); ++i) {
    ca += hist_a[i] / sa;
    cb += hist_b[i] / sb;
    total += std::abs(ca - cb);
  }
  return total;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

ConvergenceReport convergence_experiment(const SourceSpec& source, const ConvergenceConfig& config) {
  if (config.gammas.empty() || config.m_grid.empty() || config.seeds == 0) {
    throw std::invalid_argument("convergence grid is empty");
  }
  check_feasible(source.alphabet_size(), config.n);
  const std::size_t ng = config.gammas.size();
  const std::size_t tasks = config.m_grid.size() * config.seeds;
  // kl[task][gamma]
  std::vector<std::vector<double>> kl(tasks, std::vector<double>(ng, 0.0));

  auto run_task = [&](std::size_t task) {
    const std::size_t mi = task / config.seeds;
    const std::size_t seed = task % config.seeds;
    Rng rng(mix_seed(config.base_seed, config.m_grid[mi], seed));
    std::vector<Sequence> train;
    train.reserve(config.m_grid[mi]);
    for (std::size_t i = 0; i < config.m_grid[mi]; ++i) train.push_back(source.sample(config.n, rng));
    LZTransformSpa model(Alphabet(source.alphabet_size()), SpaFamily::dirichlet(config.gammas.front()));
    model.train(train);
    model.freeze();
    for (std::size_t g = 0; g < ng; ++g) {
      model.set_gamma(config.gammas[g]);
      kl[task][g] = exact_kl(source, model, config.n);
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(config.threads, static_cast<unsigned>(tasks)));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < tasks; t += workers) run_task(t);
      });
    }
  }

  ConvergenceReport report;
  for (std::size_t g = 0; g < ng; ++g) {
    ConvergenceSummary sum;
    sum.gamma = config.gammas[g];
    sum.m_grid = config.m_grid;
    sum.all_nonnegative = true;
    for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi) {
      std::vector<double> per_seed;
      for (std::size_t s = 0; s < config.seeds; ++s) {
        const double v = kl[mi * config.seeds + s][g];
        report.rows.push_back({config.gammas[g], config.m_grid[mi], s, v});
        per_seed.push_back(v);
        // Round-off can leave a true zero slightly negative.
        if (v < -1e-12) sum.all_nonnegative = false;
      }
      sum.median_kl.push_back(median(per_seed));
    }
    bool trend = true;
    for (std::size_t i = 1; i < sum.median_kl.size(); ++i) {
      if (sum.median_kl[i] > sum.median_kl[i - 1]) {
        ++sum.inversions;
        if (sum.median_kl[i] > sum.median_kl[i - 1] * (1.0 + config.noise_band)) trend = false;
      }
    }
    sum.trend_ok = trend && sum.inversions <= 1;
    sum.final_ok = sum.median_kl.back() < config.final_threshold;
    report.summaries.push_back(std::move(sum));
  }
  return report;
}

}  // namespace lzspa
