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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers as arguments to run
// a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "lzspa/bench.hpp"
#include "lzspa/classifier.hpp"
#include "lzspa/codec.hpp"
#include "lzspa/evaluation.hpp"
#include "lzspa/filtering.hpp"
#include "lzspa/generation.hpp"
#include "lzspa/lz_transform.hpp"
#include "lzspa/random.hpp"

using namespace lzspa;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string digits(const std::vector<Symbol>& v) {
  std::string s;
  for (Symbol x : v) s.push_back(static_cast<char>('0' + x));
  return s;
}

// 1. Worked parsing example.
Outcome worked_example() {
  Outcome o;
  const Sequence seq = Sequence::from_digits(Alphabet(2), "00011001");
  const auto t0 = Clock::now();
  LZ78Tree tree(Alphabet(2));
  const auto ys = parse_recording_subsequences(tree, seq.tokens());
  const double dt = seconds_since(t0);
  std::vector<std::string> phrases;
  for (const auto& p : tree.phrases()) phrases.push_back(digits(p));
  o.require(phrases == std::vector<std::string>{"0", "00", "1", "10", "01"}, "phrases 0,00,1,10,01");
  o.require(digits(ys[kRootNode]) == "00110", "Y{root}=(0,0,1,1,0)");
  o.require(ys.size() > 1 && digits(ys[1]) == "01", "Y{0}=(0,1)");
  o.require(dt < 1e-3, fmt("%.1f us", dt * 1e6));
  return o;
}

// 2. Dirichlet SPA against hand-derived values.
Outcome dirichlet_formula() {
  Outcome o;
  struct Point {
    std::vector<std::uint64_t> counts;
    double gamma;
    std::vector<double> expected;
  };
  const std::vector<Point> points = {
      {{0, 0}, 0.5, {1.0 / 2.0, 1.0 / 2.0}},
      {{3, 1}, 0.5, {7.0 / 10.0, 3.0 / 10.0}},
      {{2, 0, 1}, 1.0, {1.0 / 2.0, 1.0 / 6.0, 1.0 / 3.0}},
      {{5, 0}, 0.1, {51.0 / 52.0, 1.0 / 52.0}},
      {{1, 2, 3, 4}, 0.25, {5.0 / 44.0, 9.0 / 44.0, 13.0 / 44.0, 17.0 / 44.0}},
      {{0, 7, 0}, 2.0, {2.0 / 13.0, 9.0 / 13.0, 2.0 / 13.0}},
  };
  double worst = 0.0;
  for (const auto& p : points) {
    DirichletSpa spa(p.counts.size(), p.gamma);
    for (std::size_t a = 0; a < p.counts.size(); ++a) spa.observe_n(static_cast<Symbol>(a), p.counts[a]);
    const Pmf q = spa.next_dist();
    for (std::size_t a = 0; a < q.size(); ++a) worst = std::max(worst, std::fabs(q[a] - p.expected[a]));
  }
  o.require(worst <= 1e-12, std::to_string(points.size()) + " points, max error " + fmt("%.1e", worst));
  return o;
}

double binary_entropy(double p) { return -(p * std::log2(p) + (1 - p) * std::log2(1 - p)); }

// 3. Universality at desk scale.
Outcome universality() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::size_t n = 1000000;
  const double gamma = 0.5;
  Rng rng(2026);

  Sequence iid{Alphabet(2)};
  for (std::size_t i = 0; i < n; ++i) iid.push_back(rng.bernoulli(0.2) ? 1 : 0);
  LZTransformSpa a(Alphabet(2), SpaFamily::dirichlet(gamma));
  const double loss_iid = a.evaluate_log_loss(iid).per_symbol_bits;
  const double h = binary_entropy(0.2);
  o.require(std::fabs(h - 0.7219) < 5e-5, fmt("h(0.2)=%.4f", h));
  o.require(loss_iid - h <= 0.05, fmt("iid loss %.4f vs %.4f", loss_iid, h));

  Sequence mk{Alphabet(2)};
  Symbol x = rng.bernoulli(0.5) ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    mk.push_back(x);
    if (rng.bernoulli(0.2)) x ^= 1u;
  }
  LZTransformSpa b(Alphabet(2), SpaFamily::dirichlet(gamma));
  const double loss_mk = b.evaluate_log_loss(mk).per_symbol_bits;
  const std::vector<Symbol> raw(mk.tokens().begin(), mk.tokens().end());
  const double mu1 = oracle::empirical_conditional_entropy(raw, 1);
  o.require(loss_mk - mu1 <= 0.05, fmt("markov loss %.4f vs mu_1 %.4f", loss_mk, mu1));
  const double dt = seconds_since(t0);
  o.require(dt < 60.0, fmt("%.1f s", dt));
  return o;
}

// 4. Per-node decomposition of the log loss.
Outcome decomposition() {
  Outcome o;
  Rng rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t a = 2 + rng.below(4);
    const double gamma = 0.05 + rng.uniform01();
    Sequence seq{Alphabet(a)};
    std::string s;
    for (std::size_t i = 0; i < 20000; ++i) {
      const Symbol v = static_cast<Symbol>(rng.below(a));
      seq.push_back(v);
      s.push_back(static_cast<char>('0' + v));
    }
    LZTransformSpa m(Alphabet(a), SpaFamily::dirichlet(gamma));
    const double total = m.evaluate_log_loss(seq).total_bits;
    double sum = 0.0;
    for (const auto& [ctx, y] : oracle::lz78_subsequences(s)) {
      std::vector<std::uint64_t> counts(a, 0);
      for (char c : y) ++counts[static_cast<std::size_t>(c - '0')];
      sum += oracle::dirichlet_sequence_bits(counts, gamma);
    }
    worst = std::max(worst, std::fabs(total - sum) / std::max(1.0, total));
  }
  o.require(worst <= 1e-9, fmt("max relative gap %.1e over 20 sequences", worst));
  return o;
}

// 5. Codec round trips and overhead.
Outcome codec() {
  Outcome o;
  Rng rng(5);
  std::size_t failures = 0;
  double worst_excess = -INFINITY;
  for (std::size_t a : {2u, 90u, 256u}) {
    for (int trial = 0; trial < 1000; ++trial) {
      // Random length and a random skewed law so some symbols are rare.
      const std::size_t n = 1 + rng.below(2000);
      std::vector<double> law(a);
      for (auto& v : law) v = std::pow(rng.uniform01(), 3.0) + 1e-3;
      double s = 0.0;
      for (double v : law) s += v;
      for (auto& v : law) v /= s;
      Sequence seq{Alphabet(a)};
      for (std::size_t i = 0; i < n; ++i) seq.push_back(rng.sample(law));
      const EncodedStream stream = compress_adaptive(seq, 0.5);
      if (!(decompress(from_bytes(to_bytes(stream))) == seq)) ++failures;
      LZTransformSpa m(Alphabet(a), SpaFamily::dirichlet(0.5));
      const double loss = m.evaluate_log_loss(seq).total_bits;
      const double bits = static_cast<double>(stream.payload_bits());
      worst_excess = std::max(worst_excess, std::fabs(bits - loss) - (64.0 + 0.01 * loss));
    }
  }
  o.require(failures == 0, std::to_string(failures) + " round-trip failures in 3000");
  o.require(worst_excess <= 0.0, fmt("worst |payload - loss| minus allowance %.1f bits", worst_excess));
  return o;
}

// 6. Exhaustive KL convergence.
Outcome kl_convergence() {
  Outcome o;
  const auto t0 = Clock::now();
  ConvergenceConfig cfg;
  cfg.gammas = {0.05};
  cfg.m_grid = {100, 1000, 10000};
  cfg.n = 4;
  cfg.seeds = 5;
  const ConvergenceReport r = convergence_experiment(SourceSpec::iid({0.7, 0.3}), cfg);
  const ConvergenceSummary& s = r.summaries.front();
  bool non_increasing = true;
  for (std::size_t i = 1; i < s.median_kl.size(); ++i) non_increasing &= s.median_kl[i] <= s.median_kl[i - 1];
  o.require(non_increasing, fmt("median KL %.4f, %.4f, %.4f", s.median_kl[0], s.median_kl[1], s.median_kl[2]));
  o.require(s.median_kl.back() < 0.05, "final < 0.05");
  o.require(s.all_nonnegative, "all KL >= 0");
  const double dt = seconds_since(t0);
  o.require(dt < 120.0, fmt("%.1f s", dt));
  return o;
}

// Shared setup of the symmetric binary Markov filtering experiment.
struct MarkovExperiment {
  double p = 0.1;
  std::size_t n = 100000;
  Channel channel = Channel::additive_pm1_noise();
  LossMatrix loss = markov_experiment_loss();
  MarkovSource source = MarkovSource::symmetric_binary(0.1);
  MarkovChannelSample sample;
  double gamma = 0.5;

  explicit MarkovExperiment(std::size_t length, std::uint64_t seed = 2026)
      : n(length), sample(simulate_markov_channel(0.1, length, seed)) {}

  double mse(const std::vector<Symbol>& est) const { return mean_loss(sample.clean.tokens(), est, loss); }

  // Sample-path estimate of sum_t log2 P(z_t | z^{t-1}) / Q(z_t | z^{t-1}).
  double kl_bits() const {
    HmmPredictiveSpa truth(source, channel);
    LZTransformSpa q(Alphabet(3), SpaFamily::dirichlet(gamma));
    double kl = 0.0;
    for (Symbol z : sample.noisy.tokens()) {
      kl += std::log2(truth.prob(z) / q.prob(z));
      truth.observe(z);
      q.observe(z);
    }
    return kl;
  }
};

// 7. True-law plug-in equals the dynamic-programming oracle.
Outcome oracle_equivalence() {
  Outcome o;
  const MarkovExperiment ex(1000);
  const auto z = ex.sample.noisy.tokens();
  for (const FilterRegime regime : {FilterRegime::causal(), FilterRegime::lookahead(1), FilterRegime::lookahead(2)}) {
    HmmPredictiveSpa truth(ex.source, ex.channel);
    const FilterOutput plug = run_filter(truth, ex.channel, ex.loss, z, regime);
    const OracleResult dp = dp_optimal_filter(ex.source, ex.channel, ex.loss, z, regime);
    std::size_t diff = 0;
    for (std::size_t t = 0; t < z.size(); ++t) diff += plug.estimates[t] != dp.estimates[t];
    o.require(diff == 0, regime.to_string() + ": " + std::to_string(diff) + " differing decisions");
  }
  return o;
}

struct FilterRun {
  std::string name;
  double lz_mse;
  double oracle_mse;
  double factor_regime_bound;
};

std::vector<FilterRun> g_filter_runs;

// 8. Qualitative reproduction of the filtering curves.
Outcome filtering_curves() {
  Outcome o;
  const MarkovExperiment ex(100000);
  const auto z = ex.sample.noisy.tokens();
  const double kl = ex.kl_bits();

  const OracleResult oc = dp_optimal_filter(ex.source, ex.channel, ex.loss, z, FilterRegime::causal());
  const OracleResult od = dp_optimal_filter(ex.source, ex.channel, ex.loss, z, FilterRegime::delay(2));
  const OracleResult ol = dp_optimal_filter(ex.source, ex.channel, ex.loss, z, FilterRegime::lookahead(1));
  const double mse_oc = ex.mse(oc.estimates), mse_od = ex.mse(od.estimates), mse_ol = ex.mse(ol.estimates);

  // (a) causal LZ filter against the oracle.
  LZTransformSpa spa(Alphabet(3), SpaFamily::dirichlet(ex.gamma));
  const FilterOutput lc = causal_filter(spa, ex.channel, ex.loss, z);
  const double mse_lc = ex.mse(lc.estimates);
  o.require(mse_lc - mse_oc <= 0.02, fmt("(a) causal LZ %.4f vs oracle %.4f", mse_lc, mse_oc));
  g_filter_runs.push_back(
      {"causal", mse_lc, mse_oc, excess_loss_bound(kl, ex.n, ex.channel, ex.loss, FilterRegime::causal()).value});

  // (b) Monte-Carlo delayed filter, mean over three seeds per budget.
  DelayOptions exact;
  exact.delay = 2;
  exact.method = Marginalization::kExact;
  LZTransformSpa spa_exact(Alphabet(3), SpaFamily::dirichlet(ex.gamma));
  const double mse_exact = ex.mse(delayed_filter(spa_exact, ex.channel, ex.loss, z, exact).estimates);
  std::vector<double> by_budget;
  for (std::size_t m : {100u, 1000u, 10000u}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      DelayOptions opt = exact;
      opt.method = Marginalization::kMonteCarlo;
      opt.mc_samples = m;
      opt.seed = seed;
      LZTransformSpa s(Alphabet(3), SpaFamily::dirichlet(ex.gamma));
      const double mse = ex.mse(delayed_filter(s, ex.channel, ex.loss, z, opt).estimates);
      sum += mse;
      g_filter_runs.push_back({"delay:2 M=" + std::to_string(m) + " seed " + std::to_string(seed), mse, mse_od,
                               excess_loss_bound(kl, ex.n, ex.channel, ex.loss, FilterRegime::delay(2)).value});
    }
    by_budget.push_back(sum / 3.0);
  }
  o.require(by_budget[2] < by_budget[0] &&
                std::fabs(by_budget[2] - mse_exact) < std::fabs(by_budget[0] - mse_exact),
            fmt("(b) delay:2 M=100 %.5f, M=1e3 %.5f, M=1e4 %.5f", by_budget[0], by_budget[1], by_budget[2]) +
                fmt(", exact %.5f", mse_exact));

  // (c) oracle ordering across regimes.
  const double noise = 3.0 / std::sqrt(static_cast<double>(ex.n));
  o.require(mse_ol <= mse_oc + noise && mse_oc <= mse_od + noise,
            fmt("(c) oracle lookahead:1 %.4f <= causal %.4f <= delay:2 %.4f", mse_ol, mse_oc, mse_od));
  return o;
}

// 9. Excess loss never exceeds the bound on the runs of criterion 8.
Outcome bound_consistency() {
  Outcome o;
  if (g_filter_runs.empty()) filtering_curves();
  std::size_t violations = 0;
  double tightest = INFINITY;
  for (const auto& r : g_filter_runs) {
    const double excess = r.lz_mse - r.oracle_mse;
    if (excess > r.factor_regime_bound) ++violations;
    tightest = std::min(tightest, r.factor_regime_bound - excess);
  }
  o.require(violations == 0, std::to_string(violations) + " of " + std::to_string(g_filter_runs.size()) +
                                 " runs above the bound");
  o.require(true, fmt("smallest slack %.3f", tightest) + fmt(", causal bound %.3f", g_filter_runs.front().factor_regime_bound));
  return o;
}

Sequence markov_pair_seq(Rng& rng, std::size_t n, double stay) {
  Sequence s{Alphabet(2)};
  Symbol x = rng.bernoulli(0.5) ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(x);
    if (!rng.bernoulli(stay)) x ^= 1u;
  }
  return s;
}

// 10. Two-class classification, sweep and purity.
Outcome classification() {
  Outcome o;
  double worst_acc = 1.0;
  bool sweep_ok = true, pure = true;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    std::vector<LabeledSequence> train, test;
    for (int i = 0; i < 20; ++i) {
      train.push_back({markov_pair_seq(rng, 500, 0.75), "persistent"});
      train.push_back({markov_pair_seq(rng, 500, 0.35), "alternating"});
    }
    for (int i = 0; i < 100; ++i) {
      test.push_back({markov_pair_seq(rng, 200, 0.75), "persistent"});
      test.push_back({markov_pair_seq(rng, 200, 0.35), "alternating"});
    }
    SweepConfig sc;
    sc.seed = seed;
    const SweepResult sw = sweep(train, sc);
    sweep_ok &= sc.gamma_grid == std::vector<double>{0.1, 0.33, 0.5, 0.75, 1.0, 3.0, 5.0};
    const auto best = std::min_element(sw.table.begin(), sw.table.end(), [](const SweepRow& a, const SweepRow& b) {
      return a.mean_validation_loss < b.mean_validation_loss;
    });
    sweep_ok &= best->gamma == sw.best_gamma && best->mean_validation_loss == sw.best_loss;

    const ClassifierModel model = ClassifierModel::fit(train, FitConfig{sw.best_gamma, sw.best_epochs});
    std::vector<std::uint64_t> hashes;
    for (const auto& m : model.models()) hashes.push_back(m.model_hash());
    std::size_t correct = 0;
    for (const auto& item : test) correct += model.classify(item.sequence, 0).label == item.label;
    for (std::size_t i = 0; i < hashes.size(); ++i) pure &= model.models()[i].model_hash() == hashes[i];
    worst_acc = std::min(worst_acc, static_cast<double>(correct) / static_cast<double>(test.size()));
  }
  o.require(worst_acc >= 0.95, fmt("worst accuracy over 3 seeds %.3f", worst_acc));
  o.require(sweep_ok, "sweep returns the validation argmin over the default grid");
  o.require(pure, "model hashes unchanged by classify");
  return o;
}

// 11. Generation properties.
Outcome generation() {
  Outcome o;
  Rng rng(11);
  Sequence data{Alphabet(2)};
  for (int i = 0; i < 1000000; ++i) data.push_back(rng.bernoulli(0.3) ? 1 : 0);
  LZTransformSpa m(Alphabet(2), SpaFamily::dirichlet(0.5));
  m.train(data);
  m.freeze();

  GenConfig cfg;
  cfg.length = 2000;
  cfg.temperature = 0.0;
  cfg.rng_seed = 1;
  const Sequence t0a = generate(m, cfg).output;
  cfg.rng_seed = 2;
  const Sequence t0b = generate(m, cfg).output;
  o.require(t0a == t0b, "T=0 deterministic");
  cfg.temperature = 1.0;
  cfg.top_k = 1;
  o.require(generate(m, cfg).output == t0a, "T=0 equals K=1");

  cfg.top_k = 0;
  cfg.rng_seed = 7;
  o.require(generate(m, cfg).output == generate(m, cfg).output, "seeded reproducibility");

  cfg.length = 100000;
  const Sequence big = generate(m, cfg).output;
  double ones = 0.0;
  for (Symbol s : big.tokens()) ones += s;
  const double freq = ones / static_cast<double>(big.size());
  o.require(std::fabs(freq - 0.3) <= 0.02, fmt("histogram (%.4f, %.4f) vs (0.7, 0.3)", 1 - freq, freq));

  LZTransformSpa tiny(Alphabet(2), SpaFamily::dirichlet(0.5));
  tiny.train(Sequence::from_digits(Alphabet(2), "0001100101110"));
  tiny.freeze();
  GenConfig small;
  small.length = 500;
  small.min_context = 3;
  small.rng_seed = 3;
  const auto g = generate(tiny, small);
  o.require(g.backshifts > 0, std::to_string(g.backshifts) + " backshifts on a 13-symbol model");
  return o;
}

// 12. Scaling.
Outcome scaling() {
  Outcome o;
  const TrainBenchReport t = bench_train_throughput(TrainBenchConfig{});
  bool linear = true;
  std::string ratios;
  for (double r : t.time_ratios) {
    linear &= r >= 8.0 && r <= 13.0;
    ratios += (ratios.empty() ? "" : ", ") + fmt("%.2f", r);
  }
  o.require(linear, "time ratios per decade " + ratios);
  o.require(t.node_ratio_spread <= 1.25, fmt("C/(n/log2 n) spread %.3f", t.node_ratio_spread));
  o.require(t.bytes_per_node_spread <= 2.0, fmt("bytes/node spread %.3f", t.bytes_per_node_spread));

  const GenBenchReport g = bench_generation_latency(GenBenchConfig{});
  o.require(g.worst_seconds_per_sample <= 0.1, fmt("%.2f ms per 256-symbol sample", g.worst_seconds_per_sample * 1e3));
  o.require(g.latency_spread <= 3.0, fmt("latency spread %.2f over %.0fx nodes", g.latency_spread, g.node_count_range));
  o.require(g.top1_over_full <= 1.2, fmt("K=1/K=A time %.2f", g.top1_over_full));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"worked parsing example", worked_example},
      {"Dirichlet SPA formula", dirichlet_formula},
      {"universality at desk scale", universality},
      {"log-loss decomposition", decomposition},
      {"codec round trip and overhead", codec},
      {"exhaustive KL convergence", kl_convergence},
      {"filter oracle equivalence", oracle_equivalence},
      {"filtering curves", filtering_curves},
      {"excess-loss bound consistency", bound_consistency},
      {"classification", classification},
      {"generation", generation},
      {"scaling", scaling},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s [%2d] %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", id, criteria[i].first, r.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
