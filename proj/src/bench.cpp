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


#include "lzspa/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "lzspa/evaluation.hpp"
#include "lzspa/generation.hpp"
#include "lzspa/lz_transform.hpp"
#include "lzspa/random.hpp"

namespace lzspa {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : 0.0;
}

Sequence uniform_data(std::size_t n, std::size_t a, Rng& rng) {
  std::vector<Symbol> xs(n);
  for (auto& x : xs) x = static_cast<Symbol>(rng.below(a));
  return Sequence(Alphabet(a), std::move(xs));
}

// Each state moves to one of four random successors with skewed weights.
SourceSpec sparse_markov(std::size_t a, Rng& rng) {
  std::vector<std::vector<double>> t(a, std::vector<double>(a, 0.0));
  const double weights[] = {0.5, 0.25, 0.15, 0.1};
  for (auto& row : t) {
    for (double w : weights) row[rng.below(a)] += w;
  }
  return SourceSpec::markov1(std::move(t), std::vector<double>(a, 1.0 / static_cast<double>(a)));
}

nlohmann::json fingerprint_json(const HardwareFingerprint& h) {
  return {{"cpu_model", h.cpu_model},
          {"hardware_threads", h.hardware_threads},
          {"compiler", h.compiler},
          {"build_type", h.build_type}};
}

}  // namespace

HardwareFingerprint hardware_fingerprint() {
  HardwareFingerprint h;
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) h.cpu_model = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
  }
  if (h.cpu_model.empty()) h.cpu_model = "unknown";
  h.hardware_threads = std::thread::hardware_concurrency();
#if defined(__clang__)
  h.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  h.compiler = "gcc " __VERSION__;
#else
  h.compiler = "unknown";
#endif
#ifdef NDEBUG
  h.build_type = "release";
#else
  h.build_type = "debug";
#endif
  return h;
}

TrainBenchReport bench_train_throughput(const TrainBenchConfig& config) {
  TrainBenchReport report;
  report.hardware = hardware_fingerprint();
  report.config = config;
  Rng rng(config.seed);
  std::vector<double> node_ratios, per_node;
  for (std::size_t n : config.sizes) {
    const Sequence data = uniform_data(n, config.alphabet_size, rng);
    TrainBenchRow row;
    row.n = n;
    row.seconds = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(1, config.repeats); ++r) {
      LZTransformSpa model(Alphabet(config.alphabet_size), SpaFamily::dirichlet(0.5));
      const auto start = Clock::now();
      model.train(data);
      row.seconds = std::min(row.seconds, seconds_since(start));
      const ComplexityReport c = model.complexity_report();
      row.nodes = c.nodes;
      row.nodes_over_n_per_log2n = c.nodes_over_n_per_log2n;
      row.memory_bytes = c.memory_bytes;
    }
    row.symbols_per_second = row.seconds > 0.0 ? static_cast<double>(n) / row.seconds : 0.0;
    row.bytes_per_node = static_cast<double>(row.memory_bytes) / static_cast<double>(row.nodes);
    node_ratios.push_back(row.nodes_over_n_per_log2n);
    per_node.push_back(row.bytes_per_node);
    report.rows.push_back(row);
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    report.time_ratios.push_back(report.rows[i].seconds / report.rows[i - 1].seconds);
  }
  report.node_ratio_spread = spread(node_ratios);
  report.bytes_per_node_spread = spread(per_node);
  return report;
}

GenBenchReport bench_generation_latency(const GenBenchConfig& config) {
  GenBenchReport report;
  report.hardware = hardware_fingerprint();
  report.config = config;
  Rng rng(config.seed);
  const SourceSpec source = sparse_markov(config.alphabet_size, rng);
  std::vector<double> latencies, nodes;
  double top1_ratio = 0.0;
  for (std::size_t size : config.training_sizes) {
    LZTransformSpa model(Alphabet(config.alphabet_size), SpaFamily::dirichlet(0.5));
    model.train(source.sample(size, rng));
    model.freeze();

    auto time_samples = [&](std::size_t top_k) {
      std::vector<double> times;
      GenConfig gc;
      gc.temperature = config.temperature;
      gc.top_k = top_k;
      gc.length = config.sample_length;
      for (std::size_t s = 0; s < std::max<std::size_t>(1, config.samples); ++s) {
        gc.rng_seed = config.seed + s;
        const auto start = Clock::now();
        const GenerationResult g = generate(model, gc);
        times.push_back(seconds_since(start));
        if (g.output.size() != config.sample_length) throw std::logic_error("short generation");
      }
      return median(times);
    };

    GenBenchRow row;
    row.training_size = size;
    row.nodes = model.tree().node_count();
    row.seconds_per_sample = time_samples(0);
    row.seconds_per_sample_top1 = time_samples(1);
    row.seconds_per_symbol = row.seconds_per_sample / static_cast<double>(config.sample_length);
    latencies.push_back(row.seconds_per_symbol);
    nodes.push_back(static_cast<double>(row.nodes));
    top1_ratio = row.seconds_per_sample > 0.0 ? row.seconds_per_sample_top1 / row.seconds_per_sample : 0.0;
    report.worst_seconds_per_sample =
        std::max({report.worst_seconds_per_sample, row.seconds_per_sample, row.seconds_per_sample_top1});
    report.rows.push_back(row);
  }
  report.latency_spread = spread(latencies);
  report.node_count_range = spread(nodes);
  report.top1_over_full = top1_ratio;
  return report;
}

std::string to_json(const TrainBenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"n", r.n},
                    {"seconds", r.seconds},
                    {"symbols_per_second", r.symbols_per_second},
                    {"nodes", r.nodes},
                    {"nodes_over_n_per_log2n", r.nodes_over_n_per_log2n},
                    {"memory_bytes", r.memory_bytes},
                    {"bytes_per_node", r.bytes_per_node}});
  }
  nlohmann::json j = {{"benchmark", "train_throughput"},
                      {"hardware", fingerprint_json(report.hardware)},
                      {"alphabet_size", report.config.alphabet_size},
                      {"repeats", report.config.repeats},
                      {"seed", report.config.seed},
                      {"rows", rows},
                      {"time_ratios", report.time_ratios},
                      {"node_ratio_spread", report.node_ratio_spread},
                      {"bytes_per_node_spread", report.bytes_per_node_spread}};
  return j.dump(2);
}

std::string to_json(const GenBenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"training_size", r.training_size},
                    {"nodes", r.nodes},
                    {"seconds_per_sample", r.seconds_per_sample},
                    {"seconds_per_symbol", r.seconds_per_symbol},
                    {"seconds_per_sample_top1", r.seconds_per_sample_top1}});
  }
  nlohmann::json j = {{"benchmark", "generation_latency"},
                      {"hardware", fingerprint_json(report.hardware)},
                      {"alphabet_size", report.config.alphabet_size},
                      {"sample_length", report.config.sample_length},
                      {"temperature", report.config.temperature},
                      {"seed", report.config.seed},
                      {"rows", rows},
                      {"latency_spread", report.latency_spread},
                      {"node_count_range", report.node_count_range},
                      {"top1_over_full", report.top1_over_full},
                      {"worst_seconds_per_sample", report.worst_seconds_per_sample}};
  return j.dump(2);
}

}  // namespace lzspa
