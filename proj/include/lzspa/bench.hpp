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


#ifndef LZSPA_BENCH_HPP_
#define LZSPA_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace lzspa {

struct HardwareFingerprint {
  std::string cpu_model;
  unsigned hardware_threads = 0;
  std::string compiler;
  std::string build_type;
};

HardwareFingerprint hardware_fingerprint();

struct TrainBenchConfig {
  std::vector<std::size_t> sizes = {100000, 1000000, 10000000};
  std::size_t alphabet_size = 2;
  std::size_t repeats = 3;  // the minimum over repeats is reported
  std::uint64_t seed = 0;
};

struct TrainBenchRow {
  std::size_t n = 0;
  double seconds = 0.0;
  double symbols_per_second = 0.0;
  std::size_t nodes = 0;
  double nodes_over_n_per_log2n = 0.0;
  std::size_t memory_bytes = 0;
  double bytes_per_node = 0.0;
};

struct TrainBenchReport {
  HardwareFingerprint hardware;
  TrainBenchConfig config;
  std::vector<TrainBenchRow> rows;
  std::vector<double> time_ratios;       // seconds[i+1] / seconds[i]
  double node_ratio_spread = 0.0;        // max/min of nodes_over_n_per_log2n
  double bytes_per_node_spread = 0.0;    // max/min of bytes_per_node
};

// Trains LZ78-transformed Dirichlet models on uniform iid data of each size.
TrainBenchReport bench_train_throughput(const TrainBenchConfig& config);

struct GenBenchConfig {
  std::vector<std::size_t> training_sizes = {10000, 2000000};
  std::size_t alphabet_size = 90;
  std::size_t sample_length = 256;
  std::size_t samples = 20;
  double temperature = 0.8;
  std::uint64_t seed = 0;
};

struct GenBenchRow {
  std::size_t training_size = 0;
  std::size_t nodes = 0;
  double seconds_per_sample = 0.0;        // median over samples, full alphabet
  double seconds_per_symbol = 0.0;
  double seconds_per_sample_top1 = 0.0;   // K = 1
};

struct GenBenchReport {
  HardwareFingerprint hardware;
  GenBenchConfig config;
  std::vector<GenBenchRow> rows;
  double latency_spread = 0.0;      // max/min of seconds_per_symbol across model sizes
  double node_count_range = 0.0;    // max/min of nodes
  double top1_over_full = 0.0;      // K = 1 time over K = A time, largest model
  double worst_seconds_per_sample = 0.0;
};

// Trains models of increasing size on data from a random sparse Markov chain
// and times frozen-model generation.
GenBenchReport bench_generation_latency(const GenBenchConfig& config);

std::string to_json(const TrainBenchReport& report);
std::string to_json(const GenBenchReport& report);

}  // namespace lzspa

#endif  // LZSPA_BENCH_HPP_
