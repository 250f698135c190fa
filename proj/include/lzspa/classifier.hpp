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

#ifndef LZSPA_CLASSIFIER_HPP_
#define LZSPA_CLASSIFIER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lzspa/lz_transform.hpp"
#include "lzspa/types.hpp"

namespace lzspa {

struct LabeledSequence {
  Sequence sequence;
  std::string label;
};

struct FitConfig {
  double gamma = 0.1;
  std::size_t epochs = 1;
};

struct Classification {
  std::size_t index = 0;  // position of `label` in ClassifierModel::labels()
  std::string label;
  std::vector<double> losses_bits;  // total log loss under each class model
};

// Min-log-loss classifier: one frozen LZ78-transformed Dirichlet SPA per
// class. Classes are ordered by label; ties go to the lowest class index.
class ClassifierModel {
 public:
  static ClassifierModel fit(std::span<const LabeledSequence> train, const FitConfig& config);
  ClassifierModel(std::vector<std::string> labels, std::vector<LZTransformSpa> models);

  // Scores every class without touching model state. `threads` = 0 uses one
  // worker per class (capped by hardware concurrency), 1 is sequential.
  Classification classify(const Sequence& seq, unsigned threads = 1) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<LZTransformSpa>& models() const noexcept { return models_; }
  double gamma() const { return models_.front().family().gamma(); }
  std::uint64_t epochs() const { return models_.front().epochs_trained(); }
  std::size_t alphabet_size() const { return models_.front().alphabet_size(); }

  void set_gamma(double gamma);

 private:
  std::vector<std::string> labels_;
  std::vector<LZTransformSpa> models_;
};

// The grid searched by default for the Dirichlet parameter.
std::vector<double> default_gamma_grid();

struct SweepConfig {
  std::vector<double> gamma_grid = default_gamma_grid();
  std::vector<std::size_t> epoch_grid = {1};
  double validation_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct SweepRow {
  double gamma = 0.0;
  std::size_t epochs = 0;
  double mean_validation_loss = 0.0;  // bits per symbol, averaged over validation sequences
  double validation_accuracy = 0.0;
};

struct SweepResult {
  double best_gamma = 0.0;
  std::size_t best_epochs = 0;
  double best_loss = 0.0;
  std::vector<SweepRow> table;
};

// Seeded per-class train/validation split, then one fit per epoch count
// (trees do not depend on gamma) scored at every gamma of the grid. Picks
// the minimizer of mean validation log loss; earlier grid entries win ties.
SweepResult sweep(std::span<const LabeledSequence> data, const SweepConfig& config);

}  // namespace lzspa

#endif  // LZSPA_CLASSIFIER_HPP_
