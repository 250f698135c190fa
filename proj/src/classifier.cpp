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

#include "lzspa/classifier.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <thread>

#include "lzspa/random.hpp"

namespace lzspa {

namespace {

// Groups sequences by label, labels sorted.
std::map<std::string, std::vector<Sequence>> group_by_label(std::span<const LabeledSequence> data) {
  std::map<std::string, std::vector<Sequence>> groups;
  for (const auto& item : data) groups[item.label].push_back(item.sequence);
  return groups;
}

void check_alphabets(std::span<const LabeledSequence> data) {
  if (data.empty()) throw std::invalid_argument("no training data");
  const Alphabet& a = data.front().sequence.alphabet();
  for (const auto& item : data) {
    if (!(item.sequence.alphabet() == a)) throw AlphabetError("training sequences mix alphabets");
  }
}

}  // namespace

ClassifierModel::ClassifierModel(std::vector<std::string> labels, std::vector<LZTransformSpa> models)
    : labels_(std::move(labels)), models_(std::move(models)) {
  if (labels_.size() != models_.size()) throw std::invalid_argument("one model per label required");
  if (labels_.size() < 2) throw std::invalid_argument("a classifier needs at least two classes");
  for (const auto& m : models_) {
    if (!m.frozen()) throw std::invalid_argument("class models must be frozen");
    if (m.alphabet_size() != models_.front().alphabet_size()) {
      throw AlphabetError("class models disagree on the alphabet");
    }
  }
}

ClassifierModel ClassifierModel::fit(std::span<const LabeledSequence> train, const FitConfig& config) {
  check_alphabets(train);
  auto groups = group_by_label(train);
  if (groups.size() < 2) throw std::invalid_argument("a classifier needs at least two classes");
  std::vector<std::string> labels;
  std::vector<LZTransformSpa> models;
  const Alphabet alphabet = train.front().sequence.alphabet();
  for (auto& [label, seqs] : groups) {
    LZTransformSpa model(alphabet, SpaFamily::dirichlet(config.gamma));
    model.train(seqs, config.epochs);
    model.freeze();
    labels.push_back(label);
    models.push_back(std::move(model));
  }
  return ClassifierModel(std::move(labels), std::move(models));
}

Classification ClassifierModel::classify(const Sequence& seq, unsigned threads) const {
  Classification out;
  out.losses_bits.assign(models_.size(), 0.0);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(models_.size()));
  if (threads <= 1) {
    for (std::size_t c = 0; c < models_.size(); ++c) {
      out.losses_bits[c] = models_[c].evaluate_frozen(seq).total_bits;
    }
  } else {
    // Each worker owns a strided set of classes and a private cursor per model.
    std::vector<std::jthread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t c = w; c < models_.size(); c += threads) {
            out.losses_bits[c] = models_[c].evaluate_frozen(seq).total_bits;
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    workers.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  out.index = static_cast<std::size_t>(
      std::min_element(out.losses_bits.begin(), out.losses_bits.end()) - out.losses_bits.begin());
  out.label = labels_[out.index];
  return out;
}

void ClassifierModel::set_gamma(double gamma) {
  for (auto& m : models_) m.set_gamma(gamma);
}

std::vector<double> default_gamma_grid() { return {0.1, 0.33, 0.5, 0.75, 1.0, 3.0, 5.0}; }

SweepResult sweep(std::span<const LabeledSequence> data, const SweepConfig& config) {
  if (config.gamma_grid.empty() || config.epoch_grid.empty()) {
    throw std::invalid_argument("sweep grid is empty");
  }
  if (!(config.validation_fraction > 0.0 && config.validation_fraction < 1.0)) {
    throw std::invalid_argument("validation fraction must lie in (0, 1)");
  }
  check_alphabets(data);
  auto groups = group_by_label(data);
  if (groups.size() < 2) throw std::invalid_argument("a classifier needs at least two classes");

  Rng rng(config.seed);
  std::vector<LabeledSequence> train;
  std::vector<LabeledSequence> validation;
  for (auto& [label, seqs] : groups) {
    std::vector<std::size_t> order(seqs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    const auto n_val = static_cast<std::size_t>(
        static_cast<double>(seqs.size()) * config.validation_fraction + 0.5);
    if (n_val == 0 || n_val >= seqs.size()) {
      throw std::invalid_argument("class '" + label + "' is too small for the validation split");
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto& dst = i < n_val ? validation : train;
      dst.push_back(LabeledSequence{seqs[order[i]], label});
    }
  }

  SweepResult result;
  bool have_best = false;
  for (std::size_t epochs : config.epoch_grid) {
    ClassifierModel model =
        ClassifierModel::fit(train, FitConfig{config.gamma_grid.front(), epochs});
    for (double gamma : config.gamma_grid) {
      model.set_gamma(gamma);
      SweepRow row{gamma, epochs, 0.0, 0.0};
      std::size_t correct = 0;
      for (const auto& item : validation) {
        const auto& labels = model.labels();
        const auto cls = static_cast<std::size_t>(
            std::find(labels.begin(), labels.end(), item.label) - labels.begin());
        const auto loss = model.models()[cls].evaluate_frozen(item.sequence);
        row.mean_validation_loss += loss.per_symbol_bits;
        if (model.classify(item.sequence).label == item.label) ++correct;
      }
      row.mean_validation_loss /= static_cast<double>(validation.size());
      row.validation_accuracy = static_cast<double>(correct) / static_cast<double>(validation.size());
      result.table.push_back(row);
      if (!have_best || row.mean_validation_loss < result.best_loss) {
        have_best = true;
        result.best_loss = row.mean_validation_loss;
        result.best_gamma = gamma;
        result.best_epochs = epochs;
      }
    }
  }
  return result;
}

}  // namespace lzspa
