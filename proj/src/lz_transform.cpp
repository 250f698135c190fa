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

#include "lzspa/lz_transform.hpp"

#include <cmath>
#include <stdexcept>

#include "bytes.hpp"

namespace lzspa {

LZTransformSpa::LZTransformSpa(Alphabet alphabet, SpaFamily family)
    : tree_(alphabet), family_(std::move(family)) {
  if (!family_.counts_sufficient()) node_spas_.push_back(family_.make(alphabet.size()));
}

LZTransformSpa::LZTransformSpa(const LZTransformSpa& other)
    : tree_(other.tree_),
      family_(other.family_),
      cursor_(other.cursor_),
      frozen_(other.frozen_),
      epochs_(other.epochs_),
      journal_(other.journal_),
      marks_(other.marks_) {
  node_spas_.reserve(other.node_spas_.size());
  for (const auto& spa : other.node_spas_) node_spas_.push_back(spa->clone());
}

LZTransformSpa& LZTransformSpa::operator=(const LZTransformSpa& other) {
  if (this != &other) *this = LZTransformSpa(other);
  return *this;
}

void LZTransformSpa::train(std::span<const Sequence> sequences, std::size_t epochs) {
  if (frozen_) throw std::logic_error("cannot train a frozen model");
  for (const auto& seq : sequences) {
    if (!(seq.alphabet() == tree_.alphabet())) {
      throw AlphabetError("training sequence alphabet does not match the model");
    }
  }
  std::size_t total = 0;
  for (const auto& seq : sequences) total += seq.size();
  if (epochs == 1 && total > 1024) {
    // LZ78 on n symbols makes at most about 2n / log2 n phrases for small alphabets.
    const double n = static_cast<double>(total);
    tree_.reserve(tree_.node_count() + static_cast<std::size_t>(2.0 * n / std::log2(n)));
  }
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& seq : sequences) {
      cursor_ = ParseCursor{};
      for (Symbol s : seq.tokens()) grow_step(s);
    }
    ++epochs_;
  }
  cursor_ = ParseCursor{};
}

void LZTransformSpa::train(const Sequence& sequence, std::size_t epochs) {
  train(std::span<const Sequence>(&sequence, 1), epochs);
}

void LZTransformSpa::freeze() {
  if (!marks_.empty()) throw std::logic_error("cannot freeze with open snapshots");
  frozen_ = true;
  cursor_ = ParseCursor{};
}

void LZTransformSpa::grow_step(Symbol s) {
  const ParseCursor before = cursor_;
  bool saved = false;
  if (!family_.counts_sufficient()) {
    tree_.alphabet().check(s);
    if (!marks_.empty()) {
      node_spas_[before.node]->snapshot();
      saved = true;
    }
    node_spas_[before.node]->observe(s);
  }
  const ParseStep step = tree_.parse_step(before, s, /*grow=*/true);
  if (step.created_leaf && !family_.counts_sufficient()) {
    node_spas_.push_back(family_.make(alphabet_size()));
  }
  cursor_ = step.next;
  if (!marks_.empty()) journal_.push_back(JournalEntry{step.context, s, step.created_leaf, saved, before});
}

void LZTransformSpa::observe(Symbol s) {
  if (frozen_) {
    tree_.alphabet().check(s);
    cursor_ = tree_.traverse(cursor_, s);
    return;
  }
  grow_step(s);
}

void LZTransformSpa::reset() {
  if (!marks_.empty()) throw std::logic_error("cannot reset with open snapshots");
  cursor_ = ParseCursor{};
  if (frozen_) return;
  tree_ = LZ78Tree(tree_.alphabet());
  node_spas_.clear();
  if (!family_.counts_sufficient()) node_spas_.push_back(family_.make(alphabet_size()));
  epochs_ = 0;
}

void LZTransformSpa::snapshot() { marks_.push_back(Mark{journal_.size(), cursor_}); }

void LZTransformSpa::undo(const JournalEntry& e) {
  if (e.created_leaf && !family_.counts_sufficient()) node_spas_.pop_back();
  tree_.revert_step(e.context, e.symbol, e.created_leaf);
  if (e.node_spa_saved) node_spas_[e.context]->restore();
}

void LZTransformSpa::restore() {
  if (marks_.empty()) throw std::logic_error("restore() without a matching snapshot()");
  const Mark mark = marks_.back();
  marks_.pop_back();
  while (journal_.size() > mark.journal_size) {
    undo(journal_.back());
    journal_.pop_back();
  }
  cursor_ = mark.cursor;
}

void LZTransformSpa::release() {
  if (marks_.empty()) throw std::logic_error("release() without a matching snapshot()");
  marks_.pop_back();
  if (marks_.empty()) {
    for (const auto& e : journal_) {
      if (e.node_spa_saved) node_spas_[e.context]->release();
    }
    journal_.clear();
  }
}

void LZTransformSpa::set_cursor(ParseCursor c) {
  if (c.node >= tree_.node_count() || tree_.node(c.node).depth != c.depth) {
    throw std::invalid_argument("cursor does not name a node of this tree");
  }
  cursor_ = c;
}

Pmf LZTransformSpa::dist_at(NodeId node) const {
  if (!family_.counts_sufficient()) return node_spas_.at(node)->next_dist();
  const TreeNode& n = tree_.node(node);
  std::vector<double> p;
  family_.dist_from_counts(n.edges, n.visits, alphabet_size(), p);
  return Pmf(std::move(p));
}

double LZTransformSpa::prob_at(NodeId node, Symbol s) const {
  if (!family_.counts_sufficient()) return node_spas_.at(node)->prob(s);
  const TreeNode& n = tree_.node(node);
  return family_.prob_from_count(tree_.count(node, s), n.visits, alphabet_size());
}

LogLossReport LZTransformSpa::evaluate_frozen(const Sequence& seq) const {
  if (!(seq.alphabet() == tree_.alphabet())) {
    throw AlphabetError("sequence alphabet does not match the model");
  }
  LogLossReport report;
  ParseCursor c;
  for (Symbol s : seq.tokens()) {
    report.total_bits += surprisal_bits(prob_at(c.node, s));
    c = tree_.traverse(c, s);
  }
  report.length = seq.size();
  if (report.length > 0) {
    report.per_symbol_bits = report.total_bits / static_cast<double>(report.length);
  }
  return report;
}

LogLossReport LZTransformSpa::evaluate_log_loss(const Sequence& seq) {
  if (frozen_) return evaluate_frozen(seq);
  return log_loss(*this, seq);
}

void LZTransformSpa::set_gamma(double gamma) {
  if (family_.kind() != SpaKind::kDirichlet) {
    throw std::logic_error("set_gamma requires a Dirichlet inner SPA");
  }
  family_ = SpaFamily::dirichlet(gamma);
}

ComplexityReport LZTransformSpa::complexity_report() const {
  ComplexityReport r;
  r.nodes = tree_.node_count();
  r.symbols = tree_.symbols_parsed();
  r.unit_cost_total = static_cast<double>(r.nodes);
  for (NodeId id = 0; id < tree_.node_count(); ++id) {
    const auto v = tree_.node(id).visits;
    r.linear_cost_total += static_cast<double>(v);
    r.max_node_visits = std::max(r.max_node_visits, v);
  }
  r.root_visits = tree_.node(kRootNode).visits;
  if (r.symbols > 1) {
    const double n = static_cast<double>(r.symbols);
    r.nodes_over_n_per_log2n = static_cast<double>(r.nodes) / (n / std::log2(n));
  }
  r.memory_bytes = tree_.memory_bytes();
  return r;
}

ModelMetadata LZTransformSpa::metadata() const {
  return ModelMetadata{family_.kind(), family_.gamma(), epochs_, frozen_};
}

std::vector<std::uint8_t> LZTransformSpa::save() const { return serialize_tree(tree_, metadata()); }

LZTransformSpa LZTransformSpa::load(std::span<const std::uint8_t> bytes) {
  LoadedTree loaded = deserialize_tree(bytes);
  SpaFamily family = loaded.meta.kind == SpaKind::kDirichlet
                         ? SpaFamily::dirichlet(loaded.meta.gamma)
                         : SpaFamily::uniform();
  LZTransformSpa model(loaded.tree.alphabet(), std::move(family));
  model.tree_ = std::move(loaded.tree);
  model.epochs_ = loaded.meta.epochs;
  model.frozen_ = loaded.meta.frozen;
  return model;
}

std::uint64_t LZTransformSpa::model_hash() const { return detail::fnv1a64(save()); }

}  // namespace lzspa
