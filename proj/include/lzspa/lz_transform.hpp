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

#ifndef LZSPA_LZ_TRANSFORM_HPP_
#define LZSPA_LZ_TRANSFORM_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lzspa/lz_tree.hpp"
#include "lzspa/spa.hpp"
#include "lzspa/types.hpp"

namespace lzspa {

// Cost of the transformed SPA expressed through its inner SPAs: a sum over
// tree nodes of the inner-SPA cost at that node's subsequence length.
struct ComplexityReport {
  std::size_t nodes = 0;             // C(x^n), root included
  std::uint64_t symbols = 0;         // n
  double unit_cost_total = 0.0;      // sum_z 1: O(1)-memory inner SPAs
  double linear_cost_total = 0.0;    // sum_z |Y{x^n,z}|: O(n)-time inner SPAs
  std::uint64_t max_node_visits = 0;
  std::uint64_t root_visits = 0;
  double nodes_over_n_per_log2n = 0.0;  // C / (n / log2 n)
  std::size_t memory_bytes = 0;
};

// The LZ78 transform of an inner SPA family. Every tree node owns an
// independent copy of the inner SPA that sees only the symbols parsed at that
// node; the prediction at time t is the prediction of the node holding the
// current LZ78 context.
//
// While training (not frozen), observe() parses with tree growth and updates
// the context node's inner SPA. After freeze(), observe() only moves the
// cursor: to the child if it exists, otherwise back to the root.
class LZTransformSpa final : public Spa {
 public:
  LZTransformSpa(Alphabet alphabet, SpaFamily family);
  LZTransformSpa(const LZTransformSpa& other);
  LZTransformSpa& operator=(const LZTransformSpa& other);
  LZTransformSpa(LZTransformSpa&&) noexcept = default;
  LZTransformSpa& operator=(LZTransformSpa&&) noexcept = default;
  ~LZTransformSpa() override = default;

  // Parses every sequence with growth, `epochs` times, in the given order.
  // The cursor returns to the root at each sequence boundary.
  void train(std::span<const Sequence> sequences, std::size_t epochs = 1);
  void train(const Sequence& sequence, std::size_t epochs = 1);

  void freeze();
  bool frozen() const noexcept { return frozen_; }
  std::uint64_t epochs_trained() const noexcept { return epochs_; }

  // Spa
  std::size_t alphabet_size() const override { return tree_.alphabet().size(); }
  Pmf next_dist() const override { return dist_at(cursor_.node); }
  double prob(Symbol s) const override { return prob_at(cursor_.node, s); }
  void observe(Symbol s) override;
  // Frozen: rewinds the cursor. Otherwise discards everything learned.
  void reset() override;
  void snapshot() override;
  void restore() override;
  void release() override;
  std::unique_ptr<Spa> clone() const override { return std::make_unique<LZTransformSpa>(*this); }

  ParseCursor cursor() const noexcept { return cursor_; }
  void set_cursor(ParseCursor c);
  void begin_sequence() { set_cursor(ParseCursor{}); }

  // Read-only queries; safe for concurrent use on a frozen model.
  Pmf dist_at(NodeId node) const;
  double prob_at(NodeId node, Symbol s) const;
  std::uint64_t observations_at(NodeId node) const { return tree_.node(node).visits; }
  ParseCursor advance(ParseCursor c, Symbol s) const { return tree_.traverse(c, s); }

  // Log loss of `seq` parsed from the root without growing the tree.
  LogLossReport evaluate_frozen(const Sequence& seq) const;
  // Frozen models: same as evaluate_frozen. Otherwise the adaptive loss from
  // the current state; the model is restored afterwards.
  LogLossReport evaluate_log_loss(const Sequence& seq);

  const LZ78Tree& tree() const noexcept { return tree_; }
  const SpaFamily& family() const noexcept { return family_; }
  // Swaps the Dirichlet parameter. Tree counts do not depend on it.
  void set_gamma(double gamma);

  ComplexityReport complexity_report() const;

  ModelMetadata metadata() const;
  std::vector<std::uint8_t> save() const;
  static LZTransformSpa load(std::span<const std::uint8_t> bytes);
  // FNV-1a of the serialized model.
  std::uint64_t model_hash() const;

 private:
  struct JournalEntry {
    NodeId context;
    Symbol symbol;
    bool created_leaf;
    bool node_spa_saved;
    ParseCursor before;
  };
  struct Mark {
    std::size_t journal_size;
    ParseCursor cursor;
  };

  void grow_step(Symbol s);
  void undo(const JournalEntry& e);

  LZ78Tree tree_;
  SpaFamily family_;
  // One live inner SPA per node, only for custom (not count-sufficient) families.
  std::vector<std::unique_ptr<Spa>> node_spas_;
  ParseCursor cursor_;
  bool frozen_ = false;
  std::uint64_t epochs_ = 0;
  std::vector<JournalEntry> journal_;
  std::vector<Mark> marks_;
};

}  // namespace lzspa

#endif  // LZSPA_LZ_TRANSFORM_HPP_
