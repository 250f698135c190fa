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

#ifndef LZSPA_SPA_HPP_
#define LZSPA_SPA_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lzspa/types.hpp"

namespace lzspa {

// A sequential probability assignment: a predictor that emits a PMF over the
// next symbol and then observes the realized symbol.
//
// State can be checkpointed. snapshot() pushes a checkpoint; restore() rolls
// the state back to the most recent checkpoint and pops it; release() pops it
// and keeps the current state. Checkpoints nest.
class Spa {
 public:
  virtual ~Spa() = default;

  virtual std::size_t alphabet_size() const = 0;
  virtual Pmf next_dist() const = 0;
  virtual double prob(Symbol s) const { return next_dist()[s]; }
  virtual void observe(Symbol s) = 0;
  virtual void reset() = 0;

  virtual void snapshot() = 0;
  virtual void restore() = 0;
  virtual void release() = 0;

  virtual std::unique_ptr<Spa> clone() const = 0;
};

// Rolls the SPA back to its state at guard construction when leaving scope.
class ScopedRestore {
 public:
  explicit ScopedRestore(Spa& spa) : spa_(spa) { spa_.snapshot(); }
  ~ScopedRestore() { spa_.restore(); }
  ScopedRestore(const ScopedRestore&) = delete;
  ScopedRestore& operator=(const ScopedRestore&) = delete;

 private:
  Spa& spa_;
};

// Add-gamma (Dirichlet mixture) estimator:
//   q(a) = (N(a) + gamma) / (N + A * gamma).
class DirichletSpa final : public Spa {
 public:
  DirichletSpa(std::size_t alphabet_size, double gamma);

  std::size_t alphabet_size() const override { return counts_.size(); }
  Pmf next_dist() const override;
  double prob(Symbol s) const override;
  void observe(Symbol s) override { observe_n(s, 1); }
  void observe_n(Symbol s, std::uint64_t times);
  void reset() override;

  void snapshot() override { saved_.push_back(counts_); }
  void restore() override;
  void release() override;

  std::unique_ptr<Spa> clone() const override { return std::make_unique<DirichletSpa>(*this); }

  double gamma() const noexcept { return gamma_; }
  std::uint64_t total() const noexcept { return total_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  double gamma_;
  std::vector<std::vector<std::uint64_t>> saved_;
};

// Constant 1/A predictor; observe() is a no-op.
class UniformSpa final : public Spa {
 public:
  explicit UniformSpa(std::size_t alphabet_size);

  std::size_t alphabet_size() const override { return size_; }
  Pmf next_dist() const override { return Pmf::uniform(size_); }
  double prob(Symbol) const override { return 1.0 / static_cast<double>(size_); }
  void observe(Symbol s) override;
  void reset() override {}
  void snapshot() override { ++depth_; }
  void restore() override;
  void release() override { restore(); }
  std::unique_ptr<Spa> clone() const override { return std::make_unique<UniformSpa>(*this); }

 private:
  std::size_t size_;
  std::size_t depth_ = 0;
};

std::unique_ptr<Spa> uniform_spa(std::size_t alphabet_size);

enum class SpaKind : std::uint8_t { kDirichlet = 0, kUniform = 1, kCustom = 255 };

const char* to_string(SpaKind kind);

// Describes how to build the independent inner SPA placed at each tree node.
//
// Dirichlet and uniform families depend on a node's history only through its
// symbol counts, which the tree already stores; nodes of those families are
// evaluated straight from tree counts. Custom families get one live instance
// per node.
class SpaFamily {
 public:
  using Factory = std::function<std::unique_ptr<Spa>(std::size_t alphabet_size)>;

  static SpaFamily dirichlet(double gamma);
  static SpaFamily uniform();
  static SpaFamily custom(std::string name, Factory factory);

  SpaKind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  const std::string& name() const noexcept { return name_; }
  bool counts_sufficient() const noexcept { return kind_ != SpaKind::kCustom; }

  std::unique_ptr<Spa> make(std::size_t alphabet_size) const;

  // PMF of a count-sufficient family given per-symbol counts `edges` (pairs
  // of symbol and count) that sum to `total`.
  template <typename EdgeRange>
  void dist_from_counts(const EdgeRange& edges, std::uint64_t total, std::size_t alphabet_size,
                        std::vector<double>& out) const {
    const double a = static_cast<double>(alphabet_size);
    out.assign(alphabet_size, 0.0);
    if (kind_ == SpaKind::kUniform) {
      std::fill(out.begin(), out.end(), 1.0 / a);
      return;
    }
    const double denom = static_cast<double>(total) + a * gamma_;
    std::fill(out.begin(), out.end(), gamma_ / denom);
    for (const auto& e : edges) out[e.symbol] = (static_cast<double>(e.count) + gamma_) / denom;
  }

  double prob_from_count(std::uint64_t count, std::uint64_t total,
                         std::size_t alphabet_size) const {
    if (kind_ == SpaKind::kUniform) return 1.0 / static_cast<double>(alphabet_size);
    return (static_cast<double>(count) + gamma_) /
           (static_cast<double>(total) + static_cast<double>(alphabet_size) * gamma_);
  }

 private:
  SpaFamily(SpaKind kind, double gamma, std::string name, Factory factory);

  SpaKind kind_;
  double gamma_;
  std::string name_;
  Factory factory_;
};

// Cumulative log loss of `spa` on `seq`, evaluated from the SPA's current
// state. The SPA is restored before returning. A zero-probability step makes
// the total +infinity.
LogLossReport log_loss(Spa& spa, const Sequence& seq);

}  // namespace lzspa

#endif  // LZSPA_SPA_HPP_
