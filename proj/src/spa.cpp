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

#include "lzspa/spa.hpp"

#include <cmath>
#include <stdexcept>

namespace lzspa {

DirichletSpa::DirichletSpa(std::size_t alphabet_size, double gamma)
    : counts_(Alphabet(alphabet_size).size(), 0), gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be strictly positive");
  }
}

Pmf DirichletSpa::next_dist() const {
  const double denom =
      static_cast<double>(total_) + static_cast<double>(counts_.size()) * gamma_;
  std::vector<double> p(counts_.size());
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    p[a] = (static_cast<double>(counts_[a]) + gamma_) / denom;
  }
  return Pmf(std::move(p));
}

double DirichletSpa::prob(Symbol s) const {
  return (static_cast<double>(counts_.at(s)) + gamma_) /
         (static_cast<double>(total_) + static_cast<double>(counts_.size()) * gamma_);
}

void DirichletSpa::observe_n(Symbol s, std::uint64_t times) {
  if (s >= counts_.size()) {
    throw AlphabetError("symbol " + std::to_string(s) + " outside alphabet of size " +
                        std::to_string(counts_.size()));
  }
  counts_[s] += times;
  total_ += times;
}

void DirichletSpa::reset() {
  std::fill(counts_.begin(), counts_.end(), 0);
  total_ = 0;
}

void DirichletSpa::restore() {
  if (saved_.empty()) throw std::logic_error("restore() without a matching snapshot()");
  counts_ = std::move(saved_.back());
  saved_.pop_back();
  total_ = 0;
  for (auto c : counts_) total_ += c;
}

void DirichletSpa::release() {
  if (saved_.empty()) throw std::logic_error("release() without a matching snapshot()");
  saved_.pop_back();
}

UniformSpa::UniformSpa(std::size_t alphabet_size) : size_(Alphabet(alphabet_size).size()) {}

void UniformSpa::observe(Symbol s) {
  if (s >= size_) {
    throw AlphabetError("symbol " + std::to_string(s) + " outside alphabet of size " +
                        std::to_string(size_));
  }
}

void UniformSpa::restore() {
  if (depth_ == 0) throw std::logic_error("restore() without a matching snapshot()");
  --depth_;
}

std::unique_ptr<Spa> uniform_spa(std::size_t alphabet_size) {
  return std::make_unique<UniformSpa>(alphabet_size);
}

const char* to_string(SpaKind kind) {
  switch (kind) {
    case SpaKind::kDirichlet:
      return "dirichlet";
    case SpaKind::kUniform:
      return "uniform";
    case SpaKind::kCustom:
      return "custom";
  }
  return "unknown";
}

SpaFamily::SpaFamily(SpaKind kind, double gamma, std::string name, Factory factory)
    : kind_(kind), gamma_(gamma), name_(std::move(name)), factory_(std::move(factory)) {}

SpaFamily SpaFamily::dirichlet(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be strictly positive");
  }
  return SpaFamily(SpaKind::kDirichlet, gamma, "dirichlet", nullptr);
}

SpaFamily SpaFamily::uniform() { return SpaFamily(SpaKind::kUniform, 0.0, "uniform", nullptr); }

SpaFamily SpaFamily::custom(std::string name, Factory factory) {
  if (!factory) throw std::invalid_argument("custom SPA family needs a factory");
  return SpaFamily(SpaKind::kCustom, 0.0, std::move(name), std::move(factory));
}

std::unique_ptr<Spa> SpaFamily::make(std::size_t alphabet_size) const {
  switch (kind_) {
    case SpaKind::kDirichlet:
      return std::make_unique<DirichletSpa>(alphabet_size, gamma_);
    case SpaKind::kUniform:
      return std::make_unique<UniformSpa>(alphabet_size);
    case SpaKind::kCustom:
      return factory_(alphabet_size);
  }
  throw std::logic_error("unknown SPA kind");
}

LogLossReport log_loss(Spa& spa, const Sequence& seq) {
  if (seq.empty()) throw std::invalid_argument("log loss of an empty sequence");
  if (seq.alphabet().size() != spa.alphabet_size()) {
    throw AlphabetError("sequence alphabet does not match the SPA");
  }
  ScopedRestore guard(spa);
  LogLossReport report;
  for (Symbol s : seq.tokens()) {
    report.total_bits += surprisal_bits(spa.prob(s));
    spa.observe(s);
  }
  report.length = seq.size();
  report.per_symbol_bits = report.total_bits / static_cast<double>(report.length);
  return report;
}

}  // namespace lzspa
