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


#include "lzspa/generation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lzspa/random.hpp"

namespace lzspa {

Pmf apply_temperature_topk(const Pmf& pmf, double temperature, std::size_t top_k) {
  const std::size_t a = pmf.size();
  if (a == 0) throw std::invalid_argument("empty PMF");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("temperature must be finite and >= 0");
  }
  if (top_k < 1 || top_k > a) throw std::invalid_argument("top_k must lie in [1, alphabet size]");

  if (temperature == 0.0 || top_k == 1) return Pmf::point_mass(a, pmf.argmax());

  std::vector<double> p(pmf.probs().begin(), pmf.probs().end());
  if (temperature != 1.0) {
    // Relative to the largest entry so that small T does not underflow.
    const double top = *std::max_element(p.begin(), p.end());
    if (top <= 0.0) throw std::invalid_argument("PMF has no positive entry");
    const double inv_t = 1.0 / temperature;
    for (double& v : p) v = v > 0.0 ? std::exp(inv_t * std::log(v / top)) : 0.0;
  }
  if (top_k < a) {
    std::vector<Symbol> order(a);
    std::iota(order.begin(), order.end(), Symbol{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k), order.end(),
                      [&](Symbol x, Symbol y) { return p[x] > p[y] || (p[x] == p[y] && x < y); });
    std::vector<double> kept(a, 0.0);
    for (std::size_t i = 0; i < top_k; ++i) kept[order[i]] = p[order[i]];
    p = std::move(kept);
  }
  double sum = 0.0;
  for (double v : p) sum += v;
  if (!(sum > 0.0)) throw std::invalid_argument("PMF has no positive entry");
  for (double& v : p) v /= sum;
  return Pmf(std::move(p));
}

GenerationResult generate(const LZTransformSpa& model, const GenConfig& config) {
  if (!model.frozen()) throw std::logic_error("generation needs a frozen model");
  const std::size_t a = model.alphabet_size();
  const std::size_t k = config.top_k == 0 ? a : config.top_k;
  if (k > a) throw std::invalid_argument("top_k exceeds the alphabet size");
  if (!(config.temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");

  std::vector<Symbol> history;
  if (config.seed_data) {
    if (config.seed_data->alphabet().size() != a) {
      throw AlphabetError("seed alphabet does not match the model");
    }
    history.assign(config.seed_data->tokens().begin(), config.seed_data->tokens().end());
  }
  history.reserve(history.size() + config.length);

  GenerationResult result{Sequence(Alphabet(a)), 0, {}, {}};
  ParseCursor cursor;
  for (Symbol s : history) cursor = model.advance(cursor, s);
  result.seed_cursor = cursor;

  Rng rng(config.rng_seed);
  std::vector<Symbol> out;
  out.reserve(config.length);
  const bool plain = config.temperature == 1.0 && k == a;
  for (std::size_t i = 0; i < config.length; ++i) {
    if (cursor.node != kRootNode && model.observations_at(cursor.node) == 0) {
      ++result.backshifts;
      const std::size_t tail = std::min(config.min_context, history.size());
      cursor = ParseCursor{};
      for (std::size_t j = history.size() - tail; j < history.size(); ++j) {
        cursor = model.advance(cursor, history[j]);
      }
    }
    const Pmf q = model.dist_at(cursor.node);
    Symbol s;
    if (plain) {
      s = rng.sample(q.probs());
    } else {
      const Pmf shaped = apply_temperature_topk(q, config.temperature, k);
      s = (config.temperature == 0.0 || k == 1) ? shaped.argmax() : rng.sample(shaped.probs());
    }
    out.push_back(s);
    history.push_back(s);
    cursor = model.advance(cursor, s);
  }
  result.final_cursor = cursor;
  result.output = Sequence(Alphabet(a), std::move(out));
  return result;
}

}  // namespace lzspa
