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


#ifndef LZSPA_GENERATION_HPP_
#define LZSPA_GENERATION_HPP_

#include <cstdint>
#include <optional>

#include "lzspa/lz_transform.hpp"
#include "lzspa/types.hpp"

namespace lzspa {

struct GenConfig {
  double temperature = 1.0;  // 0 = argmax
  std::size_t top_k = 0;     // 0 = the whole alphabet
  std::size_t min_context = 64;
  std::optional<Sequence> seed_data;
  std::uint64_t rng_seed = 0;
  std::size_t length = 0;
};

// Temperature first (p^(1/T), T = 0 giving a point mass on the argmax), then
// keeps the `top_k` largest entries, 1 <= top_k <= |A|. Ties go to the lower
// symbol both for the argmax and at the top-k boundary.
Pmf apply_temperature_topk(const Pmf& pmf, double temperature, std::size_t top_k);

struct GenerationResult {
  Sequence output;
  std::size_t backshifts = 0;
  ParseCursor seed_cursor;   // cursor after traversing the seed
  ParseCursor final_cursor;
};

// Samples `config.length` symbols from a frozen model. The model is only read,
// so any number of generations may share it across threads.
//
// Backshift: whenever the cursor sits on a node that saw no training symbols,
// it restarts at the root and re-traverses the last min(min_context, history)
// symbols, history being seed plus output so far. This happens at most once
// per emitted symbol.
GenerationResult generate(const LZTransformSpa& model, const GenConfig& config);

}  // namespace lzspa

#endif  // LZSPA_GENERATION_HPP_
