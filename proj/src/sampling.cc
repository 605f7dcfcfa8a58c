//
// Copyright 2026 The BiasLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "biaslens/sampling.h"

#include <algorithm>
#include <numeric>

namespace biaslens {

std::uint64_t SeededRng::UniformBelow(std::uint64_t bound) {
  // Reject the low residue so every value in [0, bound) is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t draw = engine_();
    if (draw >= threshold) return draw % bound;
  }
}

std::vector<std::size_t> SampleWithoutReplacement(std::size_t population,
                                                  std::size_t count,
                                                  SeededRng& rng) {
  std::vector<std::size_t> indices(population);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  if (count >= population) return indices;
  // Partial Fisher-Yates over the first `count` positions.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.UniformBelow(population - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  std::sort(indices.begin(), indices.end());
  return indices;
}

std::vector<std::size_t> SampleWithReplacement(std::size_t population,
                                               std::size_t count,
                                               SeededRng& rng) {
  std::vector<std::size_t> draws;
  draws.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    draws.push_back(rng.UniformBelow(population));
  }
  return draws;
}

}  // namespace biaslens
