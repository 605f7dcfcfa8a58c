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

#ifndef BIASLENS_SAMPLING_H_
#define BIASLENS_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace biaslens {

// Seeded generator whose draws are identical on every platform.
// std::mt19937_64 has a fully specified output sequence; the standard
// distributions do not, so bounded draws are done here by rejection.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t UniformBelow(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// `count` distinct indices drawn uniformly from [0, population), returned in
// ascending order. Returns every index when count >= population.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t population,
                                                  std::size_t count,
                                                  SeededRng& rng);

// `count` indices drawn uniformly with replacement from [0, population),
// in draw order. `population` must be positive unless `count` is zero.
std::vector<std::size_t> SampleWithReplacement(std::size_t population,
                                               std::size_t count,
                                               SeededRng& rng);

}  // namespace biaslens

#endif  // BIASLENS_SAMPLING_H_
