// Copyright 2026 The Skim Authors
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

#ifndef SKIM_RANDOM_H_
#define SKIM_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace skim {

// The single generator behind every random choice in the library. The
// engine is std::mt19937_64, whose output sequence is fixed by the standard;
// the derived draws below are implemented here rather than with the
// <random> distributions so results do not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Unbiased integer in [0, n); n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n);

  // Standard normal via Box-Muller.
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace skim

#endif  // SKIM_RANDOM_H_
