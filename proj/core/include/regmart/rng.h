// Copyright 2026 The regmart Authors
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


#ifndef REGMART_RNG_H_
#define REGMART_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace regmart {

// Name and version recorded in every report that consumes random numbers.
// Bump the version whenever the mapping (seed, stream) -> output changes.
inline constexpr const char* kGeneratorName = "philox4x32-10";
inline constexpr const char* kGeneratorVersion = "1";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// The Philox4x32 bijection with ten rounds (Salmon et al., SC'11).
PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key);

// Counter-based generator. The key is the master seed; the upper half of the
// counter is the stream index (replicate, case, restart) and the lower half
// counts blocks within the stream. Identical (seed, stream) pairs give
// identical sequences on every platform and for every worker layout.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);
  // +1 or -1 with probability 1/2 each.
  int Sign();
  // Uniform integer in [0, bound); bound must be positive.
  std::uint32_t UniformInt(std::uint32_t bound);
  // Standard normal via Box-Muller (one variate per call, no caching).
  double Normal();

 private:
  void Refill();

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int position_ = 4;
};

}  // namespace regmart

#endif  // REGMART_RNG_H_
