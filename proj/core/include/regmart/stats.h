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


#ifndef REGMART_STATS_H_
#define REGMART_STATS_H_

#include <cstddef>
#include <span>

namespace regmart {

// Pairwise (cascade) summation. The grouping depends only on the input
// length, so results do not change with the number of workers.
double PairwiseSum(std::span<const double> values);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

// Sample mean with the standard error s / sqrt(N) (s uses N - 1).
Estimate MeanWithError(std::span<const double> values);

// One-sided exact binomial (Clopper-Pearson) upper confidence bound for the
// success probability after `successes` out of `trials`, at error level
// `delta`: the p with P(Binomial(trials, p) <= successes) = delta.
double ClopperPearsonUpper(std::size_t successes, std::size_t trials,
                           double delta);

}  // namespace regmart

#endif  // REGMART_STATS_H_
