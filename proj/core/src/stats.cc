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


#include "regmart/stats.h"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "regmart/error.h"

namespace regmart {

double PairwiseSum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

Estimate MeanWithError(std::span<const double> values) {
  Estimate est;
  est.count = values.size();
  if (values.empty()) return est;
  est.mean = PairwiseSum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return est;
  std::vector<double> squares(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - est.mean;
    squares[i] = d * d;
  }
  const double variance =
      PairwiseSum(squares) / static_cast<double>(values.size() - 1);
  est.std_error = std::sqrt(variance / static_cast<double>(values.size()));
  return est;
}

double ClopperPearsonUpper(std::size_t successes, std::size_t trials,
                           double delta) {
  if (trials == 0) throw DomainError("ClopperPearsonUpper: zero trials");
  if (successes > trials) {
    throw DomainError("ClopperPearsonUpper: successes exceed trials");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("ClopperPearsonUpper: delta must lie in (0, 1)");
  }
  if (successes == trials) return 1.0;
  if (successes == 0) {
    return -std::expm1(std::log(delta) / static_cast<double>(trials));
  }
  // Upper bound is the (1 - delta) quantile of Beta(k + 1, N - k).
  return boost::math::ibeta_inv(static_cast<double>(successes + 1),
                                static_cast<double>(trials - successes),
                                1.0 - delta);
}

}  // namespace regmart
