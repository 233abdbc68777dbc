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


#ifndef REGMART_MINIMAX_H_
#define REGMART_MINIMAX_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regmart/trees.h"

namespace regmart {

enum class LossKind {
  kLinear,  // l(a, b) = -a b / 2
  kSquare,  // l(a, b) = (a - b)^2
};

double Loss(LossKind kind, double prediction, double outcome);
std::string LossKindName(LossKind kind);
LossKind ParseLossKind(const std::string& name);

// B(f; x_1, ..., x_n) for function index f and the chosen points.
using SequenceFunctional =
    std::function<double(std::size_t f, std::span<const PointId> x)>;
// B(f; x) for a whole predictable process.
using TreeFunctional =
    std::function<double(std::size_t f, const DyadicTree& x)>;

// Serializable description of the comparator term B.
struct BSpec {
  enum class Kind {
    kConstant,  // B = value
    // Half of 32 D log2(n) (sum_t sup_f |f(x_t)|^r)^(1/r) + phi_n, which is
    // the log-variation bound rescaled to the loss -ab/2.
    kLogVariation,
    kPerFunction,  // B(f) = values[f]
  };
  Kind kind = Kind::kConstant;
  double value = 0.0;
  double d_const = 1.0;
  double r = 2.0;
  std::vector<double> values;

  SequenceFunctional Bind(const FiniteFunctionClass& f_class) const;
};

// Symmetric uniform grid on [-1, 1]; `points` must be odd so 0 is included.
std::vector<double> UniformGrid(int points);

struct GameSpec {
  FiniteFunctionClass f_class;
  int horizon = 1;
  LossKind loss = LossKind::kLinear;
  BSpec b;
  // Overrides b when set.
  SequenceFunctional b_custom;
  std::vector<double> grid = UniformGrid(41);
  std::vector<double> y_values = {-1.0, 1.0};
  // Points the adversary may choose; empty means the whole domain.
  std::vector<PointId> points;
  // Per-tree game: x_t is read off this tree along the signs y_1..y_{t-1}
  // (y = +1 moves right) instead of being chosen by the adversary.
  std::optional<DyadicTree> tree;
  // Cap on the number of game states visited.
  std::uint64_t state_limit = std::uint64_t{1} << 24;

  void Validate() const;
  std::vector<PointId> AdversaryPoints() const;
  SequenceFunctional Comparator() const;
  double GridStep() const;
  // Leaves of the full (x, y_hat, y) game tree.
  double NaiveLeafCount() const;
};

// Predictions keyed by history (x_1, y_1, ..., x_{t-1}, y_{t-1}, x_t), with
// points stored as ids and outcomes as indices into GameSpec::y_values.
struct StrategyTree {
  std::map<std::vector<std::uint32_t>, double> predictions;

  double Predict(const std::vector<std::uint32_t>& history) const;
};

struct MinimaxResult {
  double value = 0.0;
  StrategyTree strategy;
  std::uint64_t states = 0;
  double grid_step = 0.0;
  // value <= 0: the discretized game admits a strategy satisfying the
  // regret inequality.
  bool certified() const { return value <= 0.0; }
};

// Exact backward induction
//   V(h) = max_x min_{y_hat} max_y [ l(y_hat, y) + V(h, x, y) ],
//   V(h_n) = -min_f { sum_t l(f(x_t), y_t) + B(f; x_{1:n}) },
// memoized on (t, points so far, per-function cumulative losses). Ties in
// y_hat go to the smallest |y_hat|, then the smallest grid index. The first
// adversary move is distributed over workers.
MinimaxResult MinimaxValue(const GameSpec& spec, int workers = 1);

// The same recursion written out over the full game tree without any
// sharing. Intended as an oracle on tiny instances.
double NaiveMinimaxValue(const GameSpec& spec);

// sum_t l(y_hat_t, y_t) with y_hat from the strategy, compared with
// inf_f { sum_t l(f(x_t), y_t) + B(f; x) }: returns RHS - LHS.
double StrategyReplay(const StrategyTree& strategy, std::span<const PointId> x,
                      std::span<const double> y, const GameSpec& spec);

// Minimum replay margin over every admissible (x, y) sequence. For the
// per-tree game only the y sequence varies.
double ExhaustiveReplayMargin(const StrategyTree& strategy,
                              const GameSpec& spec);

// 2^-n sum_eps sup_f [ sum_t eps_t f(x_t(eps)) - 2 B(f; x(eps)) ].
double CheckExpectationCondition(const FiniteFunctionClass& f_class,
                                 const SequenceFunctional& b,
                                 const DyadicTree& x,
                                 int limit = kDefaultExhaustiveLimit);
// Same with a tree functional B(f; x).
double CheckExpectationCondition(const FiniteFunctionClass& f_class,
                                 const TreeFunctional& b, const DyadicTree& x,
                                 int limit = kDefaultExhaustiveLimit);

// B(f; x) = max over paths of the sequence functional.
TreeFunctional MaxOverPaths(const SequenceFunctional& b);
// max_eps sum_t sup_f |f(x_t(eps))|^p, independent of f.
TreeFunctional MaxPathVariation(const FiniteFunctionClass& f_class, double p);

struct RotationCheck {
  double margin = 0.0;
  std::uint64_t relabelings = 0;
  bool exhaustive = false;
  std::size_t worst_function = 0;
  SignTree worst_relabeling;
};

// max_f max_y [ B(f; x o y) - B(f; x) ] over all sign-valued relabelings y
// when there are at most `budget` of them, else over `budget` random ones.
RotationCheck CheckRotationMonotone(std::size_t class_size,
                                    const TreeFunctional& b,
                                    const DyadicTree& x, std::uint64_t budget,
                                    std::uint64_t seed);

}  // namespace regmart

#endif  // REGMART_MINIMAX_H_
