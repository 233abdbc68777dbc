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


#ifndef REGMART_STRATEGIES_H_
#define REGMART_STRATEGIES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regmart/linalg.h"
#include "regmart/mirror_map.h"
#include "regmart/trees.h"

namespace regmart {

// Absolute slack allowed when checking a pathwise inequality.
inline constexpr double kPathwiseTolerance = 1e-9;

enum class BoundKind {
  kSqrtN,                // sqrt(n)
  kAdaptiveVariation,    // 2.5 R_max (sqrt(V_n) + 1)
  kOptimisticVariation,  // 4.5 R_max (sqrt(sum |z_t - M_t|^2) + 1)
};

std::string BoundKindName(BoundKind kind);
BoundKind ParseBoundKind(const std::string& name);

struct RegretTranscript {
  std::string strategy;
  MirrorMap domain = MirrorMap::Euclidean(1);
  // predictions[t-1] is the prediction for round t; inputs likewise.
  std::vector<Vec> predictions;
  std::vector<Vec> inputs;
  // Predictable centers M_t; empty unless the optimistic variant ran.
  std::vector<Vec> centers;
  // Step size used in round t.
  std::vector<double> step_sizes;
  // Cumulative sum over s <= t of |z_s|_*^2, or |z_s - M_s|_*^2 with centers.
  std::vector<double> variation;

  int horizon() const { return static_cast<int>(inputs.size()); }
};

// y_1 = 0, y_{t+1} = Proj_ball(y_t - z_t / sqrt(n)) on the unit l_2 ball.
RegretTranscript RunGradientDescent(std::span<const Vec> z);

// eta_t = R_max min{1, 1 / (sqrt(V_t) + sqrt(V_{t-1}))}, with 1/0 read as
// +infinity.
double AdaptiveStepSize(double r_max, double v_t, double v_prev);

// y_1 = 0, y_{t+1} = argmin_f eta_t <f, z_t> + D(f, y_t).
RegretTranscript RunAdaptiveOmd(const MirrorMap& mirror,
                                std::span<const Vec> z);

// Optimistic mirror descent with predictable centers M_t:
//   f_t = argmin eta_t <f, M_t> + D(f, g_{t-1}),
//   g_t = argmin eta_t <f, z_t> + D(f, g_{t-1}),   g_0 = 0,
// where eta_t uses the center-corrected variation up to round t - 1. The
// 4.5-constant bound is guaranteed when |z_t - M_t|_* <= 2, which is enforced.
RegretTranscript RunOptimisticOmd(const MirrorMap& mirror,
                                  std::span<const Vec> z,
                                  std::span<const Vec> centers);

// sup over the domain of sum_t <y_t - f, z_t>
// = sum_t <y_t, z_t> + support(-sum_t z_t).
double LinearRegret(const RegretTranscript& transcript);
// Regret of every prefix s = 1..n.
std::vector<double> PrefixLinearRegret(const RegretTranscript& transcript);

// Bound value at horizon s (1 <= s <= n).
double BoundValue(const RegretTranscript& transcript, BoundKind kind, int s);

// bound - regret at the full horizon. Negative values are falsifications.
double VerifyPathwise(const RegretTranscript& transcript, BoundKind kind);
// Minimum of bound - regret over all prefixes. For kSqrtN, whose schedule
// depends on n, this is the full-horizon margin.
double MinPrefixMargin(const RegretTranscript& transcript, BoundKind kind);

// 64 D sqrt(n) ln(n) / n^(D^2 ln n), evaluated in log space.
double PhiN(double d_const, int n);

// Scalar game with linear loss -y_hat y over a finite class.
struct ScalarGameTranscript {
  std::vector<PointId> x;
  std::vector<double> y;
  std::vector<double> predictions;
};

// 32 D log2(n) (sum_t sup_f |f(x_t)|^r)^(1/r) + phi_n.
double LogVariationBound(const FiniteFunctionClass& f_class,
                         std::span<const PointId> x, double d_const, double r);
// sum_t (-y_hat_t y_t) - inf_f sum_t (-f(x_t) y_t).
double ScalarLinearRegret(const FiniteFunctionClass& f_class,
                          const ScalarGameTranscript& transcript);
double VerifyLogVariation(const FiniteFunctionClass& f_class,
                          const ScalarGameTranscript& transcript,
                          double d_const, double r);

enum class StrategyKind {
  kGradientDescent,
  kAdaptiveOmd,
  kOptimisticOmd,
  // Always predicts constant * e_1. Used to exercise the falsification path.
  kConstant,
};

struct StrategySpec {
  StrategyKind kind = StrategyKind::kAdaptiveOmd;
  DomainKind domain = DomainKind::kL2Ball;
  double q = 2.0;
  double radius = 1.0;
  double constant = 1.0;

  MirrorMap Mirror(int dimension) const;
  // Bound the strategy claims. The constant strategy claims the adaptive one.
  BoundKind Bound() const;
  // The bound holds for every prefix.
  bool Anytime() const { return kind != StrategyKind::kGradientDescent; }
  // Largest dual norm of an admissible input.
  double InputRadius() const;
  std::string Name() const;
};

StrategyKind ParseStrategyKind(const std::string& name);
DomainKind ParseDomainKind(const std::string& name);

// Runs the strategy. The optimistic variant uses M_1 = 0, M_t = z_{t-1}.
RegretTranscript RunStrategy(const StrategySpec& spec, int dimension,
                             std::span<const Vec> z);
// MinPrefixMargin for anytime strategies, VerifyPathwise otherwise.
double StrategyMargin(const StrategySpec& spec,
                      const RegretTranscript& transcript);

// Draws an input sequence from a mixture of structured families (i.i.d. in
// the ball, on the sphere, repeated direction, alternating signs, sparse
// axes, zero runs), every input within `input_radius` in the dual norm.
std::vector<Vec> SampleInputSequence(const MirrorMap& mirror, int n,
                                     double input_radius, std::uint64_t seed,
                                     std::uint64_t stream);

struct SearchResult {
  std::vector<Vec> worst_sequence;
  double min_margin = 0.0;
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
};

struct SearchOptions {
  std::size_t budget = 1;
  // Perturbation steps per restart; clipped so the budget is respected.
  std::size_t local_steps = 64;
  int workers = 1;
};

// Random restarts followed by coordinate-wise perturbation descent on the
// margin. Restart r uses stream r, so the result depends only on the seed.
SearchResult AdversarialSearch(const StrategySpec& spec, int n, int dimension,
                               const SearchOptions& options,
                               std::uint64_t seed);

struct FuzzOptions {
  std::size_t cases = 1000;
  int n_min = 1;
  int n_max = 128;
  int d_min = 1;
  int d_max = 8;
  int workers = 1;
};

struct FuzzReport {
  std::size_t cases = 0;
  std::size_t violations = 0;
  double min_margin = 0.0;
  int worst_n = 0;
  int worst_d = 0;
  std::size_t worst_case = 0;
  std::vector<Vec> worst_sequence;
  // Per-case margin, horizon and dimension, indexed by case number.
  std::vector<double> margins;
  std::vector<int> ns;
  std::vector<int> ds;
};

// Case i draws n in [n_min, n_max] and d in [d_min, d_max] from stream i.
FuzzReport FuzzPathwise(const StrategySpec& spec, const FuzzOptions& options,
                        std::uint64_t seed);

}  // namespace regmart

#endif  // REGMART_STRATEGIES_H_
