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


#include "regmart/strategies.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "regmart/rng.h"

namespace regmart {
namespace {

Vec E(int d, int i, double scale = 1.0) {
  Vec v(d, 0.0);
  v[i] = scale;
  return v;
}

// Projected gradient descent written out directly on the unit l2 ball.
std::vector<Vec> ProjectedGradient(const std::vector<Vec>& z,
                                   const std::vector<double>& eta) {
  std::vector<Vec> y = {Vec(z[0].size(), 0.0)};
  for (std::size_t t = 0; t + 1 < z.size(); ++t) {
    Vec next = y.back();
    for (std::size_t i = 0; i < next.size(); ++i) next[i] -= eta[t] * z[t][i];
    const double norm = Norm2(next);
    if (norm > 1.0) {
      for (double& v : next) v /= norm;
    }
    y.push_back(next);
  }
  return y;
}

TEST(GradientDescentTest, FirstPredictionIsZero) {
  const std::vector<Vec> z = {{0.6, 0.8}};
  const auto tr = RunGradientDescent(z);
  EXPECT_EQ(tr.predictions[0], Vec({0.0, 0.0}));
  EXPECT_NEAR(LinearRegret(tr), 1.0, 1e-15);
  EXPECT_NEAR(VerifyPathwise(tr, BoundKind::kSqrtN), 0.0, 1e-15);
}

TEST(GradientDescentTest, ZeroInputs) {
  const std::vector<Vec> z(5, Vec(3, 0.0));
  const auto tr = RunGradientDescent(z);
  for (const Vec& y : tr.predictions) EXPECT_EQ(y, Vec(3, 0.0));
  EXPECT_EQ(LinearRegret(tr), 0.0);
}

TEST(GradientDescentTest, TwoRoundHandExample) {
  const std::vector<Vec> z = {E(2, 0), E(2, 0)};
  const auto tr = RunGradientDescent(z);
  EXPECT_NEAR(tr.predictions[1][0], -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(tr.predictions[1][1], 0.0, 1e-15);
  EXPECT_NEAR(LinearRegret(tr), 2.0 - 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(VerifyPathwise(tr, BoundKind::kSqrtN),
              std::sqrt(2.0) - (2.0 - 1.0 / std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(VerifyPathwise(tr, BoundKind::kSqrtN), 0.1213, 1e-4);
}

TEST(GradientDescentTest, RejectsLargeInputs) {
  const std::vector<Vec> z = {{1.0 + 1e-9, 0.0}};
  EXPECT_THROW(RunGradientDescent(z), DomainError);
}

TEST(LinearRegretTest, SupTermOnly) {
  RegretTranscript tr;
  tr.domain = MirrorMap::Euclidean(2);
  tr.inputs = {E(2, 0), E(2, 0)};
  tr.predictions = {Vec(2, 0.0), Vec(2, 0.0)};
  tr.step_sizes = {1.0, 1.0};
  tr.variation = {1.0, 2.0};
  EXPECT_DOUBLE_EQ(LinearRegret(tr), 2.0);
}

TEST(AdaptiveStepTest, ClosedFormOnUnitNorms) {
  const MirrorMap mirror = MirrorMap::Euclidean(3);
  std::vector<Vec> z;
  CounterRng rng(1, 0);
  for (int t = 0; t < 40; ++t) {
    Vec v = {rng.Normal(), rng.Normal(), rng.Normal()};
    const double norm = Norm2(v);
    for (double& x : v) x /= norm;
    z.push_back(v);
  }
  const auto tr = RunAdaptiveOmd(mirror, z);
  const double r_max = std::sqrt(2.0);
  for (int t = 1; t <= 40; ++t) {
    const double expected =
        r_max * std::min(1.0, 1.0 / (std::sqrt(t) + std::sqrt(t - 1.0)));
    EXPECT_NEAR(tr.step_sizes[t - 1], expected, 1e-12);
    if (t > 1) {
      EXPECT_LE(tr.step_sizes[t - 1], tr.step_sizes[t - 2]);
    }
  }
}

TEST(AdaptiveStepTest, ZeroVariationTakesFullStep) {
  EXPECT_DOUBLE_EQ(AdaptiveStepSize(2.0, 0.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(AdaptiveStepSize(2.0, 4.0, 0.0), 1.0);
}

TEST(AdaptiveOmdTest, ZeroInputs) {
  const MirrorMap mirror = MirrorMap::Euclidean(2);
  const std::vector<Vec> z(6, Vec(2, 0.0));
  const auto tr = RunAdaptiveOmd(mirror, z);
  for (double eta : tr.step_sizes) EXPECT_DOUBLE_EQ(eta, mirror.RMax());
  for (const Vec& y : tr.predictions) EXPECT_EQ(y, Vec(2, 0.0));
  EXPECT_EQ(LinearRegret(tr), 0.0);
  EXPECT_DOUBLE_EQ(VerifyPathwise(tr, BoundKind::kAdaptiveVariation),
                   2.5 * mirror.RMax());
}

TEST(AdaptiveOmdTest, EuclideanMatchesProjectedGradient) {
  const MirrorMap mirror = MirrorMap::Euclidean(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto z = SampleInputSequence(mirror, 50, 1.0, seed, 0);
    const auto tr = RunAdaptiveOmd(mirror, z);
    const auto expected = ProjectedGradient(z, tr.step_sizes);
    for (std::size_t t = 0; t < z.size(); ++t) {
      for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(tr.predictions[t][i], expected[t][i], 1e-10);
      }
    }
  }
}

TEST(AdaptiveOmdTest, AnytimeBoundOnAllGeometries) {
  for (const MirrorMap& mirror :
       {MirrorMap::Euclidean(3), MirrorMap::LqBall(3, 1.5), MirrorMap::Box(3),
        MirrorMap::Euclidean(2, 3.0)}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto z = SampleInputSequence(mirror, 64, 1.0, seed, 7);
      const auto tr = RunAdaptiveOmd(mirror, z);
      ASSERT_GE(MinPrefixMargin(tr, BoundKind::kAdaptiveVariation),
                -kPathwiseTolerance)
          << mirror.Describe() << " seed " << seed;
      for (const Vec& y : tr.predictions) EXPECT_TRUE(mirror.Contains(y, 1e-9));
    }
  }
}

TEST(OptimisticOmdTest, BoundWithPreviousInputCenters) {
  const MirrorMap mirror = MirrorMap::Euclidean(3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto z = SampleInputSequence(mirror, 48, 1.0, seed, 3);
    std::vector<Vec> centers = {Vec(3, 0.0)};
    for (std::size_t t = 0; t + 1 < z.size(); ++t) centers.push_back(z[t]);
    const auto tr = RunOptimisticOmd(mirror, z, centers);
    EXPECT_GE(MinPrefixMargin(tr, BoundKind::kOptimisticVariation),
              -kPathwiseTolerance);
  }
}

TEST(OptimisticOmdTest, PerfectCentersShrinkVariation) {
  const MirrorMap mirror = MirrorMap::Euclidean(2);
  const std::vector<Vec> z(10, E(2, 0));
  const auto tr = RunOptimisticOmd(mirror, z, z);
  EXPECT_DOUBLE_EQ(tr.variation.back(), 0.0);
  EXPECT_GE(VerifyPathwise(tr, BoundKind::kOptimisticVariation), 0.0);
}

TEST(OptimisticOmdTest, RejectsFarCenters) {
  const MirrorMap mirror = MirrorMap::Euclidean(1);
  const std::vector<Vec> z = {{1.0}};
  const std::vector<Vec> m = {{-1.5}};
  EXPECT_THROW(RunOptimisticOmd(mirror, z, m), DomainError);
}

TEST(VerifyPathwiseTest, PrefixMarginIsMinimum) {
  const MirrorMap mirror = MirrorMap::Euclidean(2);
  const auto z = SampleInputSequence(mirror, 20, 1.0, 4, 0);
  const auto tr = RunAdaptiveOmd(mirror, z);
  const auto regret = PrefixLinearRegret(tr);
  double expected = 1e300;
  for (int s = 1; s <= 20; ++s) {
    expected =
        std::min(expected, BoundValue(tr, BoundKind::kAdaptiveVariation, s) -
                               regret[s - 1]);
  }
  EXPECT_DOUBLE_EQ(MinPrefixMargin(tr, BoundKind::kAdaptiveVariation),
                   expected);
  EXPECT_DOUBLE_EQ(regret.back(), LinearRegret(tr));
}

TEST(SearchTest, SingleEvaluationBudget) {
  StrategySpec spec;
  spec.kind = StrategyKind::kAdaptiveOmd;
  SearchOptions options;
  options.budget = 1;
  const auto result = AdversarialSearch(spec, 8, 2, options, 5);
  EXPECT_EQ(result.evaluations, 1u);
  const auto z =
      SampleInputSequence(spec.Mirror(2), 8, spec.InputRadius(), 5, 0);
  EXPECT_EQ(result.worst_sequence, z);
  EXPECT_DOUBLE_EQ(result.min_margin,
                   StrategyMargin(spec, RunStrategy(spec, 2, z)));
}

TEST(SearchTest, GradientDescentSingleRoundIsTightOnSphere) {
  StrategySpec spec;
  spec.kind = StrategyKind::kGradientDescent;
  SearchOptions options;
  options.budget = 2000;
  const auto result = AdversarialSearch(spec, 1, 3, options, 9);
  EXPECT_GE(result.min_margin, -kPathwiseTolerance);
  EXPECT_LT(result.min_margin, 1e-3);
  EXPECT_NEAR(Norm2(result.worst_sequence[0]), 1.0, 1e-3);
}

TEST(SearchTest, AdaptiveSurvivesSearch) {
  StrategySpec spec;
  spec.kind = StrategyKind::kAdaptiveOmd;
  SearchOptions options;
  options.budget = 10000;
  for (int n : {1, 8, 64}) {
    const auto result = AdversarialSearch(spec, n, 8, options, 1);
    EXPECT_GE(result.min_margin, -kPathwiseTolerance) << "n = " << n;
    EXPECT_LE(result.evaluations, options.budget);
  }
}

TEST(SearchTest, DeterministicAcrossWorkers) {
  StrategySpec spec;
  SearchOptions one, four;
  one.budget = four.budget = 500;
  four.workers = 4;
  const auto a = AdversarialSearch(spec, 6, 3, one, 2);
  const auto b = AdversarialSearch(spec, 6, 3, four, 2);
  EXPECT_EQ(a.min_margin, b.min_margin);
  EXPECT_EQ(a.worst_sequence, b.worst_sequence);
}

TEST(SearchTest, ConstantStrategyIsRefuted) {
  StrategySpec spec;
  spec.kind = StrategyKind::kConstant;
  spec.constant = 1.0;
  EXPECT_EQ(spec.Bound(), BoundKind::kAdaptiveVariation);
  const std::vector<Vec> z(200, E(2, 0));
  EXPECT_LT(StrategyMargin(spec, RunStrategy(spec, 2, z)), 0.0);
  FuzzOptions options;
  options.cases = 200;
  EXPECT_GT(FuzzPathwise(spec, options, 3).violations, 0u);
}

TEST(FuzzTest, ShapesAndDeterminism) {
  StrategySpec spec;
  spec.kind = StrategyKind::kGradientDescent;
  FuzzOptions options;
  options.cases = 300;
  options.n_max = 32;
  const auto a = FuzzPathwise(spec, options, 8);
  options.workers = 3;
  const auto b = FuzzPathwise(spec, options, 8);
  EXPECT_EQ(a.margins, b.margins);
  EXPECT_EQ(a.violations, 0u);
  for (std::size_t i = 0; i < a.cases; ++i) {
    EXPECT_GE(a.ns[i], 1);
    EXPECT_LE(a.ns[i], 32);
    EXPECT_GE(a.ds[i], 1);
    EXPECT_LE(a.ds[i], 8);
  }
  options.n_min = 5;
  options.n_max = 4;
  EXPECT_THROW(FuzzPathwise(spec, options, 8), DomainError);
}

TEST(PhiNTest, Values) {
  const double ln2 = std::log(2.0);
  EXPECT_NEAR(PhiN(1.0, 2), 64.0 * std::sqrt(2.0) * ln2 / std::pow(2.0, ln2),
              1e-12);
  EXPECT_GT(PhiN(1.0, 10), PhiN(1.0, 100));
  EXPECT_LT(PhiN(5.0, 10), 1e-30);
  EXPECT_THROW(PhiN(1.0, 1), DomainError);
  EXPECT_THROW(PhiN(0.0, 4), DomainError);
}

TEST(LogVariationTest, BoundFormula) {
  const auto f_class =
      FiniteFunctionClass::FromRows(2, {{0.5, -1.0}, {0.0, 0.25}});
  const std::vector<PointId> x = {0, 1, 1, 0};
  const double inner = std::pow(0.5 * 0.5 + 1.0 + 1.0 + 0.5 * 0.5, 0.5);
  EXPECT_NEAR(LogVariationBound(f_class, x, 1.0, 2.0),
              32.0 * 2.0 * inner + PhiN(1.0, 4), 1e-12);
}

TEST(LogVariationTest, RegretOfSimpleTranscript) {
  const auto f_class = FiniteFunctionClass::Constants(1, {1.0, -1.0});
  ScalarGameTranscript tr;
  tr.x = {0, 0, 0};
  tr.y = {1.0, 1.0, -1.0};
  tr.predictions = {0.0, 0.0, 0.0};
  // Best constant gains sum y = 1, so regret = 0 - (-1) = 1.
  EXPECT_DOUBLE_EQ(ScalarLinearRegret(f_class, tr), 1.0);
  EXPECT_GT(VerifyLogVariation(f_class, tr, 1.0, 2.0), 0.0);
}

}  // namespace
}  // namespace regmart
