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


#include "regmart/complexity.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles/naive.h"
#include "regmart/rng.h"

namespace regmart {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FiniteFunctionClass RandomClass(CounterRng& rng, std::size_t m, std::size_t k,
                                int levels = 9) {
  std::vector<std::vector<double>> rows(k, std::vector<double>(m));
  for (auto& row : rows) {
    for (double& v : row) {
      v = (static_cast<int>(rng.UniformInt(levels)) - levels / 2) /
          static_cast<double>(levels / 2);
    }
  }
  return FiniteFunctionClass::FromRows(m, rows);
}

DyadicTree RandomTree(CounterRng& rng, std::size_t m, int depth) {
  DyadicTree x = DyadicTree::Constant(depth, 0);
  for (int t = 1; t <= depth; ++t) {
    for (std::uint64_t i = 0; i < DyadicTree::LevelWidth(t); ++i) {
      x.set_node(t, i, rng.UniformInt(static_cast<std::uint32_t>(m)));
    }
  }
  return x;
}

// The tree read along reflected paths: level t node i maps to the mirror
// image of i, which is what flipping every sign does.
DyadicTree Reflect(const DyadicTree& x) {
  DyadicTree out = x;
  for (int t = 1; t <= x.depth(); ++t) {
    const std::uint64_t w = DyadicTree::LevelWidth(t);
    for (std::uint64_t i = 0; i < w; ++i) {
      out.set_node(t, i, x.node(t, w - 1 - i));
    }
  }
  return out;
}

TEST(SeqRademacherTest, Examples) {
  const auto pm = FiniteFunctionClass::Constants(1, {1.0, -1.0});
  EXPECT_DOUBLE_EQ(SeqRademacherExact(pm, DyadicTree::Constant(2, 0)), 1.0);
  const auto zero = FiniteFunctionClass::Constants(1, {0.0});
  EXPECT_EQ(SeqRademacherExact(zero, DyadicTree::Constant(3, 0)), 0.0);
  const auto c = FiniteFunctionClass::Constants(1, {-0.7});
  EXPECT_DOUBLE_EQ(SeqRademacherExact(c, DyadicTree::Constant(1, 0)), 0.7);
  EXPECT_DOUBLE_EQ(
      SeqRademacherExact(c, DyadicTree::Constant(1, 0), /*absolute=*/false),
      0.0);
}

TEST(SeqRademacherTest, CapacityAndDomain) {
  const auto pm = FiniteFunctionClass::Constants(1, {1.0, -1.0});
  EXPECT_THROW(SeqRademacherExact(pm, DyadicTree::Constant(5, 0), true, 4),
               CapacityError);
  EXPECT_THROW(SeqRademacherExact(pm, DyadicTree::Constant(2, 1)), DomainError);
}

TEST(SeqRademacherTest, MatchesOracle) {
  CounterRng rng(1, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng.UniformInt(4);
    const auto f = RandomClass(rng, m, 1 + rng.UniformInt(5));
    const DyadicTree x = RandomTree(rng, m, 1 + rng.UniformInt(6));
    for (bool absolute : {true, false}) {
      EXPECT_NEAR(SeqRademacherExact(f, x, absolute, 22, 2),
                  oracle::Rademacher(f, x, absolute), 1e-12);
    }
  }
}

TEST(SeqRademacherTest, Invariances) {
  CounterRng rng(2, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng.UniformInt(3);
    const auto f = RandomClass(rng, m, 1 + rng.UniformInt(4));
    const DyadicTree x = RandomTree(rng, m, 1 + rng.UniformInt(5));
    const double rad = SeqRademacherExact(f, x);
    // Negating the class is the same as flipping every sign.
    EXPECT_NEAR(SeqRademacherExact(f.Negated(), Reflect(x)), rad, 1e-12);
    EXPECT_NEAR(SeqRademacherExact(f.Negated(), x, false),
                SeqRademacherExact(f, Reflect(x), false), 1e-12);
    EXPECT_GE(SeqRademacherExact(f.Union(f.Negated()), x, false) + 1e-12,
              SeqRademacherExact(f, x, false));
    EXPECT_GE(SeqRademacherExact(f.Union(f.Negated()), x) + 1e-12, rad);
  }
}

TEST(SeqRademacherTest, DifferenceClassIsSubadditive) {
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng.UniformInt(3);
    const auto g = RandomClass(rng, m, 1 + rng.UniformInt(4));
    const int n = 1 + static_cast<int>(rng.UniformInt(4));
    const PairTree pair(RandomTree(rng, m, n), RandomTree(rng, m, n));
    const double lhs =
        SeqRademacherExact(g.DifferenceClass(), pair.Combined(m));
    const double rhs = SeqRademacherExact(g, pair.first()) +
                       SeqRademacherExact(g, pair.second());
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST(SeqRademacherTest, MonteCarloBracketsExact) {
  const auto f = FiniteFunctionClass::FromRows(2, {{1.0, -0.5}, {0.2, 0.8}});
  const DyadicTree x(3, {{0}, {1, 0}, {0, 1, 1, 0}});
  const double exact = SeqRademacherExact(f, x);
  const Estimate mc = SeqRademacherMonteCarlo(f, x, 20000, 5);
  EXPECT_NEAR(mc.mean, exact, 4.0 * mc.std_error + 1e-12);
}

TEST(WorstCaseTest, SinglePointIsExact) {
  const auto f = FiniteFunctionClass::FromRows(1, {{0.3}, {-0.9}});
  const auto w = SeqRademacherWorstCase(f, 3, 100, 1);
  EXPECT_EQ(w.report.mode, ComplexityMode::kExact);
  EXPECT_DOUBLE_EQ(w.report.value,
                   SeqRademacherExact(f, DyadicTree::Constant(3, 0)));
}

TEST(WorstCaseTest, ConstantClassIgnoresTree) {
  const auto pm = FiniteFunctionClass::Constants(3, {1.0, -1.0});
  const auto w = SeqRademacherWorstCase(pm, 2, 1000, 1);
  EXPECT_EQ(w.report.mode, ComplexityMode::kExact);
  EXPECT_DOUBLE_EQ(w.report.value, 1.0);
}

TEST(WorstCaseTest, SeparatingClassMatchesEnumeration) {
  const auto f =
      FiniteFunctionClass::FromRows(2, {{1.0, -1.0}, {-1.0, 1.0}, {0.5, 0.5}});
  const auto w = SeqRademacherWorstCase(f, 2, 1 << 10, 1);
  EXPECT_EQ(w.report.mode, ComplexityMode::kExact);
  EXPECT_NEAR(w.report.value, oracle::WorstCaseRademacher(f, 2, true), 1e-12);
  EXPECT_NEAR(SeqRademacherExact(f, w.tree), w.report.value, 1e-12);
}

TEST(WorstCaseTest, SearchIsLowerBoundAndMonotoneInBudget) {
  CounterRng rng(4, 0);
  const auto f = RandomClass(rng, 3, 4);
  const int n = 3;
  const double truth = oracle::WorstCaseRademacher(f, n, true);
  double previous = 0.0;
  for (std::uint64_t budget : {1, 10, 100, 1000}) {
    const auto w = SeqRademacherWorstCase(f, n, budget, 9);
    EXPECT_EQ(w.report.mode, ComplexityMode::kSearchLowerBound);
    EXPECT_LE(w.report.value, truth + 1e-12);
    EXPECT_GE(w.report.value, previous);
    previous = w.report.value;
  }
}

TEST(OffsetRademacherTest, Examples) {
  const auto pm = FiniteFunctionClass::Constants(1, {1.0, -1.0});
  EXPECT_DOUBLE_EQ(OffsetRademacher(pm, DyadicTree::Constant(1, 0),
                                    RealTree::Constant(1, 0.0), 1.0, 1.0),
                   3.0);
  const auto zero = FiniteFunctionClass::Constants(1, {0.0});
  EXPECT_EQ(OffsetRademacher(zero, DyadicTree::Constant(3, 0),
                             RealTree::Constant(3, 0.0), 1.0, 2.0),
            0.0);
  const auto f = FiniteFunctionClass::FromRows(2, {{0.5, -1.0}, {0.25, 1.0}});
  const DyadicTree x(2, {{0}, {1, 0}});
  // c1 = 0: -c2 min_f sum f(x_t)^2, averaged over the two branches. The
  // left branch visits points (0, 1), the right branch (0, 0).
  const double expected = -2.0 * 0.5 * ((0.0625 + 1.0) + (0.0625 + 0.0625));
  EXPECT_DOUBLE_EQ(OffsetRademacher(f, x, RealTree::Constant(2, 0.0), 0.0, 2.0),
                   expected);
  EXPECT_THROW(OffsetRademacher(f, x, RealTree::Constant(2, 0.0), 1.0, -1.0),
               DomainError);
}

TEST(OffsetRademacherTest, MatchesOracleAndDecreasesInC2) {
  CounterRng rng(5, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.UniformInt(3);
    const auto f = RandomClass(rng, m, 1 + rng.UniformInt(4));
    const int n = 1 + static_cast<int>(rng.UniformInt(5));
    const DyadicTree x = RandomTree(rng, m, n);
    RealTree mu = RealTree::Constant(n, 0.0);
    for (int t = 1; t <= n; ++t) {
      for (std::uint64_t i = 0; i < RealTree::LevelWidth(t); ++i) {
        mu.set_node(t, i, rng.Uniform(-1.0, 1.0));
      }
    }
    const double c1 = rng.Uniform(0.0, 2.0);
    double previous = kInf;
    for (double c2 : {0.0, 0.5, 1.0, 3.0}) {
      const double value = OffsetRademacher(f, x, mu, c1, c2);
      EXPECT_NEAR(value, oracle::OffsetRademacher(f, x, mu, c1, c2), 1e-12);
      EXPECT_LE(value, previous + 1e-12);
      previous = value;
    }
  }
}

TEST(CoveringNumberTest, Examples) {
  const auto single = FiniteFunctionClass::FromRows(2, {{0.3, -0.2}});
  const DyadicTree x(2, {{0}, {1, 0}});
  for (double alpha : {0.01, 0.5, 2.0}) {
    EXPECT_EQ(CoveringNumber(single, x, alpha, 2.0).size, 1);
  }
  const auto pm = FiniteFunctionClass::Constants(2, {1.0, -1.0});
  EXPECT_EQ(CoveringNumber(pm, x, 2.0, 2.0).size, 1);
  EXPECT_EQ(CoveringNumber(pm, x, 2.0, kInf).size, 1);
  const auto zero_one = FiniteFunctionClass::Constants(1, {0.0, 1.0});
  const auto r = CoveringNumber(zero_one, DyadicTree::Constant(3, 0), 0.4, 2);
  EXPECT_EQ(r.size, 2);
  EXPECT_TRUE(r.exact);
  EXPECT_THROW(CoveringNumber(pm, x, 0.0, 2.0), DomainError);
}

TEST(CoveringNumberTest, CandidatesIncludeMidpoints) {
  const auto f = FiniteFunctionClass::FromRows(1, {{0.0}, {1.0}, {1.0}});
  EXPECT_EQ(CoverCandidates(f, 0), std::vector<double>({0.0, 0.5, 1.0}));
}

TEST(CoveringNumberTest, MatchesOracleAndMonotone) {
  CounterRng rng(6, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng.UniformInt(2);
    const auto f = RandomClass(rng, m, 1 + rng.UniformInt(3), 5);
    const DyadicTree x = RandomTree(rng, m, 1 + rng.UniformInt(2));
    for (double p : {1.0, 2.0, kInf}) {
      int previous = std::numeric_limits<int>::max();
      for (double alpha : {0.1, 0.3, 0.6, 1.2}) {
        const auto r = CoveringNumber(f, x, alpha, p);
        ASSERT_TRUE(r.exact);
        EXPECT_EQ(r.size, oracle::CoveringNumber(f, x, alpha, p))
            << "trial " << trial << " p " << p << " alpha " << alpha;
        EXPECT_LE(r.size, previous);
        previous = r.size;
      }
    }
  }
}

TEST(CoveringNumberTest, BudgetFallsBackToBracket) {
  CounterRng rng(7, 0);
  const auto f = RandomClass(rng, 3, 8);
  const DyadicTree x = RandomTree(rng, 3, 4);
  const auto r = CoveringNumber(f, x, 0.05, 2.0, /*budget=*/10);
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.lower_bound, r.size);
  EXPECT_LE(r.size, static_cast<int>(f.size()));
}

TEST(FatShatteringTest, Examples) {
  const auto zero_one = FiniteFunctionClass::Constants(1, {0.0, 1.0});
  EXPECT_EQ(FatShattering(zero_one, 1.0, 4), 1);
  EXPECT_EQ(FatShattering(zero_one, 0.3, 4), 1);
  EXPECT_EQ(FatShattering(zero_one, 2.5, 4), 0);
  const auto single = FiniteFunctionClass::FromRows(2, {{0.3, -0.2}});
  EXPECT_EQ(FatShattering(single, 0.01, 4), 0);
  EXPECT_EQ(FatWitnesses(zero_one, 0, 1.0), std::vector<double>({0.5}));
  EXPECT_THROW(FatShattering(zero_one, 0.0, 2), DomainError);
}

TEST(FatShatteringTest, FourFunctionsShatterDepthTwo) {
  // Point 0 splits {a, b} from {c, d}; point 1 splits within each half.
  const auto f = FiniteFunctionClass::FromRows(
      2, {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}});
  EXPECT_EQ(FatShattering(f, 1.0, 3), 2);
  EXPECT_EQ(FatShattering(f, 2.0, 3), 2);
  EXPECT_EQ(FatShattering(f, 2.1, 3), 0);
}

TEST(FatShatteringTest, MatchesOracleAndMonotone) {
  CounterRng rng(8, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng.UniformInt(2);
    const auto f = RandomClass(rng, m, 2 + rng.UniformInt(3), 5);
    int previous = std::numeric_limits<int>::max();
    for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
      const int fat = FatShattering(f, alpha, 2);
      EXPECT_EQ(fat, oracle::FatShattering(f, alpha, 2)) << "trial " << trial;
      EXPECT_LE(fat, previous);
      previous = fat;
    }
  }
}

TEST(GrowthConstantTest, Examples) {
  const std::vector<int> ns = {1, 2, 4};
  const auto zero = FiniteFunctionClass::Constants(1, {0.0});
  EXPECT_EQ(GrowthConstant(zero, 2.0, ns, 10, 1), 0.0);
  const auto pm = FiniteFunctionClass::Constants(1, {1.0, -1.0});
  EXPECT_DOUBLE_EQ(GrowthConstant(pm, 2.0, ns, 10, 1), 1.0);
  EXPECT_DOUBLE_EQ(SeqRademacherExact(pm, DyadicTree::Constant(4, 0)), 1.5);
}

TEST(GrowthConstantTest, NondecreasingInBudget) {
  CounterRng rng(10, 0);
  const auto f = RandomClass(rng, 3, 4);
  const std::vector<int> ns = {2, 3};
  double previous = 0.0;
  for (std::uint64_t budget : {1, 4, 16, 64}) {
    const double c = GrowthConstant(f, 1.5, ns, budget, 3);
    EXPECT_GE(c, previous);
    previous = c;
  }
}

TEST(OffsetBoundTest, Examples) {
  OffsetBoundParams params;
  params.class_size = 1.0;
  EXPECT_EQ(OffsetBound(OffsetBoundKind::kFinite, params, 0.3, 10), 0.0);
  params.class_size = std::exp(1.0);
  EXPECT_DOUBLE_EQ(OffsetBound(OffsetBoundKind::kFinite, params, 8.0, 10), 1.0);
  params.c_const = 1.0;
  params.q = 1.0;
  EXPECT_NEAR(OffsetBound(OffsetBoundKind::kNonparametric, params, 1.0, 16),
              std::cbrt(16.0), 1e-12);
  params.dimension = 2.0;
  EXPECT_DOUBLE_EQ(OffsetBound(OffsetBoundKind::kParametric, params, 0.5, 8),
                   4.0 * std::log(8.0));
  params.q = 2.0;
  EXPECT_THROW(OffsetBound(OffsetBoundKind::kNonparametric, params, 1.0, 16),
               DomainError);
}

TEST(CrpConstantTest, ValuesScalingAndSandwich) {
  EXPECT_NEAR(CrpConstant(1.0, 2.0, 1.0), 1.0 / (1.0 - std::sqrt(0.5)), 1e-12);
  EXPECT_NEAR(CrpConstant(1.0, 2.0, 1.0), 3.4142, 1e-4);
  EXPECT_DOUBLE_EQ(CrpConstant(2.0, 1.7, 1.2),
                   2.0 * CrpConstant(1.0, 1.7, 1.2));
  EXPECT_THROW(CrpConstant(1.0, 1.5, 1.5), DomainError);
  CounterRng rng(11, 0);
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.Uniform(1.0, 2.0);
    const double r = rng.Uniform(p, 2.0);
    if (!(r > p)) continue;
    EXPECT_TRUE(CrpSandwichHolds(rng.Uniform(0.1, 10.0), r, p))
        << "r " << r << " p " << p;
  }
}

}  // namespace
}  // namespace regmart
