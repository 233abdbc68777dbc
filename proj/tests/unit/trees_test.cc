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


#include "regmart/trees.h"

#include <gtest/gtest.h>

#include <set>

#include "regmart/rng.h"

namespace regmart {
namespace {

TEST(SignPathTest, FromIndexOrder) {
  EXPECT_EQ(SignPath::FromIndex(0, 3), SignPath({1, 1, 1}));
  EXPECT_EQ(SignPath::FromIndex(7, 3), SignPath({-1, -1, -1}));
  EXPECT_EQ(SignPath::FromIndex(4, 3), SignPath({-1, 1, 1}));
}

TEST(SignPathTest, RejectsNonSigns) {
  EXPECT_THROW(SignPath({1, 0}), DomainError);
}

TEST(SignPathTest, PrefixIndexUsesRightForPlus) {
  const SignPath path({1, -1, 1});
  EXPECT_EQ(path.PrefixIndex(1), 0u);
  EXPECT_EQ(path.PrefixIndex(2), 1u);
  EXPECT_EQ(path.PrefixIndex(3), 2u);
}

TEST(EnumeratePathsTest, SmallHorizons) {
  const auto one = EnumeratePaths(1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0], SignPath({1}));
  EXPECT_EQ(one[1], SignPath({-1}));
  EXPECT_EQ(EnumeratePaths(2).size(), 4u);
  const auto zero = EnumeratePaths(0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].size(), 0);
}

TEST(EnumeratePathsTest, DistinctAndComplete) {
  for (int n = 0; n <= 10; ++n) {
    const auto paths = EnumeratePaths(n);
    std::set<std::vector<std::int8_t>> seen;
    for (const auto& p : paths) {
      seen.insert({p.signs().begin(), p.signs().end()});
    }
    EXPECT_EQ(paths.size(), std::size_t{1} << n);
    EXPECT_EQ(seen.size(), paths.size());
  }
}

TEST(EnumeratePathsTest, CapacityLimit) {
  EXPECT_THROW(EnumeratePaths(23), CapacityError);
  EXPECT_THROW(EnumeratePaths(5, 4), CapacityError);
}

TEST(TreeTest, DepthOneIgnoresSigns) {
  const DyadicTree tree(1, {{7}});
  EXPECT_EQ(tree.Evaluate(SignPath({1}), 1), 7u);
  EXPECT_EQ(tree.Evaluate(SignPath({-1}), 1), 7u);
  EXPECT_EQ(tree.Evaluate(SignPath(), 1), 7u);
}

TEST(TreeTest, PlusSelectsRightChild) {
  const DyadicTree tree(2, {{0}, {1, 2}});
  EXPECT_EQ(tree.Evaluate(SignPath({1, -1}), 2), 2u);
  EXPECT_EQ(tree.Evaluate(SignPath({-1, 1}), 2), 1u);
}

TEST(TreeTest, ConstantTree) {
  const DyadicTree tree = DyadicTree::Constant(4, 3);
  for (const auto& path : EnumeratePaths(4)) {
    for (int t = 1; t <= 4; ++t) EXPECT_EQ(tree.Evaluate(path, t), 3u);
  }
}

TEST(TreeTest, ShapeAndIndexErrors) {
  EXPECT_THROW(DyadicTree(2, {{0}, {1}}), ShapeError);
  EXPECT_THROW(DyadicTree(2, {{0}}), ShapeError);
  const DyadicTree tree(2, {{0}, {1, 2}});
  EXPECT_THROW(tree.Evaluate(SignPath({1, 1}), 3), IndexError);
  EXPECT_THROW(tree.Evaluate(SignPath({1, 1}), 0), IndexError);
  EXPECT_THROW(tree.Evaluate(SignPath(), 2), IndexError);
}

TEST(TreeTest, Predictability) {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformInt(6));
    const DyadicTree tree = TreeFromIndex(rng(), 5, n);
    for (const auto& p : EnumeratePaths(n)) {
      for (const auto& q : EnumeratePaths(n)) {
        for (int t = 1; t <= n; ++t) {
          bool agree = true;
          for (int s = 1; s < t; ++s) agree = agree && p.at(s) == q.at(s);
          if (agree) {
            EXPECT_EQ(tree.Evaluate(p, t), tree.Evaluate(q, t));
          }
        }
      }
    }
  }
}

TEST(TreeTest, TreeFromIndexCoversAllTrees) {
  EXPECT_EQ(TreeCount(2, 2), 8u);
  std::set<std::vector<PointId>> seen;
  for (std::uint64_t i = 0; i < 8; ++i) {
    const auto tree = TreeFromIndex(i, 2, 2);
    seen.insert({tree.flat().begin(), tree.flat().end()});
  }
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(TreeCount(2, 7), std::numeric_limits<std::uint64_t>::max());
}

TEST(ComposeRotationTest, ConstantPlusReplicatesRightSpine) {
  const DyadicTree x(3, {{0}, {1, 2}, {3, 4, 5, 6}});
  const SignTree plus = SignTree::Constant(3, 1);
  const DyadicTree r = ComposeRotation(x, plus);
  const SignPath spine({1, 1, 1});
  for (const auto& path : EnumeratePaths(3)) {
    for (int t = 1; t <= 3; ++t) {
      EXPECT_EQ(r.Evaluate(path, t), x.Evaluate(spine, t));
    }
  }
}

TEST(ComposeRotationTest, IdentityRelabeling) {
  CounterRng rng(5, 1);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const DyadicTree x = TreeFromIndex(rng(), 4, n);
      EXPECT_EQ(ComposeRotation(x, IdentityRelabeling(n)), x);
    }
  }
}

TEST(ComposeRotationTest, MinusSelectsLeftNode) {
  const DyadicTree x(2, {{0}, {1, 2}});
  const SignTree y(2, {{1}, {-1, -1}});
  const DyadicTree r = ComposeRotation(x, y);
  for (const auto& path : EnumeratePaths(2)) EXPECT_EQ(r.Evaluate(path, 2), 1u);
}

TEST(ComposeRotationTest, MatchesDefinition) {
  CounterRng rng(8, 2);
  const int n = 4;
  const DyadicTree x = TreeFromIndex(rng(), 3, n);
  std::vector<std::vector<int>> levels;
  for (int t = 1; t <= n; ++t) {
    std::vector<int> level(std::size_t{1} << (t - 1));
    for (int& s : level) s = rng.Sign();
    levels.push_back(level);
  }
  const SignTree y(n, levels);
  const DyadicTree r = ComposeRotation(x, y);
  for (const auto& path : EnumeratePaths(n)) {
    for (int t = 1; t <= n; ++t) {
      std::vector<int> relabeled;
      for (int s = 2; s <= t; ++s) relabeled.push_back(y.Evaluate(path, s));
      relabeled.resize(n, 1);
      EXPECT_EQ(r.Evaluate(path, t), x.Evaluate(SignPath(relabeled), t));
    }
  }
}

TEST(ComposeRotationTest, Errors) {
  const DyadicTree x(2, {{0}, {1, 2}});
  EXPECT_THROW(ComposeRotation(x, SignTree::Constant(3, 1)), ShapeError);
  EXPECT_THROW(ComposeRotation(x, SignTree(2, {{1}, {0, 1}})), DomainError);
}

TEST(FiniteFunctionClassTest, Validation) {
  EXPECT_THROW(FiniteFunctionClass(2, {{0.0}}, 1.0), ShapeError);
  EXPECT_THROW(FiniteFunctionClass(1, {{2.0}}, 1.0), DomainError);
  const auto c = FiniteFunctionClass::FromRows(2, {{0.5, -1.5}});
  EXPECT_DOUBLE_EQ(c.range_bound(), 1.5);
  EXPECT_DOUBLE_EQ(c.SupAbs(1), 1.5);
}

TEST(FiniteFunctionClassTest, DerivedClasses) {
  const auto c = FiniteFunctionClass::FromRows(2, {{0.0, 1.0}});
  const auto u = c.Union(c.Negated());
  ASSERT_EQ(u.size(), 2u);
  EXPECT_DOUBLE_EQ(u.value(1, 1), -1.0);
  const auto d = c.DifferenceClass();
  EXPECT_EQ(d.domain_size(), 4u);
  EXPECT_DOUBLE_EQ(d.value(0, 1 * 2 + 0), 1.0);
  EXPECT_DOUBLE_EQ(d.value(0, 0 * 2 + 1), -1.0);
}

TEST(PairTreeTest, CombinedIds) {
  const PairTree pair(DyadicTree(1, {{1}}), DyadicTree(1, {{2}}));
  EXPECT_EQ(pair.Combined(3).node(1, 0), 5u);
  EXPECT_THROW(PairTree(DyadicTree(1, {{0}}), DyadicTree::Constant(2, 0)),
               ShapeError);
}

}  // namespace
}  // namespace regmart
