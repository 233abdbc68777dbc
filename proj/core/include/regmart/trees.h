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


#ifndef REGMART_TREES_H_
#define REGMART_TREES_H_

// Dyadic-filtration primitives. A tree of depth n is a predictable process:
// its value at level t (1-indexed) is selected by the first t-1 signs of a
// path. Orientation convention, used everywhere in the library: a +1 sign
// moves to the right child. The node index at level t is therefore the
// binary number b_1 ... b_{t-1} (first sign most significant) with b_s = 1
// exactly when sign s is +1, and node i at level t has children 2i and 2i+1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regmart/error.h"

namespace regmart {

using PointId = std::uint32_t;

// Exhaustive path enumeration is refused above this depth unless the caller
// raises the limit explicitly.
inline constexpr int kDefaultExhaustiveLimit = 22;

// Throws CapacityError when 2^n paths exceed the limit.
void CheckExhaustive(int n, int limit = kDefaultExhaustiveLimit);

class SignPath {
 public:
  SignPath() = default;
  explicit SignPath(std::vector<int> signs);

  // Path number `index` of length n in enumeration order: sign s is -1
  // exactly when bit (n - s) of index is set, so index 0 is all +1 and the
  // last index is all -1.
  static SignPath FromIndex(std::uint64_t index, int n);

  int size() const { return static_cast<int>(signs_.size()); }
  // Sign at position s, 1-indexed to match the level numbering.
  int at(int s) const;
  std::span<const std::int8_t> signs() const { return signs_; }

  // Node index at level t selected by the first t-1 signs.
  std::uint64_t PrefixIndex(int t) const;

  friend bool operator==(const SignPath&, const SignPath&) = default;

 private:
  std::vector<std::int8_t> signs_;
};

// All 2^n sign paths in FromIndex order. n = 0 yields the single empty path.
std::vector<SignPath> EnumeratePaths(int n,
                                     int limit = kDefaultExhaustiveLimit);

template <typename T>
class Tree {
 public:
  Tree() = default;

  // levels[t-1] must hold exactly 2^(t-1) entries.
  Tree(int depth, const std::vector<std::vector<T>>& levels) : depth_(depth) {
    if (depth < 1 || depth > 62) {
      throw ShapeError("Tree: depth must be in [1, 62]");
    }
    if (static_cast<int>(levels.size()) != depth) {
      throw ShapeError("Tree: expected " + std::to_string(depth) +
                       " levels, got " + std::to_string(levels.size()));
    }
    nodes_.reserve(NodeCount());
    for (int t = 1; t <= depth; ++t) {
      const auto& level = levels[t - 1];
      if (level.size() != LevelWidth(t)) {
        throw ShapeError("Tree: level " + std::to_string(t) + " must have " +
                         std::to_string(LevelWidth(t)) + " entries, got " +
                         std::to_string(level.size()));
      }
      nodes_.insert(nodes_.end(), level.begin(), level.end());
    }
  }

  static Tree Constant(int depth, const T& value) {
    if (depth < 1 || depth > 30) {
      throw ShapeError("Tree::Constant: depth must be in [1, 30]");
    }
    Tree tree;
    tree.depth_ = depth;
    tree.nodes_.assign((std::size_t{1} << depth) - 1, value);
    return tree;
  }

  int depth() const { return depth_; }
  std::size_t NodeCount() const { return (std::size_t{1} << depth_) - 1; }
  static std::size_t LevelWidth(int t) { return std::size_t{1} << (t - 1); }

  const T& node(int level, std::uint64_t index) const {
    return nodes_[Offset(level, index)];
  }
  void set_node(int level, std::uint64_t index, const T& value) {
    nodes_[Offset(level, index)] = value;
  }

  std::span<const T> level(int t) const {
    CheckLevel(t);
    return std::span<const T>(nodes_).subspan(LevelWidth(t) - 1, LevelWidth(t));
  }

  // x_t(eps_{1:t-1}); reads only the first t-1 signs of the path.
  const T& Evaluate(const SignPath& path, int t) const {
    CheckLevel(t);
    if (path.size() < t - 1) {
      throw IndexError("Tree::Evaluate: path shorter than t - 1");
    }
    return nodes_[LevelWidth(t) - 1 + path.PrefixIndex(t)];
  }

  // (x_1(eps), ..., x_n(eps)).
  std::vector<T> PathValues(const SignPath& path) const {
    std::vector<T> out;
    out.reserve(depth_);
    for (int t = 1; t <= depth_; ++t) out.push_back(Evaluate(path, t));
    return out;
  }

  std::vector<std::vector<T>> Levels() const {
    std::vector<std::vector<T>> out;
    for (int t = 1; t <= depth_; ++t) {
      auto l = level(t);
      out.emplace_back(l.begin(), l.end());
    }
    return out;
  }

  std::span<const T> flat() const { return nodes_; }

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  void CheckLevel(int t) const {
    if (t < 1 || t > depth_) {
      throw IndexError("Tree: level " + std::to_string(t) + " outside [1, " +
                       std::to_string(depth_) + "]");
    }
  }
  std::size_t Offset(int level, std::uint64_t index) const {
    CheckLevel(level);
    if (index >= LevelWidth(level)) {
      throw IndexError("Tree: node index " + std::to_string(index) +
                       " outside level " + std::to_string(level));
    }
    return LevelWidth(level) - 1 + index;
  }

  int depth_ = 0;
  std::vector<T> nodes_;
};

using DyadicTree = Tree<PointId>;
using RealTree = Tree<double>;
using SignTree = Tree<int>;

// Finite class of real functions on the domain {0, ..., domain_size - 1},
// one row of values per function.
class FiniteFunctionClass {
 public:
  FiniteFunctionClass() = default;
  FiniteFunctionClass(std::size_t domain_size,
                      std::vector<std::vector<double>> rows,
                      double range_bound);
  // Range bound set to the largest absolute entry.
  static FiniteFunctionClass FromRows(std::size_t domain_size,
                                      std::vector<std::vector<double>> rows);
  // Constant functions on a domain of the given size.
  static FiniteFunctionClass Constants(std::size_t domain_size,
                                       const std::vector<double>& constants);

  std::size_t size() const { return rows_.size(); }
  std::size_t domain_size() const { return domain_size_; }
  double range_bound() const { return range_bound_; }
  double value(std::size_t f, PointId x) const { return rows_[f][x]; }
  std::span<const double> row(std::size_t f) const { return rows_[f]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  // max_f |f(x)|.
  double SupAbs(PointId x) const;

  FiniteFunctionClass Negated() const;
  // Rows of this class followed by rows of `other` (same domain).
  FiniteFunctionClass Union(const FiniteFunctionClass& other) const;
  // (z, z') -> f(z) - f(z') on the pair domain; pair id is z * m + z'.
  FiniteFunctionClass DifferenceClass() const;

 private:
  std::size_t domain_size_ = 0;
  std::vector<std::vector<double>> rows_;
  double range_bound_ = 0.0;
};

// The (z, z') pair of predictable processes.
class PairTree {
 public:
  PairTree(DyadicTree first, DyadicTree second);
  const DyadicTree& first() const { return first_; }
  const DyadicTree& second() const { return second_; }
  int depth() const { return first_.depth(); }
  // Single tree on the pair domain with ids z * domain_size + z'.
  DyadicTree Combined(std::size_t domain_size) const;

 private:
  DyadicTree first_;
  DyadicTree second_;
};

// (x o y)_t(eps) = x_t(y_2(eps), ..., y_t(eps)) where y_s reads the first
// s - 1 signs. y must be {-1,+1}-valued and have the depth of x; its first
// level is never read.
template <typename T>
Tree<T> ComposeRotation(const Tree<T>& x, const SignTree& y) {
  if (x.depth() != y.depth()) {
    throw ShapeError("ComposeRotation: depth mismatch");
  }
  for (int s : y.flat()) {
    if (s != 1 && s != -1) {
      throw DomainError("ComposeRotation: relabeling must be sign-valued");
    }
  }
  Tree<T> out = x;
  for (int t = 2; t <= x.depth(); ++t) {
    for (std::uint64_t i = 0; i < Tree<T>::LevelWidth(t); ++i) {
      std::uint64_t j = 0;
      for (int s = 2; s <= t; ++s) {
        const std::uint64_t prefix = i >> (t - s);
        const int sign = y.node(s, prefix);
        j = (j << 1) | (sign > 0 ? 1u : 0u);
      }
      out.set_node(t, i, x.node(t, j));
    }
  }
  return out;
}

// Number of DyadicTrees of the given depth over m points, m^(2^n - 1), or
// UINT64_MAX when that overflows.
std::uint64_t TreeCount(std::size_t domain_size, int depth);

// Tree number `index` in [0, TreeCount): node k of the flat layout takes the
// k-th base-m digit of index (least significant first).
DyadicTree TreeFromIndex(std::uint64_t index, std::size_t domain_size,
                         int depth);

// The identity relabeling y_t(eps) = eps_{t-1} (level 1 set to +1).
SignTree IdentityRelabeling(int depth);

}  // namespace regmart

#endif  // REGMART_TREES_H_
