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

#include <algorithm>
#include <cmath>
#include <limits>

namespace regmart {

void CheckExhaustive(int n, int limit) {
  if (n < 0) throw DomainError("negative horizon");
  if (n > limit) {
    throw CapacityError("exhaustive enumeration of 2^" + std::to_string(n) +
                        " paths exceeds the limit 2^" + std::to_string(limit) +
                        "; use a Monte Carlo or search mode instead");
  }
}

SignPath::SignPath(std::vector<int> signs) {
  signs_.reserve(signs.size());
  for (int s : signs) {
    if (s != 1 && s != -1) throw DomainError("SignPath: entries must be +-1");
    signs_.push_back(static_cast<std::int8_t>(s));
  }
}

SignPath SignPath::FromIndex(std::uint64_t index, int n) {
  SignPath path;
  path.signs_.resize(n);
  for (int s = 1; s <= n; ++s) {
    const bool negative = (index >> (n - s)) & 1u;
    path.signs_[s - 1] = negative ? -1 : 1;
  }
  return path;
}

int SignPath::at(int s) const {
  if (s < 1 || s > size()) throw IndexError("SignPath::at: out of range");
  return signs_[s - 1];
}

std::uint64_t SignPath::PrefixIndex(int t) const {
  if (t < 1 || t - 1 > size()) {
    throw IndexError("SignPath::PrefixIndex: level out of range");
  }
  std::uint64_t index = 0;
  for (int s = 0; s < t - 1; ++s) {
    index = (index << 1) | (signs_[s] > 0 ? 1u : 0u);
  }
  return index;
}

std::vector<SignPath> EnumeratePaths(int n, int limit) {
  CheckExhaustive(n, limit);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<SignPath> paths;
  paths.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    paths.push_back(SignPath::FromIndex(k, n));
  }
  return paths;
}

FiniteFunctionClass::FiniteFunctionClass(std::size_t domain_size,
                                         std::vector<std::vector<double>> rows,
                                         double range_bound)
    : domain_size_(domain_size),
      rows_(std::move(rows)),
      range_bound_(range_bound) {
  if (domain_size_ == 0) {
    throw DomainError("FiniteFunctionClass: domain must be nonempty");
  }
  if (rows_.empty()) {
    throw DomainError("FiniteFunctionClass: class must be nonempty");
  }
  if (!(range_bound_ >= 0.0) || !std::isfinite(range_bound_)) {
    throw DomainError("FiniteFunctionClass: range bound must be finite, >= 0");
  }
  for (std::size_t f = 0; f < rows_.size(); ++f) {
    if (rows_[f].size() != domain_size_) {
      throw ShapeError("FiniteFunctionClass: row " + std::to_string(f) +
                       " has " + std::to_string(rows_[f].size()) +
                       " entries, expected " + std::to_string(domain_size_));
    }
    for (double v : rows_[f]) {
      if (!std::isfinite(v)) {
        throw DomainError("FiniteFunctionClass: non-finite entry");
      }
      if (std::abs(v) > range_bound_) {
        throw DomainError("FiniteFunctionClass: entry exceeds range bound");
      }
    }
  }
}

FiniteFunctionClass FiniteFunctionClass::FromRows(
    std::size_t domain_size, std::vector<std::vector<double>> rows) {
  double bound = 0.0;
  for (const auto& row : rows) {
    for (double v : row) bound = std::max(bound, std::abs(v));
  }
  return FiniteFunctionClass(domain_size, std::move(rows), bound);
}

FiniteFunctionClass FiniteFunctionClass::Constants(
    std::size_t domain_size, const std::vector<double>& constants) {
  std::vector<std::vector<double>> rows;
  for (double c : constants) rows.emplace_back(domain_size, c);
  return FromRows(domain_size, std::move(rows));
}

double FiniteFunctionClass::SupAbs(PointId x) const {
  double best = 0.0;
  for (const auto& row : rows_) best = std::max(best, std::abs(row[x]));
  return best;
}

FiniteFunctionClass FiniteFunctionClass::Negated() const {
  auto rows = rows_;
  for (auto& row : rows) {
    for (double& v : row) v = -v;
  }
  return FiniteFunctionClass(domain_size_, std::move(rows), range_bound_);
}

FiniteFunctionClass FiniteFunctionClass::Union(
    const FiniteFunctionClass& other) const {
  if (other.domain_size_ != domain_size_) {
    throw ShapeError("FiniteFunctionClass::Union: domain mismatch");
  }
  auto rows = rows_;
  rows.insert(rows.end(), other.rows_.begin(), other.rows_.end());
  return FiniteFunctionClass(domain_size_, std::move(rows),
                             std::max(range_bound_, other.range_bound_));
}

FiniteFunctionClass FiniteFunctionClass::DifferenceClass() const {
  const std::size_t m = domain_size_;
  std::vector<std::vector<double>> rows;
  rows.reserve(rows_.size());
  for (const auto& row : rows_) {
    std::vector<double> pair_row(m * m);
    for (std::size_t z = 0; z < m; ++z) {
      for (std::size_t zp = 0; zp < m; ++zp) {
        pair_row[z * m + zp] = row[z] - row[zp];
      }
    }
    rows.push_back(std::move(pair_row));
  }
  return FiniteFunctionClass(m * m, std::move(rows), 2.0 * range_bound_);
}

PairTree::PairTree(DyadicTree first, DyadicTree second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (first_.depth() != second_.depth()) {
    throw ShapeError("PairTree: depths differ");
  }
}

DyadicTree PairTree::Combined(std::size_t domain_size) const {
  DyadicTree out = first_;
  for (int t = 1; t <= depth(); ++t) {
    for (std::uint64_t i = 0; i < DyadicTree::LevelWidth(t); ++i) {
      out.set_node(t, i,
                   static_cast<PointId>(first_.node(t, i) * domain_size +
                                        second_.node(t, i)));
    }
  }
  return out;
}

std::uint64_t TreeCount(std::size_t domain_size, int depth) {
  if (domain_size == 0 || depth < 1) return 0;
  const std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (depth > 62) return kMax;
  const std::uint64_t nodes = (std::uint64_t{1} << depth) - 1;
  std::uint64_t count = 1;
  for (std::uint64_t k = 0; k < nodes; ++k) {
    if (domain_size == 1) break;
    if (count > kMax / domain_size) return kMax;
    count *= domain_size;
  }
  return count;
}

DyadicTree TreeFromIndex(std::uint64_t index, std::size_t domain_size,
                         int depth) {
  if (domain_size == 0) throw DomainError("TreeFromIndex: empty domain");
  DyadicTree tree = DyadicTree::Constant(depth, 0);
  for (int t = 1; t <= depth; ++t) {
    for (std::uint64_t i = 0; i < DyadicTree::LevelWidth(t); ++i) {
      tree.set_node(t, i, static_cast<PointId>(index % domain_size));
      index /= domain_size;
    }
  }
  return tree;
}

SignTree IdentityRelabeling(int depth) {
  SignTree y = SignTree::Constant(depth, 1);
  for (int t = 2; t <= depth; ++t) {
    for (std::uint64_t i = 0; i < SignTree::LevelWidth(t); ++i) {
      // The last sign of the prefix is the low bit of the node index.
      y.set_node(t, i, (i & 1u) ? 1 : -1);
    }
  }
  return y;
}

}  // namespace regmart
