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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "regmart/hash.h"
#include "regmart/parallel.h"
#include "regmart/rng.h"

namespace regmart {

std::string ComplexityModeName(ComplexityMode mode) {
  switch (mode) {
    case ComplexityMode::kExact:
      return "exact";
    case ComplexityMode::kMonteCarlo:
      return "monte_carlo";
    case ComplexityMode::kSearchLowerBound:
      return "search_lower_bound";
    case ComplexityMode::kGreedy:
      return "greedy";
  }
  return "unknown";
}

std::string TreeId(const DyadicTree& x) {
  std::string bytes;
  const std::uint32_t depth = static_cast<std::uint32_t>(x.depth());
  bytes.append(reinterpret_cast<const char*>(&depth), sizeof(depth));
  for (PointId p : x.flat()) {
    bytes.append(reinterpret_cast<const char*>(&p), sizeof(p));
  }
  return HexDigest(Fnv1a(bytes));
}

namespace {

void CheckTreeDomain(const FiniteFunctionClass& f_class, const DyadicTree& x) {
  for (PointId p : x.flat()) {
    if (p >= f_class.domain_size()) {
      throw DomainError("tree point outside the class domain");
    }
  }
}

// Average over the leaves below node (t, i) of the leaf statistic, where
// sums[f] accumulates sum_s eps_s f(x_s) along the way. The binary
// averaging order is fixed by the tree, not by the caller.
class RademacherWalker {
 public:
  RademacherWalker(const FiniteFunctionClass& f_class, const DyadicTree& x,
                   bool absolute)
      : f_class_(f_class), x_(x), absolute_(absolute) {}

  double Eval(int t, std::uint64_t i, std::vector<double>& sums) const {
    if (t > x_.depth()) {
      double best = -std::numeric_limits<double>::infinity();
      for (double s : sums) best = std::max(best, s);
      return absolute_ ? std::abs(best) : best;
    }
    const PointId p = x_.node(t, i);
    // Left child is the -1 sign.
    for (std::size_t f = 0; f < sums.size(); ++f) {
      sums[f] -= f_class_.value(f, p);
    }
    const double left = Eval(t + 1, 2 * i, sums);
    for (std::size_t f = 0; f < sums.size(); ++f) {
      sums[f] += 2.0 * f_class_.value(f, p);
    }
    const double right = Eval(t + 1, 2 * i + 1, sums);
    for (std::size_t f = 0; f < sums.size(); ++f) {
      sums[f] -= f_class_.value(f, p);
    }
    return 0.5 * (left + right);
  }

  // Sums at the start of node (t, i), i.e. after the first t - 1 signs.
  std::vector<double> SumsAt(int t, std::uint64_t i) const {
    std::vector<double> sums(f_class_.size(), 0.0);
    for (int s = 1; s < t; ++s) {
      const std::uint64_t prefix = i >> (t - 1 - s);
      const PointId p = x_.node(s, prefix >> 1);
      const double sign = (prefix & 1u) ? 1.0 : -1.0;
      for (std::size_t f = 0; f < sums.size(); ++f) {
        sums[f] += sign * f_class_.value(f, p);
      }
    }
    return sums;
  }

 private:
  const FiniteFunctionClass& f_class_;
  const DyadicTree& x_;
  bool absolute_;
};

}  // namespace

double SeqRademacherExact(const FiniteFunctionClass& f_class,
                          const DyadicTree& x, bool absolute, int limit,
                          int workers) {
  CheckExhaustive(x.depth(), limit);
  CheckTreeDomain(f_class, x);
  const RademacherWalker walker(f_class, x, absolute);
  const int threads = ResolveWorkers(workers);
  if (threads <= 1 || x.depth() < 4) {
    std::vector<double> sums(f_class.size(), 0.0);
    return walker.Eval(1, 0, sums);
  }
  // Split at a fixed level and reduce with the same binary averaging, so the
  // result does not depend on the worker count.
  const int split = std::min(x.depth(), 6);
  const std::uint64_t width = std::uint64_t{1} << (split - 1);
  std::vector<double> level(width);
  ParallelFor(width, threads, [&](std::size_t i) {
    std::vector<double> sums = walker.SumsAt(split, i);
    level[i] = walker.Eval(split, i, sums);
  });
  while (level.size() > 1) {
    std::vector<double> up(level.size() / 2);
    for (std::size_t i = 0; i < up.size(); ++i) {
      up[i] = 0.5 * (level[2 * i] + level[2 * i + 1]);
    }
    level = std::move(up);
  }
  return level.front();
}

Estimate SeqRademacherMonteCarlo(const FiniteFunctionClass& f_class,
                                 const DyadicTree& x, std::size_t paths,
                                 std::uint64_t seed, bool absolute) {
  if (paths == 0) throw DomainError("SeqRademacherMonteCarlo: no paths");
  CheckTreeDomain(f_class, x);
  std::vector<double> values(paths);
  std::vector<double> sums(f_class.size());
  for (std::size_t k = 0; k < paths; ++k) {
    CounterRng rng(seed, k);
    std::fill(sums.begin(), sums.end(), 0.0);
    std::uint64_t i = 0;
    for (int t = 1; t <= x.depth(); ++t) {
      const int eps = rng.Sign();
      const PointId p = x.node(t, i);
      for (std::size_t f = 0; f < sums.size(); ++f) {
        sums[f] += eps * f_class.value(f, p);
      }
      i = (i << 1) | (eps > 0 ? 1u : 0u);
    }
    const double best = *std::max_element(sums.begin(), sums.end());
    values[k] = absolute ? std::abs(best) : best;
  }
  return MeanWithError(values);
}

namespace {

double TreeSup(const FiniteFunctionClass& f_class, const DyadicTree& x) {
  double sup = 0.0;
  for (PointId p : x.flat()) sup = std::max(sup, f_class.SupAbs(p));
  return sup;
}

}  // namespace

WorstCaseResult SeqRademacherWorstCase(const FiniteFunctionClass& f_class,
                                       int n, std::uint64_t budget,
                                       std::uint64_t seed, double growth_r,
                                       bool absolute) {
  if (budget < 1) throw DomainError("SeqRademacherWorstCase: budget < 1");
  if (n < 1) throw DomainError("SeqRademacherWorstCase: n must be >= 1");
  const std::size_t m = f_class.domain_size();
  WorstCaseResult out;
  out.report.measure = "seq_rademacher_worstcase";
  double best = -1.0;
  std::uint64_t evaluations = 0;

  auto evaluate = [&](const DyadicTree& tree) {
    ++evaluations;
    const double v = SeqRademacherExact(f_class, tree, absolute);
    if (growth_r > 0.0) {
      const double sup = TreeSup(f_class, tree);
      const double ratio =
          sup > 0.0
              ? v / (std::pow(static_cast<double>(n), 1.0 / growth_r) * sup)
              : 0.0;
      out.best_ratio = std::max(out.best_ratio, ratio);
    }
    if (v > best) {
      best = v;
      out.tree = tree;
    }
    return v;
  };

  const std::uint64_t total = TreeCount(m, n);
  if (total <= budget) {
    for (std::uint64_t k = 0; k < total; ++k) {
      evaluate(TreeFromIndex(k, m, n));
    }
    out.report.mode = ComplexityMode::kExact;
  } else {
    out.report.mode = ComplexityMode::kSearchLowerBound;
    std::uint64_t restart = 0;
    while (evaluations < budget) {
      CounterRng rng(seed, restart++);
      DyadicTree tree = DyadicTree::Constant(n, 0);
      for (int t = 1; t <= n; ++t) {
        for (std::uint64_t i = 0; i < DyadicTree::LevelWidth(t); ++i) {
          tree.set_node(t, i, rng.UniformInt(static_cast<std::uint32_t>(m)));
        }
      }
      double current = evaluate(tree);
      for (int pass = 0; pass < 3 && evaluations < budget; ++pass) {
        bool improved = false;
        for (int t = 1; t <= n && evaluations < budget; ++t) {
          for (std::uint64_t i = 0;
               i < DyadicTree::LevelWidth(t) && evaluations < budget; ++i) {
            const PointId keep = tree.node(t, i);
            PointId best_point = keep;
            for (PointId p = 0; p < m && evaluations < budget; ++p) {
              if (p == keep) continue;
              tree.set_node(t, i, p);
              const double v = evaluate(tree);
              if (v > current) {
                current = v;
                best_point = p;
                improved = true;
              }
            }
            tree.set_node(t, i, best_point);
          }
        }
        if (!improved) break;
      }
    }
  }
  out.report.value = best;
  out.report.budget = evaluations;
  out.report.tree_id = TreeId(out.tree);
  out.report.lower_bound = best;
  out.report.upper_bound = out.report.mode == ComplexityMode::kExact
                               ? best
                               : std::numeric_limits<double>::infinity();
  return out;
}

double OffsetRademacher(const FiniteFunctionClass& f_class, const DyadicTree& x,
                        const RealTree& mu, double c1, double c2, int limit) {
  if (!(c2 >= 0.0)) throw DomainError("OffsetRademacher: c2 must be >= 0");
  if (mu.depth() != x.depth()) {
    throw ShapeError("OffsetRademacher: mu and x must have equal depth");
  }
  CheckExhaustive(x.depth(), limit);
  CheckTreeDomain(f_class, x);
  const int n = x.depth();
  std::vector<double> sums(f_class.size(), 0.0);
  // Same recursion shape as the Rademacher walker.
  auto eval = [&](auto&& self, int t, std::uint64_t i) -> double {
    if (t > n) return *std::max_element(sums.begin(), sums.end());
    const PointId p = x.node(t, i);
    const double m = mu.node(t, i);
    std::vector<double> saved = sums;
    double child[2];
    for (int side = 0; side < 2; ++side) {
      const double eps = side == 0 ? -1.0 : 1.0;
      for (std::size_t f = 0; f < sums.size(); ++f) {
        const double dev = f_class.value(f, p) - m;
        sums[f] = saved[f] + 4.0 * c1 * eps * dev - c2 * dev * dev;
      }
      child[side] = self(self, t + 1, 2 * i + side);
    }
    sums = saved;
    return 0.5 * (child[0] + child[1]);
  };
  return eval(eval, 1, 0);
}

std::vector<double> CoverCandidates(const FiniteFunctionClass& f_class,
                                    PointId point) {
  std::vector<double> values;
  for (std::size_t f = 0; f < f_class.size(); ++f) {
    values.push_back(f_class.value(f, point));
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> out = values;
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      out.push_back(0.5 * (values[a] + values[b]));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct BudgetExhausted {};

// Feasibility of a k-tree cover. State entries are accumulated distances
// per (function, cover tree); entries above the threshold are dead and
// normalized to +infinity, which keeps memo keys canonical.
class CoverSearch {
 public:
  CoverSearch(const FiniteFunctionClass& f_class, const DyadicTree& x,
              double alpha, double p, std::uint64_t budget)
      : f_class_(f_class), x_(x), p_(p), budget_(budget) {
    const int n = x.depth();
    max_norm_ = std::isinf(p);
    // Slack keeps ties at exactly alpha on the covered side.
    threshold_ = max_norm_ ? alpha : n * std::pow(alpha, p);
    threshold_ = threshold_ * (1.0 + 1e-12) + 1e-15;
  }

  bool Feasible(int k) {
    k_ = k;
    memo_.clear();
    std::vector<double> state(f_class_.size() * k, 0.0);
    return Node(1, 0, state);
  }

  std::uint64_t visited() const { return visited_; }

 private:
  double Dist(double a, double b) const {
    const double d = std::abs(a - b);
    return max_norm_ ? d : std::pow(d, p_);
  }

  bool Node(int t, std::uint64_t i, const std::vector<double>& state) {
    if (++visited_ > budget_) throw BudgetExhausted{};
    const std::size_t m = f_class_.size();
    for (std::size_t f = 0; f < m; ++f) {
      bool alive = false;
      for (int j = 0; j < k_; ++j) alive |= std::isfinite(state[f * k_ + j]);
      if (!alive) return false;
    }
    if (t > x_.depth()) return true;

    const std::string key = Key(t, i, state);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const PointId point = x_.node(t, i);
    const std::vector<double> cand = CoverCandidates(f_class_, point);
    std::vector<int> live;
    for (int j = 0; j < k_; ++j) {
      bool any = false;
      for (std::size_t f = 0; f < m; ++f)
        any |= std::isfinite(state[f * k_ + j]);
      if (any) live.push_back(j);
    }
    // Columns with identical state are interchangeable: force nondecreasing
    // candidate indices within each run of equal columns.
    std::vector<int> same_as_prev(live.size(), 0);
    for (std::size_t a = 1; a < live.size(); ++a) {
      bool equal = true;
      for (std::size_t f = 0; f < m && equal; ++f) {
        equal = state[f * k_ + live[a]] == state[f * k_ + live[a - 1]];
      }
      same_as_prev[a] = equal;
    }

    std::vector<std::size_t> choice(live.size(), 0);
    bool result = false;
    std::vector<double> next(state.size());
    while (true) {
      bool valid = true;
      for (std::size_t a = 1; a < live.size() && valid; ++a) {
        if (same_as_prev[a] && choice[a] < choice[a - 1]) valid = false;
      }
      if (valid) {
        std::fill(next.begin(), next.end(),
                  std::numeric_limits<double>::infinity());
        for (std::size_t a = 0; a < live.size(); ++a) {
          const int j = live[a];
          const double v = cand[choice[a]];
          for (std::size_t f = 0; f < m; ++f) {
            const double s = state[f * k_ + j];
            if (!std::isfinite(s)) continue;
            const double d = Dist(f_class_.value(f, point), v);
            const double acc = max_norm_ ? std::max(s, d) : s + d;
            if (acc <= threshold_) {
              // In the max norm only liveness matters.
              next[f * k_ + j] = max_norm_ ? 0.0 : acc;
            }
          }
        }
        if (Node(t + 1, 2 * i, next) && Node(t + 1, 2 * i + 1, next)) {
          result = true;
          break;
        }
      }
      std::size_t a = 0;
      while (a < live.size() && ++choice[a] == cand.size()) {
        choice[a] = 0;
        ++a;
      }
      if (a == live.size()) break;
    }
    memo_.emplace(key, result);
    return result;
  }

  std::string Key(int t, std::uint64_t i,
                  const std::vector<double>& state) const {
    // Sort columns so that permuted covers share an entry.
    const std::size_t m = f_class_.size();
    std::vector<std::vector<double>> cols(k_, std::vector<double>(m));
    for (int j = 0; j < k_; ++j) {
      for (std::size_t f = 0; f < m; ++f) cols[j][f] = state[f * k_ + j];
    }
    std::sort(cols.begin(), cols.end());
    std::string key(
        sizeof(int) + sizeof(std::uint64_t) + k_ * m * sizeof(double), '\0');
    char* out = key.data();
    std::memcpy(out, &t, sizeof(int));
    out += sizeof(int);
    std::memcpy(out, &i, sizeof(std::uint64_t));
    out += sizeof(std::uint64_t);
    for (const auto& c : cols) {
      std::memcpy(out, c.data(), m * sizeof(double));
      out += m * sizeof(double);
    }
    return key;
  }

  const FiniteFunctionClass& f_class_;
  const DyadicTree& x_;
  double p_;
  bool max_norm_ = false;
  double threshold_ = 0.0;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  int k_ = 1;
  std::unordered_map<std::string, bool> memo_;
};

// Greedy cover built from the class's own trees.
int GreedyClassCover(const FiniteFunctionClass& f_class, const DyadicTree& x,
                     double alpha, double p) {
  const int n = x.depth();
  const std::size_t m = f_class.size();
  const std::uint64_t paths = std::uint64_t{1} << n;
  const bool max_norm = std::isinf(p);
  double threshold = max_norm ? alpha : n * std::pow(alpha, p);
  threshold = threshold * (1.0 + 1e-12) + 1e-15;
  // close[g][f * paths + k]: tree g covers f along path k.
  std::vector<std::vector<char>> close(m, std::vector<char>(m * paths, 0));
  for (std::uint64_t k = 0; k < paths; ++k) {
    const SignPath path = SignPath::FromIndex(k, n);
    const std::vector<PointId> xs = x.PathValues(path);
    for (std::size_t g = 0; g < m; ++g) {
      for (std::size_t f = 0; f < m; ++f) {
        double acc = 0.0;
        for (PointId pt : xs) {
          const double d =
              std::abs(f_class.value(f, pt) - f_class.value(g, pt));
          acc = max_norm ? std::max(acc, d) : acc + std::pow(d, p);
        }
        close[g][f * paths + k] = acc <= threshold;
      }
    }
  }
  std::vector<char> covered(m * paths, 0);
  std::size_t remaining = m * paths;
  int size = 0;
  while (remaining > 0) {
    std::size_t best_g = 0, best_gain = 0;
    for (std::size_t g = 0; g < m; ++g) {
      std::size_t gain = 0;
      for (std::size_t e = 0; e < covered.size(); ++e) {
        gain += !covered[e] && close[g][e];
      }
      if (gain > best_gain) {
        best_gain = gain;
        best_g = g;
      }
    }
    for (std::size_t e = 0; e < covered.size(); ++e) {
      if (!covered[e] && close[best_g][e]) {
        covered[e] = 1;
        --remaining;
      }
    }
    ++size;
  }
  return size;
}

}  // namespace

CoverResult CoveringNumber(const FiniteFunctionClass& f_class,
                           const DyadicTree& x, double alpha, double p,
                           std::uint64_t budget, int limit) {
  if (!(alpha > 0.0)) throw DomainError("CoveringNumber: alpha must be > 0");
  if (!(p >= 1.0)) throw DomainError("CoveringNumber: p must be >= 1");
  CheckExhaustive(x.depth(), limit);
  CheckTreeDomain(f_class, x);
  CoverResult result;
  CoverSearch search(f_class, x, alpha, p, budget);
  const int m = static_cast<int>(f_class.size());
  try {
    for (int k = 1; k <= m; ++k) {
      if (search.Feasible(k)) {
        result.size = k;
        result.lower_bound = k;
        result.exact = true;
        result.nodes_visited = search.visited();
        return result;
      }
      result.lower_bound = k + 1;
    }
  } catch (const BudgetExhausted&) {
    result.size = GreedyClassCover(f_class, x, alpha, p);
    result.lower_bound = std::max(result.lower_bound, 1);
    result.exact = result.size == result.lower_bound;
    result.nodes_visited = search.visited();
    return result;
  }
  // The class itself is always a cover, so this is unreachable.
  result.size = m;
  result.exact = true;
  return result;
}

std::vector<double> FatWitnesses(const FiniteFunctionClass& f_class,
                                 PointId point, double alpha) {
  std::vector<double> values;
  for (std::size_t f = 0; f < f_class.size(); ++f) {
    values.push_back(f_class.value(f, point));
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> out;
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      if (values[b] - values[a] >= alpha * (1.0 - 1e-12)) {
        out.push_back(0.5 * (values[a] + values[b]));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

class FatSearch {
 public:
  FatSearch(const FiniteFunctionClass& f_class, double alpha,
            std::vector<PointId> points, std::uint64_t budget)
      : f_class_(f_class),
        alpha_(alpha),
        points_(std::move(points)),
        budget_(budget) {
    for (PointId p : points_)
      witnesses_.push_back(FatWitnesses(f_class, p, alpha));
  }

  bool Shatter(std::uint64_t mask, int depth) {
    if (depth == 0) return mask != 0;
    // Distinct paths need distinct functions.
    if (std::popcount(mask) < (1LL << std::min(depth, 62))) return false;
    const std::uint64_t key = mask * 64 + static_cast<std::uint64_t>(depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= budget_) {
      throw CapacityError("FatShattering: state count exceeds the budget");
    }
    bool result = false;
    const double half = 0.5 * alpha_ * (1.0 - 1e-12);
    for (std::size_t k = 0; k < points_.size() && !result; ++k) {
      for (double s : witnesses_[k]) {
        std::uint64_t plus = 0, minus = 0;
        for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
          const int f = std::countr_zero(rest);
          const double v = f_class_.value(f, points_[k]);
          if (v - s >= half) plus |= std::uint64_t{1} << f;
          if (s - v >= half) minus |= std::uint64_t{1} << f;
        }
        if (plus == 0 || minus == 0) continue;
        if (Shatter(plus, depth - 1) && Shatter(minus, depth - 1)) {
          result = true;
          break;
        }
      }
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  const FiniteFunctionClass& f_class_;
  double alpha_;
  std::vector<PointId> points_;
  std::vector<std::vector<double>> witnesses_;
  std::uint64_t budget_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace

int FatShattering(const FiniteFunctionClass& f_class, double alpha, int n_max,
                  std::span<const PointId> points, std::uint64_t budget) {
  if (!(alpha > 0.0)) throw DomainError("FatShattering: alpha must be > 0");
  if (n_max < 0) throw DomainError("FatShattering: n_max must be >= 0");
  if (f_class.size() > 63) {
    throw CapacityError(
        "FatShattering: exact search supports at most 63 "
        "functions");
  }
  std::vector<PointId> pts(points.begin(), points.end());
  if (pts.empty()) {
    pts.resize(f_class.domain_size());
    std::iota(pts.begin(), pts.end(), PointId{0});
  }
  for (PointId p : pts) {
    if (p >= f_class.domain_size()) {
      throw DomainError("FatShattering: point outside the domain");
    }
  }
  FatSearch search(f_class, alpha, std::move(pts), budget);
  const std::uint64_t all = (std::uint64_t{1} << f_class.size()) - 1;
  int fat = 0;
  // Shattering is inherited by subtrees, so the first failure is final.
  for (int n = 1; n <= n_max; ++n) {
    if (!search.Shatter(all, n)) break;
    fat = n;
  }
  return fat;
}

double GrowthConstant(const FiniteFunctionClass& f_class, double r,
                      std::span<const int> n_list, std::uint64_t budget,
                      std::uint64_t seed) {
  if (!(r > 1.0 && r <= 2.0)) {
    throw DomainError("GrowthConstant: r must lie in (1, 2]");
  }
  double best = 0.0;
  for (int n : n_list) {
    const WorstCaseResult w =
        SeqRademacherWorstCase(f_class, n, budget, seed, r);
    best = std::max(best, w.best_ratio);
  }
  return best;
}

double OffsetBound(OffsetBoundKind kind, const OffsetBoundParams& params,
                   double alpha, int n) {
  if (!(alpha > 0.0)) throw DomainError("OffsetBound: alpha must be > 0");
  if (n < 1) throw DomainError("OffsetBound: n must be >= 1");
  switch (kind) {
    case OffsetBoundKind::kFinite:
      if (!(params.class_size >= 1.0)) {
        throw DomainError("OffsetBound: class size must be >= 1");
      }
      return 8.0 * std::log(params.class_size) / alpha;
    case OffsetBoundKind::kParametric:
      if (!(params.c_const > 0.0) || !(params.dimension > 0.0)) {
        throw DomainError("OffsetBound: C and d must be positive");
      }
      return params.c_const * params.dimension *
             std::log(static_cast<double>(n)) / alpha;
    case OffsetBoundKind::kNonparametric: {
      if (!(params.q > 0.0 && params.q < 2.0)) {
        throw DomainError("OffsetBound: q must lie in (0, 2)");
      }
      if (!(params.c_const > 0.0)) {
        throw DomainError("OffsetBound: C must be positive");
      }
      const double q = params.q;
      return params.c_const * std::pow(alpha, -(2.0 - q) / (2.0 + q)) *
             std::pow(static_cast<double>(n), q / (2.0 + q));
    }
  }
  return 0.0;
}

OffsetBoundKind ParseOffsetBoundKind(const std::string& name) {
  if (name == "finite") return OffsetBoundKind::kFinite;
  if (name == "parametric") return OffsetBoundKind::kParametric;
  if (name == "nonparametric") return OffsetBoundKind::kNonparametric;
  throw DomainError("unknown offset bound kind '" + name + "'");
}

double CrpConstant(double d_const, double r, double p) {
  if (!(p >= 1.0 && p < r && r <= 2.0)) {
    throw DomainError("CrpConstant: need 1 <= p < r <= 2");
  }
  if (!(d_const > 0.0)) throw DomainError("CrpConstant: D must be positive");
  return d_const / (1.0 - std::exp2(-(r - p) / (r * p)));
}

bool CrpSandwichHolds(double d_const, double r, double p) {
  const double c = CrpConstant(d_const, r, p);
  return d_const / (r - p) <= c && c <= 8.0 * d_const / (r - p);
}

}  // namespace regmart
