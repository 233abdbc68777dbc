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


#include "regmart/minimax.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "regmart/parallel.h"
#include "regmart/rng.h"
#include "regmart/stats.h"
#include "regmart/strategies.h"

namespace regmart {

double Loss(LossKind kind, double prediction, double outcome) {
  switch (kind) {
    case LossKind::kLinear:
      return -0.5 * prediction * outcome;
    case LossKind::kSquare: {
      const double diff = prediction - outcome;
      return diff * diff;
    }
  }
  return 0.0;
}

std::string LossKindName(LossKind kind) {
  return kind == LossKind::kLinear ? "linear" : "square";
}

LossKind ParseLossKind(const std::string& name) {
  if (name == "linear") return LossKind::kLinear;
  if (name == "square") return LossKind::kSquare;
  throw DomainError("unknown loss '" + name + "'");
}

SequenceFunctional BSpec::Bind(const FiniteFunctionClass& f_class) const {
  switch (kind) {
    case Kind::kConstant: {
      const double c = value;
      return [c](std::size_t, std::span<const PointId>) { return c; };
    }
    case Kind::kLogVariation: {
      const double d_const = this->d_const;
      const double r = this->r;
      return [f_class, d_const, r](std::size_t, std::span<const PointId> x) {
        return 0.5 * LogVariationBound(f_class, x, d_const, r);
      };
    }
    case Kind::kPerFunction: {
      if (values.size() != f_class.size()) {
        throw ShapeError("BSpec: need one per-function value per function");
      }
      std::vector<double> v = values;
      return [v](std::size_t f, std::span<const PointId>) { return v[f]; };
    }
  }
  throw DomainError("BSpec: unknown kind");
}

std::vector<double> UniformGrid(int points) {
  if (points < 1 || points % 2 == 0) {
    throw DomainError("UniformGrid: point count must be odd and positive");
  }
  std::vector<double> grid(points);
  const int half = points / 2;
  for (int k = 0; k < points; ++k) {
    grid[k] = half == 0 ? 0.0 : static_cast<double>(k - half) / half;
  }
  return grid;
}

void GameSpec::Validate() const {
  if (horizon < 1) throw DomainError("GameSpec: horizon must be >= 1");
  if (grid.empty()) throw DomainError("GameSpec: empty prediction grid");
  bool has_zero = false;
  for (double g : grid) {
    if (!(std::abs(g) <= 1.0)) {
      throw DomainError("GameSpec: grid values must lie in [-1, 1]");
    }
    if (g == 0.0) has_zero = true;
    const bool mirrored = std::any_of(grid.begin(), grid.end(), [g](double h) {
      return std::abs(h + g) <= 1e-12;
    });
    if (!mirrored) throw DomainError("GameSpec: grid must be symmetric");
  }
  if (!has_zero) throw DomainError("GameSpec: grid must contain 0");
  if (y_values.empty()) throw DomainError("GameSpec: empty outcome set");
  for (double y : y_values) {
    if (!std::isfinite(y)) throw DomainError("GameSpec: non-finite outcome");
  }
  for (PointId p : points) {
    if (p >= f_class.domain_size()) {
      throw DomainError("GameSpec: point outside the domain");
    }
  }
  if (tree) {
    if (tree->depth() != horizon) {
      throw ShapeError("GameSpec: tree depth must equal the horizon");
    }
    for (PointId p : tree->flat()) {
      if (p >= f_class.domain_size()) {
        throw DomainError("GameSpec: tree point outside the domain");
      }
    }
    std::vector<double> sorted = y_values;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<double>{-1.0, 1.0}) {
      throw DomainError("GameSpec: the per-tree game needs outcomes {-1, +1}");
    }
  }
  if (!b_custom && b.kind == BSpec::Kind::kPerFunction &&
      b.values.size() != f_class.size()) {
    throw ShapeError("GameSpec: need one per-function value per function");
  }
}

std::vector<PointId> GameSpec::AdversaryPoints() const {
  if (!points.empty()) return points;
  std::vector<PointId> all(f_class.domain_size());
  std::iota(all.begin(), all.end(), PointId{0});
  return all;
}

SequenceFunctional GameSpec::Comparator() const {
  return b_custom ? b_custom : b.Bind(f_class);
}

double GameSpec::GridStep() const {
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  double step = 0.0;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    step = std::max(step, sorted[k] - sorted[k - 1]);
  }
  return step;
}

double GameSpec::NaiveLeafCount() const {
  const double x_choices = tree ? 1.0 : AdversaryPoints().size();
  return std::pow(x_choices * grid.size() * y_values.size(), horizon);
}

double StrategyTree::Predict(const std::vector<std::uint32_t>& history) const {
  auto it = predictions.find(history);
  if (it == predictions.end()) {
    throw IndexError("StrategyTree: no prediction for this history");
  }
  return it->second;
}

namespace {

// Grid indices in tie-breaking order: smallest |y_hat|, then smallest index.
std::vector<std::size_t> GridOrder(const std::vector<double>& grid) {
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::abs(grid[a]) < std::abs(grid[b]);
                   });
  return order;
}

// Node index of the level-t vertex reached by outcome indices y_1..y_{t-1};
// an outcome equal to +1 moves right.
std::uint64_t TreeIndex(const std::vector<std::uint32_t>& y_idx,
                        const std::vector<double>& y_values) {
  std::uint64_t index = 0;
  for (std::uint32_t k : y_idx) {
    index = (index << 1) | (y_values[k] > 0 ? 1u : 0u);
  }
  return index;
}

class Solver {
 public:
  Solver(const GameSpec& spec, std::uint64_t state_limit)
      : spec_(spec),
        points_(spec.AdversaryPoints()),
        order_(GridOrder(spec.grid)),
        comparator_(spec.Comparator()),
        state_limit_(state_limit) {}

  // max over x_{t+1} given t completed rounds.
  double Value(std::vector<PointId>& xs, std::vector<std::uint32_t>& ys,
               std::vector<double>& losses) {
    const int t = static_cast<int>(xs.size());
    if (t == spec_.horizon) return Leaf(xs, losses);
    double best = -std::numeric_limits<double>::infinity();
    for (PointId x : Choices(ys)) {
      best = std::max(best, AfterX(x, xs, ys, losses).value);
    }
    return best;
  }

  struct Decision {
    double value;
    std::size_t grid_index;
  };

  // min over y_hat, max over y, once x_{t+1} = x is revealed.
  Decision AfterX(PointId x, std::vector<PointId>& xs,
                  std::vector<std::uint32_t>& ys, std::vector<double>& losses) {
    xs.push_back(x);
    const std::string key = Key(xs, ys, losses);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      xs.pop_back();
      return it->second;
    }
    const std::size_t ny = spec_.y_values.size();
    std::vector<double> child(ny);
    std::vector<double> saved = losses;
    for (std::size_t k = 0; k < ny; ++k) {
      const double y = spec_.y_values[k];
      for (std::size_t f = 0; f < losses.size(); ++f) {
        losses[f] = saved[f] + Loss(spec_.loss, spec_.f_class.value(f, x), y);
      }
      ys.push_back(static_cast<std::uint32_t>(k));
      child[k] = Value(xs, ys, losses);
      ys.pop_back();
    }
    losses = saved;
    Decision best{std::numeric_limits<double>::infinity(), order_.front()};
    for (std::size_t g : order_) {
      const double y_hat = spec_.grid[g];
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ny; ++k) {
        worst = std::max(worst,
                         Loss(spec_.loss, y_hat, spec_.y_values[k]) + child[k]);
      }
      if (worst < best.value) best = Decision{worst, g};
    }
    if (memo_.size() >= state_limit_) {
      throw CapacityError("MinimaxValue: state count exceeds the limit of " +
                          std::to_string(state_limit_));
    }
    memo_.emplace(key, best);
    xs.pop_back();
    return best;
  }

  // Records the memoized choice for every history below the current one.
  void Extract(std::vector<PointId>& xs, std::vector<std::uint32_t>& ys,
               std::vector<double>& losses, std::vector<std::uint32_t>& history,
               StrategyTree& out, std::span<const PointId> restrict_first) {
    const int t = static_cast<int>(xs.size());
    if (t == spec_.horizon) return;
    std::vector<PointId> choices = Choices(ys);
    if (t == 0 && !restrict_first.empty()) {
      choices.assign(restrict_first.begin(), restrict_first.end());
    }
    for (PointId x : choices) {
      const Decision d = AfterX(x, xs, ys, losses);
      history.push_back(x);
      out.predictions[history] = spec_.grid[d.grid_index];
      xs.push_back(x);
      std::vector<double> saved = losses;
      for (std::size_t k = 0; k < spec_.y_values.size(); ++k) {
        const double y = spec_.y_values[k];
        for (std::size_t f = 0; f < losses.size(); ++f) {
          losses[f] = saved[f] + Loss(spec_.loss, spec_.f_class.value(f, x), y);
        }
        ys.push_back(static_cast<std::uint32_t>(k));
        history.push_back(static_cast<std::uint32_t>(k));
        Extract(xs, ys, losses, history, out, {});
        history.pop_back();
        ys.pop_back();
      }
      losses = saved;
      xs.pop_back();
      history.pop_back();
    }
  }

  std::vector<PointId> Choices(const std::vector<std::uint32_t>& ys) const {
    if (spec_.tree) {
      const int t = static_cast<int>(ys.size()) + 1;
      return {spec_.tree->node(t, TreeIndex(ys, spec_.y_values))};
    }
    return points_;
  }

  std::uint64_t states() const { return memo_.size(); }

 private:
  double Leaf(const std::vector<PointId>& xs,
              const std::vector<double>& losses) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < losses.size(); ++f) {
      best = std::min(best, losses[f] + comparator_(f, xs));
    }
    return -best;
  }

  // In the per-tree game the future also depends on the tree position, so
  // the outcome prefix is part of the key there.
  std::string Key(const std::vector<PointId>& xs,
                  const std::vector<std::uint32_t>& ys,
                  const std::vector<double>& losses) const {
    std::string key;
    const std::size_t y_bytes =
        spec_.tree ? ys.size() * sizeof(std::uint32_t) : 0;
    key.resize(sizeof(std::uint32_t) + xs.size() * sizeof(PointId) +
               losses.size() * sizeof(double) + y_bytes);
    char* p = key.data();
    const std::uint32_t t = static_cast<std::uint32_t>(xs.size());
    std::memcpy(p, &t, sizeof(t));
    p += sizeof(t);
    std::memcpy(p, xs.data(), xs.size() * sizeof(PointId));
    p += xs.size() * sizeof(PointId);
    std::memcpy(p, losses.data(), losses.size() * sizeof(double));
    p += losses.size() * sizeof(double);
    if (y_bytes > 0) std::memcpy(p, ys.data(), y_bytes);
    return key;
  }

  const GameSpec& spec_;
  std::vector<PointId> points_;
  std::vector<std::size_t> order_;
  SequenceFunctional comparator_;
  std::uint64_t state_limit_;
  std::unordered_map<std::string, Decision> memo_;
};

}  // namespace

MinimaxResult MinimaxValue(const GameSpec& spec, int workers) {
  spec.Validate();
  const std::vector<PointId> first =
      spec.tree ? std::vector<PointId>{spec.tree->node(1, 0)}
                : spec.AdversaryPoints();
  struct Branch {
    double value = 0.0;
    StrategyTree strategy;
    std::uint64_t states = 0;
  };
  std::vector<Branch> branches(first.size());
  ParallelFor(first.size(), workers, [&](std::size_t i) {
    Solver solver(spec, spec.state_limit);
    std::vector<PointId> xs;
    std::vector<std::uint32_t> ys;
    std::vector<double> losses(spec.f_class.size(), 0.0);
    branches[i].value = solver.AfterX(first[i], xs, ys, losses).value;
    std::vector<std::uint32_t> history;
    const PointId only[] = {first[i]};
    solver.Extract(xs, ys, losses, history, branches[i].strategy, only);
    branches[i].states = solver.states();
  });
  MinimaxResult result;
  result.value = -std::numeric_limits<double>::infinity();
  result.grid_step = spec.GridStep();
  for (Branch& b : branches) {
    result.value = std::max(result.value, b.value);
    result.states += b.states;
    result.strategy.predictions.merge(b.strategy.predictions);
  }
  if (result.states > spec.state_limit) {
    throw CapacityError("MinimaxValue: state count exceeds the limit");
  }
  return result;
}

namespace {

double NaiveRecurse(const GameSpec& spec, const SequenceFunctional& b,
                    const std::vector<PointId>& points,
                    std::vector<PointId>& xs, std::vector<double>& ys) {
  const int t = static_cast<int>(xs.size());
  if (t == spec.horizon) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < spec.f_class.size(); ++f) {
      double total = b(f, xs);
      for (int s = 0; s < t; ++s) {
        total += Loss(spec.loss, spec.f_class.value(f, xs[s]), ys[s]);
      }
      best = std::min(best, total);
    }
    return -best;
  }
  std::vector<PointId> choices = points;
  if (spec.tree) {
    std::uint64_t index = 0;
    for (double y : ys) index = (index << 1) | (y > 0 ? 1u : 0u);
    choices = {spec.tree->node(t + 1, index)};
  }
  double sup_x = -std::numeric_limits<double>::infinity();
  for (PointId x : choices) {
    double inf_pred = std::numeric_limits<double>::infinity();
    for (double y_hat : spec.grid) {
      double max_y = -std::numeric_limits<double>::infinity();
      for (double y : spec.y_values) {
        xs.push_back(x);
        ys.push_back(y);
        max_y = std::max(max_y, Loss(spec.loss, y_hat, y) +
                                    NaiveRecurse(spec, b, points, xs, ys));
        xs.pop_back();
        ys.pop_back();
      }
      inf_pred = std::min(inf_pred, max_y);
    }
    sup_x = std::max(sup_x, inf_pred);
  }
  return sup_x;
}

}  // namespace

double NaiveMinimaxValue(const GameSpec& spec) {
  spec.Validate();
  std::vector<PointId> xs;
  std::vector<double> ys;
  return NaiveRecurse(spec, spec.Comparator(), spec.AdversaryPoints(), xs, ys);
}

double StrategyReplay(const StrategyTree& strategy, std::span<const PointId> x,
                      std::span<const double> y, const GameSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(spec.horizon);
  if (x.size() != n || y.size() != n) {
    throw ShapeError("StrategyReplay: sequences must have the game horizon");
  }
  const std::vector<PointId> points = spec.AdversaryPoints();
  std::vector<std::uint32_t> history;
  std::vector<std::uint32_t> y_idx;
  double learner = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (spec.tree) {
      if (x[t] != spec.tree->node(static_cast<int>(t) + 1,
                                  TreeIndex(y_idx, spec.y_values))) {
        throw DomainError("StrategyReplay: point does not follow the tree");
      }
    } else if (std::find(points.begin(), points.end(), x[t]) == points.end()) {
      throw DomainError("StrategyReplay: point outside the game domain");
    }
    auto it = std::find(spec.y_values.begin(), spec.y_values.end(), y[t]);
    if (it == spec.y_values.end()) {
      throw DomainError("StrategyReplay: outcome outside the outcome set");
    }
    history.push_back(x[t]);
    const double y_hat = strategy.Predict(history);
    learner += Loss(spec.loss, y_hat, y[t]);
    const auto k = static_cast<std::uint32_t>(it - spec.y_values.begin());
    history.push_back(k);
    y_idx.push_back(k);
  }
  const SequenceFunctional b = spec.Comparator();
  double comparator = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < spec.f_class.size(); ++f) {
    double total = b(f, x);
    for (std::size_t t = 0; t < n; ++t) {
      total += Loss(spec.loss, spec.f_class.value(f, x[t]), y[t]);
    }
    comparator = std::min(comparator, total);
  }
  return comparator - learner;
}

double ExhaustiveReplayMargin(const StrategyTree& strategy,
                              const GameSpec& spec) {
  spec.Validate();
  const int n = spec.horizon;
  const std::vector<PointId> points = spec.AdversaryPoints();
  const std::size_t np = spec.tree ? 1 : points.size();
  const std::size_t ny = spec.y_values.size();
  const double total = std::pow(static_cast<double>(np * ny), n);
  if (total > 1e8) {
    throw CapacityError("ExhaustiveReplayMargin: too many sequences");
  }
  double worst = std::numeric_limits<double>::infinity();
  const auto count = static_cast<std::uint64_t>(total);
  std::vector<PointId> x(n);
  std::vector<double> y(n);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    std::uint64_t tree_index = 0;
    for (int t = 0; t < n; ++t) {
      const std::size_t yk = c % ny;
      c /= ny;
      y[t] = spec.y_values[yk];
      if (spec.tree) {
        x[t] = spec.tree->node(t + 1, tree_index);
        tree_index = (tree_index << 1) | (y[t] > 0 ? 1u : 0u);
      } else {
        x[t] = points[c % np];
        c /= np;
      }
    }
    worst = std::min(worst, StrategyReplay(strategy, x, y, spec));
  }
  return worst;
}

namespace {

template <typename BFn>
double ExpectationOverPaths(const FiniteFunctionClass& f_class,
                            const DyadicTree& x, int limit, BFn&& b_of) {
  const int n = x.depth();
  CheckExhaustive(n, limit);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> values(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const SignPath path = SignPath::FromIndex(k, n);
    const std::vector<PointId> xs = x.PathValues(path);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < f_class.size(); ++f) {
      double s = 0.0;
      for (int t = 1; t <= n; ++t) {
        s += path.at(t) * f_class.value(f, xs[t - 1]);
      }
      best = std::max(best, s - 2.0 * b_of(f, xs));
    }
    values[k] = best;
  }
  return PairwiseSum(values) / static_cast<double>(count);
}

}  // namespace

double CheckExpectationCondition(const FiniteFunctionClass& f_class,
                                 const SequenceFunctional& b,
                                 const DyadicTree& x, int limit) {
  return ExpectationOverPaths(
      f_class, x, limit,
      [&](std::size_t f, const std::vector<PointId>& xs) { return b(f, xs); });
}

double CheckExpectationCondition(const FiniteFunctionClass& f_class,
                                 const TreeFunctional& b, const DyadicTree& x,
                                 int limit) {
  std::vector<double> per_f(f_class.size());
  for (std::size_t f = 0; f < f_class.size(); ++f) per_f[f] = b(f, x);
  return ExpectationOverPaths(
      f_class, x, limit,
      [&](std::size_t f, const std::vector<PointId>&) { return per_f[f]; });
}

TreeFunctional MaxOverPaths(const SequenceFunctional& b) {
  return [b](std::size_t f, const DyadicTree& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const SignPath& path : EnumeratePaths(x.depth())) {
      best = std::max(best, b(f, x.PathValues(path)));
    }
    return best;
  };
}

TreeFunctional MaxPathVariation(const FiniteFunctionClass& f_class, double p) {
  return [f_class, p](std::size_t, const DyadicTree& x) {
    // best[i] at level t: largest remaining sum over paths through node i.
    std::vector<double> below;
    for (int t = x.depth(); t >= 1; --t) {
      std::vector<double> here(DyadicTree::LevelWidth(t));
      for (std::uint64_t i = 0; i < here.size(); ++i) {
        double v = std::pow(f_class.SupAbs(x.node(t, i)), p);
        if (!below.empty()) v += std::max(below[2 * i], below[2 * i + 1]);
        here[i] = v;
      }
      below = std::move(here);
    }
    return below.front();
  };
}

RotationCheck CheckRotationMonotone(std::size_t class_size,
                                    const TreeFunctional& b,
                                    const DyadicTree& x, std::uint64_t budget,
                                    std::uint64_t seed) {
  if (budget < 1) throw DomainError("CheckRotationMonotone: budget < 1");
  const int n = x.depth();
  // Levels 2..n of the relabeling are free; level 1 is never read.
  const std::uint64_t free_bits = (std::uint64_t{1} << n) - 2;
  const bool exhaustive =
      free_bits < 63 && (std::uint64_t{1} << free_bits) <= budget;
  const std::uint64_t count =
      exhaustive ? (std::uint64_t{1} << free_bits) : budget;

  std::vector<double> base(class_size);
  for (std::size_t f = 0; f < class_size; ++f) base[f] = b(f, x);

  RotationCheck out;
  out.exhaustive = exhaustive;
  out.relabelings = count;
  out.margin = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < count; ++k) {
    SignTree y = SignTree::Constant(n, 1);
    CounterRng rng(seed, k);
    std::uint64_t bit = 0;
    for (int t = 2; t <= n; ++t) {
      for (std::uint64_t i = 0; i < SignTree::LevelWidth(t); ++i, ++bit) {
        const bool plus = exhaustive ? ((k >> bit) & 1u) : rng.Sign() > 0;
        y.set_node(t, i, plus ? 1 : -1);
      }
    }
    const DyadicTree rotated = ComposeRotation(x, y);
    for (std::size_t f = 0; f < class_size; ++f) {
      const double m = b(f, rotated) - base[f];
      if (m > out.margin) {
        out.margin = m;
        out.worst_function = f;
        out.worst_relabeling = y;
      }
    }
  }
  return out;
}

}  // namespace regmart
