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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits with
// status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "oracles/naive.h"
#include "regmart/complexity.h"
#include "regmart/minimax.h"
#include "regmart/rng.h"
#include "regmart/simulate.h"
#include "regmart/strategies.h"
#include "regmart/tailbounds.h"

namespace regmart {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::numbers::sqrt2;

struct Verdict {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void Note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

FiniteFunctionClass RandomClass(CounterRng& rng, std::size_t m, std::size_t k,
                                int levels) {
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

Verdict PathwiseCriterion(const StrategySpec& spec, double tolerance) {
  Verdict v;
  FuzzOptions fuzz;
  fuzz.cases = 100000;
  fuzz.n_min = 1;
  fuzz.n_max = 128;
  fuzz.d_min = 1;
  fuzz.d_max = 8;
  const FuzzReport report = FuzzPathwise(spec, fuzz, 20240601);
  v.Require(report.min_margin >= -tolerance,
            Fmt("fuzz min margin %.3g", report.min_margin));
  // 1000 restarts spread over a spread of horizons and dimensions.
  const std::vector<std::pair<int, int>> shapes = {
      {1, 1},  {2, 3},  {8, 1},   {8, 8},   {32, 2},
      {32, 8}, {64, 4}, {128, 1}, {128, 4}, {128, 8}};
  double search_min = kInf;
  std::size_t restarts = 0;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    SearchOptions options;
    options.local_steps = 64;
    options.budget = 100 * (1 + options.local_steps);
    const SearchResult r = AdversarialSearch(spec, shapes[s].first,
                                             shapes[s].second, options, 77 + s);
    search_min = std::min(search_min, r.min_margin);
    restarts += r.restarts;
  }
  v.Require(restarts >= 1000, "fewer than 1000 restarts");
  v.Require(search_min >= -tolerance,
            Fmt("search min margin %.3g", search_min));
  v.Note(Fmt("%.0f cases, fuzz min margin %.4g, search min margin %.4g",
             static_cast<double>(report.cases), report.min_margin, search_min));
  return v;
}

Verdict Criterion1() {
  StrategySpec spec;
  spec.kind = StrategyKind::kGradientDescent;
  return PathwiseCriterion(spec, kPathwiseTolerance);
}

Verdict Criterion2() {
  StrategySpec spec;
  spec.kind = StrategyKind::kAdaptiveOmd;
  spec.domain = DomainKind::kL2Ball;
  return PathwiseCriterion(spec, kPathwiseTolerance);
}

// Random games of the size covered by the naive recursion.
std::vector<GameSpec> GameSweep() {
  CounterRng rng(31, 0);
  std::vector<GameSpec> games;
  const int grids[] = {3, 5, 7, 9, 11, 15, 21};
  while (games.size() < 250) {
    GameSpec spec;
    const std::size_t m = 1 + rng.UniformInt(3);
    const std::size_t k = 1 + rng.UniformInt(4);
    spec.f_class = RandomClass(rng, m, k, 9);
    spec.horizon = 1 + static_cast<int>(rng.UniformInt(5));
    spec.grid = UniformGrid(grids[rng.UniformInt(7)]);
    spec.loss = rng.UniformInt(3) == 0 ? LossKind::kSquare : LossKind::kLinear;
    if (rng.UniformInt(4) == 0) {
      spec.tree = RandomTree(rng, m, spec.horizon);
    }
    // The log-variation budget is defined for n >= 2.
    const std::uint32_t kinds = spec.horizon >= 2 ? 3 : 2;
    switch (rng.UniformInt(kinds)) {
      case 0:
        spec.b.kind = BSpec::Kind::kConstant;
        spec.b.value = rng.Uniform(0.0, 0.6 * spec.horizon);
        break;
      case 1:
        spec.b.kind = BSpec::Kind::kPerFunction;
        for (std::size_t f = 0; f < k; ++f) {
          spec.b.values.push_back(rng.Uniform(0.0, 0.6 * spec.horizon));
        }
        break;
      default:
        spec.b.kind = BSpec::Kind::kLogVariation;
        spec.b.d_const = rng.Uniform(0.01, 0.05);
        spec.b.r = rng.Uniform(1.2, 2.0);
    }
    if (spec.loss == LossKind::kSquare &&
        spec.b.kind != BSpec::Kind::kLogVariation) {
      spec.b.value *= 4.0;
      for (double& b : spec.b.values) b *= 4.0;
    }
    if (spec.NaiveLeafCount() > 1e6) continue;
    games.push_back(std::move(spec));
  }
  // The {+1, -1} constants instance.
  for (double c : {0.0, 0.25, 0.5, 0.75}) {
    GameSpec spec;
    spec.f_class = FiniteFunctionClass::Constants(1, {1.0, -1.0});
    spec.b.value = c;
    spec.grid = UniformGrid(21);
    games.push_back(std::move(spec));
  }
  return games;
}

const std::vector<GameSpec>& Games() {
  static const std::vector<GameSpec> games = GameSweep();
  return games;
}

Verdict Criterion3() {
  Verdict v;
  double worst = 0.0;
  double leaves = 0.0;
  for (const GameSpec& spec : Games()) {
    const double memo = MinimaxValue(spec).value;
    const double naive = oracle::MinimaxValue(spec);
    const double library_naive = NaiveMinimaxValue(spec);
    worst = std::max(
        {worst, std::abs(memo - naive), std::abs(memo - library_naive)});
    leaves = std::max(leaves, spec.NaiveLeafCount());
  }
  v.Require(worst <= 1e-12, Fmt("max |memo - naive| = %.3g", worst));
  const auto& games = Games();
  for (std::size_t i = games.size() - 4; i < games.size(); ++i) {
    const double c = games[i].b.value;
    const double value = MinimaxValue(games[i]).value;
    v.Require(value == 0.5 - c,
              Fmt("constants game c = %.2f gives %.17g", c, value));
  }
  v.Note(Fmt("%.0f games up to %.0f leaves, max gap %.3g",
             static_cast<double>(games.size()), leaves, worst));
  return v;
}

Verdict Criterion4() {
  Verdict v;
  int certified = 0;
  double worst = kInf;
  for (const GameSpec& spec : Games()) {
    const MinimaxResult result = MinimaxValue(spec);
    if (!result.certified()) continue;
    ++certified;
    const double margin = ExhaustiveReplayMargin(result.strategy, spec);
    const double slack = result.grid_step * spec.horizon;
    worst = std::min(worst, margin + slack);
    v.Require(margin >= -slack,
              Fmt("replay margin %.3g below -%.3g", margin, slack));
  }
  v.Require(certified > 0, "no certified instance");
  v.Note(Fmt("%.0f certified games, min margin + slack %.4g",
             static_cast<double>(certified), worst));
  return v;
}

Verdict Criterion5() {
  Verdict v;
  CounterRng rng(41, 0);
  double rad_gap = 0.0;
  double off_gap = 0.0;
  int cover_mismatch = 0;
  int fat_mismatch = 0;
  int cover_inexact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng.UniformInt(3);
    const auto f = RandomClass(rng, m, 1 + rng.UniformInt(5), 9);
    const int depth = 1 + static_cast<int>(rng.UniformInt(6));
    const DyadicTree x = RandomTree(rng, m, depth);
    for (bool absolute : {true, false}) {
      rad_gap = std::max(rad_gap, std::abs(SeqRademacherExact(f, x, absolute) -
                                           oracle::Rademacher(f, x, absolute)));
    }
    RealTree mu = RealTree::Constant(depth, 0.0);
    for (int t = 1; t <= depth; ++t) {
      for (std::uint64_t i = 0; i < RealTree::LevelWidth(t); ++i) {
        mu.set_node(t, i, rng.Uniform(-1.0, 1.0));
      }
    }
    const double c1 = rng.Uniform(0.0, 2.0);
    const double c2 = rng.Uniform(0.0, 2.0);
    off_gap =
        std::max(off_gap, std::abs(OffsetRademacher(f, x, mu, c1, c2) -
                                   oracle::OffsetRademacher(f, x, mu, c1, c2)));

    // Cover and fat oracles are exponential in the tree size; they run on
    // a smaller class over the first levels of the same tree.
    const auto g = RandomClass(rng, m, 1 + rng.UniformInt(3), 5);
    const int cover_depth = std::min(depth, 4);
    const DyadicTree cx = RandomTree(rng, m, cover_depth);
    const double alpha = rng.Uniform(0.1, 1.5);
    const double p = trial % 3 == 0 ? kInf : (trial % 3 == 1 ? 1.0 : 2.0);
    const CoverResult cover = CoveringNumber(g, cx, alpha, p);
    if (!cover.exact) ++cover_inexact;
    if (cover.size != oracle::CoveringNumber(g, cx, alpha, p)) {
      ++cover_mismatch;
    }
    const auto h = RandomClass(rng, m, 2 + rng.UniformInt(4), 5);
    if (FatShattering(h, alpha, 2) != oracle::FatShattering(h, alpha, 2)) {
      ++fat_mismatch;
    }
  }
  v.Require(rad_gap <= 1e-12, Fmt("Rademacher gap %.3g", rad_gap));
  v.Require(off_gap <= 1e-12, Fmt("offset gap %.3g", off_gap));
  v.Require(cover_mismatch == 0, Fmt("%.0f cover mismatches", cover_mismatch));
  v.Require(cover_inexact == 0, Fmt("%.0f inexact covers", cover_inexact));
  v.Require(fat_mismatch == 0, Fmt("%.0f fat mismatches", fat_mismatch));

  const auto pm = FiniteFunctionClass::Constants(1, {1.0, -1.0});
  v.Require(SeqRademacherExact(pm, DyadicTree::Constant(2, 0)) == 1.0,
            "Rad_2 of +-1 constants");
  const auto zero_one = FiniteFunctionClass::Constants(1, {0.0, 1.0});
  for (double alpha : {0.25, 0.5, 1.0}) {
    v.Require(FatShattering(zero_one, alpha, 4) == 1,
              Fmt("fat of {0, 1} at alpha %.2f", alpha));
  }
  v.Require(
      CoveringNumber(zero_one, DyadicTree::Constant(3, 0), 0.4, 2.0).size == 2,
      "cover of {0, 1} at alpha 0.4");
  v.Note(Fmt("Rad gap %.2g, offset gap %.2g, 100 cover and fat matches",
             rad_gap, off_gap));
  return v;
}

Verdict Criterion6() {
  Verdict v;
  const auto model =
      MartingaleModel::ConditionallySymmetric(ScaleKind::kCoordinates, 4, 32);
  const SampleBatch batch = SampleBatchFor(model, 100000, 6);
  const std::vector<double> stat =
      BanachStatistic(batch, MirrorMap::Euclidean(4));
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.5 + 9.5 * i / 19.0);
  const TailEnvelope envelope(EnvelopeKind::kBanach, EnvelopeParams());
  const EnvelopeVerdict verdict = TailVsEnvelope(stat, envelope, grid, 1e-2);
  double worst_ratio = 0.0;
  int checked = 0;
  for (const auto& row : verdict.rows) {
    if (!row.checked) continue;
    ++checked;
    worst_ratio = std::max(worst_ratio, row.point.upper / row.envelope);
  }
  v.Require(verdict.pass, "upper confidence exceeds the envelope");
  v.Require(checked > 0, "no grid point with envelope < 1");
  v.Note(Fmt("%.0f checked points, max upper / envelope %.3g",
             static_cast<double>(checked), worst_ratio));
  return v;
}

Verdict Criterion7() {
  Verdict v;
  const auto model =
      MartingaleModel::ConditionallySymmetric(ScaleKind::kCoordinates, 2, 8);
  const SampleBatch batch = SampleBatchFor(model, 100000, 7);
  const auto samples = MomentSamples(batch, MirrorMap::Euclidean(2));
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(-3.0 + 0.1 * i);
  const MomentResult r = CheckMomentCondition(samples, grid);
  v.Require(r.max_value <= 1.0 + 4.0 * r.std_error,
            Fmt("max %.6f at lambda %.2f (se %.3g)", r.max_value, r.lambda,
                r.std_error));
  v.Note(Fmt("grid max %.6f at lambda %.2f, se %.3g", r.max_value, r.lambda,
             r.std_error));
  return v;
}

Verdict Criterion8() {
  Verdict v;
  const MirrorMap mirror = MirrorMap::Euclidean(4);
  const std::vector<MartingaleModel> models = {
      MartingaleModel::ConditionallySymmetric(ScaleKind::kZero, 4, 32),
      MartingaleModel::ConditionallySymmetric(ScaleKind::kAxis, 4, 32),
      MartingaleModel::ConditionallySymmetric(ScaleKind::kMixture, 4, 32)};
  for (std::size_t i = 0; i < models.size(); ++i) {
    const BdgResult r =
        BdgCheck(SampleBatchFor(models[i], 100000, 80 + i), mirror);
    v.Require(r.holds(4.0), models[i].Describe() + Fmt(": lhs %.4g > rhs %.4g",
                                                       r.lhs.mean, r.rhs.mean));
    v.Note(models[i].Describe() +
           Fmt(" lhs %.4g rhs %.4g", r.lhs.mean, r.rhs.mean));
  }
  const BdgResult one = BdgCheck(
      SampleBatchFor(
          MartingaleModel::ConditionallySymmetric(ScaleKind::kAxis, 4, 1), 1000,
          88),
      mirror);
  v.Require(std::abs(one.lhs.mean - 1.0) <= 1e-12, "n = 1 lhs");
  v.Require(std::abs(one.rhs.mean - (5.0 * kSqrt2 + std::sqrt(3.0))) <= 1e-12,
            Fmt("n = 1 rhs %.17g", one.rhs.mean));
  return v;
}

// Discrete nu with P(nu >= u) <= gamma exp(-mu(u)) on atoms h, 2h, ...
struct Discrete {
  std::vector<double> atoms;
  std::vector<double> probs;
};

Discrete TailLaw(double gamma, const MuSpec& mu, double h, double top) {
  Discrete nu;
  double previous_tail = 1.0;
  for (double b = h; b <= top + 1e-12; b += h) {
    // The atom at b carries mass tail(b) - tail(b + h), so
    // P(nu >= u) = tail(ceil(u / h) h) <= gamma exp(-mu(u)).
    const double tail = std::min(1.0, gamma * std::exp(-mu(b)));
    const double next =
        b + h > top + 1e-12 ? 0.0 : std::min(1.0, gamma * std::exp(-mu(b + h)));
    if (nu.atoms.empty()) {
      nu.atoms.push_back(0.0);
      nu.probs.push_back(previous_tail - tail);
    }
    nu.atoms.push_back(b);
    nu.probs.push_back(tail - next);
    previous_tail = tail;
  }
  return nu;
}

double ExpectedPhi(const Discrete& law, const MuSpec& mu, double a) {
  double total = 0.0;
  for (std::size_t i = 0; i < law.atoms.size(); ++i) {
    total += law.probs[i] * mu(std::max(0.0, law.atoms[i] - a));
  }
  return total;
}

Verdict Criterion9() {
  Verdict v;
  // Closed-form specializations.
  double gap = 0.0;
  for (double gamma : {1.0, 2.0, 5.0}) {
    for (double c : {0.25, 1.0, 3.0}) {
      for (double u : {0.5, 1.0, 2.0, 4.0, 9.0}) {
        if (u >= 1.0 / c) {
          gap = std::max(
              gap, std::abs(PanchenkoTransform(gamma, MuSpec::Linear(c), u) -
                            gamma * std::exp(1.0 - c * u)));
        }
        if (u >= 2.0 / std::sqrt(c)) {
          gap = std::max(
              gap, std::abs(PanchenkoTransform(gamma, MuSpec::Quadratic(c), u) -
                            gamma * std::exp(1.0 - c * u * u / 4.0)));
        }
      }
    }
  }
  for (double k : {0.0, 1.0, 3.5}) {
    for (double u : {0.0, 0.5, 2.0}) {
      for (double y : {0.0, 1.0, 8.0}) {
        const double t = BalanceBound(k, 0.0, 1.0, 10.0, 1.0, u, y).threshold;
        gap = std::max(gap,
                       std::abs(t - (4.0 * k + 4.0 * u * std::sqrt(y + 1.0))));
      }
    }
  }
  v.Require(gap <= 1e-12, Fmt("closed-form gap %.3g", gap));

  // For each u, the largest P(xi >= u) over two-point xi in {0, u} whose
  // premise E phi_a(xi) <= E phi_a(nu) holds on the shift grid (which
  // contains u - mu^{-1}(1)) must stay below the transformed tail.
  int violations = 0;
  int checks = 0;
  double tightest = 0.0;
  const std::vector<MuSpec> mus = {MuSpec::Linear(0.5), MuSpec::Linear(2.0),
                                   MuSpec::Quadratic(0.5),
                                   MuSpec::Quadratic(2.0)};
  for (const MuSpec& mu : mus) {
    for (double gamma : {1.0, 2.0}) {
      const Discrete nu = TailLaw(gamma, mu, 0.01, 40.0);
      for (int j = 1; j <= 60; ++j) {
        const double u = 0.25 * j;
        std::vector<double> shifts;
        for (int i = -40; i <= 200; ++i) shifts.push_back(0.1 * i);
        shifts.push_back(u - mu.Inverse(1.0));
        double p = 1.0;
        for (double a : shifts) {
          const double at_u = mu(std::max(0.0, u - a));
          const double at_0 = mu(std::max(0.0, -a));
          // (1 - p) at_0 + p at_u <= E phi_a(nu).
          if (at_u > at_0) {
            p = std::min(p, (ExpectedPhi(nu, mu, a) - at_0) / (at_u - at_0));
          }
        }
        p = std::max(p, 0.0);
        const double bound = PanchenkoTransform(gamma, mu, u);
        const double exact = u < mu.Inverse(1.0)
                                 ? gamma
                                 : gamma * std::exp(-mu(u - mu.Inverse(1.0)));
        ++checks;
        if (p > std::min(bound, exact) * (1.0 + 1e-12)) ++violations;
        tightest = std::max(tightest, p / std::min(bound, exact));
      }
    }
  }
  v.Require(violations == 0,
            Fmt("%.0f violations of the transformed tail", violations));
  v.Note(Fmt("closed-form gap %.2g, %.0f (xi, nu) checks, max ratio %.3g", gap,
             checks, tightest));
  return v;
}

Verdict Criterion10() {
  Verdict v;
  const auto model =
      MartingaleModel::FiniteMarkov({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5}, 2);
  const auto g = FiniteFunctionClass::FromRows(2, {{1.0, 0.0}, {0.0, 1.0}});
  PairFunctionalSpec spec;
  const auto b = spec.Bind(g);
  const SymmetrizationResult r = SymmetrizationCompare(model, g, b);
  const double lhs = oracle::SymmetrizationLhs(model, g, b);
  const double rhs = oracle::SymmetrizationRhs(2, g, b, 2);
  v.Require(std::abs(r.lhs - lhs) <= 1e-12, "lhs disagrees with enumeration");
  v.Require(std::abs(r.rhs - rhs) <= 1e-12, "rhs disagrees with enumeration");
  v.Require(r.lhs <= r.rhs + 1e-12, Fmt("lhs %.6g > rhs %.6g", r.lhs, r.rhs));
  v.Note(Fmt("lhs %.6g, rhs %.6g", r.lhs, r.rhs));
  return v;
}

Verdict Criterion11() {
  Verdict v;
  const double c = 1.0 + std::sqrt(std::numbers::pi / 2.0);
  for (int n : {1, 4, 16}) {
    EnvelopeParams params;
    params.n = n;
    const double root_n = std::sqrt(static_cast<double>(n));
    const double bound = IntegrateEnvelope(
        TailEnvelope(EnvelopeKind::kGaussian, params), root_n);
    v.Require(std::abs(bound - c * root_n) <= 1e-6,
              Fmt("n = %.0f: integral %.12g vs %.12g", n, bound, c * root_n));
    const auto model =
        MartingaleModel::ConditionallySymmetric(ScaleKind::kCoordinates, 4, n);
    const auto norms = NormOfSum(SampleBatchFor(model, 100000, 110 + n),
                                 MirrorMap::Euclidean(4));
    const Estimate e = MeanWithError(norms);
    v.Require(e.mean <= bound + 4.0 * e.std_error,
              Fmt("n = %.0f: E|sum Z| %.4g exceeds %.4g", n, e.mean, bound));
    v.Note(Fmt("n = %.0f: E|sum Z| %.4g <= %.4g", n, e.mean, bound));
  }
  return v;
}

}  // namespace
}  // namespace regmart

int main() {
  using regmart::Verdict;
  const std::vector<std::function<Verdict()>> criteria = {
      regmart::Criterion1,  regmart::Criterion2, regmart::Criterion3,
      regmart::Criterion4,  regmart::Criterion5, regmart::Criterion6,
      regmart::Criterion7,  regmart::Criterion8, regmart::Criterion9,
      regmart::Criterion10, regmart::Criterion11};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!v.pass) ++failures;
    std::printf("criterion %zu: %s (%.1f s) %s\n", i + 1,
                v.pass ? "PASS" : "FAIL", seconds, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
