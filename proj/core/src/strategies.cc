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

#include <algorithm>
#include <cmath>
#include <limits>

#include "regmart/parallel.h"
#include "regmart/rng.h"

namespace regmart {
namespace {

void CheckInputs(std::span<const Vec> z, int d, const char* who) {
  for (std::size_t t = 0; t < z.size(); ++t) {
    if (static_cast<int>(z[t].size()) != d) {
      throw ShapeError(std::string(who) + ": input " + std::to_string(t + 1) +
                       " has wrong dimension");
    }
    for (double v : z[t]) {
      if (!std::isfinite(v)) {
        throw DomainError(std::string(who) + ": non-finite input");
      }
    }
  }
}

int InputDimension(std::span<const Vec> z) {
  return z.empty() ? 1 : static_cast<int>(z.front().size());
}

}  // namespace

std::string BoundKindName(BoundKind kind) {
  switch (kind) {
    case BoundKind::kSqrtN:
      return "sqrt_n";
    case BoundKind::kAdaptiveVariation:
      return "adaptive_variation";
    case BoundKind::kOptimisticVariation:
      return "optimistic_variation";
  }
  return "unknown";
}

BoundKind ParseBoundKind(const std::string& name) {
  if (name == "sqrt_n") return BoundKind::kSqrtN;
  if (name == "adaptive_variation") return BoundKind::kAdaptiveVariation;
  if (name == "optimistic_variation") return BoundKind::kOptimisticVariation;
  throw DomainError("unknown bound kind '" + name + "'");
}

RegretTranscript RunGradientDescent(std::span<const Vec> z) {
  const int d = InputDimension(z);
  CheckInputs(z, d, "RunGradientDescent");
  RegretTranscript out;
  out.strategy = "gd";
  out.domain = MirrorMap::Euclidean(d, 1.0);
  const std::size_t n = z.size();
  const double eta = n == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(n));
  Vec y = out.domain.Origin();
  double v = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (Norm2(z[t]) > 1.0 + 1e-12) {
      throw DomainError("RunGradientDescent: input " + std::to_string(t + 1) +
                        " lies outside the unit ball");
    }
    out.predictions.push_back(y);
    out.inputs.push_back(z[t]);
    out.step_sizes.push_back(eta);
    v += SquaredNorm2(z[t]);
    out.variation.push_back(v);
    y = out.domain.BregmanStep(eta, z[t], y);
  }
  return out;
}

double AdaptiveStepSize(double r_max, double v_t, double v_prev) {
  const double denom = std::sqrt(v_t) + std::sqrt(v_prev);
  if (denom <= 0.0) return r_max;
  return r_max * std::min(1.0, 1.0 / denom);
}

RegretTranscript RunAdaptiveOmd(const MirrorMap& mirror,
                                std::span<const Vec> z) {
  CheckInputs(z, mirror.dimension(), "RunAdaptiveOmd");
  RegretTranscript out;
  out.strategy = "adaptive_omd";
  out.domain = mirror;
  const double r_max = mirror.RMax();
  Vec y = mirror.Origin();
  double v_prev = 0.0;
  for (const Vec& zt : z) {
    const double dual = mirror.DualNorm(zt);
    const double v = v_prev + dual * dual;
    const double eta = AdaptiveStepSize(r_max, v, v_prev);
    out.predictions.push_back(y);
    out.inputs.push_back(zt);
    out.step_sizes.push_back(eta);
    out.variation.push_back(v);
    y = mirror.BregmanStep(eta, zt, y);
    v_prev = v;
  }
  return out;
}

RegretTranscript RunOptimisticOmd(const MirrorMap& mirror,
                                  std::span<const Vec> z,
                                  std::span<const Vec> centers) {
  CheckInputs(z, mirror.dimension(), "RunOptimisticOmd");
  CheckInputs(centers, mirror.dimension(), "RunOptimisticOmd");
  if (centers.size() != z.size()) {
    throw ShapeError("RunOptimisticOmd: need one center per round");
  }
  RegretTranscript out;
  out.strategy = "optimistic_omd";
  out.domain = mirror;
  const double r_max = mirror.RMax();
  Vec g = mirror.Origin();
  double s_prev = 0.0;       // S_{t-1}
  double s_prev_prev = 0.0;  // S_{t-2}
  for (std::size_t t = 0; t < z.size(); ++t) {
    const double gap = mirror.DualNorm(Sub(z[t], centers[t]));
    if (gap > 2.0 + 1e-12) {
      throw DomainError("RunOptimisticOmd: |z_t - M_t| exceeds 2 at round " +
                        std::to_string(t + 1));
    }
    const double eta = AdaptiveStepSize(r_max, s_prev, s_prev_prev);
    out.predictions.push_back(mirror.BregmanStep(eta, centers[t], g));
    out.inputs.push_back(z[t]);
    out.centers.push_back(centers[t]);
    out.step_sizes.push_back(eta);
    const double s = s_prev + gap * gap;
    out.variation.push_back(s);
    g = mirror.BregmanStep(eta, z[t], g);
    s_prev_prev = s_prev;
    s_prev = s;
  }
  return out;
}

std::vector<double> PrefixLinearRegret(const RegretTranscript& transcript) {
  const int d = transcript.domain.dimension();
  std::vector<double> out;
  out.reserve(transcript.inputs.size());
  Vec neg_sum(d, 0.0);
  double played = 0.0;
  for (std::size_t t = 0; t < transcript.inputs.size(); ++t) {
    played += Dot(transcript.predictions[t], transcript.inputs[t]);
    AddScaled(neg_sum, -1.0, transcript.inputs[t]);
    out.push_back(played + transcript.domain.Support(neg_sum));
  }
  return out;
}

double LinearRegret(const RegretTranscript& transcript) {
  if (transcript.inputs.empty()) return 0.0;
  return PrefixLinearRegret(transcript).back();
}

double BoundValue(const RegretTranscript& transcript, BoundKind kind, int s) {
  if (s < 1 || s > transcript.horizon()) {
    if (s == 0 && kind != BoundKind::kSqrtN) {
      // Empty prefix: regret is 0 and the bound is its constant term.
      const double c = kind == BoundKind::kAdaptiveVariation ? 2.5 : 4.5;
      return c * transcript.domain.RMax();
    }
    if (s == 0) return 0.0;
    throw IndexError("BoundValue: prefix out of range");
  }
  const double v = transcript.variation[s - 1];
  switch (kind) {
    case BoundKind::kSqrtN:
      return std::sqrt(static_cast<double>(s));
    case BoundKind::kAdaptiveVariation:
      return 2.5 * transcript.domain.RMax() * (std::sqrt(v) + 1.0);
    case BoundKind::kOptimisticVariation:
      return 4.5 * transcript.domain.RMax() * (std::sqrt(v) + 1.0);
  }
  return 0.0;
}

double VerifyPathwise(const RegretTranscript& transcript, BoundKind kind) {
  const int n = transcript.horizon();
  return BoundValue(transcript, kind, n) - LinearRegret(transcript);
}

double MinPrefixMargin(const RegretTranscript& transcript, BoundKind kind) {
  if (kind == BoundKind::kSqrtN || transcript.horizon() == 0) {
    return VerifyPathwise(transcript, kind);
  }
  const std::vector<double> regret = PrefixLinearRegret(transcript);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= transcript.horizon(); ++s) {
    best = std::min(best, BoundValue(transcript, kind, s) - regret[s - 1]);
  }
  return best;
}

double PhiN(double d_const, int n) {
  if (n < 2) throw DomainError("PhiN: n must be >= 2");
  if (!(d_const > 0.0)) throw DomainError("PhiN: D must be positive");
  const double ln_n = std::log(static_cast<double>(n));
  const double log_value = std::log(64.0 * d_const) + 0.5 * ln_n +
                           std::log(ln_n) - d_const * d_const * ln_n * ln_n;
  return std::exp(log_value);
}

double LogVariationBound(const FiniteFunctionClass& f_class,
                         std::span<const PointId> x, double d_const, double r) {
  if (!(r >= 1.0)) throw DomainError("LogVariationBound: r must be >= 1");
  const int n = static_cast<int>(x.size());
  double acc = 0.0;
  for (PointId p : x) {
    if (p >= f_class.domain_size()) {
      throw DomainError("LogVariationBound: point outside the domain");
    }
    acc += std::pow(f_class.SupAbs(p), r);
  }
  return 32.0 * d_const * std::log2(static_cast<double>(n)) *
             std::pow(acc, 1.0 / r) +
         PhiN(d_const, n);
}

double ScalarLinearRegret(const FiniteFunctionClass& f_class,
                          const ScalarGameTranscript& transcript) {
  const std::size_t n = transcript.x.size();
  if (transcript.y.size() != n || transcript.predictions.size() != n) {
    throw ShapeError("ScalarLinearRegret: ragged transcript");
  }
  double learner = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (transcript.x[t] >= f_class.domain_size()) {
      throw DomainError("ScalarLinearRegret: point outside the domain");
    }
    learner -= transcript.predictions[t] * transcript.y[t];
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < f_class.size(); ++f) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      s += f_class.value(f, transcript.x[t]) * transcript.y[t];
    }
    best = std::max(best, s);
  }
  return learner + best;
}

double VerifyLogVariation(const FiniteFunctionClass& f_class,
                          const ScalarGameTranscript& transcript,
                          double d_const, double r) {
  return LogVariationBound(f_class, transcript.x, d_const, r) -
         ScalarLinearRegret(f_class, transcript);
}

MirrorMap StrategySpec::Mirror(int dimension) const {
  if (kind == StrategyKind::kGradientDescent) {
    return MirrorMap::Euclidean(dimension, 1.0);
  }
  switch (domain) {
    case DomainKind::kL2Ball:
      return MirrorMap::Euclidean(dimension, radius);
    case DomainKind::kLqBall:
      return MirrorMap::LqBall(dimension, q, radius);
    case DomainKind::kBox:
      return MirrorMap::Box(dimension, radius);
  }
  return MirrorMap::Euclidean(dimension, radius);
}

BoundKind StrategySpec::Bound() const {
  switch (kind) {
    case StrategyKind::kGradientDescent:
      return BoundKind::kSqrtN;
    case StrategyKind::kOptimisticOmd:
      return BoundKind::kOptimisticVariation;
    case StrategyKind::kAdaptiveOmd:
    case StrategyKind::kConstant:
      return BoundKind::kAdaptiveVariation;
  }
  return BoundKind::kAdaptiveVariation;
}

double StrategySpec::InputRadius() const { return 1.0; }

std::string StrategySpec::Name() const {
  switch (kind) {
    case StrategyKind::kGradientDescent:
      return "gd";
    case StrategyKind::kAdaptiveOmd:
      return "adaptive";
    case StrategyKind::kOptimisticOmd:
      return "optimistic";
    case StrategyKind::kConstant:
      return "constant";
  }
  return "unknown";
}

StrategyKind ParseStrategyKind(const std::string& name) {
  if (name == "gd") return StrategyKind::kGradientDescent;
  if (name == "adaptive") return StrategyKind::kAdaptiveOmd;
  if (name == "optimistic") return StrategyKind::kOptimisticOmd;
  if (name == "constant") return StrategyKind::kConstant;
  throw DomainError("unknown strategy '" + name + "'");
}

DomainKind ParseDomainKind(const std::string& name) {
  if (name == "l2_ball") return DomainKind::kL2Ball;
  if (name == "lq_ball") return DomainKind::kLqBall;
  if (name == "box") return DomainKind::kBox;
  throw DomainError("unknown domain '" + name + "'");
}

RegretTranscript RunStrategy(const StrategySpec& spec, int dimension,
                             std::span<const Vec> z) {
  switch (spec.kind) {
    case StrategyKind::kGradientDescent: {
      RegretTranscript out = RunGradientDescent(z);
      out.domain = MirrorMap::Euclidean(dimension, 1.0);
      return out;
    }
    case StrategyKind::kAdaptiveOmd:
      return RunAdaptiveOmd(spec.Mirror(dimension), z);
    case StrategyKind::kOptimisticOmd: {
      std::vector<Vec> centers;
      centers.reserve(z.size());
      Vec previous(dimension, 0.0);
      for (const Vec& zt : z) {
        centers.push_back(previous);
        previous = zt;
      }
      return RunOptimisticOmd(spec.Mirror(dimension), z, centers);
    }
    case StrategyKind::kConstant: {
      const MirrorMap mirror = spec.Mirror(dimension);
      CheckInputs(z, dimension, "RunStrategy");
      Vec prediction(dimension, 0.0);
      prediction[0] = spec.constant;
      RegretTranscript out;
      out.strategy = "constant";
      out.domain = mirror;
      double v = 0.0;
      for (const Vec& zt : z) {
        const double dual = mirror.DualNorm(zt);
        v += dual * dual;
        out.predictions.push_back(prediction);
        out.inputs.push_back(zt);
        out.step_sizes.push_back(0.0);
        out.variation.push_back(v);
      }
      return out;
    }
  }
  throw DomainError("RunStrategy: unknown strategy");
}

double StrategyMargin(const StrategySpec& spec,
                      const RegretTranscript& transcript) {
  return spec.Anytime() ? MinPrefixMargin(transcript, spec.Bound())
                        : VerifyPathwise(transcript, spec.Bound());
}

namespace {

// Unit vector in the dual norm, uniform direction for the l_2 case.
Vec RandomDirection(const MirrorMap& mirror, CounterRng& rng) {
  const int d = mirror.dimension();
  Vec v(d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = rng.Normal();
    norm = mirror.DualNorm(v);
  }
  for (double& x : v) x /= norm;
  return v;
}

Vec Scaled(Vec v, double s) {
  for (double& x : v) x *= s;
  return v;
}

void ClipToRadius(const MirrorMap& mirror, Vec& v, double radius) {
  const double norm = mirror.DualNorm(v);
  if (norm > radius) {
    for (double& x : v) x *= radius / norm;
  }
}

}  // namespace

std::vector<Vec> SampleInputSequence(const MirrorMap& mirror, int n,
                                     double input_radius, std::uint64_t seed,
                                     std::uint64_t stream) {
  CounterRng rng(seed, stream);
  const int d = mirror.dimension();
  std::vector<Vec> z;
  z.reserve(n);
  const std::uint32_t family = rng.UniformInt(7);
  const Vec fixed = RandomDirection(mirror, rng);
  // Scale family covers inputs far inside the ball.
  const double small_scale = std::pow(10.0, rng.Uniform(-3.0, 0.0));
  for (int t = 0; t < n; ++t) {
    Vec zt;
    switch (family) {
      case 0:  // i.i.d., radius uniform
        zt = Scaled(RandomDirection(mirror, rng),
                    input_radius * rng.Uniform01());
        break;
      case 1:  // i.i.d. on the sphere
        zt = Scaled(RandomDirection(mirror, rng), input_radius);
        break;
      case 2:  // a single repeated direction
        zt = Scaled(fixed, input_radius);
        break;
      case 3:  // repeated direction with random signs
        zt = Scaled(fixed, input_radius * rng.Sign());
        break;
      case 4: {  // signed coordinate axes
        zt.assign(d, 0.0);
        zt[rng.UniformInt(static_cast<std::uint32_t>(d))] =
            input_radius * rng.Sign();
        break;
      }
      case 5:  // sphere inputs interleaved with zero runs
        zt = rng.Uniform01() < 0.5
                 ? Vec(d, 0.0)
                 : Scaled(RandomDirection(mirror, rng), input_radius);
        break;
      default:  // small inputs drifting toward a direction
        zt = Scaled(fixed, input_radius * small_scale);
        AddScaled(zt, input_radius * small_scale * 0.5,
                  RandomDirection(mirror, rng));
        ClipToRadius(mirror, zt, input_radius);
        break;
    }
    z.push_back(std::move(zt));
  }
  return z;
}

SearchResult AdversarialSearch(const StrategySpec& spec, int n, int dimension,
                               const SearchOptions& options,
                               std::uint64_t seed) {
  if (options.budget < 1) throw DomainError("AdversarialSearch: budget < 1");
  if (n < 1 || dimension < 1) {
    throw DomainError("AdversarialSearch: n and d must be positive");
  }
  const MirrorMap mirror = spec.Mirror(dimension);
  const double radius = spec.InputRadius();
  std::size_t local = options.local_steps;
  std::size_t restarts = options.budget / (1 + local);
  if (restarts == 0) {
    restarts = 1;
    local = options.budget - 1;
  }

  struct Outcome {
    std::vector<Vec> sequence;
    double margin;
    std::size_t evaluations;
  };
  std::vector<Outcome> outcomes(restarts);
  ParallelFor(restarts, options.workers, [&](std::size_t r) {
    std::vector<Vec> z = SampleInputSequence(mirror, n, radius, seed, r);
    double margin = StrategyMargin(spec, RunStrategy(spec, dimension, z));
    std::size_t evals = 1;
    // Perturbation randomness lives on a separate stream family.
    CounterRng rng(seed, (std::uint64_t{1} << 63) | r);
    double step = 0.5 * radius;
    for (std::size_t k = 0; k < local; ++k) {
      const std::uint32_t t = rng.UniformInt(static_cast<std::uint32_t>(n));
      const std::uint32_t i =
          rng.UniformInt(static_cast<std::uint32_t>(dimension));
      Vec candidate = z[t];
      candidate[i] += step * rng.Normal();
      // Occasionally push the input to the sphere, where bounds are tight.
      if (rng.Uniform01() < 0.25) {
        const double norm = mirror.DualNorm(candidate);
        if (norm > 0.0) candidate = Scaled(candidate, radius / norm);
      }
      ClipToRadius(mirror, candidate, radius);
      std::swap(z[t], candidate);
      const double m = StrategyMargin(spec, RunStrategy(spec, dimension, z));
      ++evals;
      if (m < margin) {
        margin = m;
        step = std::min(step * 1.5, radius);
      } else {
        std::swap(z[t], candidate);
        step = std::max(step * 0.95, 1e-6 * radius);
      }
    }
    outcomes[r] = Outcome{std::move(z), margin, evals};
  });

  SearchResult result;
  result.restarts = restarts;
  result.min_margin = std::numeric_limits<double>::infinity();
  for (Outcome& o : outcomes) {
    result.evaluations += o.evaluations;
    if (o.margin < result.min_margin) {
      result.min_margin = o.margin;
      result.worst_sequence = std::move(o.sequence);
    }
  }
  return result;
}

FuzzReport FuzzPathwise(const StrategySpec& spec, const FuzzOptions& options,
                        std::uint64_t seed) {
  if (options.n_min < 1 || options.d_min < 1 || options.n_max < options.n_min ||
      options.d_max < options.d_min) {
    throw DomainError(
        "FuzzPathwise: need 1 <= n_min <= n_max, 1 <= d_min <= d_max");
  }
  FuzzReport report;
  report.cases = options.cases;
  report.margins.assign(options.cases, 0.0);
  std::vector<int>& ns = report.ns;
  std::vector<int>& ds = report.ds;
  ns.assign(options.cases, 0);
  ds.assign(options.cases, 0);
  ParallelFor(options.cases, options.workers, [&](std::size_t i) {
    CounterRng rng(seed, i);
    const int n = options.n_min +
                  static_cast<int>(rng.UniformInt(static_cast<std::uint32_t>(
                      options.n_max - options.n_min + 1)));
    const int d = options.d_min +
                  static_cast<int>(rng.UniformInt(static_cast<std::uint32_t>(
                      options.d_max - options.d_min + 1)));
    ns[i] = n;
    ds[i] = d;
    // Sequence streams are offset so they never collide with the shape draw.
    const auto z = SampleInputSequence(spec.Mirror(d), n, spec.InputRadius(),
                                       seed, (std::uint64_t{1} << 62) | i);
    report.margins[i] = StrategyMargin(spec, RunStrategy(spec, d, z));
  });
  report.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < options.cases; ++i) {
    if (report.margins[i] < -kPathwiseTolerance) ++report.violations;
    if (report.margins[i] < report.min_margin) {
      report.min_margin = report.margins[i];
      report.worst_case = i;
      report.worst_n = ns[i];
      report.worst_d = ds[i];
    }
  }
  if (options.cases > 0) {
    const std::size_t i = report.worst_case;
    report.worst_sequence =
        SampleInputSequence(spec.Mirror(ds[i]), ns[i], spec.InputRadius(), seed,
                            (std::uint64_t{1} << 62) | i);
  }
  return report;
}

}  // namespace regmart
