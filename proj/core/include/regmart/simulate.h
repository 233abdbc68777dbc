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


#ifndef REGMART_SIMULATE_H_
#define REGMART_SIMULATE_H_

// Martingale samplers with tangent sequences, exact conditional variation
// statistics, and Monte Carlo comparisons against the analytic envelopes.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "regmart/linalg.h"
#include "regmart/minimax.h"
#include "regmart/mirror_map.h"
#include "regmart/stats.h"
#include "regmart/strategies.h"
#include "regmart/tailbounds.h"
#include "regmart/trees.h"

namespace regmart {

enum class ModelKind { kDyadicTree, kConditionallySymmetric, kFiniteMarkov };

std::string ModelKindName(ModelKind kind);
ModelKind ParseModelKind(const std::string& name);

// Predictable scale processes v_t for the conditionally symmetric model.
enum class ScaleKind {
  kZero,         // v_t = 0
  kAxis,         // v_t = scale e_1, one shared sign
  kCoordinates,  // v_t = scale (1, ..., 1) / sqrt(d), independent signs
  // v_t = s_t e_{k_t} with one shared sign, k_t = (t - 1) mod d, and
  // s_t = scale when the first coordinate of the running sum is >= 0,
  // scale / 4 otherwise.
  kMixture,
};

std::string ScaleKindName(ScaleKind kind);
ScaleKind ParseScaleKind(const std::string& name);

struct MartingaleModel {
  ModelKind kind = ModelKind::kConditionallySymmetric;
  int horizon = 1;

  // kDyadicTree: Z_t = eps_t (f(x_t(eps)))_f, a vector indexed by f.
  FiniteFunctionClass f_class;
  DyadicTree tree;

  // kConditionallySymmetric: Z_t = eps_t * v_t (coordinatewise for
  // kCoordinates) with v_t predictable.
  ScaleKind scale_kind = ScaleKind::kAxis;
  int dimension = 1;
  double scale = 1.0;

  // kFiniteMarkov: Z_1 ~ initial, Z_t ~ kernel[Z_{t-1}].
  std::vector<std::vector<double>> kernel;
  std::vector<double> initial;

  static MartingaleModel Dyadic(FiniteFunctionClass f_class, DyadicTree tree);
  static MartingaleModel ConditionallySymmetric(ScaleKind scale_kind,
                                                int dimension, int horizon,
                                                double scale = 1.0);
  static MartingaleModel FiniteMarkov(std::vector<std::vector<double>> kernel,
                                      std::vector<double> initial, int horizon);

  // Throws DomainError (invalid kernel, bad sizes) or ShapeError.
  void Validate() const;
  bool VectorValued() const { return kind != ModelKind::kFiniteMarkov; }
  // Dimension of the increments of a vector-valued model.
  int VectorDimension() const;
  std::size_t StateCount() const { return kernel.size(); }
  // Same model with another horizon; not available for dyadic models.
  MartingaleModel WithHorizon(int n) const;
  std::string Describe() const;
};

struct Replicate {
  // Vector-valued kinds: increments and tangent increments.
  std::vector<Vec> z;
  std::vector<Vec> tangent;
  // kConditionallySymmetric: the predictable scales v_t.
  std::vector<Vec> scales;
  // kDyadicTree: the signs eps_t (the path).
  std::vector<int> signs;
  // kFiniteMarkov: the chain and its tangent copy.
  std::vector<PointId> states;
  std::vector<PointId> tangent_states;
};

struct SampleBatch {
  MartingaleModel model;
  std::uint64_t seed = 0;
  // Replicate r is drawn from CounterRng(seed, r) alone.
  std::vector<Replicate> replicates;

  std::size_t size() const { return replicates.size(); }
};

SampleBatch SampleBatchFor(const MartingaleModel& model, std::size_t count,
                           std::uint64_t seed, int workers = 1);

// The class G over which suprema are taken.
struct ProbeClass {
  enum class Kind {
    // z -> <f, z> for f in the mirror-map domain (vector models):
    // sup_g sum_t g(Z_t) = support(sum_t Z_t).
    kDomain,
    // z -> z_f, one function per coordinate (vector models).
    kCoordinates,
    // Rows of `functions` evaluated at the state (finite Markov models).
    kStateFunctions,
  };
  Kind kind = Kind::kDomain;
  MirrorMap mirror = MirrorMap::Euclidean(1);
  FiniteFunctionClass functions;

  static ProbeClass Domain(MirrorMap mirror);
  static ProbeClass Coordinates();
  static ProbeClass States(FiniteFunctionClass functions);
  // Number of functions when G is finite, 0 for kDomain.
  std::size_t FiniteSize(const MartingaleModel& model) const;
};

// One atom of the conditional law of Z_t given the past.
struct Atom {
  Vec z;
  PointId state = 0;
  double probability = 0.0;
};

// Conditional law of Z_t given Z_{1:t-1} of the replicate, t in [1, n].
// Coordinatewise signs enumerate 2^d atoms and need d <= 20.
std::vector<Atom> ConditionalLaw(const MartingaleModel& model,
                                 const Replicate& rep, int t);

struct VariationStats {
  double v_n = 0.0;  // sum_t |Z_t|^2 (vector models)
  double w_n = 0.0;  // sum_t E_{t-1} |Z_t|^2 (vector models)
  // sum_t E'_{t-1} sup_g |g(Z_t) - g(Z'_t)|^p.
  double var_p = 0.0;
  // sum_t sup_g |g(Z_t) - E'_{t-1} g(Z'_t)|^p, the smaller variant.
  double var_p_centered = 0.0;
  // sum_t E'_{t-1} |g(Z_t) - g(Z'_t)|^p per function, for finite G.
  std::vector<double> var_p_g;
  // sup_g sum_t (g(Z_t) - E_{t-1} g(Z_t)).
  double sup_deviation = 0.0;
};

// Norms of vector increments are the norm whose unit ball is dual to the
// mirror-map domain (the mirror map's dual norm). Conditional expectations
// are exact sums over ConditionalLaw.
std::vector<VariationStats> Variations(const SampleBatch& batch, double p,
                                       const ProbeClass& g_class);

// g(Z_t) - E_{t-1} g(Z_t) for function index g of a finite class,
// indexed [replicate][t - 1].
std::vector<std::vector<double>> CenteredIncrements(const SampleBatch& batch,
                                                    const ProbeClass& g_class,
                                                    std::size_t g);

// Per-replicate support(sum_t Z_t) under the mirror-map domain.
std::vector<double> NormOfSum(const SampleBatch& batch,
                              const MirrorMap& mirror);

// (support(sum Z) - 2.5 R_max (sqrt(V_n) + 1)) /
// sqrt(V_n + W_n + (E sqrt(V_n + W_n))^2), with the expectation replaced by
// the batch mean.
std::vector<double> BanachStatistic(const SampleBatch& batch,
                                    const MirrorMap& mirror);

struct TailPoint {
  double u = 0.0;
  std::size_t exceedances = 0;
  double estimate = 0.0;
  double upper = 0.0;  // exact one-sided binomial upper confidence
};

inline constexpr double kTailConfidence = 1e-3;

// Frequency of statistic > u and its upper confidence bound at level delta.
std::vector<TailPoint> EmpiricalTail(std::span<const double> statistic,
                                     std::span<const double> u_grid,
                                     double delta = kTailConfidence);

struct EnvelopeRow {
  TailPoint point;
  double envelope = 0.0;
  bool checked = false;  // envelope < 1
  bool pass = true;
};

struct EnvelopeVerdict {
  std::vector<EnvelopeRow> rows;
  // Per-point confidence level: total_delta / (number of checked points).
  double delta_per_point = 0.0;
  bool pass = true;
};

// PASS iff the upper confidence bound stays below the envelope at every u
// where the envelope is < 1. The total error budget is split evenly over
// the checked points (union bound).
EnvelopeVerdict TailVsEnvelope(std::span<const double> statistic,
                               const TailEnvelope& envelope,
                               std::span<const double> u_grid,
                               double total_delta = 1e-2);

struct MomentSample {
  double a = 0.0;
  double b = 0.0;
};

// A = sum_t <y_t, Z_t> with y_t from adaptive mirror descent run on -Z_t,
// B^2 = 4 sum_t (|Z_t|^2 + E_{t-1}|Z_t|^2). Vector models only.
std::vector<MomentSample> MomentSamples(const SampleBatch& batch,
                                        const MirrorMap& mirror);

struct MomentResult {
  double max_value = 0.0;
  double std_error = 0.0;
  double lambda = 0.0;
  // Empirical E exp(lambda A - lambda^2 B^2 / 2) per grid point.
  std::vector<Estimate> values;
};

// Throws DomainError if some B <= 0.
MomentResult CheckMomentCondition(std::span<const MomentSample> samples,
                                  std::span<const double> lambda_grid);

struct BdgResult {
  Estimate lhs;  // E max_s support(sum_{t<=s} Z_t)
  Estimate rhs;  // (2.5 R_max + sqrt 3) E sqrt(V_n) + 2.5 R_max
  double combined_se = 0.0;
  bool holds(double k_se = 4.0) const {
    return lhs.mean <= rhs.mean + k_se * combined_se;
  }
};

BdgResult BdgCheck(const SampleBatch& batch, const MirrorMap& mirror);

// B~(g; z_1, z'_1, ..., z_n, z'_n), symmetric in each pair.
using PairFunctional = std::function<double(
    std::size_t g, std::span<const PointId> z, std::span<const PointId> zp)>;

struct PairFunctionalSpec {
  enum class Kind {
    kConstant,      // value
    kScaledSquare,  // value * sum_t (g(z_t) - g(z'_t))^2
  };
  Kind kind = Kind::kConstant;
  double value = 0.0;

  PairFunctional Bind(const FiniteFunctionClass& g_class) const;
};

struct MarkovPath {
  std::vector<PointId> states;
  std::vector<PointId> tangent_states;
  double probability = 0.0;
};

// Every (Z, Z') realization of a finite Markov model with its probability.
std::vector<MarkovPath> EnumerateMarkovPaths(const MartingaleModel& model,
                                             std::uint64_t limit = 1u << 22);

struct SymmetrizationResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;  // lhs <= rhs + 1e-12
  std::uint64_t rhs_states = 0;
};

// lhs = E sup_g [sum_t (g(Z_t) - E_{t-1} g(Z_t)) - E' B~], by enumeration.
// rhs = sup over pair trees (z, z') of
//       E_eps sup_g [sum_t eps_t (g(z_t) - g(z'_t)) - B~(g; z, z')],
// computed exactly by alternating sup over the node pair and average over
// the sign. Throws CapacityError above `limit` evaluations on either side.
SymmetrizationResult SymmetrizationCompare(const MartingaleModel& model,
                                           const FiniteFunctionClass& g_class,
                                           const PairFunctional& b_tilde,
                                           std::uint64_t limit = 1u << 24);

struct TypeProbeRow {
  int n = 0;
  Estimate lhs;  // E sup_g sum_t (g(Z_t) - E_{t-1} g(Z_t))
  Estimate rhs;  // E (Var_p)^(1/p)
  Estimate rhs_centered;
  double ratio = 0.0;
  double ratio_centered = 0.0;
};

// Ratio of the two sides of the martingale type inequality for each n, an
// empirical lower bound on the type-p constant. A zero left side over a zero
// right side is reported as 0; a nonpositive right side otherwise throws
// DegenerateError.
std::vector<TypeProbeRow> MartingaleTypeProbe(
    const MartingaleModel& model, const ProbeClass& g_class, double p,
    std::span<const int> n_list, std::size_t count, std::uint64_t seed,
    int workers = 1);

// Minimum over dyadic replicates of
//   sum_t eps_t y_t - sup_f [sum_t eps_t f(x_t) - 2 B(f; x)]
// with y_t from the strategy and B from the game spec. The strategy must
// come from a game over the model's class with outcomes {-1, +1}.
double PathwiseSoundnessMargin(const SampleBatch& batch,
                               const StrategyTree& strategy,
                               const GameSpec& spec);

}  // namespace regmart

#endif  // REGMART_SIMULATE_H_
