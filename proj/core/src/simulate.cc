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


#include "regmart/simulate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "regmart/error.h"
#include "regmart/parallel.h"
#include "regmart/rng.h"

namespace regmart {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PointId SampleCategorical(std::span<const double> probs, CounterRng& rng) {
  const double u = rng.Uniform01();
  double acc = 0.0;
  PointId last = 0;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (probs[s] <= 0.0) continue;
    last = static_cast<PointId>(s);
    acc += probs[s];
    if (u < acc) return last;
  }
  return last;
}

void CheckProbabilityVector(std::span<const double> row, const char* what) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError(std::string(what) + ": negative or non-finite entry");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw DomainError(std::string(what) + ": row sums to " +
                      std::to_string(sum) + ", expected 1");
  }
}

Vec ScaleAt(const MartingaleModel& model, int t, const Vec& running_sum) {
  const int d = model.dimension;
  Vec v(d, 0.0);
  switch (model.scale_kind) {
    case ScaleKind::kZero:
      break;
    case ScaleKind::kAxis:
      v[0] = model.scale;
      break;
    case ScaleKind::kCoordinates:
      std::fill(v.begin(), v.end(), model.scale / std::sqrt(double(d)));
      break;
    case ScaleKind::kMixture: {
      const double s = running_sum[0] >= 0.0 ? model.scale : model.scale / 4.0;
      v[(t - 1) % d] = s;
      break;
    }
  }
  return v;
}

Vec DyadicIncrement(const MartingaleModel& model, std::span<const int> signs,
                    int t) {
  const std::size_t m = model.f_class.size();
  std::uint64_t index = 0;
  for (int s = 1; s < t; ++s) index = (index << 1) | (signs[s - 1] > 0 ? 1 : 0);
  const PointId x = model.tree.node(t, index);
  Vec w(m);
  for (std::size_t f = 0; f < m; ++f) w[f] = model.f_class.value(f, x);
  return w;
}

Replicate SampleReplicate(const MartingaleModel& model, std::uint64_t seed,
                          std::uint64_t r) {
  CounterRng rng(seed, r);
  Replicate rep;
  const int n = model.horizon;
  switch (model.kind) {
    case ModelKind::kDyadicTree: {
      rep.signs.reserve(n);
      for (int t = 1; t <= n; ++t) {
        const Vec w = DyadicIncrement(model, rep.signs, t);
        const int eps = rng.Sign();
        const int eps_tangent = rng.Sign();
        rep.signs.push_back(eps);
        Vec z = w;
        Vec zt = w;
        for (std::size_t f = 0; f < w.size(); ++f) {
          z[f] *= eps;
          zt[f] *= eps_tangent;
        }
        rep.z.push_back(std::move(z));
        rep.tangent.push_back(std::move(zt));
      }
      break;
    }
    case ModelKind::kConditionallySymmetric: {
      const int d = model.dimension;
      Vec sum(d, 0.0);
      for (int t = 1; t <= n; ++t) {
        Vec v = ScaleAt(model, t, sum);
        Vec z(d);
        Vec zt(d);
        if (model.scale_kind == ScaleKind::kCoordinates) {
          for (int i = 0; i < d; ++i) z[i] = rng.Sign() * v[i];
          for (int i = 0; i < d; ++i) zt[i] = rng.Sign() * v[i];
        } else {
          const int eps = rng.Sign();
          const int eps_tangent = rng.Sign();
          for (int i = 0; i < d; ++i) {
            z[i] = eps * v[i];
            zt[i] = eps_tangent * v[i];
          }
        }
        AddScaled(sum, 1.0, z);
        rep.scales.push_back(std::move(v));
        rep.z.push_back(std::move(z));
        rep.tangent.push_back(std::move(zt));
      }
      break;
    }
    case ModelKind::kFiniteMarkov: {
      for (int t = 1; t <= n; ++t) {
        std::span<const double> row =
            t == 1 ? std::span<const double>(model.initial)
                   : std::span<const double>(model.kernel[rep.states.back()]);
        const PointId s = SampleCategorical(row, rng);
        const PointId st = SampleCategorical(row, rng);
        rep.states.push_back(s);
        rep.tangent_states.push_back(st);
      }
      break;
    }
  }
  return rep;
}

// sup_g |g(v)| for a vector increment difference.
double SupAbsVector(const ProbeClass& g_class, std::span<const double> v) {
  if (g_class.kind == ProbeClass::Kind::kDomain) {
    return g_class.mirror.Support(v);
  }
  return NormLinf(v);
}

double VectorNorm(const ProbeClass& g_class, std::span<const double> v) {
  if (g_class.kind == ProbeClass::Kind::kDomain) {
    return g_class.mirror.DualNorm(v);
  }
  return Norm2(v);
}

void CheckProbeClass(const MartingaleModel& model, const ProbeClass& g_class) {
  if (model.VectorValued()) {
    if (g_class.kind == ProbeClass::Kind::kStateFunctions) {
      throw CapabilityError("state functions need a finite Markov model");
    }
    if (g_class.kind == ProbeClass::Kind::kDomain &&
        g_class.mirror.dimension() != model.VectorDimension()) {
      throw ShapeError("probe class: mirror map dimension " +
                       std::to_string(g_class.mirror.dimension()) +
                       " does not match the model dimension " +
                       std::to_string(model.VectorDimension()));
    }
  } else {
    if (g_class.kind != ProbeClass::Kind::kStateFunctions) {
      throw CapabilityError("finite Markov models need a state-function class");
    }
    if (g_class.functions.domain_size() != model.StateCount()) {
      throw ShapeError("probe class: function domain must be the state set");
    }
    if (g_class.functions.size() == 0) {
      throw DomainError("probe class: empty function class");
    }
  }
}

VariationStats ReplicateVariations(const MartingaleModel& model,
                                   const Replicate& rep, double p,
                                   const ProbeClass& g_class) {
  VariationStats out;
  const int n = model.horizon;
  if (model.VectorValued()) {
    const int d = model.VectorDimension();
    const bool finite = g_class.kind == ProbeClass::Kind::kCoordinates;
    if (finite) out.var_p_g.assign(d, 0.0);
    Vec centered_sum(d, 0.0);
    for (int t = 1; t <= n; ++t) {
      const Vec& z = rep.z[t - 1];
      const auto law = ConditionalLaw(model, rep, t);
      const double norm = VectorNorm(g_class, z);
      out.v_n += norm * norm;
      Vec mean(d, 0.0);
      for (const Atom& a : law) {
        const double an = VectorNorm(g_class, a.z);
        out.w_n += a.probability * an * an;
        AddScaled(mean, a.probability, a.z);
        const Vec diff = Sub(z, a.z);
        out.var_p += a.probability * std::pow(SupAbsVector(g_class, diff), p);
        if (finite) {
          for (int f = 0; f < d; ++f) {
            out.var_p_g[f] += a.probability * std::pow(std::fabs(diff[f]), p);
          }
        }
      }
      const Vec centered = Sub(z, mean);
      out.var_p_centered += std::pow(SupAbsVector(g_class, centered), p);
      AddScaled(centered_sum, 1.0, centered);
    }
    out.sup_deviation =
        finite ? *std::max_element(centered_sum.begin(), centered_sum.end())
               : g_class.mirror.Support(centered_sum);
    return out;
  }
  const FiniteFunctionClass& g = g_class.functions;
  const std::size_t m = g.size();
  out.v_n = kNaN;
  out.w_n = kNaN;
  out.var_p_g.assign(m, 0.0);
  std::vector<double> dev(m, 0.0);
  for (int t = 1; t <= n; ++t) {
    const PointId z = rep.states[t - 1];
    const auto law = ConditionalLaw(model, rep, t);
    std::vector<double> mean(m, 0.0);
    for (const Atom& a : law) {
      double sup = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double diff = std::fabs(g.value(k, z) - g.value(k, a.state));
        sup = std::max(sup, diff);
        out.var_p_g[k] += a.probability * std::pow(diff, p);
        mean[k] += a.probability * g.value(k, a.state);
      }
      out.var_p += a.probability * std::pow(sup, p);
    }
    double sup_centered = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double c = g.value(k, z) - mean[k];
      sup_centered = std::max(sup_centered, std::fabs(c));
      dev[k] += c;
    }
    out.var_p_centered += std::pow(sup_centered, p);
  }
  out.sup_deviation = *std::max_element(dev.begin(), dev.end());
  return out;
}

void CheckVectorBatch(const SampleBatch& batch, const MirrorMap& mirror,
                      const char* who) {
  if (!batch.model.VectorValued()) {
    throw CapabilityError(std::string(who) + ": needs a vector-valued model");
  }
  if (mirror.dimension() != batch.model.VectorDimension()) {
    throw ShapeError(std::string(who) + ": mirror map dimension mismatch");
  }
}

// Chain paths (without tangents) with probabilities.
void EnumerateChain(const MartingaleModel& model, std::vector<PointId>& prefix,
                    double prob, std::vector<MarkovPath>& out) {
  const int t = static_cast<int>(prefix.size()) + 1;
  if (t > model.horizon) {
    out.push_back({prefix, {}, prob});
    return;
  }
  const auto& row = t == 1 ? model.initial : model.kernel[prefix.back()];
  for (std::size_t s = 0; s < row.size(); ++s) {
    if (row[s] <= 0.0) continue;
    prefix.push_back(static_cast<PointId>(s));
    EnumerateChain(model, prefix, prob * row[s], out);
    prefix.pop_back();
  }
}

// Tangent paths given a chain path, with conditional probabilities.
void EnumerateTangents(
    const MartingaleModel& model, std::span<const PointId> states,
    std::vector<PointId>& prefix, double prob,
    std::vector<std::pair<std::vector<PointId>, double>>& out) {
  const int t = static_cast<int>(prefix.size()) + 1;
  if (t > model.horizon) {
    out.emplace_back(prefix, prob);
    return;
  }
  const auto& row = t == 1 ? model.initial : model.kernel[states[t - 2]];
  for (std::size_t s = 0; s < row.size(); ++s) {
    if (row[s] <= 0.0) continue;
    prefix.push_back(static_cast<PointId>(s));
    EnumerateTangents(model, states, prefix, prob * row[s], out);
    prefix.pop_back();
  }
}

std::uint64_t SaturatingPow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= base;
  }
  return out;
}

class PairTreeRecursion {
 public:
  PairTreeRecursion(const FiniteFunctionClass& g, const PairFunctional& b,
                    int n)
      : g_(g), b_(b), n_(n), sums_(g.size(), 0.0) {}

  double Run() { return Value(1); }
  std::uint64_t leaves() const { return leaves_; }

 private:
  double Value(int t) {
    if (t > n_) {
      ++leaves_;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < g_.size(); ++k) {
        best = std::max(best, sums_[k] - b_(k, zs_, zps_));
      }
      return best;
    }
    const std::size_t m = g_.domain_size();
    double best = -std::numeric_limits<double>::infinity();
    for (PointId a = 0; a < m; ++a) {
      for (PointId b = 0; b < m; ++b) {
        zs_.push_back(a);
        zps_.push_back(b);
        double total = 0.0;
        for (int eps : {1, -1}) {
          for (std::size_t k = 0; k < g_.size(); ++k) {
            sums_[k] += eps * (g_.value(k, a) - g_.value(k, b));
          }
          total += Value(t + 1);
          for (std::size_t k = 0; k < g_.size(); ++k) {
            sums_[k] -= eps * (g_.value(k, a) - g_.value(k, b));
          }
        }
        zs_.pop_back();
        zps_.pop_back();
        best = std::max(best, 0.5 * total);
      }
    }
    return best;
  }

  const FiniteFunctionClass& g_;
  const PairFunctional& b_;
  int n_;
  std::vector<double> sums_;
  std::vector<PointId> zs_;
  std::vector<PointId> zps_;
  std::uint64_t leaves_ = 0;
};

}  // namespace

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kDyadicTree:
      return "dyadic_tree";
    case ModelKind::kConditionallySymmetric:
      return "conditionally_symmetric";
    case ModelKind::kFiniteMarkov:
      return "finite_markov";
  }
  return "unknown";
}

ModelKind ParseModelKind(const std::string& name) {
  for (ModelKind k :
       {ModelKind::kDyadicTree, ModelKind::kConditionallySymmetric,
        ModelKind::kFiniteMarkov}) {
    if (ModelKindName(k) == name) return k;
  }
  throw DomainError("unknown model kind '" + name + "'");
}

std::string ScaleKindName(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::kZero:
      return "zero";
    case ScaleKind::kAxis:
      return "axis";
    case ScaleKind::kCoordinates:
      return "coordinates";
    case ScaleKind::kMixture:
      return "mixture";
  }
  return "unknown";
}

ScaleKind ParseScaleKind(const std::string& name) {
  for (ScaleKind k : {ScaleKind::kZero, ScaleKind::kAxis,
                      ScaleKind::kCoordinates, ScaleKind::kMixture}) {
    if (ScaleKindName(k) == name) return k;
  }
  throw DomainError("unknown scale kind '" + name + "'");
}

MartingaleModel MartingaleModel::Dyadic(FiniteFunctionClass f_class,
                                        DyadicTree tree) {
  MartingaleModel model;
  model.kind = ModelKind::kDyadicTree;
  model.horizon = tree.depth();
  model.f_class = std::move(f_class);
  model.tree = std::move(tree);
  model.Validate();
  return model;
}

MartingaleModel MartingaleModel::ConditionallySymmetric(ScaleKind scale_kind,
                                                        int dimension,
                                                        int horizon,
                                                        double scale) {
  MartingaleModel model;
  model.kind = ModelKind::kConditionallySymmetric;
  model.scale_kind = scale_kind;
  model.dimension = dimension;
  model.horizon = horizon;
  model.scale = scale;
  model.Validate();
  return model;
}

MartingaleModel MartingaleModel::FiniteMarkov(
    std::vector<std::vector<double>> kernel, std::vector<double> initial,
    int horizon) {
  MartingaleModel model;
  model.kind = ModelKind::kFiniteMarkov;
  model.kernel = std::move(kernel);
  model.initial = std::move(initial);
  model.horizon = horizon;
  model.Validate();
  return model;
}

void MartingaleModel::Validate() const {
  if (horizon < 1) throw DomainError("model: horizon must be >= 1");
  switch (kind) {
    case ModelKind::kDyadicTree:
      if (f_class.size() == 0) throw DomainError("model: empty class");
      if (tree.depth() != horizon) {
        throw ShapeError("model: tree depth must equal the horizon");
      }
      for (PointId x : tree.flat()) {
        if (x >= f_class.domain_size()) {
          throw DomainError("model: tree point outside the class domain");
        }
      }
      break;
    case ModelKind::kConditionallySymmetric:
      if (dimension < 1) throw DomainError("model: dimension must be >= 1");
      if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw DomainError("model: scale must be >= 0");
      }
      break;
    case ModelKind::kFiniteMarkov: {
      const std::size_t s = kernel.size();
      if (s == 0) throw DomainError("model: empty kernel");
      for (const auto& row : kernel) {
        if (row.size() != s) throw ShapeError("model: kernel must be square");
        CheckProbabilityVector(row, "model: kernel row");
      }
      if (initial.size() != s) {
        throw ShapeError("model: initial law must have one entry per state");
      }
      CheckProbabilityVector(initial, "model: initial law");
      break;
    }
  }
}

int MartingaleModel::VectorDimension() const {
  switch (kind) {
    case ModelKind::kDyadicTree:
      return static_cast<int>(f_class.size());
    case ModelKind::kConditionallySymmetric:
      return dimension;
    case ModelKind::kFiniteMarkov:
      break;
  }
  throw CapabilityError("finite Markov models are not vector-valued");
}

MartingaleModel MartingaleModel::WithHorizon(int n) const {
  if (kind == ModelKind::kDyadicTree) {
    throw CapabilityError("dyadic models have the horizon of their tree");
  }
  MartingaleModel out = *this;
  out.horizon = n;
  out.Validate();
  return out;
}

std::string MartingaleModel::Describe() const {
  std::ostringstream out;
  out << ModelKindName(kind) << "(n=" << horizon;
  switch (kind) {
    case ModelKind::kDyadicTree:
      out << ",F=" << f_class.size() << ",m=" << f_class.domain_size();
      break;
    case ModelKind::kConditionallySymmetric:
      out << ",scale=" << ScaleKindName(scale_kind) << ",d=" << dimension
          << ",c=" << scale;
      break;
    case ModelKind::kFiniteMarkov:
      out << ",states=" << kernel.size();
      break;
  }
  out << ")";
  return out.str();
}

SampleBatch SampleBatchFor(const MartingaleModel& model, std::size_t count,
                           std::uint64_t seed, int workers) {
  model.Validate();
  if (count < 1) throw DomainError("SampleBatch: need at least one replicate");
  SampleBatch batch;
  batch.model = model;
  batch.seed = seed;
  batch.replicates.resize(count);
  ParallelFor(count, workers, [&](std::size_t r) {
    batch.replicates[r] = SampleReplicate(model, seed, r);
  });
  return batch;
}

ProbeClass ProbeClass::Domain(MirrorMap mirror) {
  ProbeClass g;
  g.kind = Kind::kDomain;
  g.mirror = std::move(mirror);
  return g;
}

ProbeClass ProbeClass::Coordinates() {
  ProbeClass g;
  g.kind = Kind::kCoordinates;
  return g;
}

ProbeClass ProbeClass::States(FiniteFunctionClass functions) {
  ProbeClass g;
  g.kind = Kind::kStateFunctions;
  g.functions = std::move(functions);
  return g;
}

std::size_t ProbeClass::FiniteSize(const MartingaleModel& model) const {
  switch (kind) {
    case Kind::kDomain:
      return 0;
    case Kind::kCoordinates:
      return model.VectorDimension();
    case Kind::kStateFunctions:
      return functions.size();
  }
  return 0;
}

std::vector<Atom> ConditionalLaw(const MartingaleModel& model,
                                 const Replicate& rep, int t) {
  if (t < 1 || t > model.horizon) {
    throw IndexError("ConditionalLaw: t outside [1, n]");
  }
  std::vector<Atom> law;
  switch (model.kind) {
    case ModelKind::kDyadicTree: {
      const Vec w = DyadicIncrement(model, rep.signs, t);
      Vec neg = w;
      for (double& v : neg) v = -v;
      law.push_back({w, 0, 0.5});
      law.push_back({std::move(neg), 0, 0.5});
      break;
    }
    case ModelKind::kConditionallySymmetric: {
      const Vec& v = rep.scales[t - 1];
      const int d = model.dimension;
      if (model.scale_kind == ScaleKind::kCoordinates) {
        if (d > 20) {
          throw CapacityError("ConditionalLaw: 2^d atoms with d > 20");
        }
        const std::uint64_t count = std::uint64_t{1} << d;
        const double prob = 1.0 / static_cast<double>(count);
        for (std::uint64_t mask = 0; mask < count; ++mask) {
          Vec z(d);
          for (int i = 0; i < d; ++i) z[i] = (mask >> i & 1) ? -v[i] : v[i];
          law.push_back({std::move(z), 0, prob});
        }
      } else {
        Vec neg = v;
        for (double& x : neg) x = -x;
        law.push_back({v, 0, 0.5});
        law.push_back({std::move(neg), 0, 0.5});
      }
      break;
    }
    case ModelKind::kFiniteMarkov: {
      const auto& row =
          t == 1 ? model.initial : model.kernel[rep.states[t - 2]];
      for (std::size_t s = 0; s < row.size(); ++s) {
        if (row[s] > 0.0) law.push_back({{}, static_cast<PointId>(s), row[s]});
      }
      break;
    }
  }
  return law;
}

std::vector<VariationStats> Variations(const SampleBatch& batch, double p,
                                       const ProbeClass& g_class) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("Variations: p must be >= 1");
  }
  CheckProbeClass(batch.model, g_class);
  std::vector<VariationStats> out(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    out[r] = ReplicateVariations(batch.model, batch.replicates[r], p, g_class);
  }
  return out;
}

std::vector<std::vector<double>> CenteredIncrements(const SampleBatch& batch,
                                                    const ProbeClass& g_class,
                                                    std::size_t g) {
  CheckProbeClass(batch.model, g_class);
  if (g_class.kind == ProbeClass::Kind::kDomain) {
    throw CapabilityError("CenteredIncrements: needs a finite class");
  }
  if (g >= g_class.FiniteSize(batch.model)) {
    throw IndexError("CenteredIncrements: function index out of range");
  }
  const MartingaleModel& model = batch.model;
  std::vector<std::vector<double>> out(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const Replicate& rep = batch.replicates[r];
    out[r].resize(model.horizon);
    for (int t = 1; t <= model.horizon; ++t) {
      const auto law = ConditionalLaw(model, rep, t);
      double mean = 0.0;
      double value = 0.0;
      if (model.VectorValued()) {
        for (const Atom& a : law) mean += a.probability * a.z[g];
        value = rep.z[t - 1][g];
      } else {
        for (const Atom& a : law) {
          mean += a.probability * g_class.functions.value(g, a.state);
        }
        value = g_class.functions.value(g, rep.states[t - 1]);
      }
      out[r][t - 1] = value - mean;
    }
  }
  return out;
}

std::vector<double> NormOfSum(const SampleBatch& batch,
                              const MirrorMap& mirror) {
  CheckVectorBatch(batch, mirror, "NormOfSum");
  std::vector<double> out(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    Vec sum(mirror.dimension(), 0.0);
    for (const Vec& z : batch.replicates[r].z) AddScaled(sum, 1.0, z);
    out[r] = mirror.Support(sum);
  }
  return out;
}

std::vector<double> BanachStatistic(const SampleBatch& batch,
                                    const MirrorMap& mirror) {
  CheckVectorBatch(batch, mirror, "BanachStatistic");
  const auto stats = Variations(batch, 2.0, ProbeClass::Domain(mirror));
  const auto norms = NormOfSum(batch, mirror);
  std::vector<double> roots(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    roots[r] = std::sqrt(stats[r].v_n + stats[r].w_n);
  }
  const double mean_root =
      PairwiseSum(roots) / static_cast<double>(roots.size());
  const double r_max = mirror.RMax();
  std::vector<double> out(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const double numerator =
        norms[r] - 2.5 * r_max * (std::sqrt(stats[r].v_n) + 1.0);
    const double denominator =
        std::sqrt(stats[r].v_n + stats[r].w_n + mean_root * mean_root);
    if (denominator > 0.0) {
      out[r] = numerator / denominator;
    } else {
      out[r] = numerator > 0.0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

std::vector<TailPoint> EmpiricalTail(std::span<const double> statistic,
                                     std::span<const double> u_grid,
                                     double delta) {
  if (statistic.empty()) throw DomainError("EmpiricalTail: empty batch");
  std::vector<double> sorted(statistic.begin(), statistic.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<TailPoint> out;
  out.reserve(u_grid.size());
  for (double u : u_grid) {
    TailPoint point;
    point.u = u;
    // Number of entries strictly greater than u.
    point.exceedances = static_cast<std::size_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), u));
    point.estimate =
        static_cast<double>(point.exceedances) / static_cast<double>(n);
    point.upper = ClopperPearsonUpper(point.exceedances, n, delta);
    out.push_back(point);
  }
  return out;
}

EnvelopeVerdict TailVsEnvelope(std::span<const double> statistic,
                               const TailEnvelope& envelope,
                               std::span<const double> u_grid,
                               double total_delta) {
  if (!(total_delta > 0.0 && total_delta < 1.0)) {
    throw DomainError("TailVsEnvelope: total_delta must lie in (0, 1)");
  }
  EnvelopeVerdict verdict;
  std::vector<double> env(u_grid.size());
  std::size_t checked = 0;
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    env[i] = envelope(u_grid[i]);
    if (env[i] < 1.0) ++checked;
  }
  verdict.delta_per_point =
      checked == 0 ? total_delta : total_delta / static_cast<double>(checked);
  const auto points = EmpiricalTail(statistic, u_grid, verdict.delta_per_point);
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    EnvelopeRow row;
    row.point = points[i];
    row.envelope = env[i];
    row.checked = env[i] < 1.0;
    row.pass = !row.checked || row.point.upper <= row.envelope;
    verdict.pass = verdict.pass && row.pass;
    verdict.rows.push_back(row);
  }
  return verdict;
}

std::vector<MomentSample> MomentSamples(const SampleBatch& batch,
                                        const MirrorMap& mirror) {
  CheckVectorBatch(batch, mirror, "MomentSamples");
  const auto stats = Variations(batch, 2.0, ProbeClass::Domain(mirror));
  std::vector<MomentSample> out(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto& z = batch.replicates[r].z;
    std::vector<Vec> negated = z;
    for (Vec& v : negated) {
      for (double& x : v) x = -x;
    }
    const RegretTranscript tr = RunAdaptiveOmd(mirror, negated);
    double a = 0.0;
    for (std::size_t t = 0; t < z.size(); ++t) {
      a += Dot(tr.predictions[t], z[t]);
    }
    out[r].a = a;
    out[r].b = 2.0 * std::sqrt(stats[r].v_n + stats[r].w_n);
  }
  return out;
}

MomentResult CheckMomentCondition(std::span<const MomentSample> samples,
                                  std::span<const double> lambda_grid) {
  if (samples.empty()) throw DomainError("CheckMomentCondition: no samples");
  if (lambda_grid.empty()) {
    throw DomainError("CheckMomentCondition: empty lambda grid");
  }
  for (const MomentSample& s : samples) {
    if (!(s.b > 0.0)) {
      throw DomainError("CheckMomentCondition: B must be positive");
    }
  }
  MomentResult out;
  out.max_value = -std::numeric_limits<double>::infinity();
  std::vector<double> values(samples.size());
  for (double lambda : lambda_grid) {
    for (std::size_t r = 0; r < samples.size(); ++r) {
      const double b = samples[r].b;
      values[r] =
          std::exp(lambda * samples[r].a - 0.5 * lambda * lambda * b * b);
    }
    const Estimate est = MeanWithError(values);
    out.values.push_back(est);
    if (est.mean > out.max_value) {
      out.max_value = est.mean;
      out.std_error = est.std_error;
      out.lambda = lambda;
    }
  }
  return out;
}

BdgResult BdgCheck(const SampleBatch& batch, const MirrorMap& mirror) {
  CheckVectorBatch(batch, mirror, "BdgCheck");
  const double r_max = mirror.RMax();
  std::vector<double> lhs(batch.size());
  std::vector<double> rhs(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    Vec sum(mirror.dimension(), 0.0);
    double best = 0.0;
    double v_n = 0.0;
    for (const Vec& z : batch.replicates[r].z) {
      AddScaled(sum, 1.0, z);
      best = std::max(best, mirror.Support(sum));
      const double norm = mirror.DualNorm(z);
      v_n += norm * norm;
    }
    lhs[r] = best;
    rhs[r] = (2.5 * r_max + std::sqrt(3.0)) * std::sqrt(v_n) + 2.5 * r_max;
  }
  BdgResult out;
  out.lhs = MeanWithError(lhs);
  out.rhs = MeanWithError(rhs);
  out.combined_se = std::hypot(out.lhs.std_error, out.rhs.std_error);
  return out;
}

PairFunctional PairFunctionalSpec::Bind(
    const FiniteFunctionClass& g_class) const {
  const double c = value;
  switch (kind) {
    case Kind::kConstant:
      return [c](std::size_t, std::span<const PointId>,
                 std::span<const PointId>) { return c; };
    case Kind::kScaledSquare:
      return [c, g = g_class](std::size_t k, std::span<const PointId> z,
                              std::span<const PointId> zp) {
        double acc = 0.0;
        for (std::size_t t = 0; t < z.size(); ++t) {
          const double d = g.value(k, z[t]) - g.value(k, zp[t]);
          acc += d * d;
        }
        return c * acc;
      };
  }
  throw DomainError("PairFunctionalSpec: unknown kind");
}

std::vector<MarkovPath> EnumerateMarkovPaths(const MartingaleModel& model,
                                             std::uint64_t limit) {
  if (model.kind != ModelKind::kFiniteMarkov) {
    throw CapabilityError("EnumerateMarkovPaths: needs a finite Markov model");
  }
  model.Validate();
  if (SaturatingPow(model.StateCount(), 2 * model.horizon) > limit) {
    throw CapacityError("EnumerateMarkovPaths: too many paths");
  }
  std::vector<MarkovPath> chains;
  std::vector<PointId> prefix;
  EnumerateChain(model, prefix, 1.0, chains);
  std::vector<MarkovPath> out;
  for (const MarkovPath& chain : chains) {
    std::vector<std::pair<std::vector<PointId>, double>> tangents;
    std::vector<PointId> tprefix;
    EnumerateTangents(model, chain.states, tprefix, 1.0, tangents);
    for (auto& [tangent, prob] : tangents) {
      out.push_back({chain.states, tangent, chain.probability * prob});
    }
  }
  return out;
}

SymmetrizationResult SymmetrizationCompare(const MartingaleModel& model,
                                           const FiniteFunctionClass& g_class,
                                           const PairFunctional& b_tilde,
                                           std::uint64_t limit) {
  if (model.kind != ModelKind::kFiniteMarkov) {
    throw CapabilityError("SymmetrizationCompare: needs a finite Markov model");
  }
  model.Validate();
  if (g_class.domain_size() != model.StateCount() || g_class.size() == 0) {
    throw ShapeError("SymmetrizationCompare: class must live on the states");
  }
  const int n = model.horizon;
  const std::size_t m = g_class.size();
  const std::uint64_t lhs_cost =
      SaturatingPow(model.StateCount(), 2 * n) * std::max<std::size_t>(m, 1);
  const std::uint64_t rhs_cost =
      SaturatingPow(2 * model.StateCount() * model.StateCount(), n);
  if (lhs_cost > limit || rhs_cost > limit) {
    throw CapacityError("SymmetrizationCompare: instance exceeds the limit");
  }
  SymmetrizationResult out;
  std::vector<MarkovPath> chains;
  std::vector<PointId> prefix;
  EnumerateChain(model, prefix, 1.0, chains);
  std::vector<double> terms;
  for (const MarkovPath& chain : chains) {
    std::vector<double> dev(m, 0.0);
    for (int t = 1; t <= n; ++t) {
      const auto& row =
          t == 1 ? model.initial : model.kernel[chain.states[t - 2]];
      for (std::size_t k = 0; k < m; ++k) {
        double mean = 0.0;
        for (std::size_t s = 0; s < row.size(); ++s) {
          mean += row[s] * g_class.value(k, static_cast<PointId>(s));
        }
        dev[k] += g_class.value(k, chain.states[t - 1]) - mean;
      }
    }
    std::vector<std::pair<std::vector<PointId>, double>> tangents;
    std::vector<PointId> tprefix;
    EnumerateTangents(model, chain.states, tprefix, 1.0, tangents);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      double expected_b = 0.0;
      for (const auto& [tangent, prob] : tangents) {
        expected_b += prob * b_tilde(k, chain.states, tangent);
      }
      best = std::max(best, dev[k] - expected_b);
    }
    terms.push_back(chain.probability * best);
  }
  out.lhs = PairwiseSum(terms);
  PairTreeRecursion recursion(g_class, b_tilde, n);
  out.rhs = recursion.Run();
  out.rhs_states = recursion.leaves();
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

std::vector<TypeProbeRow> MartingaleTypeProbe(const MartingaleModel& model,
                                              const ProbeClass& g_class,
                                              double p,
                                              std::span<const int> n_list,
                                              std::size_t count,
                                              std::uint64_t seed, int workers) {
  std::vector<TypeProbeRow> rows;
  for (int n : n_list) {
    const MartingaleModel model_n =
        model.kind == ModelKind::kDyadicTree && n == model.horizon
            ? model
            : model.WithHorizon(n);
    const SampleBatch batch = SampleBatchFor(
        model_n, count, seed + static_cast<std::uint64_t>(n), workers);
    const auto stats = Variations(batch, p, g_class);
    std::vector<double> lhs(stats.size());
    std::vector<double> rhs(stats.size());
    std::vector<double> rhs_c(stats.size());
    for (std::size_t r = 0; r < stats.size(); ++r) {
      lhs[r] = stats[r].sup_deviation;
      rhs[r] = std::pow(stats[r].var_p, 1.0 / p);
      rhs_c[r] = std::pow(stats[r].var_p_centered, 1.0 / p);
    }
    TypeProbeRow row;
    row.n = n;
    row.lhs = MeanWithError(lhs);
    row.rhs = MeanWithError(rhs);
    row.rhs_centered = MeanWithError(rhs_c);
    if (row.rhs.mean > 0.0) {
      row.ratio = row.lhs.mean / row.rhs.mean;
    } else if (row.lhs.mean == 0.0) {
      row.ratio = 0.0;
    } else {
      throw DegenerateError("MartingaleTypeProbe: right side is zero at n = " +
                            std::to_string(n));
    }
    if (row.rhs_centered.mean > 0.0) {
      row.ratio_centered = row.lhs.mean / row.rhs_centered.mean;
    } else {
      row.ratio_centered = row.lhs.mean == 0.0 ? 0.0 : kNaN;
    }
    rows.push_back(row);
  }
  return rows;
}

double PathwiseSoundnessMargin(const SampleBatch& batch,
                               const StrategyTree& strategy,
                               const GameSpec& spec) {
  const MartingaleModel& model = batch.model;
  if (model.kind != ModelKind::kDyadicTree) {
    throw CapabilityError("PathwiseSoundnessMargin: needs a dyadic model");
  }
  if (spec.f_class.size() != model.f_class.size() ||
      spec.horizon != model.horizon) {
    throw ShapeError("PathwiseSoundnessMargin: game and model disagree");
  }
  std::uint32_t plus = 0;
  std::uint32_t minus = 0;
  bool has_plus = false;
  bool has_minus = false;
  for (std::size_t k = 0; k < spec.y_values.size(); ++k) {
    if (spec.y_values[k] == 1.0) {
      plus = static_cast<std::uint32_t>(k);
      has_plus = true;
    }
    if (spec.y_values[k] == -1.0) {
      minus = static_cast<std::uint32_t>(k);
      has_minus = true;
    }
  }
  if (!has_plus || !has_minus) {
    throw DomainError("PathwiseSoundnessMargin: outcomes must include -1, +1");
  }
  const SequenceFunctional b = spec.Comparator();
  const int n = model.horizon;
  double worst = std::numeric_limits<double>::infinity();
  for (const Replicate& rep : batch.replicates) {
    const SignPath path(rep.signs);
    std::vector<PointId> xs;
    std::vector<std::uint32_t> history;
    double learner = 0.0;
    for (int t = 1; t <= n; ++t) {
      const PointId x = model.tree.Evaluate(path, t);
      xs.push_back(x);
      history.push_back(x);
      learner += rep.signs[t - 1] * strategy.Predict(history);
      history.push_back(rep.signs[t - 1] > 0 ? plus : minus);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < model.f_class.size(); ++f) {
      double acc = 0.0;
      for (int t = 1; t <= n; ++t) {
        acc += rep.signs[t - 1] * model.f_class.value(f, xs[t - 1]);
      }
      best = std::max(best, acc - 2.0 * b(f, xs));
    }
    worst = std::min(worst, learner - best);
  }
  return worst;
}

}  // namespace regmart
