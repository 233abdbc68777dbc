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


#include "regmart/tailbounds.h"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "regmart/error.h"
#include "regmart/strategies.h"

namespace regmart {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool Positive(double v) { return v > 0.0 && std::isfinite(v); }
bool NonNegative(double v) { return v >= 0.0 && std::isfinite(v); }

void Validate(EnvelopeKind kind, const EnvelopeParams& p) {
  const std::string who = "envelope " + EnvelopeKindName(kind) + ": ";
  switch (kind) {
    case EnvelopeKind::kPinelis:
      Require(Positive(p.d_const), who + "D must be positive");
      break;
    case EnvelopeKind::kBanach:
    case EnvelopeKind::kDelaPena:
      break;
    case EnvelopeKind::kAzumaSup:
      Require(Positive(p.variation), who + "variation must be positive");
      break;
    case EnvelopeKind::kFreedmanSup:
      Require(Positive(p.sigma2), who + "sigma2 must be positive");
      Require(NonNegative(p.sup_abs), who + "sup_abs must be >= 0");
      Require(p.n >= 1, who + "n must be >= 1");
      break;
    case EnvelopeKind::kExpTail:
    case EnvelopeKind::kOffsetTail:
      Require(Positive(p.alpha), who + "alpha must be positive");
      break;
    case EnvelopeKind::kGaussian:
      Require(p.n >= 1, who + "n must be >= 1");
      break;
    case EnvelopeKind::kUniform:
    case EnvelopeKind::kPerFunction:
      Require(p.n >= 2, who + "n must be >= 2");
      break;
    case EnvelopeKind::kConstant:
      Require(NonNegative(p.value), who + "value must be >= 0");
      break;
    case EnvelopeKind::kExponential:
      Require(NonNegative(p.scale), who + "scale must be >= 0");
      Require(Positive(p.rate), who + "rate must be positive");
      break;
    case EnvelopeKind::kPanchenko:
      Require(p.gamma >= 1.0 && std::isfinite(p.gamma),
              who + "gamma must be >= 1");
      break;
    case EnvelopeKind::kBalanced:
      Require(NonNegative(p.gamma), who + "gamma must be >= 0");
      Require(Positive(p.c), who + "c must be positive");
      Require(p.b >= 1.0 && std::isfinite(p.b), who + "b must be >= 1");
      break;
  }
}

}  // namespace

MuSpec MuSpec::Linear(double c) {
  Require(Positive(c), "MuSpec: c must be positive");
  MuSpec mu;
  mu.kind_ = Kind::kLinear;
  mu.c_ = c;
  return mu;
}

MuSpec MuSpec::Quadratic(double c) {
  Require(Positive(c), "MuSpec: c must be positive");
  MuSpec mu;
  mu.kind_ = Kind::kQuadratic;
  mu.c_ = c;
  return mu;
}

MuSpec MuSpec::Tabulated(std::vector<double> knots,
                         std::vector<double> values) {
  Require(knots.size() == values.size() && knots.size() >= 2,
          "MuSpec: need at least two (knot, value) pairs of equal length");
  Require(knots[0] == 0.0 && values[0] == 0.0, "MuSpec: mu(0) must be 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    Require(std::isfinite(knots[i]) && std::isfinite(values[i]),
            "MuSpec: non-finite table entry");
    Require(knots[i] > knots[i - 1] && values[i] > values[i - 1],
            "MuSpec: table must be strictly increasing");
  }
  MuSpec mu;
  mu.kind_ = Kind::kTabulated;
  mu.knots_ = std::move(knots);
  mu.values_ = std::move(values);
  return mu;
}

double MuSpec::operator()(double b) const {
  Require(b >= 0.0, "MuSpec: argument must be >= 0");
  switch (kind_) {
    case Kind::kLinear:
      return c_ * b;
    case Kind::kQuadratic:
      return c_ * b * b;
    case Kind::kTabulated: {
      std::size_t i = 1;
      while (i + 1 < knots_.size() && knots_[i] < b) ++i;
      const double slope =
          (values_[i] - values_[i - 1]) / (knots_[i] - knots_[i - 1]);
      return values_[i - 1] + slope * (b - knots_[i - 1]);
    }
  }
  return 0.0;
}

double MuSpec::Inverse(double y) const {
  Require(y >= 0.0, "MuSpec::Inverse: argument must be >= 0");
  switch (kind_) {
    case Kind::kLinear:
      return y / c_;
    case Kind::kQuadratic:
      return std::sqrt(y / c_);
    case Kind::kTabulated:
      break;
  }
  double lo = 0.0;
  double hi = knots_.back();
  while ((*this)(hi) < y) hi *= 2.0;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string EnvelopeKindName(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::kPinelis:
      return "pinelis";
    case EnvelopeKind::kBanach:
      return "banach";
    case EnvelopeKind::kDelaPena:
      return "delapena";
    case EnvelopeKind::kAzumaSup:
      return "azuma_sup";
    case EnvelopeKind::kFreedmanSup:
      return "freedman_sup";
    case EnvelopeKind::kExpTail:
      return "exp_tail";
    case EnvelopeKind::kOffsetTail:
      return "offset_tail";
    case EnvelopeKind::kGaussian:
      return "gaussian";
    case EnvelopeKind::kUniform:
      return "uniform";
    case EnvelopeKind::kPerFunction:
      return "per_function";
    case EnvelopeKind::kConstant:
      return "constant";
    case EnvelopeKind::kExponential:
      return "exponential";
    case EnvelopeKind::kPanchenko:
      return "panchenko";
    case EnvelopeKind::kBalanced:
      return "balanced";
  }
  return "unknown";
}

EnvelopeKind ParseEnvelopeKind(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(EnvelopeKind::kBalanced); ++k) {
    const auto kind = static_cast<EnvelopeKind>(k);
    if (EnvelopeKindName(kind) == name) return kind;
  }
  throw DomainError("unknown envelope kind '" + name + "'");
}

std::vector<std::string> EnvelopeParamNames(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::kPinelis:
      return {"d_const"};
    case EnvelopeKind::kBanach:
    case EnvelopeKind::kDelaPena:
      return {};
    case EnvelopeKind::kAzumaSup:
      return {"variation"};
    case EnvelopeKind::kFreedmanSup:
      return {"sigma2", "sup_abs", "n"};
    case EnvelopeKind::kExpTail:
    case EnvelopeKind::kOffsetTail:
      return {"alpha"};
    case EnvelopeKind::kGaussian:
    case EnvelopeKind::kUniform:
    case EnvelopeKind::kPerFunction:
      return {"n"};
    case EnvelopeKind::kConstant:
      return {"value"};
    case EnvelopeKind::kExponential:
      return {"scale", "rate"};
    case EnvelopeKind::kPanchenko:
      return {"gamma", "mu"};
    case EnvelopeKind::kBalanced:
      return {"gamma", "c", "b"};
  }
  return {};
}

TailEnvelope::TailEnvelope(EnvelopeKind kind, EnvelopeParams params)
    : kind_(kind), params_(std::move(params)) {
  Validate(kind_, params_);
}

double TailEnvelope::operator()(double u) const {
  return EvaluateEnvelope(kind_, params_, u);
}

std::string TailEnvelope::Describe() const {
  std::ostringstream out;
  out.precision(17);
  out << EnvelopeKindName(kind_) << "(";
  const auto& p = params_;
  switch (kind_) {
    case EnvelopeKind::kPinelis:
      out << "D=" << p.d_const;
      break;
    case EnvelopeKind::kAzumaSup:
      out << "variation=" << p.variation;
      break;
    case EnvelopeKind::kFreedmanSup:
      out << "sigma2=" << p.sigma2 << ",sup_abs=" << p.sup_abs << ",n=" << p.n;
      break;
    case EnvelopeKind::kExpTail:
    case EnvelopeKind::kOffsetTail:
      out << "alpha=" << p.alpha;
      break;
    case EnvelopeKind::kGaussian:
    case EnvelopeKind::kUniform:
    case EnvelopeKind::kPerFunction:
      out << "n=" << p.n;
      break;
    case EnvelopeKind::kConstant:
      out << "value=" << p.value;
      break;
    case EnvelopeKind::kExponential:
      out << "scale=" << p.scale << ",rate=" << p.rate;
      break;
    case EnvelopeKind::kPanchenko:
      out << "gamma=" << p.gamma;
      break;
    case EnvelopeKind::kBalanced:
      out << "gamma=" << p.gamma << ",c=" << p.c << ",b=" << p.b;
      break;
    default:
      break;
  }
  out << ")";
  return out.str();
}

double EvaluateEnvelope(EnvelopeKind kind, const EnvelopeParams& p, double u) {
  Validate(kind, p);
  Require(u >= 0.0 && !std::isnan(u), "envelope: u must be >= 0");
  const double kE = std::numbers::e;
  const double kSqrt2 = std::numbers::sqrt2;
  switch (kind) {
    case EnvelopeKind::kPinelis:
      return 2.0 * std::exp(-u * u / (2.0 * p.d_const * p.d_const));
    case EnvelopeKind::kBanach:
      return kSqrt2 * std::exp(-u * u / 16.0);
    case EnvelopeKind::kDelaPena:
      return kSqrt2 * std::exp(-u * u / 4.0);
    case EnvelopeKind::kAzumaSup:
      return std::exp(-u * u / (4.0 * p.variation));
    case EnvelopeKind::kFreedmanSup: {
      if (std::isinf(u)) return 0.0;
      const double m = p.n * p.sup_abs;
      return std::exp(-u * u / (2.0 * p.sigma2 + 2.0 * u * m / 3.0));
    }
    case EnvelopeKind::kExpTail:
      return std::exp(-2.0 * p.alpha * u);
    case EnvelopeKind::kOffsetTail:
      return std::exp(-p.alpha * u / 2.0);
    case EnvelopeKind::kGaussian:
      return std::exp(-u * u / (2.0 * p.n));
    case EnvelopeKind::kUniform:
      return kE * std::log(static_cast<double>(p.n)) * std::exp(-2.0 * u * u);
    case EnvelopeKind::kPerFunction:
      return kE * std::log(static_cast<double>(p.n)) * std::exp(-u * u);
    case EnvelopeKind::kConstant:
      return p.value;
    case EnvelopeKind::kExponential:
      return p.scale * std::exp(-p.rate * u);
    case EnvelopeKind::kPanchenko:
      return PanchenkoTransform(p.gamma, p.mu, u);
    case EnvelopeKind::kBalanced:
      return std::log(p.b) * p.gamma * std::exp(-p.c * u * u);
  }
  return 0.0;
}

double PanchenkoTransform(double gamma, const MuSpec& mu, double u) {
  Require(gamma >= 1.0 && std::isfinite(gamma),
          "PanchenkoTransform: gamma must be >= 1");
  Require(u >= 0.0, "PanchenkoTransform: u must be >= 0");
  const double shift = mu.Inverse(1.0);
  if (u - shift < 0.0) return gamma;
  switch (mu.kind()) {
    case MuSpec::Kind::kLinear:
      return gamma * std::exp(1.0 - mu.c() * u);
    case MuSpec::Kind::kQuadratic:
      // e^{1 - c u^2/4} >= 1 for u <= 2/sqrt(c), where Gamma already holds.
      return gamma * std::min(1.0, std::exp(1.0 - mu.c() * u * u / 4.0));
    case MuSpec::Kind::kTabulated:
      break;
  }
  return gamma * std::exp(-mu(u - shift));
}

BalanceResult BalanceBound(double k, double a, double c, double b, double gamma,
                           double u, double y) {
  Require(NonNegative(k), "BalanceBound: K must be >= 0");
  Require(a >= 0.0 && a <= 1.0, "BalanceBound: a must be in [0, 1]");
  Require(Positive(c), "BalanceBound: c must be positive");
  Require(b >= 1.0 && std::isfinite(b), "BalanceBound: b must be >= 1");
  Require(NonNegative(gamma), "BalanceBound: gamma must be >= 0");
  Require(NonNegative(u), "BalanceBound: u must be >= 0");
  Require(NonNegative(y), "BalanceBound: Y must be >= 0");
  if (y > b) throw DomainError("BalanceBound: Y exceeds the cap b");
  BalanceResult out;
  const double k_part = a == 0.0 ? k
                                 : std::pow(k, 1.0 / (1.0 + a)) *
                                       std::pow(y + 1.0, a / (1.0 + a));
  out.threshold = 4.0 * k_part + 4.0 * u * std::sqrt(y + 1.0);
  out.tail = std::log(b) * gamma * std::exp(-c * u * u);
  return out;
}

double IntegrateEnvelope(const TailEnvelope& envelope, double offset) {
  if (!std::isfinite(offset)) {
    throw DomainError("IntegrateEnvelope: offset must be finite");
  }
  // Crossing point u0 where the envelope first drops to 1.
  double u0 = 0.0;
  if (envelope(0.0) > 1.0) {
    double hi = 1.0;
    while (envelope(hi) > 1.0) {
      hi *= 2.0;
      if (hi > 1e300) {
        throw NumericError("IntegrateEnvelope: envelope never drops below 1");
      }
    }
    double lo = hi / 2.0 < 1.0 ? 0.0 : hi / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (envelope(mid) > 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    u0 = hi;
  }
  // An integrable nonincreasing envelope satisfies u f(u) -> 0.
  const double far = std::max(1.0, u0) * 1e12;
  if (envelope(far) * far > 1e-3) {
    throw NumericError("IntegrateEnvelope: integral diverges (" +
                       envelope.Describe() + ")");
  }
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  double tail = 0.0;
  try {
    tail = integrator.integrate(
        [&](double u) {
          return std::isfinite(u) ? std::min(1.0, envelope(u)) : 0.0;
        },
        u0, std::numeric_limits<double>::infinity(), 1e-10, &error, &l1);
  } catch (const std::exception& e) {
    throw NumericError(std::string("IntegrateEnvelope: quadrature failed: ") +
                       e.what());
  }
  if (!std::isfinite(tail) || error > 1e-8 * std::max(1.0, std::fabs(tail))) {
    throw NumericError("IntegrateEnvelope: quadrature did not converge");
  }
  return offset + u0 + tail;
}

double UniformThreshold(double d_const, int n, double r, double var_r,
                        double var_2, double u) {
  Require(Positive(d_const), "UniformThreshold: D must be positive");
  Require(n >= 2, "UniformThreshold: n must be >= 2");
  Require(r > 1.0 && r <= 2.0, "UniformThreshold: r must be in (1, 2]");
  Require(NonNegative(var_r) && NonNegative(var_2),
          "UniformThreshold: variations must be >= 0");
  Require(NonNegative(u), "UniformThreshold: u must be >= 0");
  return 256.0 * d_const * std::log2(static_cast<double>(n)) *
             std::pow(var_r, 1.0 / r) +
         8.0 * u * std::sqrt(var_2 + 1.0) + 8.0 * PhiN(d_const, n);
}

PerFunctionRegime ParsePerFunctionRegime(const std::string& name) {
  if (name == "nonparametric") return PerFunctionRegime::kNonparametric;
  if (name == "finite") return PerFunctionRegime::kFinite;
  if (name == "parametric") return PerFunctionRegime::kParametric;
  throw DomainError("unknown per-function regime '" + name + "'");
}

double PerFunctionThreshold(PerFunctionRegime regime,
                            const PerFunctionParams& params, int n,
                            double var_2, double u) {
  Require(NonNegative(params.c_const),
          "PerFunctionThreshold: the constant C is required");
  Require(n >= 1, "PerFunctionThreshold: n must be >= 1");
  Require(NonNegative(var_2), "PerFunctionThreshold: variance must be >= 0");
  Require(NonNegative(u), "PerFunctionThreshold: u must be >= 0");
  const double root = std::sqrt(var_2 + 2.0);
  const double deviation = 2.0 * std::numbers::sqrt2 * u * root;
  switch (regime) {
    case PerFunctionRegime::kNonparametric:
      Require(params.q > 0.0 && params.q <= 2.0,
              "PerFunctionThreshold: q must be in (0, 2]");
      return params.c_const * std::pow(static_cast<double>(n), params.q / 4.0) *
                 std::pow(var_2 + 2.0, (2.0 - params.q) / 4.0) +
             deviation;
    case PerFunctionRegime::kFinite:
      Require(params.class_size >= 1.0,
              "PerFunctionThreshold: class size must be >= 1");
      return params.c_const * std::sqrt(std::log(params.class_size)) * root +
             deviation;
    case PerFunctionRegime::kParametric:
      Require(params.dimension > 0.0 && n >= 2,
              "PerFunctionThreshold: need d > 0 and n >= 2");
      return params.c_const *
                 std::sqrt(params.dimension *
                           std::log(static_cast<double>(n))) *
                 root +
             deviation;
  }
  return 0.0;
}

}  // namespace regmart
