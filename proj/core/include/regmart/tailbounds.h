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


#ifndef REGMART_TAILBOUNDS_H_
#define REGMART_TAILBOUNDS_H_

// Closed-form tail envelopes u -> bound on P(statistic > u), and the
// transforms that map one envelope to another. Values above 1 are returned
// raw; clipping is left to the caller.

#include <string>
#include <vector>

namespace regmart {

// Increasing mu: R_+ -> R_+ with mu(0) = 0.
class MuSpec {
 public:
  enum class Kind { kLinear, kQuadratic, kTabulated };

  MuSpec() = default;
  // mu(b) = c b.
  static MuSpec Linear(double c);
  // mu(b) = c b^2.
  static MuSpec Quadratic(double c);
  // Piecewise-linear interpolation of (knots, values), extended past the last
  // knot with the last slope. knots[0] = values[0] = 0 and both strictly
  // increasing.
  static MuSpec Tabulated(std::vector<double> knots,
                          std::vector<double> values);

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double b) const;
  // mu^{-1}(y) for y >= 0; bisection to 1e-12 for tabulated mu.
  double Inverse(double y) const;

 private:
  Kind kind_ = Kind::kLinear;
  double c_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> values_;
};

enum class EnvelopeKind {
  kPinelis,      // 2 exp(-u^2 / (2 D^2))
  kBanach,       // sqrt(2) exp(-u^2 / 16)
  kDelaPena,     // sqrt(2) exp(-u^2 / 4)
  kAzumaSup,     // exp(-u^2 / (4 variation))
  kFreedmanSup,  // exp(-u^2 / (2 sigma^2 + 2 u M / 3)), M = n sup|f|
  kExpTail,      // exp(-2 alpha u)
  kOffsetTail,   // exp(-alpha u / 2)
  kGaussian,     // exp(-u^2 / (2 n))
  kUniform,      // e ln(n) exp(-2 u^2)
  kPerFunction,  // e ln(n) exp(-u^2)
  kConstant,     // value
  kExponential,  // scale exp(-rate u)
  kPanchenko,    // PanchenkoTransform(gamma, mu, u)
  kBalanced,     // ln(b) gamma exp(-c u^2)
};

std::string EnvelopeKindName(EnvelopeKind kind);
EnvelopeKind ParseEnvelopeKind(const std::string& name);

// Parameter record shared by all kinds; each kind reads only its own fields.
struct EnvelopeParams {
  double d_const = 1.0;    // pinelis
  double variation = 1.0;  // azuma_sup: max_eps sum_t sup_f f(x_t)^2
  double sigma2 = 1.0;     // freedman_sup
  double sup_abs = 1.0;    // freedman_sup
  int n = 1;               // freedman_sup, gaussian, uniform, per_function
  double alpha = 1.0;      // exp_tail, offset_tail
  double value = 1.0;      // constant
  double scale = 1.0;      // exponential
  double rate = 1.0;       // exponential
  double gamma = 1.0;      // panchenko, balanced
  MuSpec mu;               // panchenko
  double c = 1.0;          // balanced
  double b = 1.0;          // balanced
};

// Names of the fields each kind reads, in EnvelopeParams order.
std::vector<std::string> EnvelopeParamNames(EnvelopeKind kind);

class TailEnvelope {
 public:
  // Throws DomainError if the parameters are outside the kind's domain.
  TailEnvelope(EnvelopeKind kind, EnvelopeParams params);

  EnvelopeKind kind() const { return kind_; }
  const EnvelopeParams& params() const { return params_; }

  // Requires u >= 0.
  double operator()(double u) const;
  std::string Describe() const;

 private:
  EnvelopeKind kind_;
  EnvelopeParams params_;
};

double EvaluateEnvelope(EnvelopeKind kind, const EnvelopeParams& params,
                        double u);

// Gamma exp(-mu(u - mu^{-1}(1))), or Gamma when u < mu^{-1}(1). Linear mu
// gives Gamma e^{1 - c u}; quadratic mu gives Gamma min(1, e^{1 - c u^2/4}).
double PanchenkoTransform(double gamma, const MuSpec& mu, double u);

struct BalanceResult {
  double threshold = 0.0;
  double tail = 0.0;
};

// threshold = 4 K^(1/(1+a)) (Y+1)^(a/(1+a)) + 4 u sqrt(Y+1),
// tail = ln(b) Gamma exp(-c u^2). Requires 0 <= Y <= b and b >= 1.
BalanceResult BalanceBound(double k, double a, double c, double b, double gamma,
                           double u, double y);

// offset + int_0^inf min(1, envelope(u)) du. The integrand is 1 up to the
// point where the envelope crosses 1; the remainder is integrated by
// exp-sinh quadrature. Throws NumericError when the integral diverges.
double IntegrateEnvelope(const TailEnvelope& envelope, double offset);

// Deviation threshold paired with the kUniform tail:
// 256 D log2(n) var_r^(1/r) + 8 u sqrt(var_2 + 1) + 8 phi_n.
double UniformThreshold(double d_const, int n, double r, double var_r,
                        double var_2, double u);

enum class PerFunctionRegime { kNonparametric, kFinite, kParametric };

PerFunctionRegime ParsePerFunctionRegime(const std::string& name);

struct PerFunctionParams {
  // The absolute constant C; required, there is no default.
  double c_const = -1.0;
  double q = 1.0;           // nonparametric, in (0, 2]
  double class_size = 1.0;  // finite
  double dimension = 1.0;   // parametric
};

// Deviation threshold paired with the kPerFunction tail, for one function
// with variance var_2(g):
//   nonparametric: C n^(q/4) (var + 2)^((2-q)/4) + 2 sqrt(2) u sqrt(var + 2)
//   finite:        C sqrt(ln|G|) sqrt(var + 2)  + 2 sqrt(2) u sqrt(var + 2)
//   parametric:    C sqrt(d ln n) sqrt(var + 2) + 2 sqrt(2) u sqrt(var + 2).
double PerFunctionThreshold(PerFunctionRegime regime,
                            const PerFunctionParams& params, int n,
                            double var_2, double u);

}  // namespace regmart

#endif  // REGMART_TAILBOUNDS_H_
