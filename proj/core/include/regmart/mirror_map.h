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


#ifndef REGMART_MIRROR_MAP_H_
#define REGMART_MIRROR_MAP_H_

#include <ostream>
#include <span>
#include <string>

#include "regmart/linalg.h"

namespace regmart {

enum class DomainKind { kL2Ball, kLqBall, kBox };

// "l2_ball", "lq_ball" or "box".
std::string DomainKindName(DomainKind kind);

// A Bregman geometry on a compact convex prediction set in R^d.
//
//   kL2Ball  {|f|_2 <= radius},  R(f) = |f|_2^2 / 2
//   kLqBall  {|f|_q <= radius},  R(f) = |f|_q^2 / (2 (q - 1)),  q in (1, 2]
//   kBox     [-radius, radius]^d, R(f) = |f|_2^2 / 2
//
// Each regularizer is 1-strongly convex with respect to the prediction norm
// (l_2, l_q, l_2). Inputs z are measured in the dual norm (l_2, l_p with
// 1/p + 1/q = 1, l_2). The Bregman step has a closed form on all three sets.
class MirrorMap {
 public:
  static MirrorMap Euclidean(int dimension, double radius = 1.0);
  static MirrorMap LqBall(int dimension, double q, double radius = 1.0);
  static MirrorMap Box(int dimension, double half_width = 1.0);

  DomainKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double radius() const { return radius_; }
  double q() const { return q_; }
  // Conjugate exponent of q; the norm used for inputs.
  double p() const { return p_; }

  double Regularizer(std::span<const double> f) const;
  Vec Gradient(std::span<const double> f) const;
  double Divergence(std::span<const double> f, std::span<const double> g) const;
  double StrongConvexity() const { return 1.0; }

  // R_max^2 = sup over the domain of D(f, g), in closed form:
  // 2 radius^2 / (q - 1) on balls (q = 2 for l_2), 2 d radius^2 on the box.
  double RMaxSquared() const;
  double RMax() const;

  double PrimalNorm(std::span<const double> f) const;
  double DualNorm(std::span<const double> z) const;
  bool Contains(std::span<const double> f, double tol = 1e-12) const;
  // sup_{f in domain} <f, v>.
  double Support(std::span<const double> v) const;

  // argmin_{f in domain} eta <f, z> + D(f, center).
  Vec BregmanStep(double eta, std::span<const double> z,
                  std::span<const double> center) const;

  Vec Origin() const { return Vec(dimension_, 0.0); }
  std::string Describe() const;

 private:
  MirrorMap(DomainKind kind, int dimension, double radius, double q);

  // Gradient of the conjugate regularizer; maps dual points back to primal.
  Vec ConjugateGradient(std::span<const double> theta) const;

  DomainKind kind_;
  int dimension_;
  double radius_;
  double q_;
  double p_;
};

inline void PrintTo(const MirrorMap& mirror, std::ostream* os) {
  *os << mirror.Describe();
}

}  // namespace regmart

#endif  // REGMART_MIRROR_MAP_H_
