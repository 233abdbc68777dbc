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


#include "regmart/mirror_map.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace regmart {

std::string DomainKindName(DomainKind kind) {
  switch (kind) {
    case DomainKind::kL2Ball:
      return "l2_ball";
    case DomainKind::kLqBall:
      return "lq_ball";
    case DomainKind::kBox:
      return "box";
  }
  return "box";
}
namespace {

void CheckDimension(std::span<const double> v, int d, const char* what) {
  if (static_cast<int>(v.size()) != d) {
    throw ShapeError(std::string("MirrorMap: ") + what +
                     " has wrong dimension");
  }
}

// sign(v_i) |v_i / |v|_r|^(r-1), i.e. the unit-dual-norm direction that
// attains <u, v> = |v|_r. Zero for v = 0.
Vec DualDirection(std::span<const double> v, double r) {
  Vec out(v.size(), 0.0);
  const double norm = NormLp(v, r);
  if (norm == 0.0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double ratio = std::abs(v[i]) / norm;
    out[i] = std::copysign(std::pow(ratio, r - 1.0), v[i]);
    if (v[i] == 0.0) out[i] = 0.0;
  }
  return out;
}

}  // namespace

MirrorMap::MirrorMap(DomainKind kind, int dimension, double radius, double q)
    : kind_(kind), dimension_(dimension), radius_(radius), q_(q) {
  if (dimension < 1) throw DomainError("MirrorMap: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError("MirrorMap: radius must be positive and finite");
  }
  if (!(q > 1.0 && q <= 2.0)) {
    throw DomainError("MirrorMap: q must lie in (1, 2]");
  }
  p_ = q / (q - 1.0);
}

MirrorMap MirrorMap::Euclidean(int dimension, double radius) {
  return MirrorMap(DomainKind::kL2Ball, dimension, radius, 2.0);
}

MirrorMap MirrorMap::LqBall(int dimension, double q, double radius) {
  return MirrorMap(DomainKind::kLqBall, dimension, radius, q);
}

MirrorMap MirrorMap::Box(int dimension, double half_width) {
  return MirrorMap(DomainKind::kBox, dimension, half_width, 2.0);
}

double MirrorMap::Regularizer(std::span<const double> f) const {
  CheckDimension(f, dimension_, "point");
  if (kind_ == DomainKind::kLqBall) {
    const double n = NormLp(f, q_);
    return n * n / (2.0 * (q_ - 1.0));
  }
  return 0.5 * SquaredNorm2(f);
}

Vec MirrorMap::Gradient(std::span<const double> f) const {
  CheckDimension(f, dimension_, "point");
  if (kind_ == DomainKind::kLqBall) {
    Vec dir = DualDirection(f, q_);
    const double scale = NormLp(f, q_) / (q_ - 1.0);
    for (double& v : dir) v *= scale;
    return dir;
  }
  return Vec(f.begin(), f.end());
}

Vec MirrorMap::ConjugateGradient(std::span<const double> theta) const {
  if (kind_ == DomainKind::kLqBall) {
    Vec dir = DualDirection(theta, p_);
    const double scale = (q_ - 1.0) * NormLp(theta, p_);
    for (double& v : dir) v *= scale;
    return dir;
  }
  return Vec(theta.begin(), theta.end());
}

double MirrorMap::Divergence(std::span<const double> f,
                             std::span<const double> g) const {
  CheckDimension(f, dimension_, "first argument");
  CheckDimension(g, dimension_, "second argument");
  const Vec grad = Gradient(g);
  const Vec diff = Sub(f, g);
  const double d = Regularizer(f) - Regularizer(g) - Dot(grad, diff);
  return std::max(d, 0.0);
}

double MirrorMap::RMaxSquared() const {
  switch (kind_) {
    case DomainKind::kL2Ball:
      return 2.0 * radius_ * radius_;
    case DomainKind::kLqBall:
      return 2.0 * radius_ * radius_ / (q_ - 1.0);
    case DomainKind::kBox:
      return 2.0 * dimension_ * radius_ * radius_;
  }
  return 0.0;
}

double MirrorMap::RMax() const { return std::sqrt(RMaxSquared()); }

double MirrorMap::PrimalNorm(std::span<const double> f) const {
  CheckDimension(f, dimension_, "point");
  return kind_ == DomainKind::kLqBall ? NormLp(f, q_) : Norm2(f);
}

double MirrorMap::DualNorm(std::span<const double> z) const {
  CheckDimension(z, dimension_, "input");
  return kind_ == DomainKind::kLqBall ? NormLp(z, p_) : Norm2(z);
}

bool MirrorMap::Contains(std::span<const double> f, double tol) const {
  CheckDimension(f, dimension_, "point");
  const double slack = radius_ * (1.0 + tol) + tol;
  switch (kind_) {
    case DomainKind::kL2Ball:
      return Norm2(f) <= slack;
    case DomainKind::kLqBall:
      return NormLp(f, q_) <= slack;
    case DomainKind::kBox:
      return NormLinf(f) <= slack;
  }
  return false;
}

double MirrorMap::Support(std::span<const double> v) const {
  CheckDimension(v, dimension_, "direction");
  switch (kind_) {
    case DomainKind::kL2Ball:
      return radius_ * Norm2(v);
    case DomainKind::kLqBall:
      return radius_ * NormLp(v, p_);
    case DomainKind::kBox:
      return radius_ * NormL1(v);
  }
  return 0.0;
}

Vec MirrorMap::BregmanStep(double eta, std::span<const double> z,
                           std::span<const double> center) const {
  CheckDimension(z, dimension_, "input");
  CheckDimension(center, dimension_, "center");
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw DomainError("MirrorMap::BregmanStep: step size must be finite, >= 0");
  }
  switch (kind_) {
    case DomainKind::kL2Ball: {
      Vec f(center.begin(), center.end());
      AddScaled(f, -eta, z);
      const double norm = Norm2(f);
      if (norm > radius_) {
        for (double& v : f) v *= radius_ / norm;
      }
      return f;
    }
    case DomainKind::kBox: {
      Vec f(center.begin(), center.end());
      AddScaled(f, -eta, z);
      for (double& v : f) v = std::clamp(v, -radius_, radius_);
      return f;
    }
    case DomainKind::kLqBall: {
      // The regularizer depends on f only through |f|_q, so the constrained
      // minimizer is the unconstrained one pulled back radially.
      Vec theta = Gradient(center);
      AddScaled(theta, -eta, z);
      Vec f = ConjugateGradient(theta);
      const double norm = NormLp(f, q_);
      if (norm > radius_) {
        for (double& v : f) v *= radius_ / norm;
      }
      return f;
    }
  }
  return Origin();
}

std::string MirrorMap::Describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::kL2Ball:
      os << "l2_ball(d=" << dimension_ << ", radius=" << radius_ << ")";
      break;
    case DomainKind::kLqBall:
      os << "lq_ball(d=" << dimension_ << ", q=" << q_ << ", radius=" << radius_
         << ")";
      break;
    case DomainKind::kBox:
      os << "box(d=" << dimension_ << ", half_width=" << radius_ << ")";
      break;
  }
  return os.str();
}

}  // namespace regmart
