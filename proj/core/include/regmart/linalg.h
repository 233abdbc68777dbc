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


#ifndef REGMART_LINALG_H_
#define REGMART_LINALG_H_

#include <cmath>
#include <span>
#include <vector>

#include "regmart/error.h"

namespace regmart {

using Vec = std::vector<double>;

inline double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("Dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double Norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

inline double SquaredNorm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

inline double NormL1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline double NormLinf(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

// (sum |a_i|^p)^(1/p) for finite p >= 1.
inline double NormLp(std::span<const double> a, double p) {
  double scale = NormLinf(a);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : a) s += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

inline Vec Sub(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("Sub: dimension mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline void AddScaled(Vec& acc, double scale, std::span<const double> v) {
  if (acc.size() != v.size()) throw ShapeError("AddScaled: dimension mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += scale * v[i];
}

}  // namespace regmart

#endif  // REGMART_LINALG_H_
