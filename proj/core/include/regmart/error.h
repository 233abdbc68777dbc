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


#ifndef REGMART_ERROR_H_
#define REGMART_ERROR_H_

#include <stdexcept>
#include <string>

namespace regmart {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter or input lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An exhaustive computation would exceed the configured enumeration limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Two objects that must agree in size or depth do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A level or node index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// An iterative numeric routine failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

// The requested statistic is not available for this model kind.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Raised when a run is statistically degenerate (e.g. a zero denominator).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace regmart

#endif  // REGMART_ERROR_H_
