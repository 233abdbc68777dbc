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


#ifndef REGMART_JSON_IO_H_
#define REGMART_JSON_IO_H_

// JSON schemas for the library's value types. Readers are strict: unknown
// fields and wrongly typed fields raise ConfigError naming the field path.

#include <initializer_list>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>

#include "regmart/complexity.h"
#include "regmart/error.h"
#include "regmart/minimax.h"
#include "regmart/mirror_map.h"
#include "regmart/simulate.h"
#include "regmart/strategies.h"
#include "regmart/tailbounds.h"
#include "regmart/trees.h"

namespace regmart {

using Json = nlohmann::json;

// Schema violation in a configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Field-by-field reader of one JSON object. Every accessed key is recorded;
// Finish() rejects the keys that were never read.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path);

  bool Has(const std::string& key) const;
  const Json& Raw(const std::string& key);
  std::string Path(const std::string& key) const;

  template <typename T>
  T Required(const std::string& key) {
    if (!Has(key)) throw ConfigError(Path(key) + ": required field missing");
    return Convert<T>(key);
  }

  template <typename T>
  T Optional(const std::string& key, T fallback) {
    if (!Has(key)) return fallback;
    return Convert<T>(key);
  }

  // Throws ConfigError listing unread keys.
  void Finish() const;

 private:
  template <typename T>
  T Convert(const std::string& key) {
    const Json& value = Raw(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!value.is_number()) throw ConfigError("expected a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!value.is_number_integer())
          throw ConfigError("expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (value.is_number_integer() && !value.is_number_unsigned() &&
              value.get<long long>() < 0) {
            throw ConfigError("expected a nonnegative integer");
          }
        }
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!value.is_boolean()) throw ConfigError("expected a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!value.is_string()) throw ConfigError("expected a string");
      }
      return value.get<T>();
    } catch (const ConfigError& e) {
      throw ConfigError(Path(key) + ": " + e.what());
    } catch (const Json::exception& e) {
      throw ConfigError(Path(key) + ": " + e.what());
    }
  }

  const Json& object_;
  std::string path_;
  std::set<std::string> read_;
};

// Trees are {"depth": n, "levels": [...]}, level t holding 2^(t-1)
// entries. A bare array of levels is also accepted.
Json ToJson(const DyadicTree& tree);
DyadicTree DyadicTreeFromJson(const Json& j, const std::string& path);
Json ToJson(const RealTree& tree);
RealTree RealTreeFromJson(const Json& j, const std::string& path);

// {"strategy", "domain", "bound", "rounds": [{"t", "eta", "y_hat", "z",
//  "regret", "bound"}, ...]}, with the running regret and bound per round.
Json ToJson(const RegretTranscript& transcript, BoundKind bound);

// {"domain_size": m, "rows": [[...], ...], "range_bound": optional}.
Json ToJson(const FiniteFunctionClass& f_class);
FiniteFunctionClass FunctionClassFromJson(const Json& j,
                                          const std::string& path);

// {"kind": "l2_ball" | "lq_ball" | "box", "dimension", "q", "radius"}.
Json ToJson(const MirrorMap& mirror);
MirrorMap MirrorMapFromJson(const Json& j, const std::string& path);

// {"kind", "domain", "q", "radius", "constant"}.
Json ToJson(const StrategySpec& spec);
StrategySpec StrategySpecFromJson(const Json& j, const std::string& path);

// {"kind": "linear" | "quadratic", "c"} or
// {"kind": "tabulated", "knots", "values"}.
Json ToJson(const MuSpec& mu);
MuSpec MuSpecFromJson(const Json& j, const std::string& path);

// {"kind", "params": {...}} with the kind's parameter names.
Json ToJson(const TailEnvelope& envelope);
TailEnvelope EnvelopeFromJson(const Json& j, const std::string& path);

// {"kind": "constant" | "log_variation" | "per_function", ...}.
Json ToJson(const BSpec& b);
BSpec BSpecFromJson(const Json& j, const std::string& path);

// {"class", "horizon", "loss", "b", "grid_points" | "grid", "y_values",
//  "points", "tree", "state_limit"}.
Json ToJson(const GameSpec& spec);
GameSpec GameSpecFromJson(const Json& j, const std::string& path);

// {"predictions": [{"history": [...], "y_hat": v}, ...]}.
Json ToJson(const StrategyTree& strategy);
StrategyTree StrategyTreeFromJson(const Json& j, const std::string& path);

// {"kind": "dyadic_tree", "class", "tree"} |
// {"kind": "conditionally_symmetric", "scale", "dimension", "horizon",
//  "amplitude"} |
// {"kind": "finite_markov", "kernel", "initial", "horizon"}.
Json ToJson(const MartingaleModel& model);
MartingaleModel ModelFromJson(const Json& j, const std::string& path);

// {"kind": "domain", "mirror"} | {"kind": "coordinates"} |
// {"kind": "states", "class"}.
Json ToJson(const ProbeClass& g_class);
ProbeClass ProbeClassFromJson(const Json& j, const std::string& path);

// {"kind": "constant" | "scaled_square", "value"}.
Json ToJson(const PairFunctionalSpec& spec);
PairFunctionalSpec PairFunctionalFromJson(const Json& j,
                                          const std::string& path);

Json ToJson(const ComplexityReport& report);
Json ToJson(const Estimate& estimate);

// Finite doubles as numbers, non-finite ones as the strings "inf", "-inf",
// "nan".
Json NumberToJson(double value);

}  // namespace regmart

#endif  // REGMART_JSON_IO_H_
