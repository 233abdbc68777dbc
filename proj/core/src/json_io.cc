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


#include "regmart/json_io.h"

#include <cmath>

namespace regmart {
namespace {

template <typename T>
Tree<T> TreeFromLevels(const Json& json, const std::string& path) {
  const Json* levels_json = &json;
  int declared_depth = -1;
  if (json.is_object()) {
    ObjectReader r(json, path);
    declared_depth = r.Required<int>("depth");
    levels_json = &r.Raw("levels");
    r.Finish();
  }
  const Json& j = *levels_json;
  if (!j.is_array() || j.empty()) {
    throw ConfigError(path + ": expected a nonempty array of levels");
  }
  std::vector<std::vector<T>> levels;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string level_path = path + "[" + std::to_string(t) + "]";
    if (!j[t].is_array()) throw ConfigError(level_path + ": expected an array");
    std::vector<T> level;
    for (const Json& v : j[t]) {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number())
          throw ConfigError(level_path + ": expected numbers");
      } else {
        if (!v.is_number_unsigned()) {
          throw ConfigError(level_path + ": expected nonnegative integers");
        }
      }
      level.push_back(v.get<T>());
    }
    levels.push_back(std::move(level));
  }
  if (declared_depth >= 0 &&
      declared_depth != static_cast<int>(levels.size())) {
    throw ConfigError(path + ".depth: " + std::to_string(declared_depth) +
                      " does not match " + std::to_string(levels.size()) +
                      " levels");
  }
  try {
    return Tree<T>(static_cast<int>(levels.size()), levels);
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

template <typename T>
Json TreeToJson(const Tree<T>& tree) {
  Json levels = Json::array();
  for (const auto& level : tree.Levels()) levels.push_back(level);
  return {{"depth", tree.depth()}, {"levels", levels}};
}

std::vector<double> NumberArray(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<double> out;
  for (const Json& v : j) {
    if (!v.is_number()) throw ConfigError(path + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> NumberMatrix(const Json& j,
                                              const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(NumberArray(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Rewraps library domain errors raised while building a value.
template <typename Fn>
auto Build(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

ObjectReader::ObjectReader(const Json& object, std::string path)
    : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) {
    throw ConfigError((path_.empty() ? "<root>" : path_) +
                      ": expected an object");
  }
}

bool ObjectReader::Has(const std::string& key) const {
  return object_.contains(key);
}

const Json& ObjectReader::Raw(const std::string& key) {
  if (!Has(key)) throw ConfigError(Path(key) + ": required field missing");
  read_.insert(key);
  return object_.at(key);
}

std::string ObjectReader::Path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

void ObjectReader::Finish() const {
  for (auto it = object_.begin(); it != object_.end(); ++it) {
    if (!read_.count(it.key())) {
      throw ConfigError(Path(it.key()) + ": unknown field");
    }
  }
}

Json ToJson(const DyadicTree& tree) { return TreeToJson(tree); }

DyadicTree DyadicTreeFromJson(const Json& j, const std::string& path) {
  return TreeFromLevels<PointId>(j, path);
}

Json ToJson(const RealTree& tree) { return TreeToJson(tree); }

RealTree RealTreeFromJson(const Json& j, const std::string& path) {
  return TreeFromLevels<double>(j, path);
}

Json ToJson(const RegretTranscript& transcript, BoundKind bound) {
  const std::vector<double> regret = PrefixLinearRegret(transcript);
  Json rounds = Json::array();
  for (int t = 1; t <= transcript.horizon(); ++t) {
    rounds.push_back({{"t", t},
                      {"eta", transcript.step_sizes[t - 1]},
                      {"y_hat", transcript.predictions[t - 1]},
                      {"z", transcript.inputs[t - 1]},
                      {"regret", regret[t - 1]},
                      {"bound", BoundValue(transcript, bound, t)}});
  }
  return {{"strategy", transcript.strategy},
          {"domain", ToJson(transcript.domain)},
          {"bound", BoundKindName(bound)},
          {"rounds", rounds}};
}

Json ToJson(const FiniteFunctionClass& f_class) {
  return {{"domain_size", f_class.domain_size()},
          {"rows", f_class.rows()},
          {"range_bound", f_class.range_bound()}};
}

FiniteFunctionClass FunctionClassFromJson(const Json& j,
                                          const std::string& path) {
  ObjectReader r(j, path);
  const auto m = r.Required<std::size_t>("domain_size");
  auto rows = NumberMatrix(r.Raw("rows"), r.Path("rows"));
  std::optional<double> bound;
  if (r.Has("range_bound")) bound = r.Required<double>("range_bound");
  r.Finish();
  return Build(path, [&] {
    return bound ? FiniteFunctionClass(m, std::move(rows), *bound)
                 : FiniteFunctionClass::FromRows(m, std::move(rows));
  });
}

Json ToJson(const MirrorMap& mirror) {
  Json out = {{"kind", DomainKindName(mirror.kind())},
              {"dimension", mirror.dimension()},
              {"radius", mirror.radius()}};
  if (mirror.kind() == DomainKind::kLqBall) out["q"] = mirror.q();
  return out;
}

MirrorMap MirrorMapFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.Optional<std::string>("kind", "l2_ball");
  const int d = r.Required<int>("dimension");
  const double radius = r.Optional<double>("radius", 1.0);
  const double q = r.Optional<double>("q", 2.0);
  r.Finish();
  return Build(path, [&] {
    switch (ParseDomainKind(kind)) {
      case DomainKind::kL2Ball:
        return MirrorMap::Euclidean(d, radius);
      case DomainKind::kLqBall:
        return MirrorMap::LqBall(d, q, radius);
      case DomainKind::kBox:
        return MirrorMap::Box(d, radius);
    }
    return MirrorMap::Euclidean(d, radius);
  });
}

Json ToJson(const StrategySpec& spec) {
  return {{"kind", spec.Name()},
          {"domain", DomainKindName(spec.domain)},
          {"q", spec.q},
          {"radius", spec.radius},
          {"constant", spec.constant}};
}

StrategySpec StrategySpecFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  StrategySpec spec;
  const std::string kind = r.Required<std::string>("kind");
  const std::string domain = r.Optional<std::string>("domain", "l2_ball");
  spec.q = r.Optional<double>("q", spec.q);
  spec.radius = r.Optional<double>("radius", spec.radius);
  spec.constant = r.Optional<double>("constant", spec.constant);
  r.Finish();
  Build(path, [&] {
    spec.kind = ParseStrategyKind(kind);
    spec.domain = ParseDomainKind(domain);
    return 0;
  });
  return spec;
}

Json ToJson(const MuSpec& mu) {
  switch (mu.kind()) {
    case MuSpec::Kind::kLinear:
      return {{"kind", "linear"}, {"c", mu.c()}};
    case MuSpec::Kind::kQuadratic:
      return {{"kind", "quadratic"}, {"c", mu.c()}};
    case MuSpec::Kind::kTabulated:
      return {{"kind", "tabulated"},
              {"knots", mu.knots()},
              {"values", mu.values()}};
  }
  return {};
}

MuSpec MuSpecFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.Required<std::string>("kind");
  if (kind == "linear" || kind == "quadratic") {
    const double c = r.Required<double>("c");
    r.Finish();
    return Build(path, [&] {
      return kind == "linear" ? MuSpec::Linear(c) : MuSpec::Quadratic(c);
    });
  }
  if (kind == "tabulated") {
    auto knots = NumberArray(r.Raw("knots"), r.Path("knots"));
    auto values = NumberArray(r.Raw("values"), r.Path("values"));
    r.Finish();
    return Build(path, [&] {
      return MuSpec::Tabulated(std::move(knots), std::move(values));
    });
  }
  throw ConfigError(r.Path("kind") + ": unknown mu kind '" + kind + "'");
}

Json ToJson(const TailEnvelope& envelope) {
  const EnvelopeParams& p = envelope.params();
  Json params = Json::object();
  for (const std::string& name : EnvelopeParamNames(envelope.kind())) {
    if (name == "d_const") params[name] = p.d_const;
    if (name == "variation") params[name] = p.variation;
    if (name == "sigma2") params[name] = p.sigma2;
    if (name == "sup_abs") params[name] = p.sup_abs;
    if (name == "n") params[name] = p.n;
    if (name == "alpha") params[name] = p.alpha;
    if (name == "value") params[name] = p.value;
    if (name == "scale") params[name] = p.scale;
    if (name == "rate") params[name] = p.rate;
    if (name == "gamma") params[name] = p.gamma;
    if (name == "mu") params[name] = ToJson(p.mu);
    if (name == "c") params[name] = p.c;
    if (name == "b") params[name] = p.b;
  }
  return {{"kind", EnvelopeKindName(envelope.kind())}, {"params", params}};
}

TailEnvelope EnvelopeFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind_name = r.Required<std::string>("kind");
  const EnvelopeKind kind =
      Build(r.Path("kind"), [&] { return ParseEnvelopeKind(kind_name); });
  EnvelopeParams p;
  const Json empty = Json::object();
  ObjectReader pr(r.Has("params") ? r.Raw("params") : empty, r.Path("params"));
  for (const std::string& name : EnvelopeParamNames(kind)) {
    if (name == "d_const") p.d_const = pr.Required<double>(name);
    if (name == "variation") p.variation = pr.Required<double>(name);
    if (name == "sigma2") p.sigma2 = pr.Required<double>(name);
    if (name == "sup_abs") p.sup_abs = pr.Required<double>(name);
    if (name == "n") p.n = pr.Required<int>(name);
    if (name == "alpha") p.alpha = pr.Required<double>(name);
    if (name == "value") p.value = pr.Required<double>(name);
    if (name == "scale") p.scale = pr.Optional<double>(name, 1.0);
    if (name == "rate") p.rate = pr.Required<double>(name);
    if (name == "gamma") p.gamma = pr.Optional<double>(name, 1.0);
    if (name == "mu") p.mu = MuSpecFromJson(pr.Raw(name), pr.Path(name));
    if (name == "c") p.c = pr.Required<double>(name);
    if (name == "b") p.b = pr.Required<double>(name);
  }
  pr.Finish();
  r.Finish();
  return Build(path, [&] { return TailEnvelope(kind, p); });
}

Json ToJson(const BSpec& b) {
  switch (b.kind) {
    case BSpec::Kind::kConstant:
      return {{"kind", "constant"}, {"value", b.value}};
    case BSpec::Kind::kLogVariation:
      return {{"kind", "log_variation"}, {"d_const", b.d_const}, {"r", b.r}};
    case BSpec::Kind::kPerFunction:
      return {{"kind", "per_function"}, {"values", b.values}};
  }
  return {};
}

BSpec BSpecFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  BSpec b;
  const std::string kind = r.Required<std::string>("kind");
  if (kind == "constant") {
    b.kind = BSpec::Kind::kConstant;
    b.value = r.Required<double>("value");
  } else if (kind == "log_variation") {
    b.kind = BSpec::Kind::kLogVariation;
    b.d_const = r.Required<double>("d_const");
    b.r = r.Optional<double>("r", 2.0);
  } else if (kind == "per_function") {
    b.kind = BSpec::Kind::kPerFunction;
    b.values = NumberArray(r.Raw("values"), r.Path("values"));
  } else {
    throw ConfigError(r.Path("kind") + ": unknown B kind '" + kind + "'");
  }
  r.Finish();
  return b;
}

Json ToJson(const GameSpec& spec) {
  Json out = {{"class", ToJson(spec.f_class)},
              {"horizon", spec.horizon},
              {"loss", LossKindName(spec.loss)},
              {"b", ToJson(spec.b)},
              {"grid", spec.grid},
              {"y_values", spec.y_values},
              {"points", spec.points},
              {"state_limit", spec.state_limit}};
  if (spec.tree) out["tree"] = ToJson(*spec.tree);
  return out;
}

GameSpec GameSpecFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  GameSpec spec;
  spec.f_class = FunctionClassFromJson(r.Raw("class"), r.Path("class"));
  spec.horizon = r.Required<int>("horizon");
  const std::string loss = r.Optional<std::string>("loss", "linear");
  spec.loss = Build(r.Path("loss"), [&] { return ParseLossKind(loss); });
  if (r.Has("b")) spec.b = BSpecFromJson(r.Raw("b"), r.Path("b"));
  if (r.Has("grid") && r.Has("grid_points")) {
    throw ConfigError(r.Path("grid") + ": give either grid or grid_points");
  }
  if (r.Has("grid")) spec.grid = NumberArray(r.Raw("grid"), r.Path("grid"));
  if (r.Has("grid_points")) {
    const int points = r.Required<int>("grid_points");
    spec.grid =
        Build(r.Path("grid_points"), [&] { return UniformGrid(points); });
  }
  if (r.Has("y_values")) {
    spec.y_values = NumberArray(r.Raw("y_values"), r.Path("y_values"));
  }
  if (r.Has("points")) {
    spec.points = r.Required<std::vector<PointId>>("points");
  }
  if (r.Has("tree")) {
    spec.tree = DyadicTreeFromJson(r.Raw("tree"), r.Path("tree"));
  }
  spec.state_limit = r.Optional<std::uint64_t>("state_limit", spec.state_limit);
  r.Finish();
  Build(path, [&] {
    spec.Validate();
    return 0;
  });
  return spec;
}

Json ToJson(const StrategyTree& strategy) {
  Json rows = Json::array();
  for (const auto& [history, y_hat] : strategy.predictions) {
    rows.push_back({{"history", history}, {"y_hat", y_hat}});
  }
  return {{"predictions", rows}};
}

StrategyTree StrategyTreeFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const Json& rows = r.Raw("predictions");
  if (!rows.is_array()) {
    throw ConfigError(r.Path("predictions") + ": expected an array");
  }
  StrategyTree out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ObjectReader row(rows[i],
                     r.Path("predictions") + "[" + std::to_string(i) + "]");
    auto history = row.Required<std::vector<std::uint32_t>>("history");
    out.predictions[std::move(history)] = row.Required<double>("y_hat");
    row.Finish();
  }
  r.Finish();
  return out;
}

Json ToJson(const MartingaleModel& model) {
  Json out = {{"kind", ModelKindName(model.kind)}};
  switch (model.kind) {
    case ModelKind::kDyadicTree:
      out["class"] = ToJson(model.f_class);
      out["tree"] = ToJson(model.tree);
      break;
    case ModelKind::kConditionallySymmetric:
      out["scale"] = ScaleKindName(model.scale_kind);
      out["dimension"] = model.dimension;
      out["horizon"] = model.horizon;
      out["amplitude"] = model.scale;
      break;
    case ModelKind::kFiniteMarkov:
      out["kernel"] = model.kernel;
      out["initial"] = model.initial;
      out["horizon"] = model.horizon;
      break;
  }
  return out;
}

MartingaleModel ModelFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind_name = r.Required<std::string>("kind");
  const ModelKind kind =
      Build(r.Path("kind"), [&] { return ParseModelKind(kind_name); });
  switch (kind) {
    case ModelKind::kDyadicTree: {
      auto f_class = FunctionClassFromJson(r.Raw("class"), r.Path("class"));
      auto tree = DyadicTreeFromJson(r.Raw("tree"), r.Path("tree"));
      r.Finish();
      return Build(path, [&] {
        return MartingaleModel::Dyadic(std::move(f_class), std::move(tree));
      });
    }
    case ModelKind::kConditionallySymmetric: {
      const std::string scale = r.Required<std::string>("scale");
      const int d = r.Required<int>("dimension");
      const int n = r.Required<int>("horizon");
      const double amplitude = r.Optional<double>("amplitude", 1.0);
      r.Finish();
      return Build(path, [&] {
        return MartingaleModel::ConditionallySymmetric(ParseScaleKind(scale), d,
                                                       n, amplitude);
      });
    }
    case ModelKind::kFiniteMarkov: {
      auto kernel = NumberMatrix(r.Raw("kernel"), r.Path("kernel"));
      auto initial = NumberArray(r.Raw("initial"), r.Path("initial"));
      const int n = r.Required<int>("horizon");
      r.Finish();
      return Build(path, [&] {
        return MartingaleModel::FiniteMarkov(std::move(kernel),
                                             std::move(initial), n);
      });
    }
  }
  throw ConfigError(path + ": unknown model");
}

Json ToJson(const ProbeClass& g_class) {
  switch (g_class.kind) {
    case ProbeClass::Kind::kDomain:
      return {{"kind", "domain"}, {"mirror", ToJson(g_class.mirror)}};
    case ProbeClass::Kind::kCoordinates:
      return {{"kind", "coordinates"}};
    case ProbeClass::Kind::kStateFunctions:
      return {{"kind", "states"}, {"class", ToJson(g_class.functions)}};
  }
  return {};
}

ProbeClass ProbeClassFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.Required<std::string>("kind");
  ProbeClass out;
  if (kind == "domain") {
    out = ProbeClass::Domain(
        MirrorMapFromJson(r.Raw("mirror"), r.Path("mirror")));
  } else if (kind == "coordinates") {
    out = ProbeClass::Coordinates();
  } else if (kind == "states") {
    out = ProbeClass::States(
        FunctionClassFromJson(r.Raw("class"), r.Path("class")));
  } else {
    throw ConfigError(r.Path("kind") + ": unknown class kind '" + kind + "'");
  }
  r.Finish();
  return out;
}

Json ToJson(const PairFunctionalSpec& spec) {
  return {{"kind", spec.kind == PairFunctionalSpec::Kind::kConstant
                       ? "constant"
                       : "scaled_square"},
          {"value", spec.value}};
}

PairFunctionalSpec PairFunctionalFromJson(const Json& j,
                                          const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.Required<std::string>("kind");
  PairFunctionalSpec spec;
  if (kind == "constant") {
    spec.kind = PairFunctionalSpec::Kind::kConstant;
  } else if (kind == "scaled_square") {
    spec.kind = PairFunctionalSpec::Kind::kScaledSquare;
  } else {
    throw ConfigError(r.Path("kind") + ": unknown functional '" + kind + "'");
  }
  spec.value = r.Optional<double>("value", 0.0);
  r.Finish();
  return spec;
}

Json NumberToJson(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

Json ToJson(const ComplexityReport& report) {
  return {{"measure", report.measure},
          {"value", NumberToJson(report.value)},
          {"mode", ComplexityModeName(report.mode)},
          {"budget", report.budget},
          {"tree_id", report.tree_id},
          {"lower_bound", NumberToJson(report.lower_bound)},
          {"upper_bound", NumberToJson(report.upper_bound)},
          {"std_error", NumberToJson(report.std_error)}};
}

Json ToJson(const Estimate& estimate) {
  return {{"mean", NumberToJson(estimate.mean)},
          {"std_error", NumberToJson(estimate.std_error)},
          {"count", estimate.count}};
}

}  // namespace regmart
