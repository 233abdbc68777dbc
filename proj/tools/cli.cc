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


#include "cli.h"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "regmart/complexity.h"
#include "regmart/hash.h"
#include "regmart/json_io.h"
#include "regmart/minimax.h"
#include "regmart/parallel.h"
#include "regmart/rng.h"
#include "regmart/simulate.h"
#include "regmart/strategies.h"
#include "regmart/tailbounds.h"

namespace regmart::cli {
namespace {

constexpr const char* kToolVersion = "0.1.0";

using Row = std::vector<Json>;

std::string FormatCell(const Json& cell) {
  if (cell.is_string()) {
    const std::string s = cell.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  if (cell.is_number_float()) {
    const double v = cell.get<double>();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_null()) return "";
  return cell.dump();
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes tables and documents either to files under an output directory or
// to the output stream. Metadata (including the timestamp) is kept apart
// from the bodies so reruns with the same seed give identical bodies.
class Reporter {
 public:
  Reporter(std::string command, Json metadata, std::string out_dir,
           std::string format, std::ostream& out)
      : command_(std::move(command)),
        metadata_(std::move(metadata)),
        out_dir_(std::move(out_dir)),
        format_(std::move(format)),
        out_(out) {
    if (!out_dir_.empty()) std::filesystem::create_directories(out_dir_);
  }

  void Table(const std::string& name, const std::vector<std::string>& header,
             const std::vector<Row>& rows) {
    std::ostringstream body;
    if (format_ == "json") {
      Json records = Json::array();
      for (const Row& row : rows) {
        Json record = Json::object();
        for (std::size_t i = 0; i < header.size(); ++i) {
          record[header[i]] = row[i];
        }
        records.push_back(record);
      }
      Json doc = {{"metadata", metadata_}, {"table", name}, {"rows", records}};
      body << doc.dump(2) << "\n";
    } else {
      for (auto it = metadata_.begin(); it != metadata_.end(); ++it) {
        body << "# " << it.key() << "="
             << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
      }
      for (std::size_t i = 0; i < header.size(); ++i) {
        body << (i ? "," : "") << header[i];
      }
      body << "\n";
      for (const Row& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          body << (i ? "," : "") << FormatCell(row[i]);
        }
        body << "\n";
      }
    }
    Emit(name + (format_ == "json" ? ".json" : ".csv"), body.str());
  }

  void Document(const std::string& name, const Json& content) {
    Json doc = {{"metadata", metadata_}, {"body", content}};
    Emit(name + ".json", doc.dump(2) + "\n");
  }

  int Finish(bool pass, Json details) {
    Json doc = {{"metadata", metadata_},
                {"command", command_},
                {"verdict", pass ? "PASS" : "FAIL"},
                {"details", std::move(details)}};
    if (!out_dir_.empty()) {
      WriteFile("summary.json", doc.dump(2) + "\n");
      out_ << command_ << ": " << (pass ? "PASS" : "FAIL") << " (reports in "
           << out_dir_ << ")\n";
    } else {
      out_ << "verdict=" << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? kExitPass : kExitRefuted;
  }

 private:
  void Emit(const std::string& file, const std::string& content) {
    if (out_dir_.empty()) {
      out_ << content;
    } else {
      WriteFile(file, content);
    }
  }

  void WriteFile(const std::string& file, const std::string& content) {
    const auto path = std::filesystem::path(out_dir_) / file;
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw Error("cannot write " + path.string());
    stream << content;
  }

  std::string command_;
  Json metadata_;
  std::string out_dir_;
  std::string format_;
  std::ostream& out_;
};

// Flags that override keys of the configuration document.
class Overrides {
 public:
  template <typename T>
  CLI::Option* Add(CLI::App* app, const std::string& flag,
                   const std::string& key, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    apply_.push_back([opt, value, key](Json& cfg) {
      if (opt->count() > 0) cfg[key] = *value;
    });
    return opt;
  }

  // A flag whose value is an inline JSON document.
  CLI::Option* AddJson(CLI::App* app, const std::string& flag,
                       const std::string& key, const std::string& help) {
    auto value = std::make_shared<std::string>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    apply_.push_back([opt, value, key](Json& cfg) {
      if (opt->count() == 0) return;
      try {
        cfg[key] = Json::parse(*value);
      } catch (const Json::exception& e) {
        throw ConfigError(key + ": invalid inline JSON: " + e.what());
      }
    });
    return opt;
  }

  void Apply(Json& cfg) const {
    for (const auto& fn : apply_) fn(cfg);
  }

 private:
  std::vector<std::function<void(Json&)>> apply_;
};

struct Context {
  std::string command;
  std::uint64_t seed = 0;
  int workers = 1;
  std::unique_ptr<Reporter> reporter;
};

Json LoadConfig(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream stream(path);
  if (!stream) throw ConfigError(path + ": cannot open configuration file");
  Json cfg;
  try {
    cfg = Json::parse(stream);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!cfg.is_object()) {
    throw ConfigError(path + ": configuration root must be an object");
  }
  return cfg;
}

std::string ConfigHash(Json cfg) {
  for (const char* key : {"out", "workers", "format"}) cfg.erase(key);
  return HexDigest(Fnv1a(cfg.dump()));
}

// Reads the keys shared by all subcommands and sets up the reporter.
Context MakeContext(const std::string& command, const Json& cfg,
                    ObjectReader& r, std::ostream& out, bool need_seed = true) {
  Context ctx;
  ctx.command = command;
  if (r.Has("command")) {
    const std::string declared = r.Required<std::string>("command");
    if (declared != command) {
      throw ConfigError("command: configuration is for '" + declared +
                        "', not '" + command + "'");
    }
  }
  if (need_seed) ctx.seed = r.Required<std::uint64_t>("seed");
  ctx.workers = ResolveWorkers(r.Optional<int>("workers", 0));
  const std::string out_dir = r.Optional<std::string>("out", "");
  const std::string format = r.Optional<std::string>("format", "csv");
  if (format != "csv" && format != "json") {
    throw ConfigError("format: must be 'csv' or 'json'");
  }
  Json metadata = {{"tool", "regmart"},
                   {"version", kToolVersion},
                   {"command", command},
                   {"generator", kGeneratorName},
                   {"generator_version", kGeneratorVersion},
                   {"config_hash", ConfigHash(cfg)},
                   {"created", UtcTimestamp()}};
  if (need_seed) metadata["seed"] = std::to_string(ctx.seed);
  ctx.reporter = std::make_unique<Reporter>(command, std::move(metadata),
                                            out_dir, format, out);
  return ctx;
}

std::vector<double> ReadGrid(ObjectReader& r, const std::string& list_key,
                             const std::string& prefix, double lo, double hi,
                             int points) {
  if (r.Has(list_key)) {
    return r.Required<std::vector<double>>(list_key);
  }
  lo = r.Optional<double>(prefix + "_min", lo);
  hi = r.Optional<double>(prefix + "_max", hi);
  points = r.Optional<int>(prefix + "_points", points);
  if (points < 1)
    throw ConfigError(r.Path(prefix + "_points") + ": must be >= 1");
  if (!(hi >= lo)) throw ConfigError(r.Path(prefix + "_max") + ": below min");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  }
  return grid;
}

MirrorMap ReadMirror(ObjectReader& r, const MartingaleModel& model) {
  if (r.Has("mirror"))
    return MirrorMapFromJson(r.Raw("mirror"), r.Path("mirror"));
  return MirrorMap::Euclidean(model.VectorDimension());
}

Json SequenceToJson(const std::vector<Vec>& z) {
  Json out = Json::array();
  for (const Vec& v : z) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------- verify

// One row per round: t, eta, y_hat components, z components, running regret
// and running bound.
void WriteTranscript(Reporter& reporter, const RegretTranscript& transcript,
                     BoundKind bound) {
  const Json doc = ToJson(transcript, bound);
  const int d = transcript.domain.dimension();
  std::vector<std::string> header = {"t", "eta"};
  for (int i = 1; i <= d; ++i) header.push_back("y_hat_" + std::to_string(i));
  for (int i = 1; i <= d; ++i) header.push_back("z_" + std::to_string(i));
  header.push_back("regret");
  header.push_back("bound");
  std::vector<Row> rows;
  for (const Json& round : doc["rounds"]) {
    Row row = {round["t"], round["eta"]};
    for (const Json& v : round["y_hat"]) row.push_back(v);
    for (const Json& v : round["z"]) row.push_back(v);
    row.push_back(round["regret"]);
    row.push_back(round["bound"]);
    rows.push_back(std::move(row));
  }
  reporter.Table("transcript", header, rows);
}

int RunVerify(const Json& cfg, std::ostream& out) {
  ObjectReader r(cfg, "");
  Context ctx = MakeContext("verify", cfg, r, out);
  const std::string strategy = r.Required<std::string>("strategy");
  const std::string impl = r.Optional<std::string>("implementation", "default");
  StrategySpec spec;
  spec.kind = ParseStrategyKind(strategy);
  spec.domain = ParseDomainKind(r.Optional<std::string>("domain", "l2_ball"));
  spec.q = r.Optional<double>("q", 2.0);
  if (spec.kind == StrategyKind::kConstant) {
    throw ConfigError("strategy: use --strategy broken for the constant stub");
  }
  if (spec.kind == StrategyKind::kGradientDescent &&
      spec.domain != DomainKind::kL2Ball) {
    throw ConfigError("domain: gradient descent runs on the l2 ball");
  }
  const BoundKind claimed = spec.Bound();
  if (impl == "broken") {
    spec.kind = StrategyKind::kConstant;
    spec.constant = 1.0;
  } else if (impl != "default") {
    throw ConfigError("implementation: expected 'default' or 'broken'");
  }
  FuzzOptions fuzz;
  fuzz.workers = ctx.workers;
  const int n = r.Optional<int>("n", 0);
  const int d = r.Optional<int>("d", 0);
  fuzz.n_min = n > 0 ? n : r.Optional<int>("n_min", 1);
  fuzz.n_max = n > 0 ? n : r.Optional<int>("n_max", 128);
  fuzz.d_min = d > 0 ? d : r.Optional<int>("d_min", 1);
  fuzz.d_max = d > 0 ? d : r.Optional<int>("d_max", 8);
  fuzz.cases = r.Optional<std::size_t>("cases", 1000);
  SearchOptions search;
  search.budget = r.Optional<std::size_t>("search_budget", 0);
  search.local_steps = r.Optional<std::size_t>("local_steps", 64);
  search.workers = ctx.workers;
  const int search_n = r.Optional<int>("search_n", fuzz.n_max);
  const int search_d = r.Optional<int>("search_d", fuzz.d_max);
  r.Finish();

  const FuzzReport report = FuzzPathwise(spec, fuzz, ctx.seed);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < report.cases; ++i) {
    rows.push_back({i, report.ns[i], report.ds[i], report.margins[i]});
  }
  ctx.reporter->Table("margins", {"case", "n", "d", "margin"}, rows);

  bool pass = report.violations == 0;
  Json details = {{"strategy", strategy},
                  {"implementation", impl},
                  {"bound", BoundKindName(claimed)},
                  {"cases", report.cases},
                  {"violations", report.violations},
                  {"min_margin", NumberToJson(report.min_margin)}};
  Json counterexample;
  if (report.violations > 0) {
    counterexample = {{"source", "fuzz"},
                      {"case", report.worst_case},
                      {"n", report.worst_n},
                      {"d", report.worst_d},
                      {"margin", report.min_margin},
                      {"sequence", SequenceToJson(report.worst_sequence)}};
  }
  if (search.budget > 0) {
    const SearchResult found =
        AdversarialSearch(spec, search_n, search_d, search, ctx.seed);
    ctx.reporter->Table("search",
                        {"n", "d", "restarts", "evaluations", "min_margin"},
                        {{search_n, search_d, found.restarts, found.evaluations,
                          found.min_margin}});
    details["search_min_margin"] = NumberToJson(found.min_margin);
    details["search_restarts"] = found.restarts;
    if (found.min_margin < -kPathwiseTolerance) {
      pass = false;
      if (counterexample.is_null() || found.min_margin < report.min_margin) {
        counterexample = {{"source", "search"},
                          {"n", search_n},
                          {"d", search_d},
                          {"margin", found.min_margin},
                          {"sequence", SequenceToJson(found.worst_sequence)}};
      }
    }
  }
  if (!counterexample.is_null()) {
    ctx.reporter->Document("counterexample", counterexample);
  }
  if (report.cases > 0) {
    const RegretTranscript transcript =
        RunStrategy(spec, report.worst_d, report.worst_sequence);
    WriteTranscript(*ctx.reporter, transcript, claimed);
  }
  return ctx.reporter->Finish(pass, details);
}

// --------------------------------------------------------------- minimax

std::string HistoryString(const std::vector<std::uint32_t>& history) {
  std::string s;
  for (std::size_t i = 0; i < history.size(); ++i) {
    s += (i ? " " : "") + std::to_string(history[i]);
  }
  return s;
}

int RunMinimax(const Json& cfg, std::ostream& out) {
  ObjectReader r(cfg, "");
  Context ctx = MakeContext("minimax", cfg, r, out);
  const GameSpec spec = GameSpecFromJson(r.Raw("game"), r.Path("game"));
  const bool replay = r.Optional<bool>("replay", true);
  const bool oracle = r.Optional<bool>("oracle", false);
  r.Finish();

  const MinimaxResult result = MinimaxValue(spec, ctx.workers);
  std::vector<Row> rows;
  for (const auto& [history, y_hat] : result.strategy.predictions) {
    rows.push_back({HistoryString(history), y_hat});
  }
  ctx.reporter->Table("strategy", {"history", "y_hat"}, rows);
  const double slack = -result.grid_step * spec.horizon;
  Json details = {{"value", result.value},
                  {"certified", result.certified()},
                  {"states", result.states},
                  {"grid_step", result.grid_step},
                  {"replay_slack", slack}};
  bool pass = result.certified();
  if (oracle) {
    const double naive = NaiveMinimaxValue(spec);
    details["naive_value"] = naive;
    if (std::fabs(naive - result.value) > 1e-12) pass = false;
  }
  if (replay && result.certified()) {
    const double margin = ExhaustiveReplayMargin(result.strategy, spec);
    details["replay_margin"] = margin;
    if (margin < slack) pass = false;
  }
  return ctx.reporter->Finish(pass, details);
}

// ------------------------------------------------------------ complexity

Row ReportRow(const ComplexityReport& rep) {
  return {rep.measure,
          NumberToJson(rep.value),
          ComplexityModeName(rep.mode),
          rep.budget,
          rep.tree_id,
          NumberToJson(rep.lower_bound),
          NumberToJson(rep.upper_bound),
          NumberToJson(rep.std_error)};
}

const std::vector<std::string> kReportHeader = {
    "measure", "value",       "mode",        "budget",
    "tree_id", "lower_bound", "upper_bound", "std_error"};

int RunComplexity(const Json& cfg, std::ostream& out) {
  ObjectReader r(cfg, "");
  Context ctx = MakeContext("complexity", cfg, r, out);
  const std::string measure = r.Required<std::string>("measure");
  ComplexityReport rep;
  rep.measure = measure;
  Json details = {{"measure", measure}};
  bool pass = true;

  auto read_class = [&] {
    return FunctionClassFromJson(r.Raw("class"), r.Path("class"));
  };
  auto read_tree = [&] {
    return DyadicTreeFromJson(r.Raw("tree"), r.Path("tree"));
  };

  if (measure == "rademacher") {
    const auto f_class = read_class();
    const auto tree = read_tree();
    const bool absolute = r.Optional<bool>("absolute", true);
    r.Finish();
    rep.value = SeqRademacherExact(f_class, tree, absolute,
                                   kDefaultExhaustiveLimit, ctx.workers);
    rep.lower_bound = rep.upper_bound = rep.value;
    rep.budget = std::uint64_t{1} << tree.depth();
    rep.tree_id = TreeId(tree);
  } else if (measure == "rademacher_mc") {
    const auto f_class = read_class();
    const auto tree = read_tree();
    const bool absolute = r.Optional<bool>("absolute", true);
    const auto paths = r.Optional<std::size_t>("paths", 10000);
    r.Finish();
    const Estimate est =
        SeqRademacherMonteCarlo(f_class, tree, paths, ctx.seed, absolute);
    rep.value = est.mean;
    rep.std_error = est.std_error;
    rep.mode = ComplexityMode::kMonteCarlo;
    rep.budget = paths;
    rep.lower_bound = est.mean - 4.0 * est.std_error;
    rep.upper_bound = est.mean + 4.0 * est.std_error;
    rep.tree_id = TreeId(tree);
  } else if (measure == "worst_case") {
    const auto f_class = read_class();
    const int n = r.Required<int>("n");
    const auto budget = r.Optional<std::uint64_t>("budget", 100000);
    const double growth_r = r.Optional<double>("r", 0.0);
    const bool absolute = r.Optional<bool>("absolute", true);
    r.Finish();
    const WorstCaseResult found = SeqRademacherWorstCase(
        f_class, n, budget, ctx.seed, growth_r, absolute);
    rep = found.report;
    details["best_ratio"] = found.best_ratio;
    ctx.reporter->Document("worst_tree", ToJson(found.tree));
  } else if (measure == "offset") {
    const auto f_class = read_class();
    const auto tree = read_tree();
    const RealTree mu = r.Has("mu")
                            ? RealTreeFromJson(r.Raw("mu"), r.Path("mu"))
                            : RealTree::Constant(tree.depth(), 0.0);
    const double c1 = r.Optional<double>("c1", 1.0);
    const double c2 = r.Optional<double>("c2", 1.0);
    r.Finish();
    rep.value = OffsetRademacher(f_class, tree, mu, c1, c2);
    rep.lower_bound = rep.upper_bound = rep.value;
    rep.budget = std::uint64_t{1} << tree.depth();
    rep.tree_id = TreeId(tree);
  } else if (measure == "cover") {
    const auto f_class = read_class();
    const auto tree = read_tree();
    const double alpha = r.Required<double>("alpha");
    double p = std::numeric_limits<double>::infinity();
    if (r.Has("p")) {
      const Json& raw = r.Raw("p");
      if (raw.is_string() && raw.get<std::string>() == "inf") {
        p = std::numeric_limits<double>::infinity();
      } else if (raw.is_number()) {
        p = raw.get<double>();
      } else {
        throw ConfigError("p: expected a number or \"inf\"");
      }
    }
    const auto budget =
        r.Optional<std::uint64_t>("budget", kDefaultCoverBudget);
    r.Finish();
    const CoverResult cover = CoveringNumber(f_class, tree, alpha, p, budget);
    rep.value = cover.size;
    rep.mode = cover.exact ? ComplexityMode::kExact : ComplexityMode::kGreedy;
    rep.lower_bound = cover.lower_bound;
    rep.upper_bound = cover.size;
    rep.budget = cover.nodes_visited;
    rep.tree_id = TreeId(tree);
  } else if (measure == "fat") {
    const auto f_class = read_class();
    const double alpha = r.Required<double>("alpha");
    const int n_max = r.Optional<int>("n_max", 8);
    const auto points =
        r.Optional<std::vector<PointId>>("points", std::vector<PointId>{});
    const auto budget = r.Optional<std::uint64_t>("budget", kDefaultFatBudget);
    r.Finish();
    rep.value = FatShattering(f_class, alpha, n_max, points, budget);
    rep.lower_bound = rep.upper_bound = rep.value;
    rep.budget = budget;
  } else if (measure == "growth") {
    const auto f_class = read_class();
    const double growth_r = r.Required<double>("r");
    const auto n_list = r.Required<std::vector<int>>("n_list");
    const auto budget = r.Optional<std::uint64_t>("budget", 10000);
    r.Finish();
    rep.value = GrowthConstant(f_class, growth_r, n_list, budget, ctx.seed);
    rep.mode = ComplexityMode::kSearchLowerBound;
    rep.lower_bound = rep.value;
    rep.upper_bound = std::numeric_limits<double>::infinity();
    rep.budget = budget;
  } else if (measure == "crp") {
    const double d_const = r.Required<double>("d_const");
    const double growth_r = r.Required<double>("r");
    const double p = r.Required<double>("p");
    r.Finish();
    rep.value = CrpConstant(d_const, growth_r, p);
    rep.lower_bound = d_const / (growth_r - p);
    rep.upper_bound = 8.0 * d_const / (growth_r - p);
    pass = CrpSandwichHolds(d_const, growth_r, p);
  } else if (measure == "offset_bound") {
    const auto kind = ParseOffsetBoundKind(r.Required<std::string>("kind"));
    OffsetBoundParams params;
    params.class_size = r.Optional<double>("class_size", 1.0);
    params.c_const = r.Optional<double>("c_const", 0.0);
    params.dimension = r.Optional<double>("dimension", 0.0);
    params.q = r.Optional<double>("q", 1.0);
    const double alpha = r.Required<double>("alpha");
    const int n = r.Required<int>("n");
    r.Finish();
    rep.value = OffsetBound(kind, params, alpha, n);
    rep.lower_bound = rep.upper_bound = rep.value;
  } else {
    throw ConfigError("measure: unknown measure '" + measure + "'");
  }
  ctx.reporter->Table("complexity", kReportHeader, {ReportRow(rep)});
  details["value"] = NumberToJson(rep.value);
  details["mode"] = ComplexityModeName(rep.mode);
  return ctx.reporter->Finish(pass, details);
}

// -------------------------------------------------------------- envelope

int RunEnvelope(const Json& cfg, std::ostream& out) {
  ObjectReader r(cfg, "");
  Context ctx = MakeContext("envelope", cfg, r, out);
  const std::string action = r.Required<std::string>("action");
  Json details = {{"action", action}};
  if (action == "eval" || action == "integrate") {
    const TailEnvelope envelope =
        EnvelopeFromJson(r.Raw("envelope"), r.Path("envelope"));
    details["envelope"] = ToJson(envelope);
    if (action == "eval") {
      const auto grid = ReadGrid(r, "u", "u", 0.0, 10.0, 11);
      r.Finish();
      std::vector<Row> rows;
      for (double u : grid) rows.push_back({u, NumberToJson(envelope(u))});
      ctx.reporter->Table("envelope", {"u", "bound"}, rows);
    } else {
      const double offset = r.Optional<double>("offset", 0.0);
      r.Finish();
      const double value = IntegrateEnvelope(envelope, offset);
      ctx.reporter->Table("integral", {"offset", "value"}, {{offset, value}});
      details["value"] = value;
    }
  } else if (action == "balance") {
    const double k = r.Required<double>("K");
    const double a = r.Required<double>("a");
    const double c = r.Required<double>("c");
    const double b = r.Required<double>("b");
    const double gamma = r.Optional<double>("gamma", 1.0);
    const double y = r.Required<double>("Y");
    const auto grid = ReadGrid(r, "u", "u", 0.0, 4.0, 9);
    r.Finish();
    std::vector<Row> rows;
    for (double u : grid) {
      const BalanceResult res = BalanceBound(k, a, c, b, gamma, u, y);
      rows.push_back({u, res.threshold, res.tail});
    }
    ctx.reporter->Table("balance", {"u", "threshold", "tail"}, rows);
  } else {
    throw ConfigError("action: expected eval, integrate or balance");
  }
  return ctx.reporter->Finish(true, details);
}

// -------------------------------------------------------------- simulate

int RunSimulate(const Json& cfg, std::ostream& out) {
  ObjectReader r(cfg, "");
  Context ctx = MakeContext("simulate", cfg, r, out);
  const std::string experiment = r.Required<std::string>("experiment");
  Json details = {{"experiment", experiment}};
  bool pass = true;

  if (experiment == "symmetrization") {
    const MartingaleModel model =
        ModelFromJson(r.Raw("model"), r.Path("model"));
    const auto g_class = FunctionClassFromJson(r.Raw("class"), r.Path("class"));
    PairFunctionalSpec b_spec;
    if (r.Has("b_tilde")) {
      b_spec = PairFunctionalFromJson(r.Raw("b_tilde"), r.Path("b_tilde"));
    }
    const auto limit = r.Optional<std::uint64_t>("limit", 1u << 24);
    r.Finish();
    const SymmetrizationResult res =
        SymmetrizationCompare(model, g_class, b_spec.Bind(g_class), limit);
    ctx.reporter->Table("symmetrization", {"lhs", "rhs", "holds"},
                        {{res.lhs, res.rhs, res.holds}});
    details["lhs"] = res.lhs;
    details["rhs"] = res.rhs;
    return ctx.reporter->Finish(res.holds, details);
  }

  if (experiment == "soundness") {
    const GameSpec spec = GameSpecFromJson(r.Raw("game"), r.Path("game"));
    const auto count = r.Optional<std::size_t>("replicates", 10000);
    r.Finish();
    if (!spec.tree) throw ConfigError("game.tree: required for soundness");
    const MinimaxResult solved = MinimaxValue(spec, ctx.workers);
    const SampleBatch batch =
        SampleBatchFor(MartingaleModel::Dyadic(spec.f_class, *spec.tree), count,
                       ctx.seed, ctx.workers);
    const double margin = PathwiseSoundnessMargin(batch, solved.strategy, spec);
    ctx.reporter->Table("soundness", {"value", "certified", "min_margin"},
                        {{solved.value, solved.certified(), margin}});
    details["min_margin"] = margin;
    details["certified"] = solved.certified();
    return ctx.reporter->Finish(!solved.certified() || margin >= -1e-12,
                                details);
  }

  const MartingaleModel model = ModelFromJson(r.Raw("model"), r.Path("model"));
  const auto count = r.Optional<std::size_t>("replicates", 10000);
  details["model"] = model.Describe();
  details["replicates"] = count;

  if (experiment == "variations") {
    const ProbeClass g_class =
        r.Has("class")
            ? ProbeClassFromJson(r.Raw("class"), r.Path("class"))
            : ProbeClass::Domain(MirrorMap::Euclidean(model.VectorDimension()));
    const double p = r.Optional<double>("p", 2.0);
    r.Finish();
    const SampleBatch batch =
        SampleBatchFor(model, count, ctx.seed, ctx.workers);
    const auto stats = Variations(batch, p, g_class);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      rows.push_back({i, NumberToJson(stats[i].v_n), NumberToJson(stats[i].w_n),
                      stats[i].var_p, stats[i].var_p_centered,
                      stats[i].sup_deviation});
    }
    ctx.reporter->Table(
        "variations",
        {"replicate", "v_n", "w_n", "var_p", "var_p_centered", "sup_deviation"},
        rows);
    return ctx.reporter->Finish(true, details);
  }

  const MirrorMap mirror = ReadMirror(r, model);
  const double k_se = r.Optional<double>("k_se", 4.0);

  if (experiment == "tail") {
    const std::string statistic =
        r.Optional<std::string>("statistic", "banach");
    std::optional<TailEnvelope> envelope;
    if (r.Has("envelope")) {
      envelope = EnvelopeFromJson(r.Raw("envelope"), r.Path("envelope"));
    }
    const auto grid = ReadGrid(r, "u", "u", 0.5, 10.0, 20);
    const double total_delta = r.Optional<double>("total_delta", 1e-2);
    r.Finish();
    const SampleBatch batch =
        SampleBatchFor(model, count, ctx.seed, ctx.workers);
    std::vector<double> values;
    if (statistic == "banach") {
      values = BanachStatistic(batch, mirror);
      if (!envelope) envelope.emplace(EnvelopeKind::kBanach, EnvelopeParams{});
    } else if (statistic == "norm_excess") {
      values = NormOfSum(batch, mirror);
      const double root_n = std::sqrt(static_cast<double>(model.horizon));
      for (double& v : values) v -= root_n;
      if (!envelope) {
        EnvelopeParams params;
        params.n = model.horizon;
        envelope.emplace(EnvelopeKind::kGaussian, params);
      }
    } else {
      throw ConfigError("statistic: expected 'banach' or 'norm_excess'");
    }
    const EnvelopeVerdict verdict =
        TailVsEnvelope(values, *envelope, grid, total_delta);
    std::vector<Row> rows;
    for (const EnvelopeRow& row : verdict.rows) {
      rows.push_back({row.point.u, row.point.exceedances, row.point.estimate,
                      row.point.upper, row.envelope, row.checked, row.pass});
    }
    ctx.reporter->Table("tail",
                        {"u", "exceedances", "estimate", "upper", "envelope",
                         "checked", "pass"},
                        rows);
    details["envelope"] = ToJson(*envelope);
    details["delta_per_point"] = verdict.delta_per_point;
    pass = verdict.pass;
  } else if (experiment == "moment") {
    const auto grid = ReadGrid(r, "lambda", "lambda", -3.0, 3.0, 61);
    r.Finish();
    const SampleBatch batch =
        SampleBatchFor(model, count, ctx.seed, ctx.workers);
    const auto samples = MomentSamples(batch, mirror);
    const MomentResult res = CheckMomentCondition(samples, grid);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows.push_back({grid[i], res.values[i].mean, res.values[i].std_error});
    }
    ctx.reporter->Table("moment", {"lambda", "mean", "std_error"}, rows);
    pass = res.max_value <= 1.0 + k_se * res.std_error;
    details["max_value"] = res.max_value;
    details["std_error"] = res.std_error;
    details["argmax_lambda"] = res.lambda;
  } else if (experiment == "bdg") {
    r.Finish();
    const SampleBatch batch =
        SampleBatchFor(model, count, ctx.seed, ctx.workers);
    const BdgResult res = BdgCheck(batch, mirror);
    ctx.reporter->Table(
        "bdg", {"lhs", "lhs_se", "rhs", "rhs_se", "combined_se", "holds"},
        {{res.lhs.mean, res.lhs.std_error, res.rhs.mean, res.rhs.std_error,
          res.combined_se, res.holds(k_se)}});
    pass = res.holds(k_se);
  } else if (experiment == "amplification") {
    r.Finish();
    const SampleBatch batch =
        SampleBatchFor(model, count, ctx.seed, ctx.workers);
    const int n = model.horizon;
    EnvelopeParams params;
    params.n = n;
    const TailEnvelope gaussian(EnvelopeKind::kGaussian, params);
    const double root_n = std::sqrt(static_cast<double>(n));
    const double bound = IntegrateEnvelope(gaussian, root_n);
    const double closed_form =
        (1.0 + std::sqrt(std::numbers::pi / 2.0)) * root_n;
    const Estimate mc = MeanWithError(NormOfSum(batch, mirror));
    pass = mc.mean <= bound + k_se * mc.std_error;
    ctx.reporter->Table(
        "amplification",
        {"n", "bound", "closed_form", "mc_mean", "mc_se", "pass"},
        {{n, bound, closed_form, mc.mean, mc.std_error, pass}});
  } else {
    throw ConfigError("experiment: unknown experiment '" + experiment + "'");
  }
  return ctx.reporter->Finish(pass, details);
}

// ----------------------------------------------------------------- probe

int RunProbe(const Json& cfg, std::ostream& out) {
  ObjectReader r(cfg, "");
  Context ctx = MakeContext("probe", cfg, r, out);
  const MartingaleModel model = ModelFromJson(r.Raw("model"), r.Path("model"));
  const ProbeClass g_class =
      r.Has("class")
          ? ProbeClassFromJson(r.Raw("class"), r.Path("class"))
          : ProbeClass::Domain(MirrorMap::Euclidean(model.VectorDimension()));
  const double p = r.Optional<double>("p", 2.0);
  const auto n_list =
      r.Optional<std::vector<int>>("n_list", std::vector<int>{2, 4, 8, 16, 32});
  const auto count = r.Optional<std::size_t>("replicates", 2000);
  std::optional<double> max_ratio;
  if (r.Has("max_ratio")) max_ratio = r.Required<double>("max_ratio");
  r.Finish();

  const auto rows_in = MartingaleTypeProbe(model, g_class, p, n_list, count,
                                           ctx.seed, ctx.workers);
  std::vector<Row> rows;
  bool pass = true;
  double largest = 0.0;
  for (const TypeProbeRow& row : rows_in) {
    rows.push_back({row.n, row.lhs.mean, row.lhs.std_error, row.rhs.mean,
                    row.rhs.std_error, row.ratio, row.rhs_centered.mean,
                    NumberToJson(row.ratio_centered)});
    largest = std::max(largest, row.ratio);
    if (max_ratio && row.ratio > *max_ratio) pass = false;
  }
  ctx.reporter->Table("probe",
                      {"n", "lhs", "lhs_se", "rhs", "rhs_se", "ratio",
                       "rhs_centered", "ratio_centered"},
                      rows);
  Json details = {{"model", model.Describe()}, {"max_observed_ratio", largest}};
  if (max_ratio) details["max_ratio"] = *max_ratio;
  return ctx.reporter->Finish(pass, details);
}

// ---------------------------------------------------------------- report

int RunReport(const Json& cfg, std::ostream& out) {
  ObjectReader r(cfg, "");
  Context ctx = MakeContext("report", cfg, r, out, /*need_seed=*/false);
  const std::string dir = r.Required<std::string>("in");
  r.Finish();
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("in: not a directory: " + dir);
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "summary.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw ConfigError("in: no summary.json found under " + dir);
  std::vector<Row> rows;
  bool pass = true;
  for (const auto& file : files) {
    std::ifstream stream(file);
    Json doc;
    try {
      doc = Json::parse(stream);
    } catch (const Json::exception& e) {
      throw ConfigError(file.string() + ": " + e.what());
    }
    const std::string verdict = doc.value("verdict", "FAIL");
    const Json meta = doc.value("metadata", Json::object());
    pass = pass && verdict == "PASS";
    rows.push_back({std::filesystem::relative(file, dir).parent_path().string(),
                    doc.value("command", ""), verdict, meta.value("seed", ""),
                    meta.value("config_hash", "")});
  }
  ctx.reporter->Table(
      "report", {"run", "command", "verdict", "seed", "config_hash"}, rows);
  return ctx.reporter->Finish(pass, {{"runs", rows.size()}});
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"regmart: regret inequalities and martingale tail bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_dir;
  std::string format;
  CLI::Option* seed_opt = app.add_option("--seed", seed, "Master seed (U64)");
  CLI::Option* workers_opt = app.add_option(
      "--workers", workers,
      "Worker threads (default: REGMART_WORKERS or hardware concurrency)");
  CLI::Option* out_opt = app.add_option("--out", out_dir, "Report directory");
  CLI::Option* format_opt = app.add_option("--format", format, "csv or json")
                                ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "JSON configuration file");

  struct Sub {
    CLI::App* app;
    Overrides overrides;
    std::function<int(const Json&, std::ostream&)> run;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto add = [&](const std::string& name, const std::string& help,
                 std::function<int(const Json&, std::ostream&)> run) {
    auto sub = std::make_unique<Sub>();
    sub->app = app.add_subcommand(name, help);
    sub->run = std::move(run);
    subs.push_back(std::move(sub));
    return subs.back().get();
  };

  Sub* verify =
      add("verify", "Fuzz and search a pathwise regret bound", RunVerify);
  verify->overrides.Add<std::string>(verify->app, "kind", "strategy",
                                     "gd, adaptive or optimistic");
  verify->overrides.Add<std::string>(verify->app, "--strategy",
                                     "implementation",
                                     "Implementation override: broken");
  verify->overrides.Add<int>(verify->app, "--n", "n", "Fixed horizon");
  verify->overrides.Add<int>(verify->app, "--n-max", "n_max",
                             "Largest horizon");
  verify->overrides.Add<int>(verify->app, "--d", "d", "Fixed dimension");
  verify->overrides.Add<int>(verify->app, "--d-max", "d_max",
                             "Largest dimension");
  verify->overrides.Add<std::size_t>(verify->app, "--cases", "cases",
                                     "Fuzzed sequences");
  verify->overrides.Add<std::size_t>(verify->app, "--search-budget",
                                     "search_budget",
                                     "Adversarial search evaluations");
  verify->overrides.Add<std::string>(verify->app, "--domain", "domain",
                                     "l2_ball, lq_ball or box");
  verify->overrides.Add<double>(verify->app, "--q", "q",
                                "Exponent for lq_ball");

  Sub* minimax = add("minimax", "Solve a finite regret game", RunMinimax);
  minimax->overrides.AddJson(minimax->app, "--game", "game",
                             "Inline JSON game spec");

  Sub* complexity =
      add("complexity", "Compute a complexity measure", RunComplexity);
  complexity->overrides.Add<std::string>(
      complexity->app, "measure", "measure",
      "rademacher, rademacher_mc, worst_case, offset, cover, fat, growth, "
      "crp, offset_bound");
  complexity->overrides.AddJson(complexity->app, "--class", "class",
                                "Inline JSON function class");
  complexity->overrides.AddJson(complexity->app, "--tree", "tree",
                                "Inline JSON tree");
  complexity->overrides.Add<double>(complexity->app, "--alpha", "alpha",
                                    "Scale");
  complexity->overrides.Add<int>(complexity->app, "--n", "n", "Depth");
  complexity->overrides.Add<std::uint64_t>(complexity->app, "--budget",
                                           "budget", "Search budget");

  Sub* envelope = add("envelope", "Evaluate tail envelopes", RunEnvelope);
  envelope->overrides.Add<std::string>(envelope->app, "action", "action",
                                       "eval, integrate or balance");
  envelope->overrides.AddJson(envelope->app, "--envelope", "envelope",
                              "Inline JSON envelope {kind, params}");
  envelope->overrides.Add<double>(envelope->app, "--u-min", "u_min", "");
  envelope->overrides.Add<double>(envelope->app, "--u-max", "u_max", "");
  envelope->overrides.Add<int>(envelope->app, "--points", "u_points", "");
  envelope->overrides.Add<double>(envelope->app, "--offset", "offset", "");

  Sub* simulate =
      add("simulate", "Monte Carlo checks against envelopes", RunSimulate);
  simulate->overrides.Add<std::string>(
      simulate->app, "experiment", "experiment",
      "tail, moment, bdg, amplification, symmetrization, variations, "
      "soundness");
  simulate->overrides.AddJson(simulate->app, "--model", "model",
                              "Inline JSON model");
  simulate->overrides.Add<std::size_t>(simulate->app, "--replicates",
                                       "replicates", "Replicates N");

  Sub* probe = add("probe", "Martingale type probe", RunProbe);
  probe->overrides.AddJson(probe->app, "--model", "model", "Inline JSON model");
  probe->overrides.Add<std::size_t>(probe->app, "--replicates", "replicates",
                                    "Replicates N");
  probe->overrides.Add<double>(probe->app, "--p", "p", "Exponent p");

  Sub* report = add("report", "Summarize report directories", RunReport);
  report->overrides.Add<std::string>(report->app, "in", "in",
                                     "Directory to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  for (const auto& sub : subs) {
    if (!sub->app->parsed()) continue;
    try {
      Json cfg = LoadConfig(config_path);
      sub->overrides.Apply(cfg);
      if (seed_opt->count() > 0) cfg["seed"] = seed;
      if (workers_opt->count() > 0) cfg["workers"] = workers;
      if (out_opt->count() > 0) cfg["out"] = out_dir;
      if (format_opt->count() > 0) cfg["format"] = format;
      return sub->run(cfg, out);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  err << "no subcommand given\n";
  return kExitUsage;
}

}  // namespace regmart::cli
