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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace regmart::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

Outcome RunTool(std::vector<std::string> args) {
  args.insert(args.begin(), "regmart");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("regmart_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  void WriteFile(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The file with its creation timestamp removed.
std::string Body(const fs::path& path) {
  const std::string text = ReadFile(path);
  if (path.extension() == ".json") {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("metadata")) j["metadata"].erase("created");
    return j.dump();
  }
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.rfind("# created=", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

TEST_F(CliTest, VerifyGradientDescentPasses) {
  const Outcome r = RunTool({"verify", "gd", "--n", "16", "--d", "4", "--cases",
                             "1000", "--seed", "7", "--out", Path("gd")});
  EXPECT_EQ(r.status, kExitPass) << r.err;
  const std::string margins = ReadFile(dir_ / "gd" / "margins.csv");
  EXPECT_NE(margins.find("# seed=7"), std::string::npos);
  EXPECT_NE(margins.find("# version="), std::string::npos);
  EXPECT_NE(margins.find("case,n,d,margin"), std::string::npos);
  const auto summary =
      nlohmann::json::parse(ReadFile(dir_ / "gd" / "summary.json"));
  EXPECT_EQ(summary["verdict"], "PASS");
}

TEST_F(CliTest, MissingSeedIsUsageError) {
  const Outcome r = RunTool({"verify", "gd", "--n", "4"});
  EXPECT_EQ(r.status, kExitUsage);
  EXPECT_NE(r.err.find("seed"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownFieldIsUsageError) {
  WriteFile("config.json", R"({"seed": 1, "strategy": "gd", "n": 4,
                              "cases": 10, "bogus": 3})");
  const Outcome r = RunTool({"verify", "--config", Path("config.json")});
  EXPECT_EQ(r.status, kExitUsage);
  EXPECT_NE(r.err.find("bogus: unknown field"), std::string::npos) << r.err;
  WriteFile("broken.json", "{\"seed\": ");
  EXPECT_EQ(RunTool({"verify", "--config", Path("broken.json")}).status,
            kExitUsage);
}

TEST_F(CliTest, BrokenStrategyIsRefuted) {
  const Outcome r =
      RunTool({"verify", "adaptive", "--strategy", "broken", "--n", "8", "--d",
               "2", "--cases", "100", "--seed", "3", "--out", Path("broken")});
  EXPECT_EQ(r.status, kExitRefuted);
  const auto cex =
      nlohmann::json::parse(ReadFile(dir_ / "broken" / "counterexample.json"));
  EXPECT_LT(cex["body"]["margin"].get<double>(), 0.0);
  EXPECT_FALSE(cex["body"]["sequence"].empty());
}

TEST_F(CliTest, RerunsAreByteIdenticalModuloTimestamps) {
  const std::vector<std::vector<std::string>> commands = {
      {"verify", "adaptive", "--n", "12", "--d", "3", "--cases", "200",
       "--search-budget", "50"},
      {"simulate", "bdg", "--replicates", "500", "--model",
       R"({"kind": "conditionally_symmetric", "scale": "mixture",
           "dimension": 3, "horizon": 8})"},
  };
  for (std::size_t c = 0; c < commands.size(); ++c) {
    for (const char* run : {"a", "b"}) {
      auto args = commands[c];
      const std::string out = Path(std::to_string(c) + run);
      args.insert(args.end(), {"--seed", "11", "--out", out});
      ASSERT_NE(RunTool(args).status, kExitUsage) << RunTool(args).err;
    }
    const fs::path a = dir_ / (std::to_string(c) + "a");
    const fs::path b = dir_ / (std::to_string(c) + "b");
    int files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      EXPECT_EQ(Body(entry.path()), Body(b / entry.path().filename()))
          << entry.path();
    }
    EXPECT_GT(files, 1);
  }
}

TEST_F(CliTest, MinimaxCertifiesHalf) {
  WriteFile("game.json", R"({"seed": 1,
    "game": {"class": {"domain_size": 1, "rows": [[1.0], [-1.0]]},
             "horizon": 1, "b": {"kind": "constant", "value": 0.5}}})");
  const Outcome pass = RunTool({"minimax", "--config", Path("game.json")});
  EXPECT_EQ(pass.status, kExitPass) << pass.err;
  EXPECT_NE(pass.out.find("verdict=PASS"), std::string::npos) << pass.out;
  WriteFile("game2.json", R"({"seed": 1,
    "game": {"class": {"domain_size": 1, "rows": [[1.0], [-1.0]]},
             "horizon": 1, "b": {"kind": "constant", "value": 0.25}}})");
  EXPECT_EQ(RunTool({"minimax", "--config", Path("game2.json")}).status,
            kExitRefuted);
}

TEST_F(CliTest, ReportAggregates) {
  ASSERT_EQ(RunTool({"verify", "gd", "--n", "4", "--cases", "10", "--seed", "1",
                     "--out", Path("runs/ok")})
                .status,
            kExitPass);
  EXPECT_EQ(RunTool({"report", Path("runs")}).status, kExitPass);
  ASSERT_EQ(RunTool({"verify", "gd", "--strategy", "broken", "--n", "8",
                     "--cases", "20", "--seed", "1", "--out", Path("runs/bad")})
                .status,
            kExitRefuted);
  EXPECT_EQ(RunTool({"report", Path("runs")}).status, kExitRefuted);
  EXPECT_EQ(RunTool({"report", Path("missing")}).status, kExitUsage);
}

}  // namespace
}  // namespace regmart::cli
