// Copyright 2026 The fairpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the fairpp binary end to end through the shell.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fairpp/random.hpp"
#include "gtest/gtest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fairpp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    fairpp::RandomStream rng(1);
    std::ofstream out(Path("data.csv"));
    out << "group,score,label\n";
    const char* groups[] = {"A", "B", "C"};
    for (int i = 0; i < 400; ++i) {
      const std::size_t a = rng.UniformIndex(3);
      const double score = 0.2 + 0.25 * static_cast<double>(a) + 0.2 * (rng.Uniform() - 0.5);
      out << groups[a] << ',' << score << ',' << score + 0.05 * (rng.Uniform() - 0.5) << '\n';
    }
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the tool with `args`; returns its exit code.
  int Run(const std::string& args) {
    const std::string cmd = std::string(FAIRPP_CLI_PATH) + " " + args + " >" + Path("stdout.txt") +
                            " 2>" + Path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Read(const std::string& name) const {
    std::ifstream in(Path(name));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, FitApplyEvaluate) {
  ASSERT_EQ(Run("fit --data " + Path("data.csv") + " --k 8 --alpha 0.1 --epsilon 1 --seed 4 --out " +
                Path("model.json")),
            0)
      << Read("stderr.txt");
  const auto model = nlohmann::json::parse(Read("model.json"));
  EXPECT_EQ(model["format"], "fairpp-model");
  EXPECT_EQ(model["groups"].size(), 3u);
  EXPECT_EQ(model["fit"]["seed"], 4);

  ASSERT_EQ(Run("apply --data " + Path("data.csv") + " --model " + Path("model.json") + " --seed 2 --out " +
                Path("pred.csv")),
            0)
      << Read("stderr.txt");
  const std::string pred = Read("pred.csv");
  EXPECT_EQ(pred.rfind("# fairpp 0.1.0 master_seed=2\nrow,group,score,prediction\n", 0), 0u);
  EXPECT_EQ(std::count(pred.begin(), pred.end(), '\n'), 402);

  ASSERT_EQ(Run("evaluate --data " + Path("data.csv") + " --model " + Path("model.json") +
                " --label-column label --out " + Path("eval.json")),
            0)
      << Read("stderr.txt");
  const auto report = nlohmann::json::parse(Read("eval.json"));
  EXPECT_EQ(report["n"], 400);
  EXPECT_GE(report["delta_sp"].get<double>(), 0.0);
  EXPECT_LE(report["delta_sp"].get<double>(), 1.0);
  EXPECT_GT(report["mse_raw"].get<double>(), 0.0);
}

TEST_F(CliTest, ApplyIsReproducible) {
  ASSERT_EQ(Run("fit --data " + Path("data.csv") + " --k 6 --alpha 0 --epsilon 0.5 --out " + Path("m.json")), 0);
  ASSERT_EQ(Run("apply --data " + Path("data.csv") + " --model " + Path("m.json") + " --seed 9 --out " +
                Path("a.csv")),
            0);
  ASSERT_EQ(Run("apply --data " + Path("data.csv") + " --model " + Path("m.json") + " --seed 9 --out " +
                Path("b.csv")),
            0);
  EXPECT_EQ(Read("a.csv"), Read("b.csv"));
}

TEST_F(CliTest, DeterministicModeWarns) {
  ASSERT_EQ(Run("fit --data " + Path("data.csv") + " --k 6 --alpha 0 --epsilon inf --out " + Path("m.json")), 0);
  ASSERT_EQ(Run("apply --deterministic --data " + Path("data.csv") + " --model " + Path("m.json") +
                " --out " + Path("a.csv")),
            0);
  EXPECT_NE(Read("stderr.txt").find("statistical parity"), std::string::npos);
}

TEST_F(CliTest, AffineSchemaKeepsRawUnits) {
  // Scores on [1, 4]; the model works on [0, 1] and reports in raw units.
  std::ofstream out(Path("gpa.csv"));
  out << "race,gpa\n";
  fairpp::RandomStream rng(3);
  for (int i = 0; i < 200; ++i) out << (i % 2 ? "x" : "y") << ',' << 1.0 + 3.0 * rng.Uniform() << '\n';
  out.close();
  Write("schema.json",
        R"({"group": "race", "label": "gpa", "use_label_as_score": true, "interval": [1, 4],
            "normalization": "affine-to-unit"})");
  ASSERT_EQ(Run("fit --data " + Path("gpa.csv") + " --schema " + Path("schema.json") +
                " --k 3 --alpha inf --epsilon inf --out " + Path("m.json")),
            0)
      << Read("stderr.txt");
  ASSERT_EQ(Run("apply --data " + Path("gpa.csv") + " --schema " + Path("schema.json") + " --model " +
                Path("m.json") + " --out " + Path("p.csv")),
            0)
      << Read("stderr.txt");
  std::istringstream lines(Read("p.csv"));
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    const double prediction = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_TRUE(prediction == 1.5 || prediction == 2.5 || prediction == 3.5) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 200);
}

TEST_F(CliTest, SweepWritesAllFiles) {
  Write("sweep.json", R"({"data": ")" + Path("data.csv") +
                          R"(", "schema": {"label": "label"}, "alphas": [0, "inf"], "bins": [1, 4],
                              "epsilons": [1, "inf"], "seeds": 2, "master_seed": 5})");
  ASSERT_EQ(Run("sweep --config " + Path("sweep.json") + " --out " + Path("s") + " --workers 2"), 0)
      << Read("stderr.txt");
  for (const char* suffix : {"_results.csv", "_summary.csv", "_envelope.csv", "_timing.csv"}) {
    EXPECT_TRUE(fs::exists(Path(std::string("s") + suffix))) << suffix;
  }
  const std::string results = Read("s_results.csv");
  EXPECT_EQ(results.rfind("# fairpp 0.1.0 master_seed=5\n", 0), 0u);
  EXPECT_EQ(std::count(results.begin(), results.end(), '\n'), 2 + 16);
  EXPECT_NE(results.find("\ninf,1,inf,0,"), std::string::npos);
}

TEST_F(CliTest, BudgetReuseIsRefusedWithoutOverride) {
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 8 --alpha 0.1 --epsilon 1 --out " + Path("m")), 2);
  EXPECT_NE(Read("stderr.txt").find("budget"), std::string::npos);
  EXPECT_FALSE(fs::exists(Path("m_k4_a0.1.json")));
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 8 --alpha 0.1 --epsilon 1 --allow-budget-reuse --out " +
                Path("m")),
            0)
      << Read("stderr.txt");
  EXPECT_TRUE(fs::exists(Path("m_k4_a0.1.json")));
  EXPECT_TRUE(fs::exists(Path("m_k8_a0.1.json")));
  // Without noise there is nothing to spend.
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 --alpha 0 0.1 --epsilon inf --out " + Path("n")), 0);
}

TEST_F(CliTest, ConfigErrorsExitWithTwo) {
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --k 0 --alpha 0.1 --epsilon 1 --out " + Path("m.json")), 2);
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 --alpha -1 --epsilon 1 --out " + Path("m.json")), 2);
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 --alpha 0.1 --epsilon 1"), 2);
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 --alpha x --epsilon 1 --out " + Path("m.json")), 2);
  EXPECT_EQ(Run("frobnicate"), 2);
  EXPECT_EQ(Run("fit --data " + Path("data.csv") + " --interval 1 0 --k 4 --alpha 0 --epsilon 1 --out " +
                Path("m.json")),
            2);
}

TEST_F(CliTest, DataErrorsExitWithThree) {
  EXPECT_EQ(Run("fit --data " + Path("missing.csv") + " --k 4 --alpha 0.1 --epsilon 1 --out " + Path("m.json")), 3);
  Write("bad.csv", "group,score\nA,0.1\nB,oops\n");
  EXPECT_EQ(Run("fit --data " + Path("bad.csv") + " --k 4 --alpha 0.1 --epsilon 1 --out " + Path("m.json")), 3);
  EXPECT_NE(Read("stderr.txt").find("line 3"), std::string::npos);
  Write("nocol.csv", "g,score\nA,0.1\n");
  EXPECT_EQ(Run("fit --data " + Path("nocol.csv") + " --k 4 --alpha 0.1 --epsilon 1 --out " + Path("m.json")), 3);

  ASSERT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 --alpha 0.1 --epsilon 1 --out " + Path("m.json")), 0);
  Write("other.csv", "group,score\nZ,0.5\n");
  EXPECT_EQ(Run("apply --data " + Path("other.csv") + " --model " + Path("m.json") + " --out " + Path("p.csv")), 3);
  EXPECT_NE(Read("stderr.txt").find("unknown-group"), std::string::npos);
}

TEST_F(CliTest, SolverErrorsExitWithFour) {
  // An iteration cap of one pivot cannot finish the barycenter LP.
  ASSERT_EQ(Run("fit --data " + Path("data.csv") + " --k 4 --alpha 0.1 --epsilon 1 --out " + Path("m.json") +
                " --max-lp-iterations 1"),
            4)
      << Read("stderr.txt");
  EXPECT_NE(Read("stderr.txt").find("solver-failure"), std::string::npos);
}

}  // namespace
