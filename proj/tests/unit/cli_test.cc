/*
 * Copyright 2026 The rankpair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Runs the command-line tool as a subprocess.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int exit_code = -1;
  std::string out;
};

Result run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " '" RANKPAIR_CLI_PATH "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) {
  return std::string(RANKPAIR_TEST_DATA) + "/" + name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("rankpair_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

TEST_F(CliTest, RunWritesTrajectoryAndSummary) {
  const Result r = run_cli("run --config '" + data("small_run.json") +
                           "' --out '" + dir_.string() + "'");
  ASSERT_EQ(r.exit_code, 0);
  const std::string csv = slurp(dir_ / "trajectory.csv");
  EXPECT_EQ(csv.rfind("step,loss,grad_norm,ap,pcc,scc,kcc\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 22);
  const auto summary = nlohmann::json::parse(slurp(dir_ / "summary.json"));
  EXPECT_EQ(summary.at("config").at("seed"), 5);
  EXPECT_TRUE(summary.at("final").contains("ap_by_iou"));
}

TEST_F(CliTest, RerunIsByteIdentical) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run_cli("run --config '" + data("small_run.json") + "' --out '" +
                    a.string() + "'").exit_code, 0);
  ASSERT_EQ(run_cli("run --config '" + data("small_run.json") + "' --out '" +
                    b.string() + "'").exit_code, 0);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST_F(CliTest, SeedEnvironmentOverride) {
  ASSERT_EQ(run_cli("run --config '" + data("small_run.json") + "' --out '" +
                        dir_.string() + "'",
                    "RANKPAIR_SEED=123")
                .exit_code,
            0);
  const auto summary = nlohmann::json::parse(slurp(dir_ / "summary.json"));
  EXPECT_EQ(summary.at("config").at("seed"), 123);
}

TEST_F(CliTest, ConfigErrorsExitWithTwo) {
  const std::string out = " --out '" + dir_.string() + "'";
  EXPECT_EQ(run_cli("run --config '" + data("malformed.json") + "'" + out)
                .exit_code, 2);
  EXPECT_EQ(run_cli("run --config '" + data("bad_key.json") + "'" + out)
                .exit_code, 2);
  EXPECT_EQ(run_cli("run --config '" + data("missing.json") + "'" + out)
                .exit_code, 2);
  EXPECT_EQ(run_cli("run --config '" + data("small_run.json") + "'" + out,
                    "RANKPAIR_SEED=abc")
                .exit_code, 2);
}

TEST_F(CliTest, DivergenceExitsWithThree) {
  EXPECT_EQ(run_cli("run --config '" + data("diverge.json") + "' --out '" +
                    dir_.string() + "'").exit_code, 3);
}

TEST_F(CliTest, SweepWritesOneRowPerValue) {
  ASSERT_EQ(run_cli("sweep --config '" + data("small_run.json") + "' --out '" +
                    dir_.string() + "'").exit_code, 0);
  const std::string csv = slurp(dir_ / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST_F(CliTest, NmsDemo) {
  const Result builtin = run_cli("nms-demo");
  ASSERT_EQ(builtin.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(builtin.out).at("kept"),
            nlohmann::json::array({0, 2}));
  const Result file = run_cli("nms-demo --input '" + data("nms_boxes.json") + "'");
  ASSERT_EQ(file.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(file.out).at("kept"),
            nlohmann::json::array({0, 2}));
}

TEST_F(CliTest, EvalPrintsReport) {
  const Result r = run_cli("eval --input '" + data("detections.json") + "'");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"ap", "ap_by_iou", "pcc", "scc", "kcc"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.at("ap_by_iou").size(), 10u);
  // TP, duplicate FP, TP.
  EXPECT_DOUBLE_EQ(j.at("ap_by_iou").at("0.50").get<double>(), 5.0 / 6.0);
}

TEST_F(CliTest, GradCheckPasses) {
  const Result r = run_cli("gradcheck --trials 5");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j.at("ranking_max_error").get<double>(), 1e-6);
}

}  // namespace
