// Copyright 2026 The mqcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
};

// Runs the binary through the shell; stdout is captured, stderr dropped.
Result run(const std::string& args) {
  const std::string cmd = std::string(MQCHECK_BINARY) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string model(const char* name) { return std::string(MQCHECK_MODELS_DIR) + "/" + name; }

TEST(CliTest, CheckExitCodes) {
  EXPECT_EQ(run("check " + model("three_ring.txt")).code, 2);
  EXPECT_EQ(run("check " + model("three_ring.dsl")).code, 2);
  EXPECT_EQ(run("check " + model("illegal_three.txt")).code, 3);
  EXPECT_EQ(run("check " + model("chain_ok.txt")).code, 0);
  EXPECT_EQ(run("check " + model("exchange_ok.dsl")).code, 0);
  EXPECT_EQ(run("check /nonexistent").code, 1);
  EXPECT_EQ(run("check").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST(CliTest, JsonOutput) {
  auto r = run("check --format json " + model("three_ring.txt"));
  EXPECT_NE(r.out.find("\"verdict\": \"deadlock\""), std::string::npos);
  EXPECT_NE(r.out.find("\"residual\": 6"), std::string::npos);
}

TEST(CliTest, StreamFromStdin) {
  auto r = run("stream < " + model("three_ring.events"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("verdict: deadlock"), std::string::npos);
  EXPECT_EQ(run("stream < /dev/null").code, 1);
}

TEST(CliTest, OracleBackends) {
  EXPECT_EQ(run("oracle --backend cycle " + model("three_ring.txt")).code, 2);
  EXPECT_EQ(run("oracle --backend simulate " + model("chain_ok.txt")).code, 0);
  EXPECT_EQ(run("oracle --backend simulate " + model("illegal_three.txt")).code, 3);
  EXPECT_EQ(run("oracle --backend bogus " + model("chain_ok.txt")).code, 1);
}

TEST(CliTest, StateCapExitCode) {
  const fs::path tmp = fs::temp_directory_path() / "mqcheck_cli_cap.dsl";
  ASSERT_EQ(run("gen --pattern pairs -P 8 -M 10 --out " + tmp.string()).code, 0);
  EXPECT_EQ(run("oracle --backend simulate --cap 10 " + tmp.string()).code, 4);
  fs::remove(tmp);
}

TEST(CliTest, BenchCsvHeaderAppearsOnce) {
  auto r = run("bench --pattern random -P 4 -M 6 --seeds 3 --reps 1 --csv");
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  int headers = 0, rows = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("backend,", 0) == 0) {
      ++headers;
    } else if (!line.empty()) {
      ++rows;
    }
  }
  EXPECT_EQ(headers, 1);
  EXPECT_EQ(rows, 6);
}

TEST(CliTest, GenIsDeterministic) {
  auto a = run("gen --pattern random -P 5 -M 12 --seed 9");
  auto b = run("gen --pattern random -P 5 -M 12 --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
  auto ring = run("gen --pattern ring -P 3 -M 1 --format abstract");
  EXPECT_EQ(ring.out, "#abstract\nP0: ab\nP1: bc\nP2: ca\n");
}

}  // namespace
