// Copyright 2026 The ovlp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#ifndef OVLP_CLI_PATH
#error "OVLP_CLI_PATH must name the ovlp executable"
#endif

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ovlp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome run(const std::string& args) const {
    const std::string err_path = path("stderr.txt");
    const std::string cmd = std::string("'") + OVLP_CLI_PATH + "' " + args + " 2>'" + err_path + "'";
    Outcome r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream e(err_path);
    std::stringstream ss;
    ss << e.rdbuf();
    r.err = ss.str();
    return r;
  }

  fs::path dir_;
};

const char* kIdentity =
    R"({"space":["a","b"],"dim":2,"values":{"a":{"dim":2,"entries":[[1,0],[0,1]]},"b":{"dim":2,"entries":[[1,0],[0,1]]}}})";
const char* kScalar = R"({"space":["x"],"dim":1,"values":{"x":{"dim":1,"entries":[[[1,1]]]}}})";

TEST_F(Cli, ComputeInfOnIdentity) {
  const Outcome r = run("compute --norm inf --input " + file("f.json", kIdentity));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["value"], 1.0);
}

TEST_F(Cli, ComputePnormOnScalar) {
  const Outcome r = run("compute --norm p:2 --input " + file("f.json", kScalar));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["lower"].get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(j["upper"].get<double>(), 2.0, 1e-9);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, ComputeWithPovmStateAndSolverConfig) {
  const std::string input = file("in.json", R"({
    "povm": {"space":["a","b"],"dim":2,"effects":{
      "a":{"dim":2,"entries":[[0.75,0],[0,0.25]]},
      "b":{"dim":2,"entries":[[0.25,0],[0,0.75]]}}},
    "f": {"space":["a","b"],"dim":2,"values":{
      "a":{"dim":2,"entries":[[1,[0,1]],[0,-1]]},
      "b":{"dim":2,"entries":[[0,1],[1,0]]}}}})");
  const std::string rho = file("rho.json", R"({"dim":2,"entries":[[0.6,0],[0,0.4]],"role":"state"})");
  const Outcome a = run("compute --norm dec:2 --input " + input + " --rho " + rho + R"( --solver '{"max_iters":200}')");
  ASSERT_EQ(a.code, 0) << a.err;
  const Outcome b = run("compute --norm dec:2 --input " + input + " --rho " + rho + R"( --solver '{"max_iters":200}')");
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_LE(j["lower"].get<double>(), j["upper"].get<double>());
}

TEST_F(Cli, ComputeOnATensorInput) {
  const std::string input = file("t.json", R"({
    "tensor": {"factors": [
        {"space":["a"],"dim":1,"effects":{"a":{"dim":1,"entries":[[2]]}}},
        {"space":["a"],"dim":1,"effects":{"a":{"dim":1,"entries":[[3]]}}}],
      "base": {"space":["a"],"weights":{"a":1}}},
    "f": {"space":["a"],"dim":1,"values":{"a":{"dim":1,"entries":[[1]]}}}})");
  const Outcome r = run("compute --norm p:1 --input " + input);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["upper"].get<double>(), 6.0, 1e-9);
}

TEST_F(Cli, DomainErrorsExitWithOne) {
  const std::string f = file("f.json", kScalar);
  EXPECT_EQ(run("compute --norm q:2 --input " + f).code, 1);
  EXPECT_EQ(run("compute --norm p:0.5 --input " + f).code, 1);
  EXPECT_EQ(run("compute --norm p:2 --input " + path("missing.json")).code, 1);
  EXPECT_EQ(run("verify --suite triangle --trials 1").code, 1);
  EXPECT_EQ(run("search --conjecture candidate_triangle:2 --budget 3 --seed 1").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("compute verify").code, 1);
}

TEST_F(Cli, MalformedJsonReportsThePath) {
  const std::string bad = file("bad.json", R"({"space":["x"],"dim":1,"values":{"x":{"dim":1,"entries":[[[1,"a"]]]}}})");
  const Outcome r = run("compute --norm p:2 --input " + bad);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/values/x/entries/0/0/1"), std::string::npos) << r.err;

  const Outcome t = run("validate --input " + file("trunc.json", R"({"space": [)"));
  EXPECT_EQ(t.code, 1);
  EXPECT_NE(t.err.find("malformed JSON"), std::string::npos);
  EXPECT_FALSE(Json::parse(t.out)["valid"].get<bool>());

  const Outcome p = run("validate --input " + file("povm.json",
      R"({"space":["a","b"],"dim":1,"effects":{"a":{"dim":1,"entries":[[1]]},"b":{"dim":1,"entries":[[-1]]}}})"));
  EXPECT_EQ(p.code, 1);
  EXPECT_EQ(Json::parse(p.out)["path"], "/effects/b");
}

TEST_F(Cli, VerifyIsDeterministicAcrossRunsAndWorkers) {
  const Outcome a = run("verify --suite sandwich --trials 10 --seed 7");
  const Outcome b = run("verify --suite sandwich --trials 10 --seed 7");
  const Outcome c = run("verify --suite sandwich --trials 10 --seed 7 --workers 3");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const Json j = Json::parse(a.out);
  for (const char* key : {"suite", "trials", "violations", "worst_margin", "witnesses", "seed"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["violations"], 0);
}

TEST_F(Cli, ViolationsExitWithTwoAndWitnessesValidate) {
  const std::string out = path("report.json");
  const Outcome r = run("verify --suite reim --trials 2 --dims 2 --atoms 2 --seed 3 --tol -100 --out " + out);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const Json rep = Json::parse(in);
  EXPECT_EQ(rep["violations"], 2);
  EXPECT_EQ(rep["witnesses"].size(), 2u);
  const Outcome v = run("validate --input " + out);
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(Json::parse(v.out)["kind"], "verify_report");

  const std::string inst = file("inst.json", rep["witnesses"][0]["instance"].dump());
  const Outcome w = run("validate --input " + inst);
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(Json::parse(w.out)["margin"].get<double>(), rep["witnesses"][0]["margin"].get<double>());
}

TEST_F(Cli, SearchCandidateRoundTripsThroughAFreshProcess) {
  const Outcome s = run("search --conjecture candidate_triangle:3 --budget 12 --seed 4 --dims 2 --atoms 2");
  ASSERT_EQ(s.code, 0) << s.err;
  const Json j = Json::parse(s.out);
  EXPECT_EQ(j["outcome"], "exhausted");
  const Json cand = j.contains("witness") && !j["witness"].is_null() ? j["witness"] : j["best_candidate"];
  const Outcome v = run("validate --input " + file("cand.json", cand.dump()));
  ASSERT_EQ(v.code, 0) << v.err;
  const Json out = Json::parse(v.out);
  EXPECT_TRUE(out["margin_matches"].get<bool>());
  EXPECT_EQ(out["reverified"]["margin"].get<double>(), cand["evaluation"]["margin"].get<double>());
}

TEST_F(Cli, SearchControlRunAtProvedExponent) {
  const Outcome r = run("search --conjecture candidate_triangle:1 --budget 30 --seed 2 --control");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["outcome"], "exhausted");
}

TEST_F(Cli, HelpExitsCleanly) {
  const Outcome r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("compute"), std::string::npos);
}

}  // namespace
