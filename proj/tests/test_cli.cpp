// Copyright 2026 The dhsim Authors
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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dhsim/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dh::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("run teleport reports unit fidelity and agreeing pictures") {
  const Result r = run({"run", "--builtin", "teleport", "--bind", "theta=0.7", "--format", "json"});
  REQUIRE(r.code == dh::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["fidelity"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["dual_picture_trace_distance"].get<double>() < 1e-10);
  CHECK(j["reduced"][0]["qubits"] == std::vector<int>{5});
}

TEST_CASE("json output is byte-identical across runs") {
  const std::vector<std::string> args{"run", "--builtin", "bell", "--bind", "theta=0.3", "--bind", "phi=1.1",
                                      "--format", "json", "--dump-descriptors", "--subset", "1,4"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> audit{"audit", "--builtin", "bell", "--param", "phi", "--format", "json"};
  CHECK(run(audit).out == run(audit).out);
}

TEST_CASE("run from a circuit file") {
  const std::string path = write_temp("dhsim_cli_bell.dh", "qubits 2\nH 1\nCNOT 1 2\n");
  const Result r = run({"run", "--circuit", path, "--subset", "1", "--measure", "1,2"});
  CHECK(r.code == dh::kExitOk);
  CHECK(r.out.find("outcome distribution on (1,2)") != std::string::npos);
  CHECK(r.out.find("dual-picture trace distance") != std::string::npos);
}

TEST_CASE("exit codes") {
  const std::string bad = write_temp("dhsim_cli_bad.dh", "qubits 2\nRY(theta) 1\n");
  const Result parse = run({"run", "--circuit", bad});
  CHECK(parse.code == dh::kExitParse);
  CHECK(parse.err.find("line 2") != std::string::npos);
  CHECK(parse.err.find("undeclared symbol theta") != std::string::npos);

  CHECK(run({"run", "--builtin", "teleport"}).code == dh::kExitBinding);
  CHECK(run({"run", "--builtin", "teleport", "--bind", "theta"}).code == dh::kExitBinding);
  CHECK(run({"audit", "--builtin", "bell", "--param", "psi"}).code == dh::kExitBinding);
  CHECK(run({"run", "--builtin", "nonsense"}).code == dh::kExitBinding);
  CHECK(run({"demo", "nonsense"}).code == dh::kExitBinding);
  CHECK(run({"frobnicate"}).code == dh::kExitBinding);
  CHECK(run({"run", "--circuit", "/nonexistent/file.dh"}).code == dh::kExitBinding);

  ::setenv("DH_DENSE_BUDGET", "3", 1);
  const Result budget = run({"run", "--builtin", "teleport", "--bind", "theta=0.1", "--backend", "dense"});
  ::unsetenv("DH_DENSE_BUDGET");
  CHECK(budget.code == dh::kExitBudget);
  CHECK_FALSE(budget.err.empty());
}

TEST_CASE("dense budget from the environment skips the oracle") {
  ::setenv("DH_DENSE_BUDGET", "3", 1);
  const Result r = run({"run", "--builtin", "teleport", "--bind", "theta=0.4", "--format", "json"});
  ::unsetenv("DH_DENSE_BUDGET");
  REQUIRE(r.code == dh::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["dual_picture_trace_distance"].is_null());
  CHECK(j["fidelity"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("audit of the Bell experiment") {
  const Result r = run({"audit", "--builtin", "bell", "--param", "phi", "--qubit", "1"});
  REQUIRE(r.code == dh::kExitOk);
  CHECK(r.out.find("no-information") != std::string::npos);
  CHECK(r.out.find("0 violations") != std::string::npos);
  const Result t = run({"audit", "--builtin", "teleport", "--param", "theta", "--at", "after-bell", "--format", "json"});
  REQUIRE(t.code == dh::kExitOk);
  const json j = json::parse(t.out);
  CHECK(j["verdicts"][1]["classification"] == "locally-inaccessible");
  CHECK(j["verdicts"][2]["classification"] == "locally-inaccessible");
}

TEST_CASE("demos succeed") {
  for (const char* name : {"bell", "superdense", "teleport", "gauge", "history"}) {
    CAPTURE(name);
    const Result r = run({"demo", name});
    CHECK(r.code == dh::kExitOk);
    CHECK(r.err.empty());
    CHECK(run({"demo", name, "--format", "json"}).code == dh::kExitOk);
  }
  CHECK(run({"demo", "gauge"}).out.find("statistics identical") != std::string::npos);
}

TEST_CASE("help") {
  const Result r = run({"--help"});
  CHECK(r.code == dh::kExitOk);
  CHECK(r.out.find("run") != std::string::npos);
}
