/*
   Copyright 2026 The hardy-factor authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Exercises the run() dispatcher directly (exit-code contract, manifest
// embedding) against the shipped fixture files.

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>

#include "hardy/cli.hpp"

#ifndef HARDY_FIXTURE_DIR
#define HARDY_FIXTURE_DIR "fixtures"
#endif

using namespace hardy;

namespace {

std::string fixture(const std::string& name) {
  return std::string(HARDY_FIXTURE_DIR) + "/" + name;
}

std::string temp_path(const std::string& name) {
  return std::string("cli_test_") + name;
}

}  // namespace

TEST_CASE("cli: analyze the non doubly commuting fixture exits 1") {
  cli::RunManifest m;
  m.command = cli::Command::analyze;
  m.inputPath = fixture("non_dc_z1_z2.json");
  const auto out = cli::run(m);
  CHECK(out.exit_code == cli::kExitVerdictFail);
  CHECK(out.report["report"]["pass"] == false);
  const auto& pairs = out.report["report"]["commutators"]["pairNorms"];
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0]["norm"].get<double>() >= 1.0 - 1e-10);
  CHECK(out.report["report"]["decomposition"]["gramDeviation"].get<double>() >= 0.5);
  CHECK(out.report["manifest"]["command"] == "analyze");
}

TEST_CASE("cli: analyze and extract the monomial inner fixture") {
  cli::RunManifest m;
  m.command = cli::Command::analyze;
  m.inputPath = fixture("monomial_inner.json");
  const auto out = cli::run(m);
  CHECK(out.exit_code == cli::kExitPass);

  m.command = cli::Command::extract_inner;
  const auto ext = cli::run(m);
  CHECK(ext.exit_code == cli::kExitPass);
  CHECK(ext.report["report"]["certificate"]["pass"] == true);
  CHECK(ext.report["report"]["rangeDistance"].get<double>() <= 1e-8);
  // recovered symbol is the monomial z1 z2 up to phase
  const auto theta = io::symbol_from_json(ext.report["report"]["theta"]);
  CHECK(theta.rows == 1);
  CHECK(theta.cols == 1);
  CHECK(std::abs(std::abs(theta.coefficient(MultiIndex{1, 1})(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("cli: missing input file exits 2 with an in-band error") {
  cli::RunManifest m;
  m.command = cli::Command::complete;
  m.inputPath = "no_such_file.json";
  const auto out = cli::run(m);
  CHECK(out.exit_code == cli::kExitParseError);
  CHECK(out.report["report"].contains("error"));
}

TEST_CASE("cli: malformed json exits 2") {
  const std::string path = temp_path("bad.json");
  {
    std::ofstream f(path);
    f << "not json";
  }
  cli::RunManifest m;
  m.command = cli::Command::analyze;
  m.inputPath = path;
  const auto out = cli::run(m);
  CHECK(out.exit_code == cli::kExitParseError);
  std::remove(path.c_str());
}

TEST_CASE("cli: a corona-style problem fails at a named stage with exit 3") {
  // f = (z1; z2) with a junk left inverse: stage 1 must be named
  Json f = {{"n", 2},
            {"rows", 2},
            {"cols", 1},
            {"terms", Json::array({Json{{"k", {1, 0}}, {"matrix", {{{1.0, 0.0}}, {{0.0, 0.0}}}}},
                                   Json{{"k", {0, 1}}, {"matrix", {{{0.0, 0.0}}, {{1.0, 0.0}}}}}})}};
  Json g = {{"n", 2},
            {"rows", 1},
            {"cols", 2},
            {"terms", Json::array({Json{{"k", {0, 0}}, {"matrix", {{{1.0, 0.0}, {1.0, 0.0}}}}}})}};
  Json problem = {{"n", 2},     {"dimE", 1}, {"dimEc", 2}, {"f", f},
                  {"g", g},     {"window", Json{{"d", 3}}}};
  const std::string path = temp_path("corona.json");
  {
    std::ofstream out(path);
    out << problem.dump();
  }
  cli::RunManifest m;
  m.command = cli::Command::complete;
  m.inputPath = path;
  m.outputPath = temp_path("corona_report.json");
  const auto out = cli::run(m);
  CHECK(out.exit_code == cli::kExitStageFailure);
  CHECK(out.report["report"]["failedStage"] == "left_inverse");
  // the report was still written
  std::ifstream written(m.outputPath);
  REQUIRE(written.good());
  Json on_disk;
  written >> on_disk;
  CHECK(on_disk["report"]["failedStage"] == "left_inverse");
  std::remove(path.c_str());
  std::remove(m.outputPath.c_str());
}

TEST_CASE("cli: complete on the shipped fixture embeds the manifest and passes") {
  cli::RunManifest m;
  m.command = cli::Command::complete;
  m.inputPath = fixture("example_1_6.json");
  m.degree = 4;  // small window keeps this unit test quick
  const auto out = cli::run(m);
  CHECK(out.exit_code == cli::kExitPass);
  CHECK(out.report["manifest"]["overrides"]["degree"] == 4);
  CHECK(out.report["report"]["pass"] == true);
  CHECK(out.report["report"]["dimCheck"]["dimEa"] == 2);
}

TEST_CASE("cli: verify command checks a supplied pair") {
  Json input;
  input["F"] = io::symbol_to_json(OperatorSymbol::identity(2, 2));
  input["Omega"] = io::symbol_to_json(OperatorSymbol::identity(2, 2));
  input["window"] = Json{{"d", 2}};
  input["dimE"] = 1;
  const std::string path = temp_path("verify.json");
  {
    std::ofstream out(path);
    out << input.dump();
  }
  cli::RunManifest m;
  m.command = cli::Command::verify;
  m.inputPath = path;
  const auto out = cli::run(m);
  CHECK(out.exit_code == cli::kExitPass);
  CHECK(out.report["report"]["pass"] == true);
  std::remove(path.c_str());
}

TEST_CASE("cli: exit code matches embedded verdicts") {
  // exit 0 iff the embedded verdict is a pass
  cli::RunManifest m;
  m.command = cli::Command::analyze;
  m.inputPath = fixture("monomial_inner.json");
  const auto good = cli::run(m);
  CHECK((good.exit_code == 0) == good.report["report"]["pass"].get<bool>());
  m.inputPath = fixture("non_dc_z1_z2.json");
  const auto bad = cli::run(m);
  CHECK((bad.exit_code == 0) == bad.report["report"]["pass"].get<bool>());
}
