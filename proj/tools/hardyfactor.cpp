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

// hardyfactor: batch front end for the polydisc inner-function and
// completion machinery. One command per invocation; JSON is the canonical
// report format and the text rendering is derived from it.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "hardy/cli.hpp"

namespace {

void configure_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HARDY_FACTOR_THREADS")) {
    const int v = std::atoi(env);
    n = v <= 0 ? 1 : v;
  }
  Eigen::setNbThreads(std::max(1, n));
}

struct CommonOpts {
  std::string input;
  std::string output;
  int degree = -1;
  double tolerance = -1.0;
  long long seed = -1;
  int torus_grid = -1;
  std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input) {
  auto* in = cmd->add_option("--input", o.input, "problem file (JSON)");
  if (needs_input) in->required();
  cmd->add_option("--output", o.output, "write the JSON report here");
  cmd->add_option("--degree", o.degree, "override the computation window degree");
  cmd->add_option("--tolerance", o.tolerance, "override the verdict tolerance");
  cmd->add_option("--seed", o.seed, "override the sampling seed");
  cmd->add_option("--torus-grid", o.torus_grid, "torus sample points per axis");
  cmd->add_option("--format", o.format, "stdout format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
}

hardy::cli::RunManifest to_manifest(hardy::cli::Command c, const CommonOpts& o) {
  hardy::cli::RunManifest m;
  m.command = c;
  m.inputPath = o.input;
  m.outputPath = o.output;
  if (o.degree >= 0) m.degree = o.degree;
  if (o.tolerance >= 0.0) m.tolerance = o.tolerance;
  if (o.seed >= 0) m.seed = static_cast<std::uint64_t>(o.seed);
  if (o.torus_grid >= 1) m.torusGrid = o.torus_grid;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();

  CLI::App app{"certified inner-function extraction and matrix completion "
               "on truncated Hardy spaces of the polydisc"};
  app.set_version_flag("--version", std::string(hardy::kVersion));
  app.require_subcommand(1);

  struct Sub {
    hardy::cli::Command command;
    CLI::App* app;
    CommonOpts opts;
  };
  std::vector<Sub> subs;
  subs.reserve(8);  // options bind references into the stored opts
  const auto add = [&](hardy::cli::Command c, const char* name, const char* help,
                       bool needs_input) {
    subs.push_back({c, app.add_subcommand(name, help), {}});
    add_common(subs.back().app, subs.back().opts, needs_input);
  };
  add(hardy::cli::Command::analyze, "analyze",
      "span generators, test double commutation, wandering decomposition and "
      "reducibility", true);
  add(hardy::cli::Command::extract_inner, "extract-inner",
      "extract the inner generator of a doubly commuting submodule", true);
  add(hardy::cli::Command::complete, "complete",
      "solve the weak completion problem for a column with a left inverse", true);
  add(hardy::cli::Command::rank, "rank", "sampled pointwise rank of a symbol", true);
  add(hardy::cli::Command::verify, "verify",
      "verify a supplied completion pair F, Omega", true);
  add(hardy::cli::Command::selftest, "selftest",
      "run the built-in verification suite", false);

  CLI11_PARSE(app, argc, argv);

  for (const auto& sub : subs) {
    if (!sub.app->parsed()) continue;
    const auto manifest = to_manifest(sub.command, sub.opts);
    const auto outcome = hardy::cli::run(manifest);
    if (sub.opts.format == "json")
      std::cout << outcome.report.dump(2) << "\n";
    else
      std::cout << outcome.text;
    return outcome.exit_code;
  }
  return hardy::cli::kExitParseError;
}
