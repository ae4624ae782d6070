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

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "hardy/report.hpp"
#include "hardy/selftest.hpp"
#include "hardy/serialization.hpp"
#include "hardy/version.hpp"

namespace hardy {
namespace cli {

// exit codes: 0 all verdicts pass, 1 verdict failure, 2 parse error,
// 3 precondition or pipeline-stage failure (report still written)
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFail = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitStageFailure = 3;

enum class Command { analyze, extract_inner, complete, rank, verify, selftest };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::extract_inner: return "extract-inner";
    case Command::complete: return "complete";
    case Command::rank: return "rank";
    case Command::verify: return "verify";
    case Command::selftest: return "selftest";
  }
  return "unknown";
}

/// What a single invocation will do; embedded verbatim in every report.
struct RunManifest {
  Command command = Command::selftest;
  std::string inputPath;
  std::string outputPath;
  std::optional<int> degree;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<int> torusGrid;
};

inline Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["command"] = command_name(m.command);
  j["inputPath"] = m.inputPath;
  j["outputPath"] = m.outputPath;
  Json o = Json::object();
  if (m.degree) o["degree"] = *m.degree;
  if (m.tolerance) o["tolerance"] = *m.tolerance;
  if (m.seed) o["seed"] = *m.seed;
  if (m.torusGrid) o["torusGrid"] = *m.torusGrid;
  j["overrides"] = std::move(o);
  j["version"] = std::string(kVersion);
  return j;
}

struct RunOutcome {
  int exit_code = kExitPass;
  Json report;
  std::string text;
};

namespace detail_cli {

inline Json load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open input file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  return j;
}

inline RunOutcome run_analyze(const RunManifest& m) {
  io::SubspaceProblem p = io::subspace_problem_from_json(load_input(m.inputPath));
  if (m.degree) p.window = DegreeWindow(p.vars, *m.degree);
  if (m.tolerance) p.tolerance = *m.tolerance;
  if (m.torusGrid) p.torusGrid = *m.torusGrid;

  RunOutcome out;
  const SubspaceBasis s = submodule_span(p.generators, p.window);
  const CommutatorReport dc = doubly_commuting_test(s, p.tolerance);
  const WanderingData wd = joint_wandering(s);
  const WanderingDecomposition decomp =
      verify_wandering_decomposition(s, wd.joint);
  const ReducingReport reducing = reducing_test(s);

  out.report["dimension"] = s.dimension();
  out.report["commutators"] = io::commutator_report_to_json(dc);
  Json w;
  Json dims = Json::array();
  for (const auto& ws : wd.perVariable) dims.push_back(ws.dimension());
  w["perVariableDims"] = std::move(dims);
  w["jointDim"] = wd.joint.dimension();
  if (wd.product_range_distance)
    w["productRangeDistance"] = *wd.product_range_distance;
  out.report["wandering"] = std::move(w);
  out.report["decomposition"] = io::wandering_decomposition_to_json(decomp);
  out.report["reducing"] = io::reducing_report_to_json(reducing);
  out.report["pass"] = dc.verdict;
  out.exit_code = dc.verdict ? kExitPass : kExitVerdictFail;
  out.text = report::render(dc) + report::render(decomp) + report::render(reducing);
  return out;
}

inline RunOutcome run_extract(const RunManifest& m) {
  io::SubspaceProblem p = io::subspace_problem_from_json(load_input(m.inputPath));
  if (m.degree) p.window = DegreeWindow(p.vars, *m.degree);
  if (m.tolerance) p.tolerance = *m.tolerance;
  if (m.torusGrid) p.torusGrid = *m.torusGrid;

  RunOutcome out;
  const SubspaceBasis s = submodule_span(p.generators, p.window);
  const ExtractionOutcome outcome =
      extract_inner(s, p.tolerance, tol::kInner, p.torusGrid);
  if (const auto* fail = std::get_if<ExtractionFailure>(&outcome)) {
    out.report["pass"] = false;
    out.report["failure"] = fail->message;
    if (fail->commutators)
      out.report["commutators"] = io::commutator_report_to_json(*fail->commutators);
    if (fail->reason == ExtractionFailure::Reason::non_beurling) {
      out.report["wanderingDim"] = fail->wandering_dim;
      out.report["dimEstar"] = fail->dim_e_star;
    }
    out.exit_code = kExitStageFailure;
    out.text = "extraction failed: " + fail->message + "\n";
    if (fail->commutators) out.text += report::render(*fail->commutators);
    return out;
  }
  const auto& ok = std::get<InnerExtraction>(outcome);
  out.report["theta"] = io::symbol_to_json(ok.theta);
  out.report["certificate"] = io::inner_certificate_to_json(ok.certificate);
  out.report["commutators"] = io::commutator_report_to_json(ok.commutators);
  out.report["rangeDistance"] = ok.range_distance;
  const bool pass = ok.certificate.pass && ok.range_distance <= 1e-8;
  out.report["pass"] = pass;
  out.exit_code = pass ? kExitPass : kExitVerdictFail;
  out.text = report::render(ok.commutators) + report::render(ok.certificate) +
             "  range distance          " + report::num(ok.range_distance) + "\n";
  return out;
}

inline RunOutcome run_complete(const RunManifest& m) {
  CompletionProblem p = io::completion_problem_from_json(load_input(m.inputPath));
  if (m.degree) {
    // the override rewrites the problem at the requested window; input
    // symbols are explicitly truncated to it
    p.window = DegreeWindow(p.vars, *m.degree);
    if (p.f.window.degree > p.window.degree) p.f = truncated(p.f, p.window);
    if (p.g.window.degree > p.window.degree) p.g = truncated(p.g, p.window);
  }
  if (m.tolerance) {
    p.tolerances.leftInverse = *m.tolerance;
    p.tolerances.completion = *m.tolerance;
    p.tolerances.gamma = *m.tolerance;
  }
  if (m.seed) p.seed = *m.seed;
  if (m.torusGrid) p.torusGrid = *m.torusGrid;

  RunOutcome out;
  const CompletionOutcome outcome = complete(p);
  if (const auto* err = std::get_if<CompletionError>(&outcome)) {
    out.report = io::completion_error_to_json(*err);
    out.report["pass"] = false;
    out.exit_code = kExitStageFailure;
    out.text = report::render(*err);
    return out;
  }
  const auto& r = std::get<CompletionResult>(outcome);
  out.report = io::completion_result_to_json(r);
  out.exit_code = r.pass ? kExitPass : kExitVerdictFail;
  out.text = report::render(r, p.tolerances);
  return out;
}

inline RunOutcome run_rank(const RunManifest& m) {
  const Json input = load_input(m.inputPath);
  if (!input.contains("g")) throw parse_error("rank: missing symbol g");
  const OperatorSymbol g = io::symbol_from_json(input["g"]);
  int samples = input.value("samples", tol::kRankSamples);
  std::uint64_t seed = input.value("seed", std::uint64_t{1});
  if (m.seed) seed = *m.seed;
  RunOutcome out;
  const RankReport r = local_rank(g, samples, seed);
  out.report = io::rank_report_to_json(r);
  out.report["pass"] = true;
  out.exit_code = kExitPass;
  out.text = report::render(r);
  return out;
}

inline RunOutcome run_verify(const RunManifest& m) {
  const Json input = load_input(m.inputPath);
  if (!input.contains("F") || !input.contains("Omega"))
    throw parse_error("verify: missing F/Omega");
  const OperatorSymbol f = io::symbol_from_json(input["F"]);
  const OperatorSymbol omega = io::symbol_from_json(input["Omega"]);
  int d = std::max(f.window.degree, omega.window.degree);
  if (input.contains("window") && input["window"].contains("d"))
    d = input["window"]["d"].get<int>();
  if (m.degree) d = *m.degree;
  const DegreeWindow window(f.window.vars, d);
  int grid = input.value("torusGrid", tol::kTorusGrid);
  if (m.torusGrid) grid = *m.torusGrid;
  std::optional<int> split;
  if (input.contains("dimE")) split = input["dimE"].get<int>();
  const double tolerance = m.tolerance.value_or(
      input.value("tolerance", tol::kCompletion));

  RunOutcome out;
  const VerifyReport r = verify_completion(f, omega, window, grid, split, tolerance);
  out.report = io::verify_report_to_json(r);
  out.exit_code = r.pass ? kExitPass : kExitVerdictFail;
  out.text = report::render(r, tolerance);
  return out;
}

inline RunOutcome run_selftest(const RunManifest& m) {
  RunOutcome out;
  const auto result = selftest::run(m.seed.value_or(1));
  out.report = result.report;
  out.exit_code = result.pass ? kExitPass : kExitVerdictFail;
  out.text = selftest::render_text(result);
  return out;
}

}  // namespace detail_cli

/// Dispatch a manifest; never throws. The report always embeds the
/// manifest, and errors are reported in-band with the documented exit code.
inline RunOutcome run(const RunManifest& m) {
  RunOutcome out;
  try {
    switch (m.command) {
      case Command::analyze: out = detail_cli::run_analyze(m); break;
      case Command::extract_inner: out = detail_cli::run_extract(m); break;
      case Command::complete: out = detail_cli::run_complete(m); break;
      case Command::rank: out = detail_cli::run_rank(m); break;
      case Command::verify: out = detail_cli::run_verify(m); break;
      case Command::selftest: out = detail_cli::run_selftest(m); break;
    }
  } catch (const parse_error& e) {
    out.exit_code = kExitParseError;
    out.report = Json::object();
    out.report["error"] = e.what();
    out.report["pass"] = false;
    out.text = std::string("parse error: ") + e.what() + "\n";
  } catch (const not_submodule_error& e) {
    out.exit_code = kExitStageFailure;
    out.report = Json::object();
    out.report["error"] = e.what();
    out.report["pass"] = false;
    out.text = std::string("precondition failure: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    out.exit_code = kExitStageFailure;
    out.report = Json::object();
    out.report["error"] = e.what();
    out.report["pass"] = false;
    out.text = std::string("error: ") + e.what() + "\n";
  }
  Json wrapped;
  wrapped["manifest"] = manifest_to_json(m);
  wrapped["report"] = std::move(out.report);
  out.report = std::move(wrapped);
  if (!m.outputPath.empty()) {
    std::ofstream f(m.outputPath);
    if (f) f << out.report.dump(2) << "\n";
  }
  return out;
}

}  // namespace cli
}  // namespace hardy
