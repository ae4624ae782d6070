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

#include <string>

#include "hardy/examples.hpp"
#include "hardy/random_symbols.hpp"
#include "hardy/report.hpp"
#include "hardy/serialization.hpp"

namespace hardy {
namespace selftest {

struct Outcome {
  bool pass = true;
  Json report;
};

/// Fixed verification suite: the defect-operator identity over small
/// windows, the exponential-column completion end to end, and the
/// extraction round trip on seeded random inner symbols.
inline Outcome run(std::uint64_t seed = 1) {
  Outcome out;
  out.report = Json::object();

  // 1. defect operator equals the projection onto constants
  {
    Json cases = Json::array();
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
      for (int d = 1; d <= 3; ++d)
        for (int dim_e = 1; dim_e <= 2; ++dim_e) {
          const DegreeWindow w(n, d);
          const Eigen::MatrixXcd dp = defect_projection(w, dim_e);
          Eigen::MatrixXcd expected =
              Eigen::MatrixXcd::Zero(dp.rows(), dp.cols());
          expected.topLeftCorner(dim_e, dim_e).setIdentity();
          const double dev = (dp - expected).cwiseAbs().maxCoeff();
          worst = std::max(worst, dev);
          Json c;
          c["n"] = n;
          c["d"] = d;
          c["dimE"] = dim_e;
          c["deviation"] = dev;
          cases.push_back(std::move(c));
        }
    Json sec;
    sec["cases"] = std::move(cases);
    sec["maxDeviation"] = worst;
    sec["tolerance"] = 1e-12;
    sec["pass"] = worst <= 1e-12;
    out.pass = out.pass && worst <= 1e-12;
    out.report["defectProjection"] = std::move(sec);
  }

  // 2. exponential-column completion end to end at degree 8
  {
    const CompletionProblem problem =
        fixtures::exponential_column_problem(3, 8, seed);
    const CompletionOutcome outcome = complete(problem);
    Json sec;
    if (const auto* err = std::get_if<CompletionError>(&outcome)) {
      sec["pass"] = false;
      sec["error"] = io::completion_error_to_json(*err);
      out.pass = false;
    } else {
      const auto& r = std::get<CompletionResult>(outcome);
      bool ok = r.pass;
      // inner factor matches the constant embedding up to a constant unitary
      const OperatorSymbol expected = fixtures::exponential_column_inner_factor(3);
      double theta_residual = 1.0;
      if (r.theta.cols == 2) {
        const Eigen::MatrixXcd u =
            r.theta.coefficient(MultiIndex{0, 0, 0}).adjoint() *
            expected.coefficient(MultiIndex{0, 0, 0});
        theta_residual = max_coefficient_abs(
            multiply(r.theta, OperatorSymbol::constant(u, 3)) - expected);
      }
      ok = ok && theta_residual <= 1e-8;
      // value at the origin
      Eigen::MatrixXcd f0(3, 3);
      f0 << 1, 0, 0, 1, 1, 0, 1, 0, 1;
      const double f0_residual =
          (evaluate_symbol(r.F, Eigen::VectorXcd::Zero(3)) - f0)
              .cwiseAbs()
              .maxCoeff();
      ok = ok && f0_residual <= 1e-12;
      ok = ok && r.dimCheck.satisfied && r.dimCheck.dimEa == 2 &&
           r.dimCheck.rankG == 1;
      sec["pass"] = ok;
      sec["thetaResidual"] = theta_residual;
      sec["originResidual"] = f0_residual;
      sec["result"] = io::completion_result_to_json(r);
      out.pass = out.pass && ok;
    }
    out.report["exponentialColumn"] = std::move(sec);
  }

  // 3. extraction round trip on seeded random inner symbols
  {
    Json cases = Json::array();
    bool all = true;
    for (int t = 0; t < 10; ++t) {
      const std::uint64_t case_seed = seed * 1000 + t;
      const OperatorSymbol theta = random_inner_symbol(case_seed);
      const DegreeWindow window(theta.window.vars, 6);
      std::vector<HardyElement> cols;
      for (int j = 0; j < theta.cols; ++j) cols.push_back(theta.column(j));
      const SubspaceBasis s = submodule_span(cols, window);
      Json c;
      c["seed"] = case_seed;
      c["vars"] = theta.window.vars;
      c["rows"] = theta.rows;
      c["cols"] = theta.cols;
      const ExtractionOutcome outcome = extract_inner(s);
      if (const auto* ok = std::get_if<InnerExtraction>(&outcome)) {
        const bool good = ok->commutators.verdict &&
                          ok->commutators.max_pair_norm() <= 1e-8 &&
                          ok->range_distance <= 1e-8 && ok->certificate.pass &&
                          ok->theta.cols == theta.cols;
        c["maxPairNorm"] = ok->commutators.max_pair_norm();
        c["rangeDistance"] = ok->range_distance;
        c["pass"] = good;
        all = all && good;
      } else {
        c["pass"] = false;
        all = false;
      }
      cases.push_back(std::move(c));
    }
    Json sec;
    sec["cases"] = std::move(cases);
    sec["pass"] = all;
    out.pass = out.pass && all;
    out.report["innerRoundTrip"] = std::move(sec);
  }

  out.report["pass"] = out.pass;
  return out;
}

inline std::string render_text(const Outcome& o) {
  std::string text = "selftest\n";
  const auto& r = o.report;
  text += "  defect projection        max deviation " +
          report::num(r["defectProjection"]["maxDeviation"].get<double>()) +
          (r["defectProjection"]["pass"].get<bool>() ? "  PASS" : "  FAIL") + "\n";
  text += std::string("  exponential column       ") +
          (r["exponentialColumn"]["pass"].get<bool>() ? "PASS" : "FAIL") + "\n";
  text += std::string("  inner round trip (10)    ") +
          (r["innerRoundTrip"]["pass"].get<bool>() ? "PASS" : "FAIL") + "\n";
  text += std::string("  overall ") + (o.pass ? "PASS" : "FAIL") + "\n";
  return text;
}

}  // namespace selftest
}  // namespace hardy
