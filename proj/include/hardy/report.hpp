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

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "hardy/beurling.hpp"
#include "hardy/completion.hpp"
#include "hardy/subspace.hpp"

namespace hardy {
namespace report {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline std::string line(const std::string& label, double value, double tolerance,
                        bool pass) {
  std::string out = "  ";
  out += label;
  if (out.size() < 26) out.append(26 - out.size(), ' ');
  out += num(value) + "  tol " + num(tolerance) + (pass ? "  PASS" : "  FAIL") + "\n";
  return out;
}

inline std::string render(const InnerCertificate& c) {
  std::string out = "inner certificate\n";
  out += line("gram deviation", c.gramDeviation, c.tolerance,
              c.gramDeviation <= c.tolerance);
  out += line("torus deviation max", c.torusDeviationMax, c.tolerance,
              c.torusDeviationMax <= c.tolerance);
  out += "  samples " + std::to_string(c.sampleCount) + ", guard degree " +
         std::to_string(c.guardDegree) + "\n";
  return out;
}

/// Failing pairs are printed first, largest norm leading.
inline std::string render(const CommutatorReport& r) {
  std::string out = "commutator report (guard degree " +
                    std::to_string(r.guardDegree) + ")\n";
  std::vector<std::pair<std::pair<int, int>, double>> pairs(r.pairNorms.begin(),
                                                            r.pairNorms.end());
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    const bool fa = a.second > r.tolerance, fb = b.second > r.tolerance;
    if (fa != fb) return fa;
    if (fa && a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [key, value] : pairs)
    out += line("pair (" + std::to_string(key.first) + "," +
                    std::to_string(key.second) + ")",
                value, r.tolerance, value <= r.tolerance);
  out += std::string("  verdict ") + (r.verdict ? "PASS" : "FAIL") + "\n";
  return out;
}

inline std::string render(const ReducingReport& r) {
  std::string out = "reducing report\n";
  if (r.reducing) {
    out += "  reducing: yes, dim E* = " + std::to_string(r.constant_basis.cols()) + "\n";
    out += line("span residual", r.span_residual, 1e-8, r.span_residual <= 1e-8);
  } else {
    out += "  reducing: no\n";
    out += "  witness: ";
    out += (r.witness_adjoint ? "adjoint shift " : "shift ");
    out += "direction " + std::to_string(r.witness_direction) + ", residual " +
           num(r.witness_residual) + "\n";
  }
  return out;
}

inline std::string render(const WanderingDecomposition& c) {
  std::string out = "wandering decomposition (guard degree " +
                    std::to_string(c.guardDegree) + ")\n";
  out += line("gram deviation", c.gramDeviation, 1e-10, c.gramDeviation <= 1e-10);
  out += line("span residual", c.spanResidual, 1e-8, c.spanResidual <= 1e-8);
  return out;
}

inline std::string render(const RankReport& r) {
  std::string out = "rank report\n";
  out += "  rank " + std::to_string(r.rank) + " over " +
         std::to_string(r.sampleCount) + " samples\n";
  out += "  witness singular values:";
  for (Eigen::Index i = 0; i < r.singularValues.size(); ++i)
    out += " " + num(r.singularValues[i]);
  out += "\n";
  return out;
}

inline std::string render(const DimCheck& d) {
  std::string out = "dimension check\n";
  out += "  dim E_c = dim E_a + rank g: " + std::to_string(d.dimEc) + " = " +
         std::to_string(d.dimEa) + " + " + std::to_string(d.rankG) +
         (d.satisfied ? "  PASS" : "  FAIL") + "\n";
  return out;
}

inline std::string render_pair(const std::string& label, const PairResidual& p,
                               double tolerance) {
  std::string out;
  out += line(label + " (coeff)", p.coefficient, tolerance,
              p.coefficient <= tolerance);
  out += line(label + " (torus)", p.torus, tolerance, p.torus <= tolerance);
  return out;
}

inline std::string render(const CompletionResult& r, const CompletionTolerances& t) {
  std::string out = "completion result\n";
  out += render_pair("g f - I", r.residuals.leftInverse, t.leftInverse);
  out += "  kernel dimension " + std::to_string(r.kernel_dimension) + "\n";
  out += render(r.commutators);
  out += render(r.innerCert);
  out += render(r.dimCheck);
  out += line("gamma residual", r.residuals.gammaSolve, t.gamma,
              r.residuals.gammaSolve <= t.gamma);
  out += render_pair("F Omega - I", r.residuals.FOmega, t.completion);
  out += render_pair("Omega F - I", r.residuals.OmegaF, t.completion);
  out += std::string("  overall ") + (r.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

inline std::string render(const CompletionError& e) {
  std::string out = "completion failed at stage: ";
  out += stage_name(e.stage);
  out += "\n  " + e.message + "\n";
  if (e.leftInverse)
    out += render_pair("g f - I", *e.leftInverse, tol::kCompletion);
  if (e.commutators) out += render(*e.commutators);
  if (e.dimCheck) out += render(*e.dimCheck);
  if (e.gammaResidual)
    out += line("gamma residual", *e.gammaResidual, tol::kCompletion, false);
  return out;
}

inline std::string render(const VerifyReport& r, double tolerance) {
  std::string out = "verification report\n";
  out += render_pair("F Omega - I", r.FOmega, tolerance);
  out += render_pair("Omega F - I", r.OmegaF, tolerance);
  if (r.innerCert) out += render(*r.innerCert);
  out += std::string("  overall ") + (r.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

}  // namespace report
}  // namespace hardy
