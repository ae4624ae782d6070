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

#include <json.hpp>
#include <optional>
#include <string>

#include "hardy/beurling.hpp"
#include "hardy/completion.hpp"
#include "hardy/subspace.hpp"
#include "hardy/symbol.hpp"

namespace hardy {

using Json = nlohmann::ordered_json;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io {

inline Json complex_to_json(const Complex& c) {
  return Json::array({c.real(), c.imag()});
}

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw parse_error("expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw parse_error("matrix row count mismatch");
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw parse_error("matrix column count mismatch");
    for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
  }
  return m;
}

/// Symbol schema: { "n", "rows", "cols", "terms": [ { "k", "matrix" } ] };
/// omitted multi-indices are zero coefficients. Elements are the cols = 1
/// case. Terms are emitted in graded-lex order for reproducible files.
inline Json symbol_to_json(const OperatorSymbol& s) {
  Json j;
  j["n"] = s.window.vars;
  j["rows"] = s.rows;
  j["cols"] = s.cols;
  Json terms = Json::array();
  const auto& table = detail::window_table(s.window);
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
    if (s.coeff[p].isZero(0.0)) continue;
    Json term;
    term["k"] = table.indices[p];
    term["matrix"] = matrix_to_json(s.coeff[p]);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline OperatorSymbol symbol_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("rows") ||
      !j.contains("cols") || !j.contains("terms"))
    throw parse_error("symbol: missing n/rows/cols/terms");
  const int n = j["n"].get<int>();
  const int rows = j["rows"].get<int>();
  const int cols = j["cols"].get<int>();
  if (n < 1 || rows < 0 || cols < 0) throw parse_error("symbol: bad shape");
  int degree = 0;
  for (const auto& term : j["terms"]) {
    if (!term.contains("k") || !term.contains("matrix"))
      throw parse_error("symbol term: missing k/matrix");
    const auto k = term["k"].get<std::vector<int>>();
    if (static_cast<int>(k.size()) != n) throw parse_error("symbol term: bad index length");
    for (int e : k) {
      if (e < 0) throw parse_error("symbol term: negative exponent");
      degree = std::max(degree, e);
    }
  }
  OperatorSymbol s(DegreeWindow(n, degree), rows, cols);
  for (const auto& term : j["terms"]) {
    const auto k = term["k"].get<std::vector<int>>();
    s.add_coefficient(k, matrix_from_json(term["matrix"], rows, cols));
  }
  return s;
}

inline Json element_to_json(const HardyElement& e) {
  OperatorSymbol s(e.window, e.dim, 1);
  for (Eigen::Index p = 0; p < e.coeffs.rows(); ++p)
    s.coeff[static_cast<std::size_t>(p)] = e.coeffs.row(p).transpose();
  return symbol_to_json(s);
}

inline HardyElement element_from_json(const Json& j) {
  const OperatorSymbol s = symbol_from_json(j);
  if (s.cols != 1) throw parse_error("element: cols must be 1");
  return s.column(0);
}

inline Json window_to_json(const DegreeWindow& w) {
  Json j;
  j["n"] = w.vars;
  j["d"] = w.degree;
  return j;
}

inline Json subspace_to_json(const SubspaceBasis& s) {
  Json j;
  j["window"] = window_to_json(s.window);
  j["dimE"] = s.dimE;
  Json cols = Json::array();
  for (Eigen::Index c = 0; c < s.dimension(); ++c)
    cols.push_back(element_to_json(s.column_element(c)));
  j["columns"] = std::move(cols);
  return j;
}

inline SubspaceBasis subspace_from_json(const Json& j) {
  if (!j.contains("window") || !j.contains("dimE") || !j.contains("columns"))
    throw parse_error("subspace: missing window/dimE/columns");
  const DegreeWindow w(j["window"]["n"].get<int>(), j["window"]["d"].get<int>());
  const int dim_e = j["dimE"].get<int>();
  Eigen::MatrixXcd cols(w.cardinality() * dim_e,
                        static_cast<Eigen::Index>(j["columns"].size()));
  Eigen::Index c = 0;
  for (const auto& col : j["columns"]) {
    const HardyElement e = element_from_json(col);
    if (e.dim != dim_e) throw parse_error("subspace column: dim mismatch");
    cols.col(c++) = embedded(e, w).flat();
  }
  return SubspaceBasis(w, dim_e, std::move(cols));
}

inline Json inner_certificate_to_json(const InnerCertificate& c) {
  Json j;
  j["gramDeviation"] = c.gramDeviation;
  j["torusDeviationMax"] = c.torusDeviationMax;
  j["sampleCount"] = c.sampleCount;
  j["guardDegree"] = c.guardDegree;
  j["pass"] = c.pass;
  j["tolerance"] = c.tolerance;
  return j;
}

inline Json commutator_report_to_json(const CommutatorReport& r) {
  Json j;
  j["guardDegree"] = r.guardDegree;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict;
  Json pairs = Json::array();
  for (const auto& [key, value] : r.pairNorms) {
    Json p;
    p["i"] = key.first;
    p["j"] = key.second;
    p["norm"] = value;
    pairs.push_back(std::move(p));
  }
  j["pairNorms"] = std::move(pairs);
  return j;
}

inline Json reducing_report_to_json(const ReducingReport& r) {
  Json j;
  j["reducing"] = r.reducing;
  if (r.reducing) {
    j["dimEstar"] = r.constant_basis.cols();
    j["constantBasis"] = matrix_to_json(r.constant_basis);
    j["spanResidual"] = r.span_residual;
  } else {
    Json w;
    w["direction"] = r.witness_direction;
    w["operator"] = r.witness_adjoint ? "adjoint" : "shift";
    w["residual"] = r.witness_residual;
    if (r.witness) w["vector"] = element_to_json(*r.witness);
    j["witness"] = std::move(w);
  }
  return j;
}

inline Json wandering_decomposition_to_json(const WanderingDecomposition& c) {
  Json j;
  j["gramDeviation"] = c.gramDeviation;
  j["spanResidual"] = c.spanResidual;
  j["guardDegree"] = c.guardDegree;
  return j;
}

inline Json rank_report_to_json(const RankReport& r) {
  Json j;
  j["rank"] = r.rank;
  Json w = Json::array();
  for (Eigen::Index i = 0; i < r.witness.size(); ++i)
    w.push_back(complex_to_json(r.witness[i]));
  j["witnessPoint"] = std::move(w);
  Json sv = Json::array();
  for (Eigen::Index i = 0; i < r.singularValues.size(); ++i)
    sv.push_back(r.singularValues[i]);
  j["singularValues"] = std::move(sv);
  j["sampleCount"] = r.sampleCount;
  return j;
}

inline Json dim_check_to_json(const DimCheck& d) {
  Json j;
  j["dimEa"] = d.dimEa;
  j["rankG"] = d.rankG;
  j["dimEc"] = d.dimEc;
  j["satisfied"] = d.satisfied;
  j["rankReport"] = rank_report_to_json(d.rankReport);
  return j;
}

inline Json pair_residual_to_json(const PairResidual& p) {
  Json j;
  j["coefficient"] = p.coefficient;
  j["torus"] = p.torus;
  return j;
}

inline Json residuals_to_json(const CompletionResiduals& r) {
  Json j;
  j["leftInverse"] = pair_residual_to_json(r.leftInverse);
  j["FOmega"] = pair_residual_to_json(r.FOmega);
  j["OmegaF"] = pair_residual_to_json(r.OmegaF);
  j["gammaSolve"] = r.gammaSolve;
  return j;
}

inline Json completion_result_to_json(const CompletionResult& r) {
  Json j;
  j["pass"] = r.pass;
  j["residuals"] = residuals_to_json(r.residuals);
  j["dimCheck"] = dim_check_to_json(r.dimCheck);
  j["innerCert"] = inner_certificate_to_json(r.innerCert);
  j["commutators"] = commutator_report_to_json(r.commutators);
  j["kernelDimension"] = r.kernel_dimension;
  j["theta"] = symbol_to_json(r.theta);
  j["F"] = symbol_to_json(r.F);
  j["omega"] = symbol_to_json(r.omega);
  j["gamma"] = symbol_to_json(r.gamma);
  return j;
}

inline Json completion_error_to_json(const CompletionError& e) {
  Json j;
  j["failedStage"] = stage_name(e.stage);
  j["message"] = e.message;
  if (e.leftInverse) j["leftInverse"] = pair_residual_to_json(*e.leftInverse);
  if (e.commutators) j["commutators"] = commutator_report_to_json(*e.commutators);
  if (e.dimCheck) j["dimCheck"] = dim_check_to_json(*e.dimCheck);
  if (e.gammaResidual) j["gammaSolve"] = *e.gammaResidual;
  return j;
}

inline Json verify_report_to_json(const VerifyReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["FOmega"] = pair_residual_to_json(r.FOmega);
  j["OmegaF"] = pair_residual_to_json(r.OmegaF);
  if (r.innerCert) j["innerCert"] = inner_certificate_to_json(*r.innerCert);
  return j;
}

inline Json tolerances_to_json(const CompletionTolerances& t) {
  Json j;
  j["leftInverse"] = t.leftInverse;
  j["completion"] = t.completion;
  j["gamma"] = t.gamma;
  j["commutator"] = t.commutator;
  j["inner"] = t.inner;
  return j;
}

inline CompletionTolerances tolerances_from_json(const Json& j) {
  CompletionTolerances t;
  if (j.contains("leftInverse")) t.leftInverse = j["leftInverse"].get<double>();
  if (j.contains("completion")) t.completion = j["completion"].get<double>();
  if (j.contains("gamma")) t.gamma = j["gamma"].get<double>();
  if (j.contains("commutator")) t.commutator = j["commutator"].get<double>();
  if (j.contains("inner")) t.inner = j["inner"].get<double>();
  return t;
}

/// Problem schema:
/// { "n", "dimE", "dimEc", "f", "g", "window": {"d"}, "tolerances", "seed" }
inline Json completion_problem_to_json(const CompletionProblem& p) {
  Json j;
  j["n"] = p.vars;
  j["dimE"] = p.dimE;
  j["dimEc"] = p.dimEc;
  j["f"] = symbol_to_json(p.f);
  j["g"] = symbol_to_json(p.g);
  Json w;
  w["d"] = p.window.degree;
  j["window"] = std::move(w);
  j["tolerances"] = tolerances_to_json(p.tolerances);
  j["seed"] = p.seed;
  j["torusGrid"] = p.torusGrid;
  j["rankSamples"] = p.rankSamples;
  return j;
}

inline CompletionProblem completion_problem_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("dimE") || !j.contains("dimEc") ||
      !j.contains("f") || !j.contains("g") || !j.contains("window"))
    throw parse_error("completion problem: missing fields");
  CompletionProblem p;
  p.vars = j["n"].get<int>();
  p.dimE = j["dimE"].get<int>();
  p.dimEc = j["dimEc"].get<int>();
  if (p.vars < 1 || p.dimE < 1 || p.dimEc < p.dimE)
    throw parse_error("completion problem: need n >= 1 and 1 <= dimE <= dimEc");
  p.f = symbol_from_json(j["f"]);
  p.g = symbol_from_json(j["g"]);
  if (!j["window"].contains("d")) throw parse_error("completion problem: window.d missing");
  p.window = DegreeWindow(p.vars, j["window"]["d"].get<int>());
  if (j.contains("tolerances")) p.tolerances = tolerances_from_json(j["tolerances"]);
  if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("torusGrid")) p.torusGrid = j["torusGrid"].get<int>();
  if (j.contains("rankSamples")) p.rankSamples = j["rankSamples"].get<int>();
  return p;
}

/// Subspace problem (analyze / extract-inner inputs):
/// { "n", "dimE", "window": {"d"}, "generators": [element...] }
struct SubspaceProblem {
  int vars = 1;
  int dimE = 1;
  DegreeWindow window;
  std::vector<HardyElement> generators;
  double tolerance = tol::kCommutator;
  int torusGrid = tol::kTorusGrid;
};

inline Json subspace_problem_to_json(const SubspaceProblem& p) {
  Json j;
  j["n"] = p.vars;
  j["dimE"] = p.dimE;
  Json w;
  w["d"] = p.window.degree;
  j["window"] = std::move(w);
  Json gens = Json::array();
  for (const auto& g : p.generators) gens.push_back(element_to_json(g));
  j["generators"] = std::move(gens);
  j["tolerance"] = p.tolerance;
  j["torusGrid"] = p.torusGrid;
  return j;
}

inline SubspaceProblem subspace_problem_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("dimE") || !j.contains("window") ||
      !j.contains("generators"))
    throw parse_error("subspace problem: missing fields");
  SubspaceProblem p;
  p.vars = j["n"].get<int>();
  p.dimE = j["dimE"].get<int>();
  p.window = DegreeWindow(p.vars, j["window"]["d"].get<int>());
  for (const auto& g : j["generators"]) {
    HardyElement e = element_from_json(g);
    if (e.window.vars != p.vars || e.dim != p.dimE)
      throw parse_error("subspace problem: generator shape mismatch");
    p.generators.push_back(std::move(e));
  }
  if (j.contains("tolerance")) p.tolerance = j["tolerance"].get<double>();
  if (j.contains("torusGrid")) p.torusGrid = j["torusGrid"].get<int>();
  return p;
}

}  // namespace io
}  // namespace hardy
