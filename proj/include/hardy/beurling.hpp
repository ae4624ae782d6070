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

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hardy/linalg.hpp"
#include "hardy/subspace.hpp"
#include "hardy/symbol.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

/// Per-variable wandering spaces W_i = S (-) z_i S and their intersection.
struct WanderingData {
  std::vector<SubspaceBasis> perVariable;
  SubspaceBasis joint;
  /// Projection distance between `joint` and the range of the product of
  /// the complementary projections; only computed when the subspace passed
  /// the doubly-commuting test.
  std::optional<double> product_range_distance;
};

/// Numeric evidence that a symbol is inner: exact coefficient Gram of the
/// shifted-column family plus sampled boundary isometry defect.
struct InnerCertificate {
  double gramDeviation = 0.0;
  double torusDeviationMax = 0.0;
  int sampleCount = 0;
  int guardDegree = 0;
  double tolerance = tol::kInner;
  bool pass = true;
};

namespace detail {

inline Eigen::MatrixXcd wandering_coords(const ShiftOps& ops, int var) {
  // S (-) z_i S = null(R_i^H) in S coordinates: x is wandering iff Q x is
  // orthogonal to every T_i Q y, i.e. (T_i Q)^H Q x = R_i^H x = 0.
  return nullspace_basis(ops.compressed[var].adjoint(), tol::kRankRel);
}

}  // namespace detail

/// Orthonormal basis of S (-) z_i S.
inline SubspaceBasis wandering_space(const SubspaceBasis& s, int var) {
  if (var < 0 || var >= s.window.vars)
    throw std::invalid_argument("wandering_space: variable index out of range");
  detail::ShiftOps ops(s);
  const Eigen::MatrixXcd coords = detail::wandering_coords(ops, var);
  return SubspaceBasis(s.window, s.dimE, detail::mul(s.columns, coords));
}

namespace detail {

inline WanderingData joint_wandering_impl(const SubspaceBasis& s,
                                          const ShiftOps& ops,
                                          bool doubly_commuting) {
  WanderingData data;
  for (int i = 0; i < s.window.vars; ++i) {
    const Eigen::MatrixXcd coords = wandering_coords(ops, i);
    data.perVariable.emplace_back(s.window, s.dimE, mul(s.columns, coords));
  }
  data.joint = intersect(data.perVariable);
  if (data.joint.dimension() > 0) {
    // canonical, dust-free representative basis of the joint space
    Eigen::MatrixXcd canonical = canonical_projection_basis(data.joint.columns);
    scrub_columns(canonical);
    data.joint = SubspaceBasis(s.window, s.dimE, std::move(canonical));
  }
  if (doubly_commuting) {
    const Eigen::Index r = s.dimension();
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(r, r);
    for (int i = 0; i < s.window.vars; ++i) {
      const Eigen::MatrixXcd radj = ops.compressed[i].adjoint();
      Eigen::MatrixXcd proj =
          Eigen::MatrixXcd::Identity(r, r) - mul(ops.compressed[i], radj);
      prod = mul(proj, prod);
    }
    const Eigen::MatrixXcd range = orthonormalize_columns(prod);
    data.product_range_distance = projection_distance(
        data.joint.columns, mul(s.columns, range));
  }
  return data;
}

}  // namespace detail

/// All W_i plus their intersection; cross-checked against the product of
/// the complementary projections when S doubly commutes.
inline WanderingData joint_wandering(const SubspaceBasis& s) {
  detail::ShiftOps ops(s);
  const Eigen::MatrixXcd guard = detail::guard_slice_coords(s, s.window.degree - 1);
  const CommutatorReport dc =
      detail::doubly_commuting_report(s, ops, guard, tol::kCommutator);
  return detail::joint_wandering_impl(s, ops, dc.verdict);
}

/// Window-level certificate of S = (+)_k z^k W: orthonormality of the
/// shifted wandering family and its span agreement with S on the guard.
struct WanderingDecomposition {
  double gramDeviation = 0.0;
  double spanResidual = 0.0;
  int guardDegree = 0;
};

inline WanderingDecomposition verify_wandering_decomposition(
    const SubspaceBasis& s, const SubspaceBasis& w) {
  if (!(w.window == s.window) || w.dimE != s.dimE)
    throw std::invalid_argument("verify_wandering_decomposition: shape mismatch");
  if (w.dimension() > 0) {
    const Eigen::MatrixXcd diff =
        w.columns -
        detail::mul(s.columns, detail::mul_adjoint(s.columns, w.columns));
    for (Eigen::Index j = 0; j < diff.cols(); ++j)
      if (diff.col(j).norm() > 1e-8)
        throw std::invalid_argument(
            "verify_wandering_decomposition: W is not contained in S");
  }
  WanderingDecomposition out;
  out.guardDegree = s.window.degree - 1;
  const int g = out.guardDegree;
  const auto& table = detail::window_table(s.window);

  std::vector<Eigen::VectorXcd> family;
  for (Eigen::Index j = 0; j < w.dimension(); ++j) {
    const HardyElement wj = w.column_element(j);
    // support detection tolerates floating-point dust on supplied bases
    const double cutoff = 1e-12 * wj.coeffs.cwiseAbs().maxCoeff();
    MultiIndex deg(s.window.vars, 0);
    for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
      if (wj.coeffs.row(p).cwiseAbs().maxCoeff() <= cutoff) continue;
      for (int i = 0; i < s.window.vars; ++i)
        deg[i] = std::max(deg[i], table.indices[p][i]);
    }
    for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
      const MultiIndex& k = table.indices[p];
      bool fits = true;
      for (int i = 0; i < s.window.vars; ++i)
        if (k[i] + deg[i] > g) { fits = false; break; }
      if (!fits) continue;
      HardyElement shifted(s.window, s.dimE);
      for (int q = 0; q < static_cast<int>(table.indices.size()); ++q) {
        if (wj.coeffs.row(q).cwiseAbs().maxCoeff() <= cutoff) continue;
        MultiIndex t = table.indices[q];
        for (int i = 0; i < s.window.vars; ++i) t[i] += k[i];
        shifted.coeffs.row(table.position(t)) = wj.coeffs.row(q);
      }
      family.push_back(shifted.flat());
    }
  }

  if (family.empty()) return out;
  Eigen::MatrixXcd fam(s.columns.rows(), static_cast<Eigen::Index>(family.size()));
  for (std::size_t j = 0; j < family.size(); ++j)
    fam.col(static_cast<Eigen::Index>(j)) = family[j];
  out.gramDeviation = [&fam] {
    Eigen::MatrixXcd gram = detail::mul_adjoint(fam, fam);
    gram -= Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
    return gram.cwiseAbs().maxCoeff();
  }();

  const Eigen::MatrixXcd guard_coords = detail::guard_slice_coords(s, g);
  const Eigen::MatrixXcd guard_basis = detail::mul(s.columns, guard_coords);
  const Eigen::MatrixXcd fam_ortho = detail::orthonormalize_columns(fam);
  const Eigen::MatrixXcd diff =
      guard_basis -
      detail::mul(fam_ortho, detail::mul_adjoint(fam_ortho, guard_basis));
  double worst = 0.0;
  for (Eigen::Index j = 0; j < diff.cols(); ++j)
    worst = std::max(worst, diff.col(j).norm());
  out.spanResidual = worst;
  return out;
}

/// Certifies boundary isometry of a polynomial symbol: the coefficient Gram
/// of {z^k theta_j : k within the guard} is exact (products never truncate),
/// and the torus samples catch symbol-level mistakes.
inline InnerCertificate innerness_certificate(const OperatorSymbol& theta,
                                              int guard_degree,
                                              int grid_per_axis = tol::kTorusGrid,
                                              double tolerance = tol::kInner) {
  if (grid_per_axis < 1)
    throw std::invalid_argument("innerness_certificate: torus grid must be >= 1");
  if (guard_degree < 0)
    throw std::invalid_argument("innerness_certificate: guard degree must be >= 0");
  InnerCertificate cert;
  cert.guardDegree = guard_degree;
  cert.tolerance = tolerance;
  if (theta.cols > 0) {
    const detail::SpMat m = detail::assemble_mult_sparse(
        theta, DegreeWindow(theta.window.vars, guard_degree));
    Eigen::MatrixXcd gram = Eigen::MatrixXcd(detail::SpMat(m.adjoint()) * m);
    gram -= Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
    cert.gramDeviation = gram.cwiseAbs().maxCoeff();
  }
  const auto grid = torus_grid(theta.window.vars, grid_per_axis);
  cert.sampleCount = static_cast<int>(grid.size());
  double worst = 0.0;
  for (const auto& z : grid) {
    const Eigen::MatrixXcd v = evaluate_symbol(theta, z);
    Eigen::MatrixXcd defect = v.adjoint() * v;
    defect -= Eigen::MatrixXcd::Identity(theta.cols, theta.cols);
    if (defect.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(defect,
                                                         Eigen::EigenvaluesOnly);
      worst = std::max(worst, es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  cert.torusDeviationMax = worst;
  cert.pass = cert.gramDeviation <= tolerance && cert.torusDeviationMax <= tolerance;
  return cert;
}

/// Successful Beurling extraction: Theta's columns are the canonical
/// orthonormal basis of the joint wandering space read as polynomials.
struct InnerExtraction {
  OperatorSymbol theta;
  InnerCertificate certificate;
  CommutatorReport commutators;
  WanderingData wandering;
  double range_distance = 0.0;  // ran M_Theta vs S on the guard window
};

struct ExtractionFailure {
  enum class Reason { zero_subspace, not_doubly_commuting, non_beurling };
  Reason reason = Reason::zero_subspace;
  std::string message;
  std::optional<CommutatorReport> commutators;
  Eigen::Index wandering_dim = 0;
  int dim_e_star = 0;
};

using ExtractionOutcome = std::variant<InnerExtraction, ExtractionFailure>;

/// Constructive Beurling-Lax-Halmos step: from a doubly commuting windowed
/// submodule to an inner symbol with ran M_Theta = S on the guard window.
inline ExtractionOutcome extract_inner(const SubspaceBasis& s,
                                       double commutator_tol = tol::kCommutator,
                                       double inner_tol = tol::kInner,
                                       int torus_grid = tol::kTorusGrid) {
  if (s.dimension() == 0) {
    ExtractionFailure f;
    f.reason = ExtractionFailure::Reason::zero_subspace;
    f.message = "extract_inner: the zero subspace has no inner generator";
    return f;
  }
  detail::ShiftOps ops(s);
  const Eigen::MatrixXcd guard = detail::guard_slice_coords(s, s.window.degree - 1);
  const CommutatorReport dc =
      detail::doubly_commuting_report(s, ops, guard, commutator_tol);
  if (!dc.verdict) {
    ExtractionFailure f;
    f.reason = ExtractionFailure::Reason::not_doubly_commuting;
    f.message = "extract_inner: input is not doubly commuting at this window";
    f.commutators = dc;
    return f;
  }
  WanderingData wandering = detail::joint_wandering_impl(s, ops, true);
  if (wandering.joint.dimension() > s.dimE) {
    ExtractionFailure f;
    f.reason = ExtractionFailure::Reason::non_beurling;
    f.message = "extract_inner: joint wandering space exceeds dim E_*";
    f.commutators = dc;
    f.wandering_dim = wandering.joint.dimension();
    f.dim_e_star = s.dimE;
    return f;
  }

  InnerExtraction out;
  out.commutators = dc;

  // the joint basis is already canonical and scrubbed
  const Eigen::MatrixXcd& basis = wandering.joint.columns;
  const Eigen::Index m = basis.cols();
  if (m == 0) {
    out.theta = OperatorSymbol(DegreeWindow(s.window.vars, 0), s.dimE, 0);
  } else {
    std::vector<HardyElement> cols;
    cols.reserve(m);
    int deg = 0;
    const auto& table = detail::window_table(s.window);
    for (Eigen::Index j = 0; j < m; ++j) {
      HardyElement e = HardyElement::from_flat(s.window, s.dimE, basis.col(j));
      // scrub floating-point dust so the support degree is honest
      const double cutoff = 1e-12 * e.coeffs.cwiseAbs().maxCoeff();
      for (Eigen::Index p = 0; p < e.coeffs.rows(); ++p)
        for (int c = 0; c < s.dimE; ++c)
          if (std::abs(e.coeffs(p, c)) <= cutoff) e.coeffs(p, c) = 0.0;
      for (int p = 0; p < static_cast<int>(table.indices.size()); ++p)
        if (!e.coeffs.row(p).isZero(0.0))
          for (int i = 0; i < s.window.vars; ++i)
            deg = std::max(deg, table.indices[p][i]);
      cols.push_back(std::move(e));
    }
    const DegreeWindow theta_window(s.window.vars, deg);
    for (auto& e : cols) e = truncated(e, theta_window);
    out.theta = OperatorSymbol::from_columns(cols);
  }
  out.wandering = std::move(wandering);
  out.certificate = innerness_certificate(
      out.theta, std::max(0, s.window.degree - 1), torus_grid, inner_tol);

  // range agreement with S on the guard window
  if (out.theta.cols > 0) {
    std::vector<HardyElement> gens;
    for (int j = 0; j < out.theta.cols; ++j) gens.push_back(out.theta.column(j));
    const SubspaceBasis range = submodule_span(gens, s.window);
    const Eigen::MatrixXcd range_guard =
        detail::mul(range.columns, detail::guard_slice_coords(range, s.window.degree - 1));
    const Eigen::MatrixXcd s_guard = detail::mul(s.columns, guard);
    out.range_distance = detail::projection_distance(range_guard, s_guard);
  } else {
    out.range_distance = s.dimension() == 0 ? 0.0 : 1.0;
  }
  return out;
}

}  // namespace hardy
