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
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardy/element.hpp"
#include "hardy/linalg.hpp"
#include "hardy/multi_index.hpp"
#include "hardy/symbol.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

/// Raised when an operation that needs shift invariance is handed a
/// subspace that the window-level check rejects.
struct not_submodule_error : std::runtime_error {
  int direction;
  double residual;
  not_submodule_error(int var, double res)
      : std::runtime_error("not a submodule at this window: shift direction " +
                           std::to_string(var) + " leaves the subspace (residual " +
                           std::to_string(res) + ")"),
        direction(var), residual(res) {}
};

/// Orthonormal coefficient-space basis of a closed subspace at a fixed
/// window. The zero subspace (0 columns) is a first-class value.
struct SubspaceBasis {
  DegreeWindow window;
  int dimE = 1;
  Eigen::MatrixXcd columns;  // ambient x dim, orthonormal

  SubspaceBasis() : columns(1, 0) {}

  SubspaceBasis(const DegreeWindow& w, int dim_e, Eigen::MatrixXcd cols)
      : window(w), dimE(dim_e), columns(std::move(cols)) {
    if (columns.rows() != w.cardinality() * dim_e)
      throw std::invalid_argument("SubspaceBasis: ambient dimension mismatch");
    if (columns.cols() > columns.rows())
      throw std::invalid_argument("SubspaceBasis: more columns than ambient dimension");
    if (detail::gram_max_deviation(columns) > tol::kOrtho)
      throw std::invalid_argument("SubspaceBasis: columns are not orthonormal");
  }

  Eigen::Index ambient_dim() const { return columns.rows(); }
  Eigen::Index dimension() const { return columns.cols(); }

  HardyElement column_element(Eigen::Index j) const {
    return HardyElement::from_flat(window, dimE, columns.col(j));
  }

  static SubspaceBasis full_space(const DegreeWindow& w, int dim_e) {
    const Eigen::Index n = w.cardinality() * dim_e;
    return SubspaceBasis(w, dim_e, Eigen::MatrixXcd::Identity(n, n));
  }
};

/// Span of the generators, orthonormalized with a relative rank cutoff.
/// An empty generator list yields the zero subspace.
inline SubspaceBasis orthonormalize(const std::vector<HardyElement>& generators,
                                    double rank_tol = tol::kRankRel) {
  if (generators.empty()) return SubspaceBasis();
  const DegreeWindow w = generators[0].window;
  const int dim_e = generators[0].dim;
  Eigen::MatrixXcd m(w.cardinality() * dim_e,
                     static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (!(generators[j].window == w) || generators[j].dim != dim_e)
      throw std::invalid_argument("orthonormalize: generators must share shape");
    m.col(static_cast<Eigen::Index>(j)) = generators[j].flat();
  }
  return SubspaceBasis(w, dim_e, detail::orthonormalize_columns(m, rank_tol));
}

/// Closure of the generators under monomial multiplication within the
/// window: span { z^k g : k + deg(g) inside the window }, orthonormalized.
inline SubspaceBasis submodule_span(const std::vector<HardyElement>& generators,
                                    const DegreeWindow& window,
                                    double rank_tol = tol::kRankRel) {
  if (generators.empty()) return SubspaceBasis();
  const int dim_e = generators[0].dim;
  std::vector<HardyElement> family;
  const auto& table = detail::window_table(window);
  for (const auto& g : generators) {
    if (g.window.vars != window.vars || g.dim != dim_e)
      throw std::invalid_argument("submodule_span: generator shape mismatch");
    if (g.window.degree > window.degree) {
      // only the window representation may shrink, not the support
      const auto& gt = detail::window_table(g.window);
      for (int p = 0; p < static_cast<int>(gt.indices.size()); ++p)
        if (!g.coeffs.row(p).isZero(0.0) && !window.contains(gt.indices[p]))
          throw std::invalid_argument("submodule_span: generator degree exceeds window");
    }
    const HardyElement ge =
        g.window.degree <= window.degree ? embedded(g, window) : truncated(g, window);
    // per-variable support degree of the generator
    MultiIndex deg(window.vars, 0);
    const auto& gt = detail::window_table(ge.window);
    for (int p = 0; p < static_cast<int>(gt.indices.size()); ++p) {
      if (ge.coeffs.row(p).isZero(0.0)) continue;
      for (int i = 0; i < window.vars; ++i)
        deg[i] = std::max(deg[i], gt.indices[p][i]);
    }
    for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
      const MultiIndex& k = table.indices[p];
      bool fits = true;
      for (int i = 0; i < window.vars; ++i)
        if (k[i] + deg[i] > window.degree) { fits = false; break; }
      if (!fits) continue;
      HardyElement shifted(window, dim_e);
      for (int q = 0; q < static_cast<int>(gt.indices.size()); ++q) {
        if (ge.coeffs.row(q).isZero(0.0)) continue;
        MultiIndex t = gt.indices[q];
        for (int i = 0; i < window.vars; ++i) t[i] += k[i];
        shifted.coeffs.row(table.position(t)) = ge.coeffs.row(q);
      }
      family.push_back(std::move(shifted));
    }
  }
  return orthonormalize(family, rank_tol);
}

/// Orthogonal projection of f onto S.
inline HardyElement project(const SubspaceBasis& s, const HardyElement& f) {
  if (!(f.window == s.window) || f.dim != s.dimE)
    throw std::invalid_argument("project: shape mismatch");
  const Eigen::VectorXcd coords = s.columns.adjoint() * f.flat();
  return HardyElement::from_flat(s.window, s.dimE, s.columns * coords);
}

/// Intersection via the averaged-projection spectral method: eigenvectors
/// of (1/m) sum P_i with eigenvalue within rank_tol of 1, computed in the
/// orthonormal frame of the joint span.
inline SubspaceBasis intersect(const std::vector<SubspaceBasis>& bases,
                               double rank_tol = tol::kRankRel) {
  if (bases.empty()) throw std::invalid_argument("intersect: empty list");
  const auto& first = bases[0];
  for (const auto& b : bases) {
    if (!(b.window == first.window) || b.dimE != first.dimE)
      throw std::invalid_argument("intersect: ambient space mismatch");
    if (b.dimension() == 0)
      return SubspaceBasis(first.window, first.dimE,
                           Eigen::MatrixXcd(first.columns.rows(), 0));
  }
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(bases.size());
  for (const auto& b : bases) blocks.push_back(b.columns);
  const Eigen::MatrixXcd frame = detail::union_basis(blocks);
  const Eigen::Index s = frame.cols();
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(s, s);
  for (const auto& b : bases) {
    const Eigen::MatrixXcd c_i = detail::mul_adjoint(frame, b.columns);
    avg += c_i * c_i.adjoint();
  }
  avg /= static_cast<double>(bases.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(avg);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s; ++i)
    if (es.eigenvalues()(i) >= 1.0 - rank_tol) keep.push_back(i);
  Eigen::MatrixXcd sel(s, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) sel.col(i) = es.eigenvectors().col(keep[i]);
  Eigen::MatrixXcd cols = detail::mul(frame, sel);
  return SubspaceBasis(first.window, first.dimE,
                       detail::orthonormalize_columns(cols));
}

namespace detail {

/// Sparse matrix of the window-compressed shift z_i on flat coefficients:
/// flat(k + e_i, j) <- flat(k, j) for k_i <= d-1; top degree is dropped.
inline SpMat shift_matrix(const DegreeWindow& w, int dim_e, int var) {
  const auto& table = window_table(w);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
    MultiIndex k = table.indices[p];
    if (k[var] >= w.degree) continue;
    ++k[var];
    const int q = table.position(k);
    for (int j = 0; j < dim_e; ++j)
      trip.emplace_back(q * dim_e + j, p * dim_e + j, Complex(1.0));
  }
  const Eigen::Index n = table.indices.size() * static_cast<Eigen::Index>(dim_e);
  SpMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

/// Rows of the flat layout whose multi-index has every exponent <= g.
inline std::vector<Eigen::Index> guard_flat_rows(const DegreeWindow& w, int dim_e,
                                                 int guard_degree) {
  const auto& table = window_table(w);
  std::vector<Eigen::Index> rows;
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
    bool in = true;
    for (int e : table.indices[p])
      if (e > guard_degree) { in = false; break; }
    if (in)
      for (int j = 0; j < dim_e; ++j)
        rows.push_back(static_cast<Eigen::Index>(p) * dim_e + j);
  }
  return rows;
}

/// Coordinates (w.r.t. S's columns) of an orthonormal basis of the part of
/// S supported in per-variable degree <= guard_degree.
inline Eigen::MatrixXcd guard_slice_coords(const SubspaceBasis& s, int guard_degree) {
  std::vector<bool> in_guard(s.columns.rows(), false);
  for (Eigen::Index r : guard_flat_rows(s.window, s.dimE, guard_degree))
    in_guard[static_cast<std::size_t>(r)] = true;
  Eigen::Index n_out = 0;
  for (bool b : in_guard)
    if (!b) ++n_out;
  Eigen::MatrixXcd outside(n_out, s.dimension());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.columns.rows(); ++i)
    if (!in_guard[static_cast<std::size_t>(i)]) outside.row(r++) = s.columns.row(i);
  return nullspace_basis(outside, tol::kRankRel);
}

/// One-time per-subspace shift compressions R_i = Q^H T_i Q, shared by the
/// commutation test, wandering spaces and the extraction. The shifted basis
/// images are never stored; invariance residuals only need
/// ||T_i q||^2 = ||q restricted to rows with k_i <= d-1||^2.
struct ShiftOps {
  const SubspaceBasis& s;
  std::vector<Eigen::MatrixXcd> compressed;  // R_i

  explicit ShiftOps(const SubspaceBasis& basis, bool check_invariance = true)
      : s(basis) {
    const int n = s.window.vars;
    const bool sparse_q = sparse_profitable(s.columns);
    SpMat qs;
    if (sparse_q) qs = to_sparse(s.columns);
    std::vector<Eigen::Index> guarded;
    if (check_invariance)
      for (Eigen::Index j = 0; j < s.dimension(); ++j)
        if (column_in_guard(s, j)) guarded.push_back(j);
    compressed.reserve(n);
    for (int i = 0; i < n; ++i) {
      const SpMat t = shift_matrix(s.window, s.dimE, i);
      Eigen::MatrixXcd r;
      if (sparse_q) {
        r = Eigen::MatrixXcd(SpMat(SpMat(qs.adjoint()) * SpMat((t * qs).pruned())));
      } else {
        r = s.columns.adjoint() * (t * s.columns);
      }
      if (!guarded.empty()) {
        // Columns supported in the guard window must shift back into S;
        // the residual is formed by explicit subtraction.
        Eigen::MatrixXcd cols(s.columns.rows(),
                              static_cast<Eigen::Index>(guarded.size()));
        Eigen::MatrixXcd rcols(s.dimension(),
                               static_cast<Eigen::Index>(guarded.size()));
        for (std::size_t j = 0; j < guarded.size(); ++j) {
          cols.col(static_cast<Eigen::Index>(j)) = s.columns.col(guarded[j]);
          rcols.col(static_cast<Eigen::Index>(j)) = r.col(guarded[j]);
        }
        const Eigen::MatrixXcd diff = t * cols - mul(s.columns, rcols);
        for (Eigen::Index j = 0; j < diff.cols(); ++j)
          if (diff.col(j).norm() > tol::kInvariance)
            throw not_submodule_error(i, diff.col(j).norm());
      }
      compressed.push_back(std::move(r));
    }
  }

  static bool column_in_guard(const SubspaceBasis& s, Eigen::Index j) {
    const auto& table = window_table(s.window);
    for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
      bool boundary = false;
      for (int e : table.indices[p])
        if (e > s.window.degree - 1) { boundary = true; break; }
      if (boundary &&
          !s.columns.col(j)
               .segment(static_cast<Eigen::Index>(p) * s.dimE, s.dimE)
               .isZero(0.0))
        return false;
    }
    return true;
  }

  /// Residual of shift-invariance on the guard slice: C holds S-coordinates
  /// of an orthonormal basis of S cap G and `ambient` its ambient columns.
  double guard_invariance_residual(int i, const Eigen::MatrixXcd& c,
                                   const Eigen::MatrixXcd& ambient) const {
    if (c.cols() == 0) return 0.0;
    const SpMat t = shift_matrix(s.window, s.dimE, i);
    const Eigen::MatrixXcd diff = t * ambient - mul(s.columns, mul(compressed[i], c));
    double worst = 0.0;
    for (Eigen::Index j = 0; j < diff.cols(); ++j)
      worst = std::max(worst, diff.col(j).norm());
    return worst;
  }
};

}  // namespace detail

/// Matrix of the restricted shift R_{z_i} = P_S M_{z_i}|_S in S's column
/// basis. Rejects subspaces whose guard-supported columns shift outside S.
inline Eigen::MatrixXcd compress_shift(const SubspaceBasis& s, int var) {
  if (var < 0 || var >= s.window.vars)
    throw std::invalid_argument("compress_shift: variable index out of range");
  detail::ShiftOps ops(s);
  return ops.compressed[var];
}

/// Pairwise norms of R_i R_j^* - R_j^* R_i restricted to the guard window.
struct CommutatorReport {
  int guardDegree = 0;
  double tolerance = tol::kCommutator;
  bool verdict = true;
  std::map<std::pair<int, int>, double> pairNorms;  // key (i, j), i < j

  double max_pair_norm() const {
    double m = 0.0;
    for (const auto& [k, v] : pairNorms) m = std::max(m, v);
    return m;
  }
};

namespace detail {

inline CommutatorReport doubly_commuting_report(const SubspaceBasis& s,
                                                const ShiftOps& ops,
                                                const Eigen::MatrixXcd& guard_coords,
                                                double tolerance) {
  CommutatorReport report;
  report.guardDegree = s.window.degree - 1;
  report.tolerance = tolerance;
  const int n = s.window.vars;
  const Eigen::MatrixXcd guard_ambient = mul(s.columns, guard_coords);
  for (int i = 0; i < n; ++i) {
    const double inv = ops.guard_invariance_residual(i, guard_coords, guard_ambient);
    if (inv > tol::kInvariance) throw not_submodule_error(i, inv);
  }
  std::vector<SpMat> sparse_r(n), sparse_radj(n);
  std::vector<bool> use_sparse(n, false);
  if (s.dimension() > 384) {
    for (int i = 0; i < n; ++i)
      if (sparse_profitable(ops.compressed[i])) {
        sparse_r[i] = to_sparse(ops.compressed[i]);
        sparse_radj[i] = SpMat(sparse_r[i].adjoint());
        use_sparse[i] = true;
      }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& ri = ops.compressed[i];
      const auto& rj = ops.compressed[j];
      double norm = 0.0;
      if (guard_coords.cols() > 0) {
        if (s.dimension() <= 384) {
          const Eigen::MatrixXcd k =
              ri * rj.adjoint() - rj.adjoint() * ri;
          Eigen::BDCSVD<Eigen::MatrixXcd> svd(k * guard_coords);
          norm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
        } else {
          const auto apply_r = [&](int v, bool adjoint,
                                   const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
            if (use_sparse[v])
              return adjoint ? Eigen::VectorXcd(sparse_radj[v] * x)
                             : Eigen::VectorXcd(sparse_r[v] * x);
            return adjoint ? Eigen::VectorXcd(ops.compressed[v].adjoint() * x)
                           : Eigen::VectorXcd(ops.compressed[v] * x);
          };
          auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
            const Eigen::VectorXcd v = guard_coords * x;
            return apply_r(i, false, apply_r(j, true, v)) -
                   apply_r(j, true, apply_r(i, false, v));
          };
          auto apply_adjoint = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
            const Eigen::VectorXcd w = apply_r(j, false, apply_r(i, true, y)) -
                                       apply_r(i, true, apply_r(j, false, y));
            return guard_coords.adjoint() * w;
          };
          norm = operator_norm_power(apply, apply_adjoint, guard_coords.cols());
        }
      }
      report.pairNorms[{i, j}] = norm;
    }
  }
  report.verdict = report.max_pair_norm() <= tolerance;
  return report;
}

}  // namespace detail

/// Window-level test of R_{z_i} R_{z_j}^* = R_{z_j}^* R_{z_i} for all pairs,
/// with inputs restricted to per-variable degree <= d-1 so the compressed
/// operators agree with the unbounded ones there.
inline CommutatorReport doubly_commuting_test(const SubspaceBasis& s,
                                              double tolerance = tol::kCommutator) {
  if (s.window.degree < 1)
    throw std::invalid_argument("doubly_commuting_test: window degree must be >= 1");
  detail::ShiftOps ops(s);
  const Eigen::MatrixXcd guard = detail::guard_slice_coords(s, s.window.degree - 1);
  return detail::doubly_commuting_report(s, ops, guard, tolerance);
}

/// Outcome of the reducing-submodule test. When the subspace reduces, it is
/// H^2_{E*} on the window and `constant_basis` holds an orthonormal basis
/// of E* as columns; otherwise a witness records the violated invariance.
struct ReducingReport {
  bool reducing = false;
  Eigen::MatrixXcd constant_basis;      // dimE x dim E*, valid when reducing
  double span_residual = 0.0;           // distance of S from H^2_{E*}
  int witness_direction = -1;           // valid when not reducing
  bool witness_adjoint = false;         // true: M*_{z_i} escapes, false: M_{z_i}
  double witness_residual = 0.0;
  std::optional<HardyElement> witness;  // violating vector
};

inline ReducingReport reducing_test(const SubspaceBasis& s) {
  ReducingReport report;
  if (s.dimension() == 0) {
    report.reducing = true;
    report.constant_basis = Eigen::MatrixXcd(s.dimE, 0);
    return report;
  }
  detail::ShiftOps ops(s, /*check_invariance=*/false);
  const Eigen::MatrixXcd guard =
      detail::guard_slice_coords(s, std::max(0, s.window.degree - 1));
  const Eigen::MatrixXcd guard_ambient = detail::mul(s.columns, guard);

  // forward shifts on the guard slice
  for (int i = 0; i < s.window.vars; ++i) {
    const detail::SpMat t = detail::shift_matrix(s.window, s.dimE, i);
    const Eigen::MatrixXcd diff =
        t * guard_ambient -
        detail::mul(s.columns, detail::mul(ops.compressed[i], guard));
    for (Eigen::Index j = 0; j < diff.cols(); ++j) {
      const double res = diff.col(j).norm();
      if (res > tol::kInvariance) {
        report.reducing = false;
        report.witness_direction = i;
        report.witness_adjoint = false;
        report.witness_residual = res;
        report.witness =
            HardyElement::from_flat(s.window, s.dimE, guard_ambient.col(j));
        return report;
      }
    }
  }
  // backward shifts on every column (they never leave the window)
  for (int i = 0; i < s.window.vars; ++i) {
    const detail::SpMat tadj(detail::shift_matrix(s.window, s.dimE, i).adjoint());
    const Eigen::MatrixXcd diff =
        tadj * s.columns -
        detail::mul(s.columns, Eigen::MatrixXcd(ops.compressed[i].adjoint()));
    for (Eigen::Index j = 0; j < s.dimension(); ++j) {
      const double res = diff.col(j).norm();
      if (res > tol::kInvariance) {
        report.reducing = false;
        report.witness_direction = i;
        report.witness_adjoint = true;
        report.witness_residual = res;
        report.witness = s.column_element(j);
        return report;
      }
    }
  }

  report.reducing = true;
  // E* = constant elements of S
  const Eigen::MatrixXcd coords = detail::nullspace_basis(
      s.columns.bottomRows(s.columns.rows() - s.dimE), tol::kRankRel);
  Eigen::MatrixXcd constants = s.columns * coords;  // supported in k = 0
  report.constant_basis =
      detail::canonical_projection_basis(constants.topRows(s.dimE));
  // S must equal H^2_{E*} within the window
  const Eigen::Index m = report.constant_basis.cols();
  const auto& table = detail::window_table(s.window);
  Eigen::MatrixXcd model(s.columns.rows(),
                         static_cast<Eigen::Index>(table.indices.size()) * m);
  model.setZero();
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p)
    for (Eigen::Index l = 0; l < m; ++l)
      model.col(static_cast<Eigen::Index>(p) * m + l)
          .segment(static_cast<Eigen::Index>(p) * s.dimE, s.dimE) =
          report.constant_basis.col(l);
  report.span_residual = detail::projection_distance(s.columns, model);
  return report;
}

/// Alternating sum over subsets of variables of
/// M_{z_{i_1}}...M_{z_{i_l}} M*_{z_{i_1}}...M*_{z_{i_l}} on the window,
/// with adjoints applied first. Equals the projection onto constants.
inline Eigen::MatrixXcd defect_projection(const DegreeWindow& window, int dim_e) {
  if (window.degree < 1)
    throw std::invalid_argument("defect_projection: window degree must be >= 1");
  const Eigen::Index n = window.cardinality() * dim_e;
  std::vector<detail::SpMat> shifts;
  for (int i = 0; i < window.vars; ++i)
    shifts.push_back(detail::shift_matrix(window, dim_e, i));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  const unsigned subsets = 1u << window.vars;
  for (unsigned mask = 0; mask < subsets; ++mask) {
    detail::SpMat term(n, n);
    term.setIdentity();
    int parity = 0;
    // adjoints first (ascending), then the shifts (descending) on the left
    for (int i = window.vars - 1; i >= 0; --i)
      if (mask & (1u << i)) {
        term = detail::SpMat(shifts[i].adjoint()) * term;
        ++parity;
      }
    for (int i = window.vars - 1; i >= 0; --i)
      if (mask & (1u << i)) term = shifts[i] * term;
    d += (parity % 2 == 0 ? 1.0 : -1.0) * Eigen::MatrixXcd(term);
  }
  return d;
}

}  // namespace hardy
