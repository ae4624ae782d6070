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
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hardy/tolerances.hpp"

namespace hardy {
namespace detail {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;

inline Eigen::Index nnz_count(const Eigen::MatrixXcd& m) {
  Eigen::Index n = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) ++n;
  return n;
}

/// Sparse algebra pays off only when the matrix is large and mostly exact
/// zeros; all candidates come from constructions whose zeros are exact.
inline bool sparse_profitable(const Eigen::MatrixXcd& m) {
  if (m.size() < 4096) return false;
  return nnz_count(m) <= static_cast<Eigen::Index>(0.08 * m.size());
}

inline SpMat to_sparse(const Eigen::MatrixXcd& m) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) trip.emplace_back(i, j, m(i, j));
  SpMat s(m.rows(), m.cols());
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

/// A^H * B, routed through sparse kernels when both factors qualify.
inline Eigen::MatrixXcd mul_adjoint(const Eigen::MatrixXcd& a,
                                    const Eigen::MatrixXcd& b) {
  const bool sa = sparse_profitable(a), sb = sparse_profitable(b);
  if (sa && sb) {
    SpMat p = (SpMat(to_sparse(a).adjoint()) * to_sparse(b)).pruned();
    return Eigen::MatrixXcd(p);
  }
  if (sa) return SpMat(to_sparse(a).adjoint()) * b;
  if (sb) {
    Eigen::MatrixXcd r = (SpMat(to_sparse(b).adjoint()) * a).adjoint();
    return r;
  }
  return a.adjoint() * b;
}

inline Eigen::MatrixXcd mul(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const bool sa = sparse_profitable(a), sb = sparse_profitable(b);
  if (sa && sb) return Eigen::MatrixXcd((to_sparse(a) * to_sparse(b)).pruned());
  if (sa) return to_sparse(a) * b;
  if (sb) return a * to_sparse(b);
  return a * b;
}

inline double gram_max_deviation(const Eigen::MatrixXcd& q) {
  if (q.cols() == 0) return 0.0;
  Eigen::MatrixXcd g = mul_adjoint(q, q);
  g -= Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  return g.cwiseAbs().maxCoeff();
}

/// Orthonormal basis of the column span with a relative rank cutoff.
/// Exactly-zero columns are dropped up front; if the surviving columns are
/// already orthonormal they are returned unchanged. Sparse inputs go
/// through twice-reorthogonalized Gram-Schmidt in column order; dense
/// inputs through a column-pivoted QR.
inline Eigen::MatrixXcd orthonormalize_columns(const Eigen::MatrixXcd& m,
                                               double rank_tol = tol::kRankRel) {
  double max_norm = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    max_norm = std::max(max_norm, m.col(j).norm());
  // a column below the rank cutoff cannot contribute a retained direction
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (m.col(j).norm() > rank_tol * max_norm) keep.push_back(j);
  if (keep.empty()) return Eigen::MatrixXcd(m.rows(), 0);
  Eigen::MatrixXcd a(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) a.col(j) = m.col(keep[j]);

  const bool sparse = sparse_profitable(a);
  if ((sparse || a.cols() <= 8) && gram_max_deviation(a) <= tol::kAlgebra)
    return a;

  if (sparse) {
    Eigen::MatrixXcd q(a.rows(), a.cols());
    Eigen::Index got = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      Eigen::VectorXcd v = a.col(j);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index k = 0; k < got; ++k)
          v -= q.col(k).dot(v) * q.col(k);
      const double n = v.norm();
      if (n > rank_tol * max_norm) q.col(got++) = v / n;
    }
    return q.leftCols(got);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  qr.setThreshold(rank_tol);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return Eigen::MatrixXcd(m.rows(), 0);
  Eigen::MatrixXcd q = qr.householderQ() *
                       Eigen::MatrixXcd::Identity(m.rows(), rank);
  return q;
}

namespace internal {

/// Kernel of a fully stripped core block (no zero rows or columns).
inline Eigen::MatrixXcd kernel_of_core(const Eigen::MatrixXcd& core, double rel_tol) {
  if (core.cols() == 0) return Eigen::MatrixXcd(0, 0);
  if (core.rows() == 0)
    return Eigen::MatrixXcd::Identity(core.cols(), core.cols());
  if (sparse_profitable(core)) {
    // Columns with (numerically) diagonal Gram are injective outright;
    // this keeps permutation-structured operators out of dense SVDs.
    const Eigen::MatrixXcd g = mul_adjoint(core, core);
    const double dmax = g.diagonal().real().maxCoeff();
    double offmax = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      for (Eigen::Index i = 0; i < g.rows(); ++i)
        if (i != j) offmax = std::max(offmax, std::abs(g(i, j)));
    const double dmin = g.diagonal().real().minCoeff();
    if (offmax <= 1e-12 * dmax &&
        std::sqrt(std::max(dmin, 0.0)) > rel_tol * std::sqrt(dmax))
      return Eigen::MatrixXcd(core.cols(), 0);
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(core, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(core.cols() - rank);
}

inline Eigen::MatrixXcd assemble_kernel(
    Eigen::Index n, const std::vector<Eigen::Index>& dead_cols,
    const std::vector<Eigen::Index>& live_cols, const Eigen::MatrixXcd& core_null) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(
      n, static_cast<Eigen::Index>(dead_cols.size()) + core_null.cols());
  Eigen::Index c = 0;
  for (Eigen::Index j : dead_cols) out(j, c++) = 1.0;
  for (Eigen::Index k = 0; k < core_null.cols(); ++k, ++c)
    for (std::size_t j = 0; j < live_cols.size(); ++j)
      out(live_cols[j], c) = core_null(static_cast<Eigen::Index>(j), k);
  return out;
}

}  // namespace internal

/// Orthonormal basis of ker(A) with a relative singular-value cutoff.
/// Structurally zero rows and columns are stripped first; a zero column
/// contributes its coordinate vector to the kernel directly.
inline Eigen::MatrixXcd nullspace_basis(const Eigen::MatrixXcd& a,
                                        double rel_tol = tol::kKernelRel) {
  const Eigen::Index n = a.cols();
  std::vector<Eigen::Index> live_cols, dead_cols;
  for (Eigen::Index j = 0; j < n; ++j)
    (a.col(j).isZero(0.0) ? dead_cols : live_cols).push_back(j);
  std::vector<Eigen::Index> live_rows;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (!a.row(i).isZero(0.0)) live_rows.push_back(i);

  Eigen::MatrixXcd core(static_cast<Eigen::Index>(live_rows.size()),
                        static_cast<Eigen::Index>(live_cols.size()));
  for (std::size_t i = 0; i < live_rows.size(); ++i)
    for (std::size_t j = 0; j < live_cols.size(); ++j)
      core(i, j) = a(live_rows[i], live_cols[j]);

  Eigen::MatrixXcd core_null(core.cols(), 0);
  if (core.cols() > 0) core_null = internal::kernel_of_core(core, rel_tol);
  return internal::assemble_kernel(n, dead_cols, live_cols, core_null);
}

/// Sparse-input overload: the core block is materialized densely only
/// after stripping, so huge mostly-empty assemblies stay cheap.
inline Eigen::MatrixXcd nullspace_basis(const SpMat& a,
                                        double rel_tol = tol::kKernelRel) {
  const Eigen::Index n = a.cols();
  std::vector<bool> row_used(a.rows(), false), col_used(n, false);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.value() != 0.0) {
        row_used[static_cast<std::size_t>(it.row())] = true;
        col_used[static_cast<std::size_t>(it.col())] = true;
      }
  std::vector<Eigen::Index> live_cols, dead_cols, live_rows;
  std::vector<Eigen::Index> row_pos(a.rows(), -1), col_pos(n, -1);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (col_used[static_cast<std::size_t>(j)]) {
      col_pos[j] = static_cast<Eigen::Index>(live_cols.size());
      live_cols.push_back(j);
    } else {
      dead_cols.push_back(j);
    }
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (row_used[static_cast<std::size_t>(i)]) {
      row_pos[i] = static_cast<Eigen::Index>(live_rows.size());
      live_rows.push_back(i);
    }

  Eigen::MatrixXcd core = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(live_rows.size()),
      static_cast<Eigen::Index>(live_cols.size()));
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.value() != 0.0) core(row_pos[it.row()], col_pos[it.col()]) = it.value();

  Eigen::MatrixXcd core_null(core.cols(), 0);
  if (core.cols() > 0) core_null = internal::kernel_of_core(core, rel_tol);
  return internal::assemble_kernel(n, dead_cols, live_cols, core_null);
}

inline Eigen::VectorXcd power_start(Eigen::Index dim) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v[i] = Complex(1.0 + 0.25 * std::sin(1.0 + static_cast<double>(i)),
                   0.25 * std::cos(2.0 + 0.7 * static_cast<double>(i)));
  v.normalize();
  return v;
}

/// Largest singular value of a linear map given as apply/apply-adjoint
/// callbacks, by power iteration on A^H A with a deterministic start.
inline double operator_norm_power(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adjoint,
    Eigen::Index dim, int iters = 120) {
  if (dim == 0) return 0.0;
  Eigen::VectorXcd v = power_start(dim);
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = apply(v);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    Eigen::VectorXcd u = apply_adjoint(w);
    const double un = u.norm();
    sigma = std::sqrt(un);
    if (un == 0.0) return wn;  // defensive; cannot happen for wn > 0
    v = u / un;
  }
  // one Rayleigh pass for the final estimate
  return apply(v).norm();
}

/// Orthonormal basis of the sum of subspaces given by orthonormal bases,
/// grown block by block: each new basis is deflated against the frame with
/// two projection passes and the remainder is orthonormalized.
inline Eigen::MatrixXcd union_basis(const std::vector<Eigen::MatrixXcd>& bases,
                                    double rank_tol = tol::kRankRel) {
  Eigen::MatrixXcd frame;
  for (const auto& b : bases) {
    if (b.cols() == 0) continue;
    if (frame.cols() == 0) {
      frame = b;
      continue;
    }
    Eigen::MatrixXcd d = b - mul(frame, mul_adjoint(frame, b));
    d -= mul(frame, mul_adjoint(frame, d));
    const Eigen::MatrixXcd extra = orthonormalize_columns(d, rank_tol);
    if (extra.cols() == 0) continue;
    Eigen::MatrixXcd grown(frame.rows(), frame.cols() + extra.cols());
    grown << frame, extra;
    frame = std::move(grown);
  }
  if (frame.cols() == 0 && !bases.empty())
    frame = Eigen::MatrixXcd(bases[0].rows(), 0);
  return frame;
}

/// Zeroes entries below a per-column relative threshold; the bases this is
/// applied to are defined up to floating-point dust and the scrub keeps
/// their support degrees honest.
inline void scrub_columns(Eigen::MatrixXcd& m, double rel = 1e-12) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double cutoff = rel * m.col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) <= cutoff) m(i, j) = 0.0;
  }
}

/// Deterministic orthonormal basis of span(Q) that depends only on the span:
/// projections of the ambient coordinate vectors are collected in flat order
/// with modified Gram-Schmidt, then each column's phase is fixed so that its
/// first significant entry is real positive. On monomial spans this
/// reproduces the monomial basis in graded-lex order.
inline Eigen::MatrixXcd canonical_projection_basis(const Eigen::MatrixXcd& q) {
  const Eigen::Index r = q.cols();
  if (r == 0) return q;
  Eigen::MatrixXcd c(r, r);  // collected vectors in span coordinates
  Eigen::Index got = 0;
  for (Eigen::Index i = 0; i < q.rows() && got < r; ++i) {
    Eigen::VectorXcd v = q.row(i).adjoint();  // coordinates of P e_i
    if (v.norm() < 1e-9) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < got; ++j)
        v -= c.col(j).dot(v) * c.col(j);
    const double n = v.norm();
    if (n < 1e-6) continue;
    c.col(got++) = v / n;
  }
  if (got != r)
    throw std::runtime_error("canonical_projection_basis: sweep lost rank");
  Eigen::MatrixXcd b = mul(q, c);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      const Complex x = b(i, j);
      if (std::abs(x) > 1e-8) {
        b.col(j) *= std::conj(x) / std::abs(x);
        break;
      }
    }
  }
  return b;
}

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  if (m.size() <= 262'144) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  }
  auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return m * x; };
  auto apply_adjoint = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return m.adjoint() * y;
  };
  return operator_norm_power(apply, apply_adjoint, m.cols());
}

/// || P_A - P_B ||_2 for orthonormal bases A, B of subspaces of the same
/// ambient space: max of ||(I - P_B) A|| and ||(I - P_A) B||, both formed
/// by explicit subtraction so that tiny residuals are not lost to
/// cancellation. Equals 1 when the dimensions differ.
inline double projection_distance(const Eigen::MatrixXcd& a,
                                  const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("projection_distance: ambient mismatch");
  if (a.cols() != b.cols()) return 1.0;
  if (a.cols() == 0) return 0.0;
  const Eigen::MatrixXcd d1 = a - mul(b, mul_adjoint(b, a));
  const Eigen::MatrixXcd d2 = b - mul(a, mul_adjoint(a, b));
  return std::max(spectral_norm(d1), spectral_norm(d2));
}

}  // namespace detail
}  // namespace hardy
