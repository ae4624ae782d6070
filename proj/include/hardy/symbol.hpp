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
#include <Eigen/Sparse>
#include <cmath>
#include <vector>

#include "hardy/element.hpp"
#include "hardy/multi_index.hpp"

namespace hardy {

/// Matrix-valued polynomial symbol Phi(z) = sum_k Phi_k z^k with
/// coefficients Phi_k of fixed shape rows x cols, indexed by the window.
struct OperatorSymbol {
  DegreeWindow window;
  int rows = 1;
  int cols = 1;
  std::vector<Eigen::MatrixXcd> coeff;  // one matrix per graded-lex position

  OperatorSymbol() { coeff.assign(1, Eigen::MatrixXcd::Zero(1, 1)); }

  OperatorSymbol(const DegreeWindow& w, int r, int c)
      : window(w), rows(r), cols(c) {
    if (r < 0 || c < 0) throw std::invalid_argument("OperatorSymbol: bad shape");
    coeff.assign(static_cast<std::size_t>(w.cardinality()),
                 Eigen::MatrixXcd::Zero(r, c));
  }

  const Eigen::MatrixXcd& coefficient_at(int pos) const { return coeff[pos]; }

  Eigen::MatrixXcd coefficient(const MultiIndex& k) const {
    const int p = detail::window_table(window).position(k);
    if (p < 0) return Eigen::MatrixXcd::Zero(rows, cols);
    return coeff[p];
  }

  void set_coefficient(const MultiIndex& k, const Eigen::MatrixXcd& m) {
    const int p = detail::window_table(window).position(k);
    if (p < 0) throw std::invalid_argument("OperatorSymbol: index outside window");
    if (m.rows() != rows || m.cols() != cols)
      throw std::invalid_argument("OperatorSymbol: coefficient shape mismatch");
    coeff[p] = m;
  }

  void add_coefficient(const MultiIndex& k, const Eigen::MatrixXcd& m) {
    const int p = detail::window_table(window).position(k);
    if (p < 0) throw std::invalid_argument("OperatorSymbol: index outside window");
    coeff[p] += m;
  }

  /// Largest per-variable exponent present with a nonzero coefficient.
  MultiIndex support_degree() const {
    MultiIndex deg(window.vars, 0);
    const auto& table = detail::window_table(window);
    for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
      if (coeff[p].isZero(0.0)) continue;
      for (int i = 0; i < window.vars; ++i)
        deg[i] = std::max(deg[i], table.indices[p][i]);
    }
    return deg;
  }

  int max_degree() const {
    const MultiIndex d = support_degree();
    int m = 0;
    for (int e : d) m = std::max(m, e);
    return m;
  }

  static OperatorSymbol constant(const Eigen::MatrixXcd& m, int vars) {
    OperatorSymbol s(DegreeWindow(vars, 0), static_cast<int>(m.rows()),
                     static_cast<int>(m.cols()));
    s.coeff[0] = m;
    return s;
  }

  static OperatorSymbol identity(int dim, int vars) {
    return constant(Eigen::MatrixXcd::Identity(dim, dim), vars);
  }

  /// Column j as an E_rows-valued element over the symbol's window.
  HardyElement column(int j) const {
    if (j < 0 || j >= cols) throw std::invalid_argument("column: index out of range");
    HardyElement e(window, rows);
    for (std::size_t p = 0; p < coeff.size(); ++p)
      e.coeffs.row(static_cast<Eigen::Index>(p)) = coeff[p].col(j).transpose();
    return e;
  }

  /// Assembles a symbol whose columns are the given elements (shared window
  /// and value dimension required).
  static OperatorSymbol from_columns(const std::vector<HardyElement>& columns) {
    if (columns.empty())
      throw std::invalid_argument("from_columns: need at least one column");
    OperatorSymbol s(columns[0].window, columns[0].dim,
                     static_cast<int>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (!(columns[j].window == s.window) || columns[j].dim != s.rows)
        throw std::invalid_argument("from_columns: shape mismatch");
      for (std::size_t p = 0; p < s.coeff.size(); ++p)
        s.coeff[p].col(static_cast<Eigen::Index>(j)) =
            columns[j].coeffs.row(static_cast<Eigen::Index>(p)).transpose();
    }
    return s;
  }
};

/// Exact polynomial product Phi * h; the output window is the sum of the
/// two degree caps so no coefficient is lost.
inline HardyElement apply_symbol(const OperatorSymbol& phi, const HardyElement& h) {
  if (phi.cols != h.dim)
    throw std::invalid_argument("apply_symbol: shape mismatch");
  if (phi.window.vars != h.window.vars)
    throw std::invalid_argument("apply_symbol: variable count mismatch");
  const DegreeWindow out_w(phi.window.vars, phi.window.degree + h.window.degree);
  HardyElement out(out_w, phi.rows);
  const auto& tp = detail::window_table(phi.window);
  const auto& th = detail::window_table(h.window);
  const auto& to = detail::window_table(out_w);
  for (int p = 0; p < static_cast<int>(tp.indices.size()); ++p) {
    if (phi.coeff[p].isZero(0.0)) continue;
    for (int q = 0; q < static_cast<int>(th.indices.size()); ++q) {
      MultiIndex k = tp.indices[p];
      for (int i = 0; i < out_w.vars; ++i) k[i] += th.indices[q][i];
      out.coeffs.row(to.position(k)) +=
          (phi.coeff[p] * h.coeffs.row(q).transpose()).transpose();
    }
  }
  return out;
}

/// Exact product of two symbols (A then B applied right-to-left: (A*B)h = A(Bh)).
inline OperatorSymbol multiply(const OperatorSymbol& a, const OperatorSymbol& b) {
  if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
  if (a.window.vars != b.window.vars)
    throw std::invalid_argument("multiply: variable count mismatch");
  const DegreeWindow out_w(a.window.vars, a.window.degree + b.window.degree);
  OperatorSymbol out(out_w, a.rows, b.cols);
  const auto& ta = detail::window_table(a.window);
  const auto& tb = detail::window_table(b.window);
  const auto& to = detail::window_table(out_w);
  for (int p = 0; p < static_cast<int>(ta.indices.size()); ++p) {
    if (a.coeff[p].isZero(0.0)) continue;
    for (int q = 0; q < static_cast<int>(tb.indices.size()); ++q) {
      if (b.coeff[q].isZero(0.0)) continue;
      MultiIndex k = ta.indices[p];
      for (int i = 0; i < out_w.vars; ++i) k[i] += tb.indices[q][i];
      out.coeff[to.position(k)] += a.coeff[p] * b.coeff[q];
    }
  }
  return out;
}

inline OperatorSymbol truncated(const OperatorSymbol& s, const DegreeWindow& w) {
  if (w.vars != s.window.vars)
    throw std::invalid_argument("truncated: variable count mismatch");
  OperatorSymbol out(w, s.rows, s.cols);
  const auto& src = detail::window_table(s.window);
  const auto& dst = detail::window_table(w);
  for (int p = 0; p < static_cast<int>(dst.indices.size()); ++p) {
    const int q = src.position(dst.indices[p]);
    if (q >= 0) out.coeff[p] = s.coeff[q];
  }
  return out;
}

inline OperatorSymbol embedded_degree(const OperatorSymbol& s, const DegreeWindow& w) {
  if (w.vars != s.window.vars || w.degree < s.window.degree)
    throw std::invalid_argument("embedded_degree: target window too small");
  OperatorSymbol out(w, s.rows, s.cols);
  const auto& src = detail::window_table(s.window);
  const auto& dst = detail::window_table(w);
  for (int p = 0; p < static_cast<int>(src.indices.size()); ++p)
    out.coeff[dst.position(src.indices[p])] = s.coeff[p];
  return out;
}

inline OperatorSymbol operator-(const OperatorSymbol& a, const OperatorSymbol& b) {
  if (a.rows != b.rows || a.cols != b.cols || a.window.vars != b.window.vars)
    throw std::invalid_argument("OperatorSymbol -: shape mismatch");
  const DegreeWindow w(a.window.vars, std::max(a.window.degree, b.window.degree));
  OperatorSymbol out = embedded_degree(a, w);
  const OperatorSymbol bb = embedded_degree(b, w);
  for (std::size_t p = 0; p < out.coeff.size(); ++p) out.coeff[p] -= bb.coeff[p];
  return out;
}

/// Max |entry| over all coefficient matrices.
inline double max_coefficient_abs(const OperatorSymbol& s) {
  double m = 0.0;
  for (const auto& c : s.coeff)
    if (c.size() > 0) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

/// Pointwise value sum_k Phi_k z^k.
inline Eigen::MatrixXcd evaluate_symbol(const OperatorSymbol& s,
                                        const Eigen::VectorXcd& z) {
  if (z.size() != s.window.vars)
    throw std::invalid_argument("evaluate_symbol: point dimension mismatch");
  const auto& table = detail::window_table(s.window);
  std::vector<std::vector<Complex>> pow(s.window.vars);
  for (int i = 0; i < s.window.vars; ++i) {
    pow[i].resize(s.window.degree + 1);
    pow[i][0] = 1.0;
    for (int e = 1; e <= s.window.degree; ++e) pow[i][e] = pow[i][e - 1] * z[i];
  }
  Eigen::MatrixXcd value = Eigen::MatrixXcd::Zero(s.rows, s.cols);
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
    if (s.coeff[p].isZero(0.0)) continue;
    Complex m = 1.0;
    for (int i = 0; i < s.window.vars; ++i) m *= pow[i][table.indices[p][i]];
    value += m * s.coeff[p];
  }
  return value;
}

/// Degree-d truncation of exp(c z_i) as a scalar symbol in `vars` variables:
/// coefficient c^k / k! at k e_i.
inline OperatorSymbol exp_monomial_symbol(Complex c, int var,
                                          const DegreeWindow& window) {
  if (var < 0 || var >= window.vars)
    throw std::invalid_argument("exp_monomial_symbol: variable index out of range");
  OperatorSymbol s(window, 1, 1);
  Complex term = 1.0;
  for (int k = 0; k <= window.degree; ++k) {
    MultiIndex idx(window.vars, 0);
    idx[var] = k;
    s.set_coefficient(idx, Eigen::MatrixXcd::Constant(1, 1, term));
    term *= c / static_cast<double>(k + 1);
  }
  return s;
}

namespace detail {

/// Sparse matrix of M_Phi from the monomial basis of (in_window, Phi.cols)
/// to the monomial basis of (in_window.d + Phi.window.d, Phi.rows).
inline Eigen::SparseMatrix<Complex> assemble_mult_sparse(
    const OperatorSymbol& phi, const DegreeWindow& in_window) {
  if (in_window.vars != phi.window.vars)
    throw std::invalid_argument("assemble_mult_matrix: variable count mismatch");
  const DegreeWindow out_window(in_window.vars,
                                in_window.degree + phi.window.degree);
  const auto& ti = window_table(in_window);
  const auto& tp = window_table(phi.window);
  const auto& to = window_table(out_window);
  const Eigen::Index n_rows = to.indices.size() * phi.rows;
  const Eigen::Index n_cols = ti.indices.size() * phi.cols;
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int p = 0; p < static_cast<int>(tp.indices.size()); ++p) {
    if (phi.coeff[p].isZero(0.0)) continue;
    for (int q = 0; q < static_cast<int>(ti.indices.size()); ++q) {
      MultiIndex k = tp.indices[p];
      for (int i = 0; i < in_window.vars; ++i) k[i] += ti.indices[q][i];
      const int r = to.position(k);
      for (int a = 0; a < phi.rows; ++a)
        for (int b = 0; b < phi.cols; ++b) {
          const Complex v = phi.coeff[p](a, b);
          if (v != 0.0)
            trip.emplace_back(static_cast<int>(r * phi.rows + a),
                              static_cast<int>(q * phi.cols + b), v);
        }
    }
  }
  Eigen::SparseMatrix<Complex> m(n_rows, n_cols);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace detail

/// Block-Toeplitz matrix of the multiplication operator M_Phi between
/// monomial bases; column order matches monomial_basis of the input window.
inline Eigen::MatrixXcd assemble_mult_matrix(const OperatorSymbol& phi,
                                             const DegreeWindow& in_window) {
  return Eigen::MatrixXcd(detail::assemble_mult_sparse(phi, in_window));
}

/// Offset torus grid: per axis the G points exp(i pi (2t+1) / G), so the
/// grid avoids the symmetric points 1 and -1.
inline std::vector<Eigen::VectorXcd> torus_grid(int vars, int per_axis) {
  if (per_axis < 1) throw std::invalid_argument("torus_grid: need >= 1 point per axis");
  constexpr double kPi = 3.14159265358979323846;
  std::vector<Complex> axis(per_axis);
  for (int t = 0; t < per_axis; ++t) {
    const double angle = kPi * (2.0 * t + 1.0) / per_axis;
    axis[t] = Complex(std::cos(angle), std::sin(angle));
  }
  std::vector<Eigen::VectorXcd> pts;
  std::vector<int> idx(vars, 0);
  while (true) {
    Eigen::VectorXcd z(vars);
    for (int i = 0; i < vars; ++i) z[i] = axis[idx[i]];
    pts.push_back(z);
    int i = vars - 1;
    while (i >= 0 && idx[i] == per_axis - 1) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
  return pts;
}

}  // namespace hardy
