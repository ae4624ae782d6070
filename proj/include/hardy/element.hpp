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
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hardy/multi_index.hpp"

namespace hardy {

using Complex = std::complex<double>;

/// Point on the n-torus: every coordinate has modulus 1 (checked to 1e-14).
struct TorusPoint {
  Eigen::VectorXcd coords;

  explicit TorusPoint(Eigen::VectorXcd c) : coords(std::move(c)) {
    for (Eigen::Index i = 0; i < coords.size(); ++i)
      if (std::abs(std::abs(coords[i]) - 1.0) > 1e-14)
        throw std::invalid_argument("TorusPoint: coordinate off the unit circle");
  }
};

/// Truncated Taylor-coefficient tensor of an element of H^2_E(D^n).
///
/// Coefficients are stored densely: row p of `coeffs` is the coefficient
/// vector a_k in E for the multi-index at graded-lex position p of the
/// window; the flattened coefficient vector interleaves as
/// flat[p*dim + j] = coeffs(p, j), matching the monomial-basis order
/// (graded-lex on k, then coordinate index).
struct HardyElement {
  DegreeWindow window;
  int dim = 1;  // dim E
  Eigen::MatrixXcd coeffs;

  HardyElement() : coeffs(1, 1) { coeffs.setZero(); }

  HardyElement(const DegreeWindow& w, int dimE)
      : window(w), dim(dimE),
        coeffs(Eigen::MatrixXcd::Zero(w.cardinality(), dimE)) {
    if (dimE < 1) throw std::invalid_argument("HardyElement: dim must be >= 1");
  }

  Eigen::Index ambient_dim() const { return coeffs.size(); }

  /// Coefficient vector at multi-index k (zero if outside the window).
  Eigen::VectorXcd coefficient(const MultiIndex& k) const {
    const int p = detail::window_table(window).position(k);
    if (p < 0) return Eigen::VectorXcd::Zero(dim);
    return coeffs.row(p).transpose();
  }

  void set_coefficient(const MultiIndex& k, const Eigen::VectorXcd& a) {
    const int p = detail::window_table(window).position(k);
    if (p < 0) throw std::invalid_argument("HardyElement: index outside window");
    if (a.size() != dim) throw std::invalid_argument("HardyElement: bad coefficient size");
    coeffs.row(p) = a.transpose();
  }

  /// Flattened coefficients in monomial-basis order.
  Eigen::VectorXcd flat() const {
    Eigen::VectorXcd v(coeffs.size());
    for (Eigen::Index p = 0; p < coeffs.rows(); ++p)
      v.segment(p * dim, dim) = coeffs.row(p).transpose();
    return v;
  }

  static HardyElement from_flat(const DegreeWindow& w, int dimE,
                                const Eigen::VectorXcd& v) {
    HardyElement e(w, dimE);
    if (v.size() != e.coeffs.size())
      throw std::invalid_argument("from_flat: size mismatch");
    for (Eigen::Index p = 0; p < e.coeffs.rows(); ++p)
      e.coeffs.row(p) = v.segment(p * dimE, dimE).transpose();
    return e;
  }

  double norm() const { return coeffs.norm(); }
  double squared_norm() const { return coeffs.squaredNorm(); }
};

/// Coefficient l^2 pairing <f, g> = sum_k <a_k, b_k>_E, linear in f and
/// conjugate-linear in g. Monomials z^k e_j are orthonormal for it, which
/// matches the normalized torus-integral inner product.
inline Complex inner_product(const HardyElement& f, const HardyElement& g) {
  if (!(f.window == g.window) || f.dim != g.dim)
    throw std::invalid_argument("inner_product: shape mismatch");
  return (g.coeffs.conjugate().cwiseProduct(f.coeffs)).sum();
}

/// Reinterpret f inside a larger (or equal) window of the same variable count.
inline HardyElement embedded(const HardyElement& f, const DegreeWindow& w) {
  if (w.vars != f.window.vars || w.degree < f.window.degree)
    throw std::invalid_argument("embedded: target window does not contain source");
  HardyElement out(w, f.dim);
  const auto& src = detail::window_table(f.window);
  const auto& dst = detail::window_table(w);
  for (int p = 0; p < static_cast<int>(src.indices.size()); ++p)
    out.coeffs.row(dst.position(src.indices[p])) = f.coeffs.row(p);
  return out;
}

/// Drop coefficients outside the smaller window. Truncation is always this
/// explicit operation; multiplication itself never truncates.
inline HardyElement truncated(const HardyElement& f, const DegreeWindow& w) {
  if (w.vars != f.window.vars)
    throw std::invalid_argument("truncated: variable count mismatch");
  HardyElement out(w, f.dim);
  const auto& src = detail::window_table(f.window);
  const auto& dst = detail::window_table(w);
  for (int p = 0; p < static_cast<int>(dst.indices.size()); ++p) {
    const int q = src.position(dst.indices[p]);
    if (q >= 0) out.coeffs.row(p) = f.coeffs.row(q);
  }
  return out;
}

/// Multiplication by z_i (0-based variable index). The output window grows
/// by one degree so the operation is exact; it is an isometry.
inline HardyElement shift(int var, const HardyElement& f) {
  if (var < 0 || var >= f.window.vars)
    throw std::invalid_argument("shift: variable index out of range");
  HardyElement out(f.window.grown(1), f.dim);
  const auto& src = detail::window_table(f.window);
  const auto& dst = detail::window_table(out.window);
  for (int p = 0; p < static_cast<int>(src.indices.size()); ++p) {
    MultiIndex k = src.indices[p];
    ++k[var];
    out.coeffs.row(dst.position(k)) = f.coeffs.row(p);
  }
  return out;
}

/// Backward shift in variable i: coefficient at k of the output is the
/// coefficient at k + e_i of the input. The window is unchanged, so the
/// input's top coefficient in variable i is dropped.
inline HardyElement shift_adjoint(int var, const HardyElement& f) {
  if (var < 0 || var >= f.window.vars)
    throw std::invalid_argument("shift_adjoint: variable index out of range");
  HardyElement out(f.window, f.dim);
  const auto& table = detail::window_table(f.window);
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
    MultiIndex k = table.indices[p];
    ++k[var];
    const int q = table.position(k);
    if (q >= 0) out.coeffs.row(p) = f.coeffs.row(q);
  }
  return out;
}

/// Pointwise value sum_k a_k z^k (exact finite sum).
inline Eigen::VectorXcd evaluate_element(const HardyElement& f,
                                         const Eigen::VectorXcd& z) {
  if (z.size() != f.window.vars)
    throw std::invalid_argument("evaluate_element: point dimension mismatch");
  const auto& table = detail::window_table(f.window);
  // Monomial values by per-variable power tables.
  std::vector<std::vector<Complex>> pow(f.window.vars);
  for (int i = 0; i < f.window.vars; ++i) {
    pow[i].resize(f.window.degree + 1);
    pow[i][0] = 1.0;
    for (int e = 1; e <= f.window.degree; ++e) pow[i][e] = pow[i][e - 1] * z[i];
  }
  Eigen::VectorXcd value = Eigen::VectorXcd::Zero(f.dim);
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
    Complex m = 1.0;
    for (int i = 0; i < f.window.vars; ++i) m *= pow[i][table.indices[p][i]];
    value += m * f.coeffs.row(p).transpose();
  }
  return value;
}

/// Truncation of the Cauchy kernel section S(.,w) eta: coefficient at k is
/// conj(w)^k eta. Reproduces <f, S(.,w) eta> = <f(w), eta> exactly for f
/// supported in the window.
inline HardyElement cauchy_kernel_element(const Eigen::VectorXcd& w,
                                          const Eigen::VectorXcd& eta,
                                          const DegreeWindow& window) {
  if (w.size() != window.vars)
    throw std::invalid_argument("cauchy_kernel_element: point dimension mismatch");
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (std::abs(w[i]) >= 1.0)
      throw std::invalid_argument("cauchy_kernel_element: point outside open polydisc");
  HardyElement out(window, static_cast<int>(eta.size()));
  const auto& table = detail::window_table(window);
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p) {
    Complex m = 1.0;
    for (int i = 0; i < window.vars; ++i)
      for (int e = 0; e < table.indices[p][i]; ++e) m *= std::conj(w[i]);
    out.coeffs.row(p) = (m * eta).transpose();
  }
  return out;
}

/// Basis element z^k e_j addressed by flat index p*dimE + j.
inline HardyElement basis_element(const DegreeWindow& w, int dimE, Eigen::Index flat) {
  HardyElement e(w, dimE);
  if (flat < 0 || flat >= e.ambient_dim())
    throw std::invalid_argument("basis_element: flat index out of range");
  e.coeffs(flat / dimE, flat % dimE) = 1.0;
  return e;
}

/// Canonical orthonormal basis {z^k e_j} of the window, ordered graded-lex
/// on k and then by coordinate index.
inline std::vector<HardyElement> monomial_basis(const DegreeWindow& w, int dimE) {
  if (dimE < 1) throw std::invalid_argument("monomial_basis: dimE must be >= 1");
  std::vector<HardyElement> basis;
  const Eigen::Index total = w.cardinality() * dimE;
  basis.reserve(total);
  for (Eigen::Index flat = 0; flat < total; ++flat)
    basis.push_back(basis_element(w, dimE, flat));
  return basis;
}

inline HardyElement operator+(const HardyElement& a, const HardyElement& b) {
  if (!(a.window == b.window) || a.dim != b.dim)
    throw std::invalid_argument("HardyElement +: shape mismatch");
  HardyElement out = a;
  out.coeffs += b.coeffs;
  return out;
}

inline HardyElement operator-(const HardyElement& a, const HardyElement& b) {
  if (!(a.window == b.window) || a.dim != b.dim)
    throw std::invalid_argument("HardyElement -: shape mismatch");
  HardyElement out = a;
  out.coeffs -= b.coeffs;
  return out;
}

inline HardyElement operator*(Complex c, const HardyElement& a) {
  HardyElement out = a;
  out.coeffs *= c;
  return out;
}

}  // namespace hardy
