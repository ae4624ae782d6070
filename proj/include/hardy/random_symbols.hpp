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
#include <cstdint>
#include <random>

#include "hardy/symbol.hpp"

namespace hardy {

namespace detail {

inline double gauss01(std::mt19937_64& rng) {
  // Box-Muller on explicit 53-bit uniforms keeps streams reproducible
  // across standard libraries.
  constexpr double kTwoPi = 6.28318530717958647692;
  const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

inline Eigen::MatrixXcd random_isometry(int rows, int cols, std::mt19937_64& rng) {
  Eigen::MatrixXcd a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      a(i, j) = Complex(gauss01(rng), gauss01(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

}  // namespace detail

/// Parameters of the seeded inner-symbol sampler.
struct InnerSymbolSpec {
  int max_vars = 3;
  int max_rows = 4;
  int max_column_degree = 2;
};

/// A random polynomial inner symbol: a constant isometry composed with a
/// diagonal of monomial factors, Theta = V diag(z^{k_1}, ..., z^{k_m}).
/// Column j is z^{k_j} V e_j, so the shifted-column family is orthonormal
/// and M_Theta is an isometry.
inline OperatorSymbol random_inner_symbol(std::uint64_t seed,
                                          const InnerSymbolSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  const auto pick = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const int vars = pick(1, spec.max_vars);
  const int rows = pick(1, spec.max_rows);
  const int cols = pick(1, rows);
  const Eigen::MatrixXcd v = detail::random_isometry(rows, cols, rng);
  OperatorSymbol theta(DegreeWindow(vars, spec.max_column_degree), rows, cols);
  for (int j = 0; j < cols; ++j) {
    MultiIndex k(vars, 0);
    for (int i = 0; i < vars; ++i) k[i] = pick(0, spec.max_column_degree);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    m.col(j) = v.col(j);
    theta.add_coefficient(k, m);
  }
  return theta;
}

}  // namespace hardy
