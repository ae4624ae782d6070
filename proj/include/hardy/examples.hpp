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

#include "hardy/completion.hpp"
#include "hardy/symbol.hpp"

namespace hardy {
namespace fixtures {

/// The exponential-column completion instance: f = (e^{z_1},...,e^{z_n})^T,
/// g = (e^{-z_1}, 0, ..., 0), both truncated at the window degree so every
/// window coefficient of their products is the exact entire-function one.
/// Its kernel is the set of columns with vanishing first coordinate, whose
/// inner generator is the constant embedding of C^{n-1} under a zero row.
inline CompletionProblem exponential_column_problem(int vars, int degree,
                                                    std::uint64_t seed = 1) {
  if (vars < 2) throw std::invalid_argument("exponential_column_problem: vars >= 2");
  CompletionProblem p;
  p.vars = vars;
  p.dimE = 1;
  p.dimEc = vars;
  p.window = DegreeWindow(vars, degree);
  p.seed = seed;
  p.f = OperatorSymbol(p.window, vars, 1);
  p.g = OperatorSymbol(p.window, 1, vars);
  for (int i = 0; i < vars; ++i) {
    const auto e = exp_monomial_symbol(1.0, i, p.window);
    for (std::size_t q = 0; q < p.f.coeff.size(); ++q)
      p.f.coeff[q](i, 0) = e.coeff[q](0, 0);
  }
  const auto em = exp_monomial_symbol(-1.0, 0, p.window);
  for (std::size_t q = 0; q < p.g.coeff.size(); ++q)
    p.g.coeff[q](0, 0) = em.coeff[q](0, 0);
  return p;
}

/// The expected inner factor of the exponential-column instance: the
/// coordinates 2..n embedded under a zero first row (up to a constant
/// unitary right factor).
inline OperatorSymbol exponential_column_inner_factor(int vars) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(vars, vars - 1);
  for (int i = 1; i < vars; ++i) m(i, i - 1) = 1.0;
  return OperatorSymbol::constant(m, vars);
}

/// Scalar monomial z^k as a generator element.
inline HardyElement monomial_generator(const DegreeWindow& w, const MultiIndex& k) {
  HardyElement e(w, 1);
  e.set_coefficient(k, Eigen::VectorXcd::Ones(1));
  return e;
}

/// Generators z_1, z_2 on the bidisc: the classical submodule that is not
/// doubly commuting and has a two-dimensional joint wandering space.
inline std::vector<HardyElement> coordinate_pair_generators(const DegreeWindow& w) {
  return {monomial_generator(w, MultiIndex{1, 0}),
          monomial_generator(w, MultiIndex{0, 1})};
}

/// The single inner monomial z_1 z_2 on the bidisc.
inline std::vector<HardyElement> monomial_inner_generators(const DegreeWindow& w) {
  return {monomial_generator(w, MultiIndex{1, 1})};
}

}  // namespace fixtures
}  // namespace hardy
