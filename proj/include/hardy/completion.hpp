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
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "hardy/beurling.hpp"
#include "hardy/subspace.hpp"
#include "hardy/symbol.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

struct CompletionTolerances {
  double leftInverse = tol::kCompletion;
  double completion = tol::kCompletion;
  double gamma = tol::kCompletion;
  double commutator = tol::kCommutator;
  double inner = tol::kInner;
};

/// Weak completion instance: f with declared left inverse g, to be extended
/// to a square F = [f Theta] with analytic inverse Omega = [g ; Gamma].
struct CompletionProblem {
  int vars = 1;
  int dimE = 1;
  int dimEc = 1;
  OperatorSymbol f;
  OperatorSymbol g;
  DegreeWindow window;
  CompletionTolerances tolerances;
  std::uint64_t seed = 1;
  int torusGrid = tol::kTorusGrid;
  int rankSamples = tol::kRankSamples;
};

/// Sampled pointwise rank of a symbol over the polydisc, with the witness
/// sample recorded. Deterministic for a fixed seed.
struct RankReport {
  int rank = 0;
  Eigen::VectorXcd witness;
  Eigen::VectorXd singularValues;
  int sampleCount = 0;
};

namespace detail {

// 53-bit uniform in [0,1), independent of library distributions so that
// reports are reproducible everywhere.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Eigen::VectorXcd sample_polydisc(std::mt19937_64& rng, int vars,
                                        double radius) {
  constexpr double kTwoPi = 6.28318530717958647692;
  Eigen::VectorXcd z(vars);
  for (int i = 0; i < vars; ++i) {
    const double r = radius * std::sqrt(uniform01(rng));
    const double a = kTwoPi * uniform01(rng);
    z[i] = Complex(r * std::cos(a), r * std::sin(a));
  }
  return z;
}

/// Multiplication operator of phi on the window with the output truncated
/// back to the same window (rows outside the window are discarded).
inline SpMat assemble_mult_truncated(const OperatorSymbol& phi,
                                     const DegreeWindow& window) {
  const auto& ti = window_table(window);
  const auto& tp = window_table(phi.window);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int p = 0; p < static_cast<int>(tp.indices.size()); ++p) {
    if (phi.coeff[p].isZero(0.0)) continue;
    for (int q = 0; q < static_cast<int>(ti.indices.size()); ++q) {
      MultiIndex k = tp.indices[p];
      for (int i = 0; i < window.vars; ++i) k[i] += ti.indices[q][i];
      const int r = ti.window.contains(k) ? ti.position(k) : -1;
      if (r < 0) continue;
      for (int a = 0; a < phi.rows; ++a)
        for (int b = 0; b < phi.cols; ++b) {
          const Complex v = phi.coeff[p](a, b);
          if (v != 0.0)
            trip.emplace_back(r * phi.rows + a, q * phi.cols + b, v);
        }
    }
  }
  SpMat m(ti.indices.size() * static_cast<Eigen::Index>(phi.rows),
          ti.indices.size() * static_cast<Eigen::Index>(phi.cols));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace detail

/// Exact nullspace of the multiplication operator M_g on the window. The
/// product window is full, so for in-window data the kernel is an honest
/// polynomial identity, not a truncation artifact.
inline SubspaceBasis mult_kernel(const OperatorSymbol& g, const DegreeWindow& window) {
  if (g.window.vars != window.vars)
    throw std::invalid_argument("mult_kernel: variable count mismatch");
  const detail::SpMat m = detail::assemble_mult_sparse(g, window);
  return SubspaceBasis(window, g.cols, detail::nullspace_basis(m, tol::kKernelRel));
}

/// max over sampled points of rank g(z), sampled uniformly in the closed
/// polydisc of radius 0.9. The rank of an analytic symbol is attained off a
/// proper analytic set, so sampling finds it with probability one.
inline RankReport local_rank(const OperatorSymbol& g, int samples = tol::kRankSamples,
                             std::uint64_t seed = 1) {
  if (samples < 1) throw std::invalid_argument("local_rank: need >= 1 sample");
  std::mt19937_64 rng(seed);
  RankReport report;
  report.sampleCount = samples;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXcd z =
        detail::sample_polydisc(rng, g.window.vars, tol::kSampleRadius);
    const Eigen::MatrixXcd v = evaluate_symbol(g, z);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    const Eigen::VectorXd sv = svd.singularValues();
    int rank = 0;
    if (sv.size() > 0 && sv(0) > 0.0)
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol::kLocalRankRel * sv(0)) ++rank;
    if (rank > report.rank || s == 0) {
      report.rank = rank;
      report.witness = z;
      report.singularValues = sv;
    }
  }
  return report;
}

/// The dimension count dim E_c = dim E_a + rank g.
struct DimCheck {
  int dimEa = 0;
  int rankG = 0;
  int dimEc = 0;
  bool satisfied = false;
  RankReport rankReport;
};

inline DimCheck check_rank_nullity(const OperatorSymbol& g,
                                   const SubspaceBasis& kernel_basis,
                                   const OperatorSymbol& theta,
                                   int samples = tol::kRankSamples,
                                   std::uint64_t seed = 1) {
  if (kernel_basis.dimE != g.cols)
    throw std::invalid_argument("check_rank_nullity: kernel space mismatch");
  DimCheck check;
  check.dimEa = theta.cols;
  check.dimEc = g.cols;
  check.rankReport = local_rank(g, samples, seed);
  check.rankG = check.rankReport.rank;
  check.satisfied = (check.dimEa + check.rankG == check.dimEc);
  return check;
}

/// Least-squares solve of M_Theta Gamma = I - f g posed on the window
/// (both sides window-truncated). The inclusion (I - fg) H^2 in Theta H^2
/// guarantees an exact analytic solution, so a residual above tolerance is
/// a window-sufficiency diagnostic, not a rounding artifact.
inline std::pair<OperatorSymbol, double> solve_gamma(const OperatorSymbol& theta,
                                                     const OperatorSymbol& f,
                                                     const OperatorSymbol& g,
                                                     const DegreeWindow& window) {
  const int dim_ec = f.rows;
  if (g.rows != f.cols || g.cols != dim_ec || theta.rows != dim_ec)
    throw std::invalid_argument("solve_gamma: shape mismatch");
  const OperatorSymbol ifg =
      OperatorSymbol::identity(dim_ec, window.vars) - truncated(multiply(f, g), window);
  const Eigen::Index card = window.cardinality();
  Eigen::MatrixXcd rhs(card * dim_ec, dim_ec);
  for (int c = 0; c < dim_ec; ++c) rhs.col(c) = ifg.column(c).flat();

  if (theta.cols == 0) {
    OperatorSymbol gamma(window, 0, dim_ec);
    double residual = 0.0;
    for (int c = 0; c < dim_ec; ++c) residual = std::max(residual, rhs.col(c).norm());
    return {gamma, residual};
  }

  const detail::SpMat a_sparse = detail::assemble_mult_truncated(theta, window);
  Eigen::MatrixXcd sol;
  double residual = 0.0;
  // When the truncated operator has orthonormal columns, the least-squares
  // minimizer is just the adjoint applied to the right-hand side.
  bool orthonormal = false;
  {
    const detail::SpMat gram =
        (detail::SpMat(a_sparse.adjoint()) * a_sparse).pruned();
    double dev = 0.0;
    for (int k = 0; k < gram.outerSize(); ++k)
      for (detail::SpMat::InnerIterator it(gram, k); it; ++it)
        dev = std::max(dev, std::abs(it.value() - (it.row() == it.col() ? 1.0 : 0.0)));
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(gram.cols());
    for (int k = 0; k < gram.outerSize(); ++k)
      for (detail::SpMat::InnerIterator it(gram, k); it; ++it)
        if (it.row() == it.col()) diag[it.row()] = 1.0;
    orthonormal = dev <= tol::kAlgebra && diag.minCoeff() > 0.5;
  }
  if (orthonormal) {
    sol = detail::SpMat(a_sparse.adjoint()) * rhs;
  } else {
    const Eigen::MatrixXcd a = Eigen::MatrixXcd(a_sparse);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    sol = svd.solve(rhs);
  }
  for (int c = 0; c < dim_ec; ++c)
    residual = std::max(residual, (a_sparse * sol.col(c) - rhs.col(c)).norm());

  OperatorSymbol gamma(window, theta.cols, dim_ec);
  const auto& table = detail::window_table(window);
  for (int p = 0; p < static_cast<int>(table.indices.size()); ++p)
    for (int r = 0; r < theta.cols; ++r)
      for (int c = 0; c < dim_ec; ++c)
        gamma.coeff[p](r, c) = sol(static_cast<Eigen::Index>(p) * theta.cols + r, c);
  return {gamma, residual};
}

/// Coefficient and torus-sample deviation of a window-truncated product
/// from the identity.
struct PairResidual {
  double coefficient = 0.0;
  double torus = 0.0;
  double max() const { return std::max(coefficient, torus); }
};

namespace detail {

inline PairResidual identity_residual(const OperatorSymbol& a, const OperatorSymbol& b,
                                      const DegreeWindow& window, int grid_per_axis) {
  const OperatorSymbol prod = truncated(multiply(a, b), window);
  const OperatorSymbol defect =
      prod - OperatorSymbol::identity(prod.rows, window.vars);
  PairResidual res;
  res.coefficient = max_coefficient_abs(defect);
  for (const auto& z : torus_grid(window.vars, grid_per_axis)) {
    const Eigen::MatrixXcd v = evaluate_symbol(defect, z);
    if (v.size() > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
      res.torus = std::max(res.torus, svd.singularValues()(0));
    }
  }
  return res;
}

}  // namespace detail

struct CompletionResiduals {
  PairResidual leftInverse;
  PairResidual FOmega;
  PairResidual OmegaF;
  double gammaSolve = 0.0;
};

struct CompletionResult {
  OperatorSymbol theta;
  OperatorSymbol F;
  OperatorSymbol omega;
  OperatorSymbol gamma;
  InnerCertificate innerCert;
  CommutatorReport commutators;
  CompletionResiduals residuals;
  DimCheck dimCheck;
  Eigen::Index kernel_dimension = 0;
  bool pass = false;
};

enum class CompletionStage {
  validate,
  left_inverse,
  kernel,
  double_commutation,
  extraction,
  rank_nullity,
  assembly,
  gamma_solve,
  residuals,
};

inline const char* stage_name(CompletionStage s) {
  switch (s) {
    case CompletionStage::validate: return "validate";
    case CompletionStage::left_inverse: return "left_inverse";
    case CompletionStage::kernel: return "kernel";
    case CompletionStage::double_commutation: return "double_commutation";
    case CompletionStage::extraction: return "extraction";
    case CompletionStage::rank_nullity: return "rank_nullity";
    case CompletionStage::assembly: return "assembly";
    case CompletionStage::gamma_solve: return "gamma_solve";
    case CompletionStage::residuals: return "residuals";
  }
  return "unknown";
}

struct CompletionError {
  CompletionStage stage = CompletionStage::validate;
  std::string message;
  std::optional<PairResidual> leftInverse;
  std::optional<CommutatorReport> commutators;
  std::optional<DimCheck> dimCheck;
  std::optional<double> gammaResidual;
};

using CompletionOutcome = std::variant<CompletionResult, CompletionError>;

/// The full (i) => (ii) pipeline: left-inverse check, kernel, commutation
/// test, Beurling extraction, dimension count, assembly of F and Omega,
/// and residual verification of both products on the window.
inline CompletionOutcome complete(const CompletionProblem& problem) {
  const auto& f = problem.f;
  const auto& g = problem.g;
  const DegreeWindow& w = problem.window;
  const auto& tols = problem.tolerances;

  // stage 0: shapes and window
  if (f.rows != problem.dimEc || f.cols != problem.dimE || g.rows != problem.dimE ||
      g.cols != problem.dimEc || problem.dimE > problem.dimEc ||
      f.window.vars != problem.vars || g.window.vars != problem.vars ||
      w.vars != problem.vars) {
    return CompletionError{CompletionStage::validate,
                           "problem shapes are inconsistent"};
  }
  if (w.degree < f.max_degree() || w.degree < g.max_degree()) {
    return CompletionError{
        CompletionStage::validate,
        "window degree must be at least the input symbol degrees"};
  }

  // stage 1: g must be a left inverse of f on the window
  const PairResidual left =
      detail::identity_residual(g, f, w, problem.torusGrid);
  if (left.max() > tols.leftInverse) {
    CompletionError err{CompletionStage::left_inverse,
                        "g is not a left inverse of f on the window"};
    err.leftInverse = left;
    return err;
  }

  // stage 2: S = ker M_g
  const SubspaceBasis kernel = mult_kernel(g, w);

  // stages 3-4: doubly commuting test and inner extraction
  OperatorSymbol theta(DegreeWindow(problem.vars, 0), problem.dimEc, 0);
  InnerCertificate inner_cert;
  inner_cert.guardDegree = std::max(0, w.degree - 1);
  CommutatorReport commutators;
  commutators.guardDegree = std::max(0, w.degree - 1);
  WanderingData wandering;
  double range_distance = 0.0;
  if (kernel.dimension() > 0) {
    ExtractionOutcome ext;
    try {
      ext = extract_inner(kernel, tols.commutator, tols.inner, problem.torusGrid);
    } catch (const not_submodule_error& e) {
      return CompletionError{CompletionStage::double_commutation, e.what()};
    }
    if (const auto* fail = std::get_if<ExtractionFailure>(&ext)) {
      CompletionError err;
      err.stage = fail->reason == ExtractionFailure::Reason::not_doubly_commuting
                      ? CompletionStage::double_commutation
                      : CompletionStage::extraction;
      err.message = fail->message;
      err.commutators = fail->commutators;
      return err;
    }
    auto& ok = std::get<InnerExtraction>(ext);
    theta = std::move(ok.theta);
    inner_cert = ok.certificate;
    commutators = std::move(ok.commutators);
    wandering = std::move(ok.wandering);
    range_distance = ok.range_distance;
    if (range_distance > 1e-8) {
      return CompletionError{CompletionStage::extraction,
                             "extracted symbol does not span the kernel on the guard"};
    }
  }

  // stage 5: dim E_c = dim E_a + rank g
  DimCheck dims = check_rank_nullity(g, kernel, theta, problem.rankSamples,
                                     problem.seed);
  if (!dims.satisfied) {
    CompletionError err{CompletionStage::rank_nullity,
                        "dimension count failed: window too small or kernel "
                        "is not of Beurling type"};
    err.dimCheck = dims;
    return err;
  }

  // stage 6: F = [f | Theta]
  if (problem.dimE + theta.cols != problem.dimEc) {
    CompletionError err{CompletionStage::assembly,
                        "completion columns do not fill E_c"};
    err.dimCheck = dims;
    return err;
  }
  const int inner_cols = theta.cols;
  OperatorSymbol F(w, problem.dimEc, problem.dimEc);
  {
    const OperatorSymbol fw = embedded_degree(f, w);
    const OperatorSymbol tw = embedded_degree(theta, w);
    for (std::size_t p = 0; p < F.coeff.size(); ++p) {
      F.coeff[p].leftCols(problem.dimE) = fw.coeff[p];
      if (inner_cols > 0) F.coeff[p].rightCols(inner_cols) = tw.coeff[p];
    }
  }

  // stage 7: Gamma and Omega = [g ; Gamma]
  auto [gamma, gamma_residual] = solve_gamma(theta, f, g, w);
  if (gamma_residual > tols.gamma) {
    CompletionError err{CompletionStage::gamma_solve,
                        "window too small or hypothesis violated"};
    err.gammaResidual = gamma_residual;
    return err;
  }
  OperatorSymbol omega(w, problem.dimEc, problem.dimEc);
  {
    const OperatorSymbol gw = embedded_degree(g, w);
    const OperatorSymbol cw = embedded_degree(gamma, w);
    for (std::size_t p = 0; p < omega.coeff.size(); ++p) {
      omega.coeff[p].topRows(problem.dimE) = gw.coeff[p];
      if (inner_cols > 0) omega.coeff[p].bottomRows(inner_cols) = cw.coeff[p];
    }
  }

  // stage 8: residuals of both products on the window
  CompletionResult result;
  result.theta = std::move(theta);
  result.F = std::move(F);
  result.omega = std::move(omega);
  result.gamma = std::move(gamma);
  result.innerCert = inner_cert;
  result.commutators = std::move(commutators);
  result.dimCheck = std::move(dims);
  result.kernel_dimension = kernel.dimension();
  result.residuals.leftInverse = left;
  result.residuals.gammaSolve = gamma_residual;
  result.residuals.FOmega =
      detail::identity_residual(result.F, result.omega, w, problem.torusGrid);
  result.residuals.OmegaF =
      detail::identity_residual(result.omega, result.F, w, problem.torusGrid);
  result.pass = result.residuals.FOmega.max() <= tols.completion &&
                result.residuals.OmegaF.max() <= tols.completion &&
                result.innerCert.pass;
  return result;
}

/// Standalone residual verification of a supplied completion pair, with an
/// innerness certificate of F's trailing columns when the split is declared.
struct VerifyReport {
  PairResidual FOmega;
  PairResidual OmegaF;
  std::optional<InnerCertificate> innerCert;
  bool pass = false;
};

inline VerifyReport verify_completion(const OperatorSymbol& F,
                                      const OperatorSymbol& omega,
                                      const DegreeWindow& window,
                                      int grid_per_axis = tol::kTorusGrid,
                                      std::optional<int> split_dim_e = std::nullopt,
                                      double tolerance = tol::kCompletion) {
  if (F.rows != F.cols || omega.rows != omega.cols || F.rows != omega.rows)
    throw std::invalid_argument("verify_completion: F and Omega must be square "
                                "of equal dimension");
  VerifyReport report;
  report.FOmega = detail::identity_residual(F, omega, window, grid_per_axis);
  report.OmegaF = detail::identity_residual(omega, F, window, grid_per_axis);
  report.pass =
      report.FOmega.max() <= tolerance && report.OmegaF.max() <= tolerance;
  if (split_dim_e && *split_dim_e >= 0 && *split_dim_e <= F.cols) {
    const int m = F.cols - *split_dim_e;
    OperatorSymbol tail(F.window, F.rows, m);
    for (std::size_t p = 0; p < F.coeff.size(); ++p)
      tail.coeff[p] = F.coeff[p].rightCols(m);
    report.innerCert = innerness_certificate(
        tail, std::max(0, window.degree - 1), grid_per_axis);
    report.pass = report.pass && report.innerCert->pass;
  }
  return report;
}

}  // namespace hardy
