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

#include <catch2/catch_amalgamated.hpp>

#include "hardy/beurling.hpp"
#include "hardy/random_symbols.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

HardyElement scalar_monomial(const DegreeWindow& w, const MultiIndex& k) {
  HardyElement e(w, 1);
  e.set_coefficient(k, Eigen::VectorXcd::Ones(1));
  return e;
}

OperatorSymbol constant_embedding_32() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 2);
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  return OperatorSymbol::constant(m, 3);
}

std::vector<HardyElement> symbol_columns(const OperatorSymbol& s) {
  std::vector<HardyElement> cols;
  for (int j = 0; j < s.cols; ++j) cols.push_back(s.column(j));
  return cols;
}

bool spans_monomials(const SubspaceBasis& s, const std::vector<MultiIndex>& ks) {
  if (s.dimension() != static_cast<Eigen::Index>(ks.size())) return false;
  for (const auto& k : ks) {
    const HardyElement m = scalar_monomial(s.window, k);
    if ((project(s, m) - m).norm() > 1e-10) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("wandering_space") {
  SECTION("classical one-variable shift: W = constants") {
    const DegreeWindow w(1, 4);
    const auto ws = wandering_space(SubspaceBasis::full_space(w, 1), 0);
    REQUIRE(ws.dimension() == 1);
    CHECK(std::abs(std::abs(ws.columns(0, 0)) - 1.0) < 1e-12);
  }

  SECTION("z1 z2 H^2, direction 1: multiples of z1 z2 constant in z1") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 1})}, w);
    const auto ws = wandering_space(s, 0);
    std::vector<MultiIndex> expected;
    for (int k = 1; k <= 3; ++k) expected.push_back(MultiIndex{1, k});
    CHECK(spans_monomials(ws, expected));
  }

  SECTION("span{z1, z2}, direction 1: z1 plus the pure z2 powers") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 0}),
                                   scalar_monomial(w, MultiIndex{0, 1})},
                                  w);
    const auto ws = wandering_space(s, 0);
    std::vector<MultiIndex> expected{MultiIndex{1, 0}};
    for (int k = 1; k <= 3; ++k) expected.push_back(MultiIndex{0, k});
    CHECK(spans_monomials(ws, expected));
  }
}

TEST_CASE("joint_wandering") {
  SECTION("z1 z2 H^2: the joint space is the single generator") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 1})}, w);
    const auto data = joint_wandering(s);
    CHECK(spans_monomials(data.joint, {MultiIndex{1, 1}}));
    REQUIRE(data.product_range_distance.has_value());
    CHECK(*data.product_range_distance < 1e-8);
    for (const auto& ws : data.perVariable) {
      const Eigen::MatrixXcd diff =
          data.joint.columns -
          ws.columns * (ws.columns.adjoint() * data.joint.columns);
      CHECK(diff.norm() < 1e-10);  // joint inside every W_i
    }
  }

  SECTION("constant isometry range: joint = Theta E, dimension 2") {
    const DegreeWindow w(3, 2);
    const auto s = submodule_span(symbol_columns(constant_embedding_32()), w);
    const auto data = joint_wandering(s);
    CHECK(data.joint.dimension() == 2);
    // spanned by the constants e2, e3
    HardyElement e2(w, 3), e3(w, 3);
    e2.set_coefficient(MultiIndex{0, 0, 0}, Eigen::Vector3cd(0, 1, 0));
    e3.set_coefficient(MultiIndex{0, 0, 0}, Eigen::Vector3cd(0, 0, 1));
    CHECK((project(data.joint, e2) - e2).norm() < 1e-10);
    CHECK((project(data.joint, e3) - e3).norm() < 1e-10);
  }

  SECTION("span{z1, z2}: joint wandering has dimension 2 > dim E_*") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 0}),
                                   scalar_monomial(w, MultiIndex{0, 1})},
                                  w);
    const auto data = joint_wandering(s);
    CHECK(spans_monomials(data.joint, {MultiIndex{1, 0}, MultiIndex{0, 1}}));
    CHECK_FALSE(data.product_range_distance.has_value());
  }
}

TEST_CASE("verify_wandering_decomposition") {
  SECTION("full scalar space with W = constants: exact decomposition") {
    const DegreeWindow w(2, 3);
    const auto s = SubspaceBasis::full_space(w, 1);
    const auto ws = orthonormalize({scalar_monomial(w, MultiIndex{0, 0})});
    const auto cert = verify_wandering_decomposition(s, ws);
    CHECK(cert.gramDeviation < 1e-14);
    CHECK(cert.spanResidual < 1e-12);
  }

  SECTION("z1 z2 H^2 against its generator") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 1})}, w);
    const auto ws = orthonormalize({scalar_monomial(w, MultiIndex{1, 1})});
    const auto cert = verify_wandering_decomposition(s, ws);
    CHECK(cert.gramDeviation < 1e-12);
    CHECK(cert.spanResidual < 1e-10);
  }

  SECTION("span{z1, z2}: shifted wandering vectors collide") {
    const DegreeWindow w(2, 4);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 0}),
                                   scalar_monomial(w, MultiIndex{0, 1})},
                                  w);
    const auto data = joint_wandering(s);
    const auto cert = verify_wandering_decomposition(s, data.joint);
    // z2 . z1 and z1 . z2 are the same vector, so the family Gram has an
    // off-diagonal entry of modulus one.
    CHECK(cert.gramDeviation >= 0.5);
  }

  SECTION("W must be contained in S") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 1})}, w);
    const auto bad = orthonormalize({scalar_monomial(w, MultiIndex{0, 0})});
    CHECK_THROWS_AS(verify_wandering_decomposition(s, bad), std::invalid_argument);
  }
}

TEST_CASE("innerness_certificate") {
  SECTION("constant isometry passes with zero deviations") {
    const auto cert = innerness_certificate(constant_embedding_32(), 2, 4);
    CHECK(cert.gramDeviation == 0.0);
    CHECK(cert.torusDeviationMax < 1e-14);
    CHECK(cert.pass);
    CHECK(cert.sampleCount == 64);
  }

  SECTION("a unimodular monomial is inner") {
    OperatorSymbol z1z2(DegreeWindow(2, 1), 1, 1);
    z1z2.set_coefficient(MultiIndex{1, 1}, Eigen::MatrixXcd::Ones(1, 1));
    const auto cert = innerness_certificate(z1z2, 3, 6);
    CHECK(cert.gramDeviation <= 1e-14);
    CHECK(cert.torusDeviationMax <= 1e-14);
    CHECK(cert.pass);
  }

  SECTION("(z1 + z2)/2 fails: it vanishes where the arguments oppose") {
    OperatorSymbol s(DegreeWindow(2, 1), 1, 1);
    s.set_coefficient(MultiIndex{1, 0}, Eigen::MatrixXcd::Constant(1, 1, 0.5));
    s.set_coefficient(MultiIndex{0, 1}, Eigen::MatrixXcd::Constant(1, 1, 0.5));
    const auto cert = innerness_certificate(s, 3, 8);
    CHECK(cert.torusDeviationMax >= 0.99);
    CHECK_FALSE(cert.pass);
  }
}

TEST_CASE("extract_inner") {
  SECTION("z1 H^2 over the bidisc recovers the monomial up to phase") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 0})}, w);
    const auto outcome = extract_inner(s);
    const auto& ok = std::get<InnerExtraction>(outcome);
    REQUIRE(ok.theta.cols == 1);
    REQUIRE(ok.theta.rows == 1);
    const Eigen::MatrixXcd c = ok.theta.coefficient(MultiIndex{1, 0});
    CHECK(std::abs(std::abs(c(0, 0)) - 1.0) < 1e-12);
    CHECK(c(0, 0).real() > 0.0);  // canonical phase
    CHECK(ok.certificate.pass);
    CHECK(ok.range_distance < 1e-10);
  }

  SECTION("constant isometry range recovers the isometry exactly") {
    const DegreeWindow w(3, 2);
    const auto theta0 = constant_embedding_32();
    const auto s = submodule_span(symbol_columns(theta0), w);
    const auto outcome = extract_inner(s);
    const auto& ok = std::get<InnerExtraction>(outcome);
    REQUIRE(ok.theta.cols == 2);
    // canonicalization reproduces the embedding with no residual unitary
    CHECK(max_coefficient_abs(ok.theta - theta0) < 1e-12);
    CHECK(ok.certificate.pass);
    CHECK(ok.range_distance < 1e-10);
  }

  SECTION("the full space yields a constant unitary") {
    const DegreeWindow w(2, 2);
    const auto outcome = extract_inner(SubspaceBasis::full_space(w, 2));
    const auto& ok = std::get<InnerExtraction>(outcome);
    CHECK(ok.theta.cols == 2);
    CHECK(ok.theta.window.degree == 0);
    const Eigen::MatrixXcd u = ok.theta.coefficient(MultiIndex{0, 0});
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
  }

  SECTION("refuses a non doubly commuting submodule with the report") {
    const DegreeWindow w(2, 3);
    const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 0}),
                                   scalar_monomial(w, MultiIndex{0, 1})},
                                  w);
    const auto outcome = extract_inner(s);
    const auto& fail = std::get<ExtractionFailure>(outcome);
    CHECK(fail.reason == ExtractionFailure::Reason::not_doubly_commuting);
    REQUIRE(fail.commutators.has_value());
    CHECK(fail.commutators->max_pair_norm() >= 1.0 - 1e-10);
  }

  SECTION("the zero subspace is refused") {
    const auto outcome = extract_inner(SubspaceBasis());
    CHECK(std::get<ExtractionFailure>(outcome).reason ==
          ExtractionFailure::Reason::zero_subspace);
  }
}

TEST_CASE("random inner symbols: converse and round trip") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const OperatorSymbol theta = random_inner_symbol(seed);
    const DegreeWindow window(theta.window.vars, 4);
    const auto cert = innerness_certificate(theta, 3, 4);
    REQUIRE(cert.pass);

    const auto s = submodule_span(symbol_columns(theta), window);
    const auto dc = doubly_commuting_test(s);
    CHECK(dc.verdict);
    CHECK(dc.max_pair_norm() <= 1e-8);

    const auto outcome = extract_inner(s);
    REQUIRE(std::holds_alternative<InnerExtraction>(outcome));
    const auto& ok = std::get<InnerExtraction>(outcome);
    CHECK(ok.range_distance <= 1e-8);
    CHECK(ok.theta.cols <= ok.theta.rows);
    CHECK(ok.theta.cols == theta.cols);
    ++checked;
  }
  CHECK(checked == 8);
}

TEST_CASE("round trip recovers a constant unitary factor for constant column degrees") {
  // Theta with every column sharing one monomial degree: Theta' = Theta U.
  std::mt19937_64 rng(99);
  const Eigen::MatrixXcd v = detail::random_isometry(3, 2, rng);
  OperatorSymbol theta(DegreeWindow(2, 1), 3, 2);
  theta.set_coefficient(MultiIndex{1, 0}, v);
  const DegreeWindow window(2, 4);
  const auto s = submodule_span(symbol_columns(theta), window);
  const auto outcome = extract_inner(s);
  const auto& ok = std::get<InnerExtraction>(outcome);
  REQUIRE(ok.theta.cols == 2);
  // solve for U from the coefficient at z1 and verify the factorization
  const Eigen::MatrixXcd a = ok.theta.coefficient(MultiIndex{1, 0});
  const Eigen::MatrixXcd u = a.adjoint() * v;
  CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-10);
  CHECK(max_coefficient_abs(multiply(ok.theta, OperatorSymbol::constant(u, 2)) -
                            embedded_degree(theta, DegreeWindow(2, 1))) < 1e-10);
}

TEST_CASE("wandering spaces of other directions are reducing for the guarded shifts") {
  // For doubly commuting S, W_j is R_i and R_i^* invariant (i != j) on the
  // guard slice.
  const DegreeWindow w(2, 3);
  const auto s = submodule_span({scalar_monomial(w, MultiIndex{1, 1})}, w);
  detail::ShiftOps ops(s);
  const auto data = detail::joint_wandering_impl(s, ops, false);
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const auto& wj = data.perVariable[j];
    // restrict to guard-supported wandering vectors
    const Eigen::MatrixXcd guard_coords = detail::guard_slice_coords(wj, 2);
    if (guard_coords.cols() == 0) continue;
    const Eigen::MatrixXcd vecs = wj.columns * guard_coords;
    const Eigen::MatrixXcd shifted =
        detail::shift_matrix(w, 1, i) * vecs;
    const Eigen::MatrixXcd back =
        shifted - wj.columns * (wj.columns.adjoint() * shifted);
    CHECK(back.cwiseAbs().maxCoeff() < 1e-8);
  }
}
