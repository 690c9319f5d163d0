#include <doctest.h>

#include "fisherwit/sdp.hpp"
#include "support.hpp"

using namespace fisherwit;

TEST_CASE("real embedding round trip and trace identity") {
  testsupport::Rng rng(1);
  const ComplexMatrix a = testsupport::random_hermitian(rng, 3);
  const ComplexMatrix x = testsupport::random_hermitian(rng, 3);
  CHECK((from_real_embedding(real_embedding(x)) - x).norm() < 1e-14);
  CHECK(std::abs(real_trace_product(a, x) - 0.5 * (real_embedding(a).cwiseProduct(real_embedding(x))).sum()) < 1e-12);
}

TEST_CASE("largest eigenvalue as an sdp") {
  testsupport::Rng rng(2);
  for (int d : {2, 3, 5}) {
    const ComplexMatrix c = testsupport::random_hermitian(rng, d);
    SdpProblem p{c, d, {{ComplexMatrix::Identity(d, d), 1.0}}, {}};
    const SdpResult r = solve_sdp(p);
    REQUIRE(r.status == SdpStatus::Optimal);
    const double lmax = testsupport::reference_eig(c).eigenvalues()(d - 1);
    CHECK(std::abs(r.value - lmax) < 1e-7);
    CHECK(std::abs(real_trace_product(c, r.x) - r.value) < 1e-7);
  }
}

TEST_CASE("inequality constraints") {
  // max Tr(σz X), Tr X = 1, ⟨0|X|0⟩ ≤ 0.3 → 0.3 − 0.7 = −0.4.
  SdpProblem p{pauli::z(), 2, {{pauli::identity(), 1.0}}, {{outer(basis_ket(2, 0)), 0.3}}};
  const SdpResult r = solve_sdp(p);
  REQUIRE(r.status == SdpStatus::Optimal);
  CHECK(std::abs(r.value + 0.4) < 1e-7);
}

TEST_CASE("infeasible and unbounded problems") {
  SdpProblem inf{pauli::z(), 2, {{pauli::identity(), 1.0}, {pauli::identity(), 2.0}}, {}};
  CHECK(solve_sdp(inf).status == SdpStatus::Infeasible);
  SdpProblem neg{pauli::z(), 2, {{pauli::identity(), -1.0}}, {}};
  CHECK(solve_sdp(neg).status == SdpStatus::Infeasible);
  SdpProblem unb{pauli::identity(), 2, {{pauli::z(), 0.0}}, {}};
  CHECK(solve_sdp(unb).status == SdpStatus::Unbounded);
}

TEST_CASE("dependent rows are tolerated") {
  SdpProblem p{pauli::x(), 2, {{pauli::identity(), 1.0}, {2.0 * pauli::identity(), 2.0}}, {}};
  const SdpResult r = solve_sdp(p);
  REQUIRE(r.status == SdpStatus::Optimal);
  CHECK(std::abs(r.value - 1.0) < 1e-7);
}

TEST_CASE("size limits") {
  SdpProblem big{ComplexMatrix::Identity(17, 17), 17, {{ComplexMatrix::Identity(17, 17), 1.0}}, {}};
  CHECK_THROWS_AS(solve_sdp(big), Error);
}

TEST_CASE("conic lp block") {
  // min x1 + 2x2, x1 + x2 = 1, x ≥ 0.
  conic::Problem p;
  p.lp_size = 2;
  p.c_lp = RealVector(2);
  p.c_lp << 1.0, 2.0;
  conic::Row row;
  row.lp = RealVector::Ones(2);
  row.b = 1.0;
  p.rows.push_back(row);
  const conic::Solution s = conic::solve(p);
  REQUIRE(s.status == SdpStatus::Optimal);
  CHECK(std::abs(s.primal_objective - 1.0) < 1e-8);
  CHECK(std::abs(s.x_lp(0) - 1.0) < 1e-6);
  CHECK(std::abs(s.y(0) - 1.0) < 1e-6);
}

TEST_CASE("random sdp duality") {
  // max Tr(CX) over density matrices with ⟨0|X|0⟩ = 1/2: compare with a
  // dense parametrized search over 2×2 states.
  testsupport::Rng rng(6);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix c = testsupport::random_hermitian(rng, 2);
    SdpProblem p{c, 2, {{pauli::identity(), 1.0}, {outer(basis_ket(2, 0)), 0.5}}, {}};
    const SdpResult r = solve_sdp(p);
    REQUIRE(r.status == SdpStatus::Optimal);
    // Feasible set: z = 0 disc; value a + b_x x + b_y y with the disc radius 1.
    const double a = 0.5 * c.trace().real();
    const Eigen::Vector3d b = 0.5 * bloch_vector(c);
    CHECK(std::abs(r.value - (a + std::hypot(b.x(), b.y()))) < 1e-7);
  }
}
