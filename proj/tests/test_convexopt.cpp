#include <doctest.h>

#include "fisherwit/convexopt.hpp"
#include "support.hpp"

using namespace fisherwit;

TEST_CASE("incoherent robustness against the bloch witness oracle") {
  testsupport::Rng rng(41);
  for (int rep = 0; rep < 15; ++rep) {
    const Eigen::Vector3d r = testsupport::random_bloch(rng);
    const DensityMatrix rho = DensityMatrix::from_bloch(r);
    const RobustnessResult res = generalized_robustness(rho, FreeSet::incoherent(2));
    REQUIRE_FALSE(res.infinite);
    CHECK(std::abs(res.value - testsupport::bloch_witness_oracle_incoherent(r)) < 1e-6);
    // l1 coherence equals the robustness for qubits.
    CHECK(std::abs(res.value - std::hypot(r.x(), r.y())) < 1e-6);
  }
}

TEST_CASE("witness attains the robustness") {
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix rho = DensityMatrix::pure(plus);
  const FreeSet inc = FreeSet::incoherent(2);
  const Witness w = optimal_witness(rho, inc);
  CHECK(std::abs(w.free_value - 1.0) < 1e-9);
  CHECK(std::abs(real_trace_product(w.op, rho.matrix()) - 2.0) < 1e-6);
  CHECK(hermitian_eig(w.op).min() > -1e-9);
  CHECK_THROWS_AS(validate_witness(3.0 * pauli::identity(), inc), Error);
}

TEST_CASE("bloch ball robustness closed forms") {
  testsupport::Rng rng(42);
  for (double r0 : {0.25, 0.5, 0.9}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::Vector3d r = testsupport::random_bloch(rng);
      const DensityMatrix rho = DensityMatrix::from_bloch(r);
      const FreeSet ball = FreeSet::bloch_ball(r0);
      CHECK(std::abs(generalized_robustness(rho, ball).value - testsupport::bloch_geometry_generalized(r.norm(), r0)) <
            1e-9);
      CHECK(std::abs(standard_robustness(rho, ball).value - testsupport::bloch_geometry_standard(r.norm(), r0)) < 1e-9);
    }
  }
}

TEST_CASE("polytope robustness matches its bloch ball limit") {
  // A fine polygon in the xz great circle of radius 1/2 approaches the disc.
  std::vector<DensityMatrix> verts;
  for (int k = 0; k < 64; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 64;
    verts.push_back(DensityMatrix::from_bloch({0.5 * std::cos(t), 0.0, 0.5 * std::sin(t)}));
  }
  const FreeSet poly = FreeSet::polytope(verts);
  const DensityMatrix rho = DensityMatrix::from_bloch({1.0, 0.0, 0.0});
  const RobustnessResult g = generalized_robustness(rho, poly);
  CHECK(std::abs(g.value - 1.0 / 3.0) < 1e-6);
  const RobustnessResult s = standard_robustness(rho, poly);
  CHECK(std::abs(s.value - 0.5) < 1e-6);
  // Out of plane: the polytope spans only the xz disc.
  CHECK(standard_robustness(DensityMatrix::from_bloch({0.0, 1.0, 0.0}), poly).infinite);
}

TEST_CASE("standard robustness infinite when support escapes") {
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const RobustnessResult r = standard_robustness(DensityMatrix::pure(plus), FreeSet::incoherent(2));
  CHECK(r.infinite);
  CHECK(std::isinf(r.value));
  CHECK(generalized_robustness(DensityMatrix::basis_state(2, 1), FreeSet::singleton(DensityMatrix::basis_state(2, 0)))
            .infinite);
}

TEST_CASE("free states have zero robustness") {
  CHECK(generalized_robustness(DensityMatrix::maximally_mixed(3), FreeSet::incoherent(3)).value < 1e-7);
  CHECK(standard_robustness(DensityMatrix::maximally_mixed(3), FreeSet::incoherent(3)).value < 1e-7);
}

TEST_CASE("qutrit coherence robustness equals l1 norm for pure states") {
  testsupport::Rng rng(43);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexVector psi = testsupport::random_ket(rng, 3);
    const DensityMatrix rho = DensityMatrix::pure(psi);
    double l1 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        if (i != k) l1 += std::abs(rho.matrix()(i, k));
    CHECK(std::abs(generalized_robustness(rho, FreeSet::incoherent(3)).value - l1) < 1e-6);
  }
}

TEST_CASE("schmidt decomposition and pure entanglement robustness") {
  testsupport::Rng rng(44);
  const ComplexVector psi = testsupport::random_ket(rng, 6);
  const Schmidt s = schmidt_decomposition(psi, 2, 3);
  CHECK(std::abs(s.coefficients.squaredNorm() - 1.0) < 1e-12);
  ComplexVector rebuilt = ComplexVector::Zero(6);
  for (int i = 0; i < s.coefficients.size(); ++i)
    rebuilt += s.coefficients(i) * kron(s.left.col(i), s.right.col(i)).col(0);
  CHECK((rebuilt - psi).norm() < 1e-12);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const RobustnessResult r = entanglement_robustness_pure(bell, 2, 2);
  CHECK(std::abs(r.value - 1.0) < 1e-12);
  CHECK(std::abs(real_trace_product(r.witness->op, outer(bell)) - 2.0) < 1e-12);
}
