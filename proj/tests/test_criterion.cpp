#include <doctest.h>

#include "fisherwit/criterion.hpp"
#include "support.hpp"

using namespace fisherwit;

TEST_CASE("generator gap") {
  CHECK(generator_gap(pauli::z()) == doctest::Approx(4.0));
  testsupport::Rng rng(61);
  const ComplexMatrix g = testsupport::random_hermitian(rng, 4);
  const auto ev = testsupport::reference_eig(g).eigenvalues();
  CHECK(std::abs(generator_gap(g) - std::pow(ev(3) - ev(0), 2)) < 1e-10);
}

TEST_CASE("objective on product states is four times the variance") {
  testsupport::Rng rng(62);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2 + rep % 2;
    const ComplexMatrix g = testsupport::random_hermitian(rng, d);
    const DensityMatrix s = testsupport::random_state(rng, d);
    const double lhs = real_trace_product(criterion_objective(g), kron(s.matrix(), s.matrix()));
    CHECK(std::abs(lhs - 4.0 * variance(s, g)) < 1e-10);
  }
}

TEST_CASE("coherent usefulness certified against a singleton") {
  for (int k : {0, 1}) {
    const CriterionResult r = criterion_sdp(pauli::z(), FreeSet::singleton(DensityMatrix::basis_state(2, k)));
    CHECK(std::abs(r.s_star) < 1e-7);
    CHECK(r.gap_sq == doctest::Approx(4.0));
    CHECK(r.certified);
  }
}

TEST_CASE("full bloch ball is inconclusive") {
  const CriterionResult r = criterion_sdp(pauli::z(), FreeSet::bloch_ball(1.0));
  CHECK(std::abs(r.s_star - 8.0) < 1e-6);
  CHECK_FALSE(r.certified);
  CHECK(std::abs(r.optimizer.trace().real() - 1.0) < 1e-7);
}

TEST_CASE("incoherent marginals") {
  // Diagonal marginals and G = σx: s* over X with diagonal marginals.
  // Every incoherent σ has Var(σx) = 1, and s* ≥ 4 from σ⊗σ; the SDP can
  // reach 8 with a singlet-like X, so nothing is certified.
  const CriterionResult r = criterion_sdp(pauli::x(), FreeSet::incoherent(2));
  CHECK(r.s_star >= 4.0 - 1e-7);
  CHECK_FALSE(r.certified);
  CHECK_FALSE(certify_useful(pauli::x(), FreeSet::incoherent(2)));
}

TEST_CASE("small bloch ball") {
  // The singlet has maximally mixed marginals and attains the top eigenvalue 8.
  const CriterionResult r = criterion_sdp(pauli::z(), FreeSet::bloch_ball(0.25));
  CHECK(std::abs(r.s_star - 8.0) < 1e-6);
}

TEST_CASE("polytope free set") {
  const FreeSet poly = FreeSet::polytope({DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)});
  const CriterionResult r = criterion_sdp(pauli::z(), poly);
  // Diagonal marginals, G = σz: X = (|01⟩⟨01| + |10⟩⟨10|)/2 has s = 8.
  CHECK(std::abs(r.s_star - 8.0) < 1e-6);
}
