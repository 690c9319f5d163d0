#include <doctest.h>

#include "fisherwit/fisher.hpp"
#include "support.hpp"

using namespace fisherwit;

TEST_CASE("cfi of distributions") {
  RealVector p(2), dp(2);
  p << 0.25, 0.75;
  dp << 0.5, -0.5;
  CHECK(classical_fisher(p, dp).value == doctest::Approx(0.25 / 0.25 + 0.25 / 0.75));
  p << 0.0, 1.0;
  dp << 0.1, -0.1;
  CHECK(classical_fisher(p, dp).infinite);
  dp << 0.0, 0.0;
  CHECK(classical_fisher(p, dp).value == 0.0);
  RealVector ddp(2);
  ddp << 0.5, -0.5;
  CHECK(classical_fisher(p, dp, &ddp).value == doctest::Approx(1.0));
  CHECK(binary_cfi(0.5, 0.5).value == doctest::Approx(1.0));
  CHECK(binary_cfi(1.0, 0.2).infinite);
}

TEST_CASE("task cfi against directly evolved probabilities") {
  testsupport::Rng rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const int d = 2 + rep % 3;
    const ComplexMatrix g = testsupport::random_hermitian(rng, d);
    const DensityMatrix rho = testsupport::random_state(rng, d);
    const Povm m = testsupport::random_povm(rng, d, 3);
    const EstimationTask task(unitary_family(g), m, 0.2);
    const double oracle = testsupport::reference_unitary_cfi(rho.matrix(), g, m, 0.2);
    CHECK(std::abs(classical_fisher(task, rho).value - oracle) < 1e-6 * std::max(1.0, oracle));
  }
}

TEST_CASE("worked example values") {
  ComplexMatrix m0 = ComplexMatrix::Zero(2, 2), m1 = ComplexMatrix::Zero(2, 2);
  m0(0, 0) = 1.0;
  m0(1, 1) = 0.5;
  m1(1, 1) = 0.5;
  const EstimationTask task(unitary_family(0.5 * pauli::y()), Povm({m0, m1}));
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  CHECK(std::abs(classical_fisher(task, DensityMatrix::basis_state(2, 0)).value - 0.5) < 1e-12);
  CHECK(std::abs(classical_fisher(task, DensityMatrix::pure(plus)).value - 1.0 / 3.0) < 1e-12);
  // Outcome 1 vanishes quadratically at θ = 0; away from it the plain formula applies.
  const double theta = 0.3;
  const double expected = 2.0 * std::pow(std::cos(theta / 2), 2) / (3.0 + std::cos(theta));
  CHECK(std::abs(classical_fisher_at(task, DensityMatrix::basis_state(2, 0), theta).value - expected) < 1e-12);
}

TEST_CASE("qfi against reference spectrum") {
  testsupport::Rng rng(4);
  for (int rep = 0; rep < 40; ++rep) {
    const int d = 2 + rep % 4;
    const ComplexMatrix g = testsupport::random_hermitian(rng, d);
    const DensityMatrix rho = testsupport::random_state(rng, d, 1 + rep % d);
    const double ref = testsupport::reference_unitary_qfi(rho.matrix(), g);
    CHECK(std::abs(quantum_fisher_unitary(rho, g).value - ref) < 1e-8 * std::max(1.0, ref));
    CHECK(std::abs(quantum_fisher(unitary_family(g), rho, 0.0).value - ref) < 1e-8 * std::max(1.0, ref));
  }
}

TEST_CASE("sld solves the Lyapunov equation on the support") {
  testsupport::Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 2 + rep % 3;
    const DensityMatrix rho = testsupport::random_state(rng, d, 1 + rep % d);
    const ComplexMatrix drho = family_derivative(unitary_family(testsupport::random_hermitian(rng, d)), rho, 0.0);
    const ComplexMatrix l = sld(rho, drho);
    const HermitianEig eig = hermitian_eig(rho.matrix());
    const ComplexMatrix proj = spectral_map(eig, [](double x) { return x > 1e-10 ? 1.0 : 0.0; });
    const ComplexMatrix residual = proj * (rho.matrix() * l + l * rho.matrix() - 2.0 * drho) * proj;
    CHECK(residual.norm() < 1e-8);
  }
}

TEST_CASE("pure state qfi is four times the variance") {
  testsupport::Rng rng(12);
  const ComplexMatrix g = testsupport::random_hermitian(rng, 4);
  const DensityMatrix psi = DensityMatrix::pure(testsupport::random_ket(rng, 4));
  CHECK(std::abs(quantum_fisher_unitary(psi, g).value - 4.0 * variance(psi, g)) < 1e-9);
}

TEST_CASE("sld measurement attains the qfi") {
  testsupport::Rng rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix g = testsupport::random_hermitian(rng, 3);
    const DensityMatrix rho = testsupport::random_state(rng, 3);
    const ChannelFamily fam = unitary_family(g);
    const EstimationTask task(fam, sld_measurement(fam, rho, 0.0));
    CHECK(std::abs(classical_fisher(task, rho).value - quantum_fisher(fam, rho, 0.0).value) < 1e-7);
  }
}

TEST_CASE("mixture family cfi") {
  const KrausChannel flip = KrausChannel::unitary(pauli::x());
  const ChannelFamily fam = mixture_family(KrausChannel::identity(2), flip);
  const DensityMatrix rho = DensityMatrix::basis_state(2, 0);
  CHECK((fam.derivative(0.4, rho.matrix()) - fam.finite_difference_derivative(0.4, rho.matrix(), 1e-5)).norm() < 1e-9);
  const EstimationTask task(fam, Povm::computational_basis(2), 0.25);
  // p0 = 1 − θ, so F = 1/(θ(1−θ)).
  CHECK(std::abs(classical_fisher(task, rho).value - 1.0 / (0.25 * 0.75)) < 1e-6);
}

TEST_CASE("custom family falls back to central differences") {
  const ChannelFamily fam([](double t) { return KrausChannel::unitary(unitary_from_generator(pauli::x(), t)); }, 2, 2);
  CHECK(fam.derivative_mode() == DerivativeMode::FiniteDifference);
  const DensityMatrix rho = DensityMatrix::basis_state(2, 0);
  const double analytic = quantum_fisher(unitary_family(pauli::x()), rho, 0.2).value;
  CHECK(std::abs(quantum_fisher(fam, rho, 0.2).value - analytic) < 1e-6);
}
