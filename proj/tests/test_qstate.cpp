#include <doctest.h>

#include "fisherwit/qstate.hpp"
#include "support.hpp"

using namespace fisherwit;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("state validation") {
  CHECK(kind_of([] { validate_state(ComplexMatrix::Zero(2, 3)); }) == ErrorKind::NonSquare);
  ComplexMatrix m = 0.5 * pauli::identity();
  m(0, 1) = 0.3;
  CHECK(kind_of([&] { validate_state(m); }) == ErrorKind::NonHermitian);
  CHECK(kind_of([] { validate_state(pauli::identity()); }) == ErrorKind::TraceNotOne);
  CHECK(kind_of([] { validate_state(0.5 * (pauli::identity() + 1.5 * pauli::z())); }) == ErrorKind::NotPositive);
  CHECK(kind_of([] { validate_state(ComplexMatrix::Identity(65, 65) / 65.0); }) == ErrorKind::DimensionLimit);

  // Tiny negative eigenvalue is clamped.
  ComplexMatrix almost = outer(basis_ket(2, 0));
  almost(1, 1) = -1e-11;
  almost(0, 0) = 1.0 + 1e-11;
  const DensityMatrix s = validate_state(almost);
  CHECK(hermitian_eig(s.matrix()).min() >= 0.0);
  CHECK(std::abs(s.matrix().trace().real() - 1.0) < 1e-14);
}

TEST_CASE("state constructors") {
  ComplexVector v(2);
  v << 3.0, Complex(0, 4.0);
  const DensityMatrix p = DensityMatrix::pure(v);
  CHECK(p.purity() == doctest::Approx(1.0));
  CHECK(DensityMatrix::maximally_mixed(4).purity() == doctest::Approx(0.25));
  const DensityMatrix b = DensityMatrix::from_bloch({0.0, 0.0, -1.0});
  CHECK(std::abs(b.matrix()(1, 1) - 1.0) < 1e-14);
  CHECK(kind_of([] { DensityMatrix::from_bloch({1.0, 1.0, 0.0}); }) == ErrorKind::NotPositive);
  const DensityMatrix half = mix({0.5, 0.5}, {DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)});
  CHECK((half.matrix() - DensityMatrix::maximally_mixed(2).matrix()).norm() < 1e-14);
}

TEST_CASE("povm validation") {
  CHECK(Povm::computational_basis(3).size() == 3);
  CHECK(kind_of([] { Povm({outer(basis_ket(2, 0))}); }) == ErrorKind::InvalidPovm);
  CHECK(kind_of([] { Povm({pauli::identity() + pauli::z(), -pauli::z()}); }) == ErrorKind::InvalidPovm);
  // Small completeness defect is renormalized.
  const Povm m({outer(basis_ket(2, 0)) * (1.0 + 1e-11), outer(basis_ket(2, 1))});
  CHECK((m[0] + m[1] - pauli::identity()).norm() < 1e-14);
  const Povm bin = Povm::binary(0.25 * pauli::identity());
  CHECK(bin.size() == 2);
  CHECK(std::abs(bin[1](0, 0) - 0.75) < 1e-14);
}

TEST_CASE("channels") {
  CHECK(kind_of([] { KrausChannel({pauli::identity(), pauli::x()}); }) == ErrorKind::InvalidChannel);
  testsupport::Rng rng(2);
  const DensityMatrix rho = testsupport::random_state(rng, 2);
  const DensityMatrix deph = apply_channel(KrausChannel::dephasing(2), rho);
  CHECK(std::abs(deph.matrix()(0, 1)) < 1e-14);
  CHECK(std::abs(deph.matrix()(0, 0) - rho.matrix()(0, 0)) < 1e-14);

  const DensityMatrix target = DensityMatrix::basis_state(3, 2);
  const KrausChannel prep = KrausChannel::preparation(2, target);
  CHECK(prep.out_dim() == 3);
  CHECK((prep.apply(rho.matrix()) - target.matrix()).norm() < 1e-12);

  // Adjoint duality Tr[Φ(X) Y] = Tr[X Φ†(Y)].
  const KrausChannel mixed =
      KrausChannel::mixture({0.3, 0.7}, {KrausChannel::unitary(pauli::x()), KrausChannel::dephasing(2)});
  const ComplexMatrix y = testsupport::random_hermitian(rng, 2);
  CHECK(std::abs(trace_product(mixed.apply(rho.matrix()), y) - trace_product(rho.matrix(), mixed.adjoint(y))) <
        1e-12);

  const KrausChannel ext = KrausChannel::unitary(pauli::x()).extend_left(2);
  const ComplexMatrix big = kron(outer(basis_ket(2, 1)), outer(basis_ket(2, 0)));
  CHECK((ext.apply(big) - kron(outer(basis_ket(2, 1)), outer(basis_ket(2, 1)))).norm() < 1e-14);
}

TEST_CASE("outcome distribution") {
  const RealVector p = outcome_distribution(DensityMatrix::basis_state(2, 0), Povm::computational_basis(2));
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(p(1) == doctest::Approx(0.0));
}

TEST_CASE("family derivatives match finite differences") {
  testsupport::Rng rng(7);
  const ComplexMatrix g = testsupport::random_hermitian(rng, 3);
  const DensityMatrix rho = testsupport::random_state(rng, 3);
  const ChannelFamily fam = unitary_family(g);
  CHECK(fam.derivative_mode() == DerivativeMode::Analytic);
  for (double theta : {0.0, 0.4, -1.3}) {
    const ComplexMatrix analytic = fam.derivative(theta, rho.matrix());
    const ComplexMatrix fd = fam.finite_difference_derivative(theta, rho.matrix(), 1e-5);
    CHECK((analytic - fd).norm() < 1e-8);
    const ComplexMatrix second = fam.second_derivative(theta, rho.matrix());
    const ComplexMatrix fd2 =
        (fam.derivative(theta + 1e-5, rho.matrix()) - fam.derivative(theta - 1e-5, rho.matrix())) / 2e-5;
    CHECK((second - fd2).norm() < 1e-7);
    CHECK(std::abs(family_derivative(fam, rho, theta).trace()) < 1e-10);
  }

  const ChannelFamily mixfam = mixture_family(KrausChannel::identity(2), KrausChannel::dephasing(2));
  CHECK(kind_of([&] { mixfam.output(1.5, DensityMatrix::maximally_mixed(2).matrix()); }) == ErrorKind::OutOfDomain);
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const ComplexMatrix d = family_derivative(mixfam, DensityMatrix::pure(plus), 0.5);
  CHECK(std::abs(d(0, 1) + 0.5) < 1e-8);
  CHECK(std::abs(d(0, 0)) < 1e-8);
}
