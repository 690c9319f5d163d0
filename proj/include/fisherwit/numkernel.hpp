#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fisherwit/error.hpp"

namespace fisherwit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Library-wide limit on any matrix side.
inline constexpr Eigen::Index kMaxDim = 64;

/// Spectral decomposition of a Hermitian matrix: eigenvalues ascending,
/// eigenvectors stored as orthonormal columns in matching order.
struct HermitianEig {
  RealVector values;
  ComplexMatrix vectors;

  double min() const { return values(0); }
  double max() const { return values(values.size() - 1); }
};

/// ‖H − H†‖_F
double hermiticity_defect(const ComplexMatrix& h);

/// Throws NonSquare / NonHermitian unless ‖H − H†‖_F ≤ tol·max(1, ‖H‖_F).
void require_hermitian(const ComplexMatrix& h, double tol = 1e-10);

/// Cyclic Jacobi diagonalization. Input must be Hermitian within 1e−10
/// relative; it is symmetrized before iterating.
HermitianEig hermitian_eig(const ComplexMatrix& h);

/// Applies f to the spectrum: V diag(f(λ)) V†.
template <typename F>
ComplexMatrix spectral_map(const HermitianEig& eig, F&& f) {
  const Eigen::Index n = eig.values.size();
  ComplexVector mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) mapped(i) = f(eig.values(i));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

/// Reduced operator on the kept factor of a dims.first ⊗ dims.second space.
ComplexMatrix partial_trace(const ComplexMatrix& x, std::pair<int, int> dims, Subsystem keep);

/// e^{−iθG} through the eigendecomposition of G.
ComplexMatrix unitary_from_generator(const ComplexMatrix& generator, double theta);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(AB) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Real part of Tr(AB); exact for Hermitian A, B up to rounding.
double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Orthonormal (Hilbert–Schmidt) basis of d×d Hermitian matrices: the
// diagonal units first, then (E_jk+E_kj)/√2 and i(E_kj−E_jk)/√2 for j<k.
std::vector<ComplexMatrix> hermitian_basis(int dim);

/// Coordinates of a Hermitian matrix in hermitian_basis(dim); the map is an
/// isometry from the Frobenius norm to the Euclidean norm.
RealVector hermitian_coordinates(const ComplexMatrix& h);
ComplexMatrix from_hermitian_coordinates(const RealVector& coords, int dim);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// |i⟩ in dimension d.
ComplexVector basis_ket(int dim, int index);

/// |ψ⟩⟨ψ| for an arbitrary (not necessarily normalized) vector.
ComplexMatrix outer(const ComplexVector& psi);

/// 2×2 density matrix with the given Bloch vector.
ComplexMatrix bloch_matrix(const Eigen::Vector3d& bloch);

/// Bloch vector (Tr σ_x ρ, Tr σ_y ρ, Tr σ_z ρ) of a 2×2 operator.
Eigen::Vector3d bloch_vector(const ComplexMatrix& rho);

}  // namespace fisherwit
