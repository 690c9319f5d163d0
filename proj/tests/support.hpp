// Seeded random objects and independent reference computations for tests.
#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "fisherwit/numkernel.hpp"
#include "fisherwit/qstate.hpp"

namespace testsupport {

using fisherwit::ComplexMatrix;
using fisherwit::ComplexVector;
using fisherwit::DensityMatrix;

using Rng = std::mt19937_64;

inline ComplexMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = {n(rng), n(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, int dim) {
  const ComplexMatrix g = gaussian_matrix(rng, dim, dim);
  return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_unitary(Rng& rng, int dim) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(rng, dim, dim));
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

inline ComplexVector random_ket(Rng& rng, int dim) {
  ComplexVector v = gaussian_matrix(rng, dim, 1).col(0);
  return v / v.norm();
}

// Ginibre-distributed mixed state of the given rank.
inline DensityMatrix random_state(Rng& rng, int dim, int rank = 0) {
  const ComplexMatrix g = gaussian_matrix(rng, dim, rank > 0 ? rank : dim);
  const ComplexMatrix m = g * g.adjoint();
  return DensityMatrix::validate(m / m.trace().real());
}

// Uniform in the Bloch ball.
inline Eigen::Vector3d random_bloch(Rng& rng, double max_radius = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized() * max_radius * std::cbrt(u(rng));
}

// Random POVM with `outcomes` elements from a random isometry.
inline fisherwit::Povm random_povm(Rng& rng, int dim, int outcomes) {
  const ComplexMatrix g = gaussian_matrix(rng, dim * outcomes, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(dim * outcomes, dim);
  std::vector<ComplexMatrix> elems;
  for (int k = 0; k < outcomes; ++k) {
    const ComplexMatrix block = v.block(k * dim, 0, dim, dim);
    elems.push_back(block.adjoint() * block);
  }
  return fisherwit::Povm(elems);
}

// Independent eigen solver used as the reference.
inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> reference_eig(const ComplexMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h);
}

// Unitary-family QFI from the reference spectrum:
// 2 Σ (λi − λj)² / (λi + λj) |⟨i|G|j⟩|².
inline double reference_unitary_qfi(const ComplexMatrix& rho, const ComplexMatrix& g) {
  const auto es = reference_eig(rho);
  const ComplexMatrix gij = es.eigenvectors().adjoint() * g * es.eigenvectors();
  double f = 0.0;
  for (int i = 0; i < rho.rows(); ++i)
    for (int j = 0; j < rho.rows(); ++j) {
      const double s = es.eigenvalues()(i) + es.eigenvalues()(j);
      const double d = es.eigenvalues()(i) - es.eigenvalues()(j);
      if (s > 1e-12) f += 2.0 * d * d / s * std::norm(gij(i, j));
    }
  return f;
}

// CFI of e^{−iθG} on ρ measured by M, from central differences of
// directly evolved probabilities.
inline double reference_unitary_cfi(const ComplexMatrix& rho, const ComplexMatrix& g, const fisherwit::Povm& m,
                                    double theta, double h = 1e-5) {
  auto probs = [&](double t) {
    const auto es = reference_eig(g);
    ComplexVector phases(g.rows());
    for (int k = 0; k < g.rows(); ++k) phases(k) = std::polar(1.0, -t * es.eigenvalues()(k));
    const ComplexMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const ComplexMatrix out = u * rho * u.adjoint();
    Eigen::VectorXd p(static_cast<int>(m.size()));
    for (std::size_t k = 0; k < m.size(); ++k) p(static_cast<int>(k)) = (out * m[k]).trace().real();
    return p;
  };
  const Eigen::VectorXd p = probs(theta);
  const Eigen::VectorXd dp = (probs(theta + h) - probs(theta - h)) / (2.0 * h);
  double f = 0.0;
  for (int k = 0; k < p.size(); ++k)
    if (p(k) > 1e-9) f += dp(k) * dp(k) / p(k);
  return f;
}

// Generalized robustness of a qubit against the incoherent states from a
// search over Bloch witnesses W = a·1 + t·n·σ. For unit n the best feasible
// a, t give R = max_n max(0, (n·r − |n_z|)/(1 + |n_z|)); the sphere is
// gridded and the best cells refined by shrinking coordinate search.
inline double bloch_witness_oracle_incoherent(const Eigen::Vector3d& r) {
  auto value = [&](double pol, double az) {
    const Eigen::Vector3d n(std::sin(pol) * std::cos(az), std::sin(pol) * std::sin(az), std::cos(pol));
    return std::max(0.0, (n.dot(r) - std::abs(n.z())) / (1.0 + std::abs(n.z())));
  };
  const int np = 180, na = 360;
  double best = 0.0, bp = 0.0, ba = 0.0;
  for (int i = 0; i <= np; ++i)
    for (int k = 0; k < na; ++k) {
      const double p = std::numbers::pi * i / np, a = 2.0 * std::numbers::pi * k / na;
      const double v = value(p, a);
      if (v > best) best = v, bp = p, ba = a;
    }
  for (double step = 0.02; step > 1e-13; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [dp, da] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
        const double v = value(bp + dp, ba + da);
        if (v > best) best = v, bp += dp, ba += da, moved = true;
      }
    }
  }
  return best;
}

// Bloch-ball geometry: generalized robustness (|r| − r0)/(1 + r0) and
// standard robustness (|r| − r0)/(2 r0) outside the ball, 0 inside.
inline double bloch_geometry_generalized(double norm, double r0) { return std::max(0.0, (norm - r0) / (1.0 + r0)); }
inline double bloch_geometry_standard(double norm, double r0) { return std::max(0.0, (norm - r0) / (2.0 * r0)); }

}  // namespace testsupport
