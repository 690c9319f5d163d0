#include "fisherwit/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fisherwit {

namespace {

constexpr int kMaxSweeps = 100;

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NonSquare,
                "expected a square matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_dim_limit(Eigen::Index rows, Eigen::Index cols) {
  if (rows > kMaxDim || cols > kMaxDim) {
    throw Error(ErrorKind::DimensionLimit,
                "matrix side exceeds " + std::to_string(kMaxDim) + " (" + std::to_string(rows) + "x" +
                    std::to_string(cols) + ")");
  }
}

double off_diagonal_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

// Rotates columns p, q of m by the 2×2 unitary u (m ← m·U restricted to p, q).
void rotate_columns(ComplexMatrix& m, Eigen::Index p, Eigen::Index q, const Eigen::Matrix2cd& u) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Complex mp = m(r, p);
    const Complex mq = m(r, q);
    m(r, p) = mp * u(0, 0) + mq * u(1, 0);
    m(r, q) = mp * u(0, 1) + mq * u(1, 1);
  }
}

void rotate_rows_adjoint(ComplexMatrix& m, Eigen::Index p, Eigen::Index q, const Eigen::Matrix2cd& u) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Complex mp = m(p, c);
    const Complex mq = m(q, c);
    m(p, c) = std::conj(u(0, 0)) * mp + std::conj(u(1, 0)) * mq;
    m(q, c) = std::conj(u(0, 1)) * mp + std::conj(u(1, 1)) * mq;
  }
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& h) { return (h - h.adjoint()).norm(); }

void require_hermitian(const ComplexMatrix& h, double tol) {
  require_square(h);
  const double defect = hermiticity_defect(h);
  if (defect > tol * std::max(1.0, h.norm())) {
    throw Error(ErrorKind::NonHermitian, "‖H − H†‖_F = " + std::to_string(defect));
  }
}

HermitianEig hermitian_eig(const ComplexMatrix& h) {
  require_hermitian(h);
  require_dim_limit(h.rows(), h.cols());
  const Eigen::Index n = h.rows();

  ComplexMatrix a = 0.5 * (h + h.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  const double stop_sq = std::pow(1e-15 * scale, 2);

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm_sq(a) > stop_sq; ++sweep) {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq <= 1e-300 || apq <= 1e-18 * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // Phase-align a_pq to a real positive value, then a real Jacobi rotation.
        const Complex phase = a(p, q) / apq;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        Eigen::Matrix2cd u;
        u(0, 0) = c;
        u(0, 1) = s;
        u(1, 0) = -s * std::conj(phase);
        u(1, 1) = c * std::conj(phase);
        rotate_columns(a, p, q, u);
        rotate_rows_adjoint(a, p, q, u);
        rotate_columns(v, p, q, u);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (off_diagonal_norm_sq(a) > std::pow(1e-12 * std::max(1.0, scale), 2)) {
    throw Error(ErrorKind::NumericalFailure, "Jacobi eigensolver did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEig eig{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    eig.values(k) = a(order[k], order[k]).real();
    eig.vectors.col(k) = v.col(order[k]);
  }
  return eig;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_dim_limit(a.rows() * b.rows(), a.cols() * b.cols());
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& x, std::pair<int, int> dims, Subsystem keep) {
  const auto [da, db] = dims;
  if (da <= 0 || db <= 0 || x.rows() != x.cols() || x.rows() != Eigen::Index(da) * db) {
    throw Error(ErrorKind::DimensionMismatch, "partial trace expects a square matrix of side " +
                                                  std::to_string(da) + "*" + std::to_string(db));
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int k = 0; k < db; ++k) out(i, j) += x(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int k = 0; k < db; ++k)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i) out(k, l) += x(i * db + k, i * db + l);
  return out;
}

ComplexMatrix unitary_from_generator(const ComplexMatrix& generator, double theta) {
  const HermitianEig eig = hermitian_eig(generator);
  return spectral_map(eig, [theta](double lambda) { return std::exp(Complex(0.0, -theta * lambda)); });
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) { return trace_product(a, b).real(); }

std::vector<ComplexMatrix> hermitian_basis(int dim) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim) * dim);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(j, k) = sym(k, j) = r;
      basis.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(j, k) = Complex(0.0, -r);
      anti(k, j) = Complex(0.0, r);
      basis.push_back(std::move(anti));
    }
  }
  return basis;
}

RealVector hermitian_coordinates(const ComplexMatrix& h) {
  const int dim = static_cast<int>(h.rows());
  RealVector c(dim * dim);
  int idx = 0;
  for (int i = 0; i < dim; ++i) c(idx++) = h(i, i).real();
  const double s = std::sqrt(2.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      // Tr(E·h) for the two off-diagonal basis elements.
      c(idx++) = s * 0.5 * (h(j, k) + h(k, j)).real();
      c(idx++) = -s * 0.5 * (h(j, k) - h(k, j)).imag();
    }
  }
  return c;
}

ComplexMatrix from_hermitian_coordinates(const RealVector& coords, int dim) {
  const auto basis = hermitian_basis(dim);
  if (coords.size() != static_cast<Eigen::Index>(basis.size())) {
    throw Error(ErrorKind::DimensionMismatch, "coordinate vector length does not match dim²");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.size(); ++i) out += coords(static_cast<Eigen::Index>(i)) * basis[i];
  return out;
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

ComplexVector basis_ket(int dim, int index) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

ComplexMatrix outer(const ComplexVector& psi) { return psi * psi.adjoint(); }

ComplexMatrix bloch_matrix(const Eigen::Vector3d& b) {
  return 0.5 * (pauli::identity() + b(0) * pauli::x() + b(1) * pauli::y() + b(2) * pauli::z());
}

Eigen::Vector3d bloch_vector(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "Bloch vector needs a 2x2 operator");
  return {real_trace_product(pauli::x(), rho), real_trace_product(pauli::y(), rho),
          real_trace_product(pauli::z(), rho)};
}

}  // namespace fisherwit
