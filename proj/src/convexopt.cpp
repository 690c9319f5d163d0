#include "fisherwit/convexopt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace fisherwit {

namespace {

constexpr double kWitnessPsdTol = 1e-9;
constexpr double kWitnessFreeTol = 1e-7;
constexpr double kWitnessValueTol = 1e-6;
constexpr double kSupportTol = 1e-9;

ComplexMatrix psd_part(const ComplexMatrix& w) {
  const HermitianEig eig = hermitian_eig(0.5 * (w + w.adjoint()));
  return spectral_map(eig, [](double l) { return std::max(l, 0.0); });
}

RobustnessResult bloch_generalized(const DensityMatrix& rho, double r) {
  const Eigen::Vector3d s = bloch_vector(rho.matrix());
  const double t = s.norm();
  RobustnessResult out;
  out.method = "bloch-closed-form";
  if (t <= r) {
    out.value = 0.0;
    out.witness = Witness{ComplexMatrix::Identity(2, 2), 1.0};
    return out;
  }
  // W = a(I + ŝ·σ) saturates a + a·r = 1 on the ball.
  const double a = 1.0 / (1.0 + r);
  const Eigen::Vector3d u = s / t;
  const ComplexMatrix w = a * (pauli::identity() + u(0) * pauli::x() + u(1) * pauli::y() + u(2) * pauli::z());
  out.value = (t - r) / (1.0 + r);
  out.witness = Witness{w, 1.0};
  return out;
}

RobustnessResult vertex_generalized(const DensityMatrix& rho, const FreeSet& free) {
  RobustnessResult out;
  out.method = "sdp";
  const ComplexMatrix v = support_basis(free);
  const ComplexMatrix rho_red = v.adjoint() * rho.matrix() * v;
  if ((v * rho_red * v.adjoint() - rho.matrix()).norm() > kSupportTol) {
    out.value = std::numeric_limits<double>::infinity();
    out.infinite = true;
    return out;
  }

  const auto vertices = *extreme_points(free);
  const int k = static_cast<int>(v.cols());
  const auto basis = hermitian_basis(k);
  conic::Problem p;
  p.psd_sizes = {2 * k};
  p.lp_size = static_cast<int>(vertices.size());
  p.c_lp = RealVector::Ones(p.lp_size);
  std::vector<ComplexMatrix> reduced;
  for (const auto& vert : vertices) reduced.push_back(v.adjoint() * vert.matrix() * v);
  // Σ_k μ_k v_k − S = ρ, written against each Hermitian basis element.
  for (const auto& e : basis) {
    conic::Row row;
    row.lp = RealVector(p.lp_size);
    for (int j = 0; j < p.lp_size; ++j) row.lp(j) = real_trace_product(e, reduced[static_cast<std::size_t>(j)]);
    row.psd = {-0.5 * real_embedding(e)};
    row.b = real_trace_product(e, rho_red);
    p.rows.push_back(std::move(row));
  }
  const conic::Solution s = conic::solve(p);
  if (s.status != SdpStatus::Optimal) {
    throw Error(ErrorKind::NumericalFailure, std::string("robustness program reported ") + to_string(s.status));
  }
  ComplexMatrix w_red = ComplexMatrix::Zero(k, k);
  for (std::size_t e = 0; e < basis.size(); ++e) w_red += s.y(static_cast<Eigen::Index>(e)) * basis[e];
  ComplexMatrix w = v * psd_part(w_red) * v.adjoint();
  if (std::holds_alternative<Incoherent>(free.variant())) {
    // Affine completion: every incoherent state then has Tr(Wσ) = 1.
    for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, i) = std::max(w(i, i).real(), 1.0);
  }
  out.value = std::max(0.0, s.primal_objective - 1.0);
  out.witness = Witness{w, max_linear_over_free(free, w).value};
  return out;
}

}  // namespace

Witness validate_witness(const ComplexMatrix& w, const FreeSet& free) {
  if (w.rows() != free.dim()) throw Error(ErrorKind::DimensionMismatch, "witness does not match free-set dimension");
  require_hermitian(w, 1e-9);
  const ComplexMatrix h = 0.5 * (w + w.adjoint());
  const double lmin = hermitian_eig(h).min();
  if (lmin < -kWitnessPsdTol) {
    throw Error(ErrorKind::InfeasibleWitness, "witness has eigenvalue " + std::to_string(lmin));
  }
  const double free_value = max_linear_over_free(free, h).value;
  if (free_value > 1.0 + kWitnessFreeTol) {
    throw Error(ErrorKind::InfeasibleWitness, "witness exceeds 1 on the free set: " + std::to_string(free_value));
  }
  return {h, free_value};
}

RobustnessResult generalized_robustness(const DensityMatrix& rho, const FreeSet& free) {
  if (rho.dim() != free.dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match free set");
  if (const auto* ball = std::get_if<BlochBall>(&free.variant())) return bloch_generalized(rho, ball->radius);
  return vertex_generalized(rho, free);
}

RobustnessResult standard_robustness(const DensityMatrix& rho, const FreeSet& free, double lambda_cap) {
  if (rho.dim() != free.dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match free set");
  RobustnessResult out;
  auto infinite = [&out] {
    out.value = std::numeric_limits<double>::infinity();
    out.infinite = true;
    return out;
  };
  if (const auto* ball = std::get_if<BlochBall>(&free.variant())) {
    out.method = "bloch-closed-form";
    const double t = bloch_vector(rho.matrix()).norm();
    out.value = std::max(0.0, (t - ball->radius) / (2.0 * ball->radius));
    return out;
  }

  out.method = "lp";
  const auto vertices = *extreme_points(free);
  const int m = static_cast<int>(vertices.size());
  conic::Problem p;
  p.lp_size = 2 * m;  // μ then ν
  p.c_lp = RealVector::Zero(p.lp_size);
  p.c_lp.tail(m).setOnes();
  for (const auto& e : hermitian_basis(rho.dim())) {
    conic::Row row;
    row.lp = RealVector(p.lp_size);
    for (int j = 0; j < m; ++j) {
      const double c = real_trace_product(e, vertices[static_cast<std::size_t>(j)].matrix());
      row.lp(j) = c;
      row.lp(m + j) = -c;
    }
    row.b = real_trace_product(e, rho.matrix());
    p.rows.push_back(std::move(row));
  }
  const conic::Solution s = conic::solve(p);
  if (s.status == SdpStatus::Infeasible) return infinite();
  if (s.status != SdpStatus::Optimal) {
    throw Error(ErrorKind::NumericalFailure, std::string("standard robustness LP reported ") + to_string(s.status));
  }
  out.value = std::max(0.0, s.primal_objective);
  if (out.value > lambda_cap) return infinite();
  return out;
}

Witness optimal_witness(const DensityMatrix& rho, const FreeSet& free) {
  const RobustnessResult r = generalized_robustness(rho, free);
  if (r.infinite) throw Error(ErrorKind::InfiniteRobustness, "robustness is infinite; no optimal witness exists");
  ComplexMatrix w = r.witness->op;
  const double m = max_linear_over_free(free, w).value;
  if (m > 1e-12) w /= m;
  const Witness out = validate_witness(w, free);
  const double attained = real_trace_product(out.op, rho.matrix());
  if (std::abs(attained - (1.0 + r.value)) > kWitnessValueTol) {
    throw Error(ErrorKind::NumericalFailure, "witness attains " + std::to_string(attained) + ", expected " +
                                                 std::to_string(1.0 + r.value));
  }
  return out;
}

Schmidt schmidt_decomposition(const ComplexVector& psi, int da, int db) {
  if (psi.size() != Eigen::Index(da) * db) throw Error(ErrorKind::DimensionMismatch, "state is not da·db long");
  ComplexMatrix m(da, db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) m(i, j) = psi(i * db + j);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

RobustnessResult entanglement_robustness_pure(const ComplexVector& psi, int da, int db) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorKind::InvalidInput, "zero state vector");
  const Schmidt s = schmidt_decomposition(psi / n, da, db);
  ComplexVector phi = ComplexVector::Zero(Eigen::Index(da) * db);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
    if (s.coefficients(i) <= 1e-12) continue;
    sum += s.coefficients(i);
    phi += kron(s.left.col(i), s.right.col(i));
  }
  RobustnessResult out;
  out.method = "schmidt";
  out.value = std::max(0.0, sum * sum - 1.0);
  out.witness = Witness{outer(phi), 1.0};
  return out;
}

}  // namespace fisherwit
