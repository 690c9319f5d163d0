#include "fisherwit/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fisherwit {

namespace {

constexpr double kFormulaAgreement = 1e-8;
constexpr double kPureStateCheck = 1e-8;

ComplexMatrix checked_derivative(const ComplexMatrix& drho, int dim) {
  if (drho.rows() != dim || drho.cols() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "derivative does not match state dimension");
  }
  require_hermitian(drho, 1e-9);
  return 0.5 * (drho + drho.adjoint());
}

}  // namespace

FisherValue classical_fisher(const RealVector& p, const RealVector& dp, const RealVector* ddp, double theta) {
  FisherValue out{0.0, false, theta};
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > kOutcomeCutoff) {
      out.value += dp(i) * dp(i) / p(i);
    } else if (std::abs(dp(i)) > kSlopeCutoff) {
      return FisherValue::inf(theta);
    } else if (ddp != nullptr) {
      out.value += 2.0 * std::max((*ddp)(i), 0.0);
    }
  }
  return out;
}

FisherValue classical_fisher_at(const EstimationTask& task, const DensityMatrix& rho, double theta) {
  const ChannelFamily& fam = task.family;
  if (rho.dim() != fam.in_dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match family input");
  const ComplexMatrix out = fam.output(theta, rho.matrix());
  const ComplexMatrix d = fam.derivative(theta, rho.matrix());
  const auto n = static_cast<Eigen::Index>(task.povm.size());
  RealVector p(n), dp(n);
  bool needs_curvature = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = std::clamp(real_trace_product(out, task.povm[i]), 0.0, 1.0);
    dp(i) = real_trace_product(d, task.povm[i]);
    if (p(i) <= kOutcomeCutoff && std::abs(dp(i)) <= kSlopeCutoff) needs_curvature = true;
  }
  if (!needs_curvature) return classical_fisher(p, dp, nullptr, theta);

  // p has a double zero: fall back to the second derivative when the family
  // can provide it at this θ.
  RealVector ddp(n);
  try {
    const ComplexMatrix dd = fam.second_derivative(theta, rho.matrix());
    for (Eigen::Index i = 0; i < n; ++i) ddp(i) = real_trace_product(dd, task.povm[i]);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OutOfDomain) throw;
    return classical_fisher(p, dp, nullptr, theta);
  }
  return classical_fisher(p, dp, &ddp, theta);
}

FisherValue classical_fisher(const EstimationTask& task, const DensityMatrix& rho) {
  return classical_fisher_at(task, rho, task.eval_point);
}

FisherValue binary_cfi(double p, double dp) {
  if (dp == 0.0) return {0.0, false, 0.0};
  if (p <= 0.0 || p >= 1.0) return FisherValue::inf();
  return {dp * dp / (p * (1.0 - p)), false, 0.0};
}

ComplexMatrix sld(const DensityMatrix& rho, const ComplexMatrix& drho) {
  const ComplexMatrix dr = checked_derivative(drho, rho.dim());
  const HermitianEig eig = hermitian_eig(rho.matrix());
  const ComplexMatrix local = eig.vectors.adjoint() * dr * eig.vectors;
  const Eigen::Index n = local.rows();
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = eig.values(i) + eig.values(j);
      if (s > kSupportCutoff) d(i, j) = 2.0 * local(i, j) / s;
    }
  ComplexMatrix out = eig.vectors * d * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

FisherValue quantum_fisher(const DensityMatrix& rho, const ComplexMatrix& drho) {
  const ComplexMatrix dr = checked_derivative(drho, rho.dim());
  const HermitianEig eig = hermitian_eig(rho.matrix());
  const ComplexMatrix local = eig.vectors.adjoint() * dr * eig.vectors;
  double eigen_sum = 0.0;
  for (Eigen::Index i = 0; i < local.rows(); ++i)
    for (Eigen::Index j = 0; j < local.cols(); ++j) {
      const double s = eig.values(i) + eig.values(j);
      if (s > kSupportCutoff) eigen_sum += 2.0 * std::norm(local(i, j)) / s;
    }
  const ComplexMatrix d = sld(rho, dr);
  const double trace_form = real_trace_product(rho.matrix(), d * d);
  if (std::abs(trace_form - eigen_sum) > kFormulaAgreement * std::max(1.0, eigen_sum)) {
    throw Error(ErrorKind::NumericalFailure, "QFI formulas disagree: " + std::to_string(trace_form) + " vs " +
                                                 std::to_string(eigen_sum));
  }
  return {std::max(eigen_sum, 0.0), false, 0.0};
}

double variance(const DensityMatrix& rho, const ComplexMatrix& op) {
  const double m1 = real_trace_product(rho.matrix(), op);
  const double m2 = real_trace_product(rho.matrix(), op * op);
  return std::max(m2 - m1 * m1, 0.0);
}

FisherValue quantum_fisher_unitary(const DensityMatrix& rho, const ComplexMatrix& generator) {
  if (generator.rows() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "generator does not match state");
  require_hermitian(generator);
  const ComplexMatrix drho = Complex(0.0, -1.0) * commutator(generator, rho.matrix());
  FisherValue fq = quantum_fisher(rho, drho);
  if (rho.purity() > 1.0 - 1e-12) {
    const double four_var = 4.0 * variance(rho, generator);
    if (std::abs(fq.value - four_var) > kPureStateCheck * std::max(1.0, four_var)) {
      throw Error(ErrorKind::NumericalFailure, "pure-state QFI " + std::to_string(fq.value) + " differs from 4Var " +
                                                   std::to_string(four_var));
    }
  }
  return fq;
}

FisherValue quantum_fisher(const ChannelFamily& family, const DensityMatrix& rho, double theta) {
  if (rho.dim() != family.in_dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match family input");
  const DensityMatrix out = DensityMatrix::from_computed(family.output(theta, rho.matrix()));
  FisherValue fq = quantum_fisher(out, family.derivative(theta, rho.matrix()));
  fq.eval_point = theta;
  return fq;
}

Povm sld_measurement(const ChannelFamily& family, const DensityMatrix& rho, double theta) {
  const DensityMatrix out = DensityMatrix::from_computed(family.output(theta, rho.matrix()));
  const ComplexMatrix d = sld(out, family.derivative(theta, rho.matrix()));
  const HermitianEig eig = hermitian_eig(d);
  std::vector<ComplexMatrix> projectors;
  for (Eigen::Index k = 0; k < eig.vectors.cols(); ++k) projectors.push_back(outer(eig.vectors.col(k)));
  return Povm(std::move(projectors));
}

}  // namespace fisherwit
