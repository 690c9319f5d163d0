#include "fisherwit/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fisherwit {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kCompletenessTol = 1e-9;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DensityMatrix DensityMatrix::validate(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NonSquare, "state matrix must be square");
  if (m.rows() == 0) throw Error(ErrorKind::InvalidInput, "state matrix is empty");
  require_hermitian(m, kStateTol);
  const HermitianEig eig = hermitian_eig(m);
  if (eig.min() < -kStateTol) {
    throw Error(ErrorKind::NotPositive, "minimum eigenvalue " + std::to_string(eig.min()));
  }
  const double trace = eig.values.sum();
  if (std::abs(trace - 1.0) > kStateTol) {
    throw Error(ErrorKind::TraceNotOne, "trace " + std::to_string(trace));
  }
  if (eig.min() >= 0.0 && trace == 1.0) return DensityMatrix(hermitian_part(m));
  ComplexMatrix clamped = spectral_map(eig, [](double l) { return std::max(l, 0.0); });
  return DensityMatrix(hermitian_part(clamped / clamped.trace().real()));
}

DensityMatrix DensityMatrix::from_computed(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NonSquare, "state matrix must be square");
  ComplexMatrix h = hermitian_part(m);
  if (hermiticity_defect(m) > tol * std::max(1.0, m.norm())) {
    throw Error(ErrorKind::NumericalFailure, "computed state drifted from Hermitian");
  }
  const HermitianEig eig = hermitian_eig(h);
  const double trace = eig.values.sum();
  if (eig.min() < -tol || std::abs(trace - 1.0) > tol) {
    throw Error(ErrorKind::NumericalFailure,
                "computed state drifted: min eigenvalue " + std::to_string(eig.min()) + ", trace " + std::to_string(trace));
  }
  if (eig.min() >= 0.0) return DensityMatrix(h / trace);
  ComplexMatrix clamped = spectral_map(eig, [](double l) { return std::max(l, 0.0); });
  return DensityMatrix(hermitian_part(clamped / clamped.trace().real()));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorKind::InvalidInput, "zero state vector");
  return DensityMatrix(outer(psi / n));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(int dim, int index) { return DensityMatrix(outer(basis_ket(dim, index))); }

DensityMatrix DensityMatrix::from_bloch(const Eigen::Vector3d& bloch) {
  if (bloch.norm() > 1.0 + kStateTol) throw Error(ErrorKind::NotPositive, "Bloch vector longer than 1");
  return DensityMatrix(bloch_matrix(bloch));
}

double DensityMatrix::purity() const { return real_trace_product(matrix_, matrix_); }

DensityMatrix validate_state(const ComplexMatrix& m) { return DensityMatrix::validate(m); }

DensityMatrix mix(const std::vector<double>& weights, const std::vector<DensityMatrix>& states) {
  if (weights.size() != states.size() || states.empty()) {
    throw Error(ErrorKind::InvalidInput, "mixture needs one weight per state");
  }
  ComplexMatrix m = ComplexMatrix::Zero(states.front().dim(), states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != states.front().dim()) throw Error(ErrorKind::DimensionMismatch, "mixture of unequal dims");
    if (weights[i] < 0.0) throw Error(ErrorKind::InvalidInput, "negative mixture weight");
    m += weights[i] * states[i].matrix();
  }
  return DensityMatrix::from_computed(m, 1e-9);
}

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorKind::InvalidPovm, "POVM has no elements");
  const Eigen::Index d = elements_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (auto& m : elements_) {
    if (m.rows() != d || m.cols() != d) throw Error(ErrorKind::DimensionMismatch, "POVM elements differ in dimension");
    require_hermitian(m, kStateTol);
    m = hermitian_part(m);
    if (hermitian_eig(m).min() < -kStateTol) throw Error(ErrorKind::InvalidPovm, "POVM element is not PSD");
    sum += m;
  }
  const double defect = (sum - ComplexMatrix::Identity(d, d)).norm();
  if (defect > kCompletenessTol) {
    throw Error(ErrorKind::InvalidPovm, "elements sum to identity only within " + std::to_string(defect));
  }
  if (defect > 0.0) {
    const ComplexMatrix inv_sqrt =
        spectral_map(hermitian_eig(sum), [](double l) { return 1.0 / std::sqrt(l); });
    for (auto& m : elements_) m = hermitian_part(inv_sqrt * m * inv_sqrt);
  }
}

Povm Povm::computational_basis(int dim) {
  std::vector<ComplexMatrix> e;
  for (int i = 0; i < dim; ++i) e.push_back(outer(basis_ket(dim, i)));
  return Povm(std::move(e));
}

Povm Povm::binary(const ComplexMatrix& effect) {
  return Povm({effect, ComplexMatrix::Identity(effect.rows(), effect.cols()) - effect});
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw Error(ErrorKind::InvalidChannel, "channel has no Kraus operators");
  const Eigen::Index out = ops_.front().rows();
  const Eigen::Index in = ops_.front().cols();
  if (in > kMaxDim || out > kMaxDim) throw Error(ErrorKind::DimensionLimit, "channel dimension above limit");
  ComplexMatrix tp = ComplexMatrix::Zero(in, in);
  for (const auto& k : ops_) {
    if (k.rows() != out || k.cols() != in) throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in shape");
    tp += k.adjoint() * k;
  }
  const double defect = (tp - ComplexMatrix::Identity(in, in)).norm();
  if (defect > kCompletenessTol) {
    throw Error(ErrorKind::InvalidChannel, "Σ K†K deviates from identity by " + std::to_string(defect));
  }
}

KrausChannel KrausChannel::identity(int dim) { return KrausChannel({ComplexMatrix::Identity(dim, dim)}); }

KrausChannel KrausChannel::unitary(const ComplexMatrix& u) { return KrausChannel({u}); }

KrausChannel KrausChannel::dephasing(int dim) {
  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < dim; ++i) ops.push_back(outer(basis_ket(dim, i)));
  return KrausChannel(std::move(ops));
}

KrausChannel KrausChannel::preparation(int in_dim, const DensityMatrix& state) {
  const HermitianEig eig = hermitian_eig(state.matrix());
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) <= 0.0) continue;
    const ComplexVector col = std::sqrt(eig.values(k)) * eig.vectors.col(k);
    for (int j = 0; j < in_dim; ++j) ops.push_back(col * basis_ket(in_dim, j).adjoint());
  }
  return KrausChannel(std::move(ops));
}

KrausChannel KrausChannel::mixture(const std::vector<double>& weights, const std::vector<KrausChannel>& channels) {
  if (weights.size() != channels.size() || channels.empty()) {
    throw Error(ErrorKind::InvalidInput, "channel mixture needs one weight per channel");
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (weights[i] < 0.0) throw Error(ErrorKind::InvalidInput, "negative mixture weight");
    if (weights[i] == 0.0) continue;
    for (const auto& k : channels[i].kraus_ops()) ops.push_back(std::sqrt(weights[i]) * k);
  }
  return KrausChannel(std::move(ops));
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& x) const {
  if (x.rows() != in_dim() || x.cols() != in_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "channel input dimension " + std::to_string(in_dim()) + ", got " +
                                                  std::to_string(x.rows()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(out_dim(), out_dim());
  for (const auto& k : ops_) out.noalias() += k * x * k.adjoint();
  return out;
}

ComplexMatrix KrausChannel::adjoint(const ComplexMatrix& y) const {
  if (y.rows() != out_dim() || y.cols() != out_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "adjoint map expects an output-space operator");
  }
  ComplexMatrix out = ComplexMatrix::Zero(in_dim(), in_dim());
  for (const auto& k : ops_) out.noalias() += k.adjoint() * y * k;
  return out;
}

KrausChannel KrausChannel::extend_left(int dim) const {
  std::vector<ComplexMatrix> ops;
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  for (const auto& k : ops_) ops.push_back(kron(id, k));
  return KrausChannel(std::move(ops));
}

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho) {
  return DensityMatrix::from_computed(channel.apply(rho.matrix()));
}

RealVector outcome_distribution(const DensityMatrix& rho, const Povm& povm) {
  if (povm.dim() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "POVM and state dimensions differ");
  RealVector p(static_cast<Eigen::Index>(povm.size()));
  for (std::size_t i = 0; i < povm.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = std::clamp(real_trace_product(rho.matrix(), povm[i]), 0.0, 1.0);
  }
  return p;
}

ChannelFamily::ChannelFamily(ChannelFn channel, int in_dim, int out_dim, ParameterDomain domain,
                             std::string description)
    : channel_(std::move(channel)),
      in_dim_(in_dim),
      out_dim_(out_dim),
      domain_(domain),
      description_(std::move(description)) {}

ChannelFamily& ChannelFamily::with_derivatives(MapFn first, MapFn second) {
  first_ = std::move(first);
  second_ = std::move(second);
  return *this;
}

ChannelFamily& ChannelFamily::with_step(double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "finite-difference step must be positive");
  step_ = h;
  return *this;
}

void ChannelFamily::require_in_domain(double theta) const {
  if (!domain_.contains(theta)) {
    throw Error(ErrorKind::OutOfDomain, "θ = " + std::to_string(theta) + " outside [" + std::to_string(domain_.lo) +
                                            ", " + std::to_string(domain_.hi) + "]");
  }
}

KrausChannel ChannelFamily::channel(double theta) const {
  require_in_domain(theta);
  return channel_(theta);
}

ComplexMatrix ChannelFamily::output(double theta, const ComplexMatrix& rho) const { return channel(theta).apply(rho); }

ComplexMatrix ChannelFamily::finite_difference_derivative(double theta, const ComplexMatrix& rho, double h) const {
  require_in_domain(theta - h);
  require_in_domain(theta + h);
  return (channel_(theta + h).apply(rho) - channel_(theta - h).apply(rho)) / (2.0 * h);
}

ComplexMatrix ChannelFamily::derivative(double theta, const ComplexMatrix& rho) const {
  if (first_) {
    require_in_domain(theta);
    return first_(theta, rho);
  }
  return finite_difference_derivative(theta, rho, step_);
}

ComplexMatrix ChannelFamily::second_derivative(double theta, const ComplexMatrix& rho) const {
  if (second_) {
    require_in_domain(theta);
    return second_(theta, rho);
  }
  const double h = kDefaultSecondStep;
  require_in_domain(theta - h);
  require_in_domain(theta + h);
  if (first_) return (first_(theta + h, rho) - first_(theta - h, rho)) / (2.0 * h);
  return (channel_(theta + h).apply(rho) - 2.0 * channel_(theta).apply(rho) + channel_(theta - h).apply(rho)) / (h * h);
}

ChannelFamily unitary_family(const ComplexMatrix& generator) {
  require_hermitian(generator);
  const ComplexMatrix g = hermitian_part(generator);
  const HermitianEig eig = hermitian_eig(g);
  const int d = static_cast<int>(g.rows());
  auto unitary_at = [eig](double theta) {
    return spectral_map(eig, [theta](double l) { return std::exp(Complex(0.0, -theta * l)); });
  };
  ChannelFamily family([unitary_at](double theta) { return KrausChannel::unitary(unitary_at(theta)); }, d, d, {},
                       "unitary");
  const Complex minus_i(0.0, -1.0);
  family.with_derivatives(
      [g, unitary_at, minus_i](double theta, const ComplexMatrix& rho) {
        const ComplexMatrix u = unitary_at(theta);
        const ComplexMatrix out = u * rho * u.adjoint();
        return ComplexMatrix(minus_i * commutator(g, out));
      },
      [g, unitary_at](double theta, const ComplexMatrix& rho) {
        const ComplexMatrix u = unitary_at(theta);
        const ComplexMatrix out = u * rho * u.adjoint();
        return ComplexMatrix(-commutator(g, commutator(g, out)));
      });
  return family;
}

ChannelFamily mixture_family(const KrausChannel& at_zero, const KrausChannel& at_one) {
  if (at_zero.in_dim() != at_one.in_dim() || at_zero.out_dim() != at_one.out_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "mixture family endpoints differ in dimension");
  }
  ChannelFamily family(
      [at_zero, at_one](double theta) { return KrausChannel::mixture({1.0 - theta, theta}, {at_zero, at_one}); },
      at_zero.in_dim(), at_zero.out_dim(), ParameterDomain{0.0, 1.0}, "mixture");
  const int out = at_zero.out_dim();
  family.with_derivatives(
      [at_zero, at_one](double, const ComplexMatrix& rho) { return ComplexMatrix(at_one.apply(rho) - at_zero.apply(rho)); },
      [out](double, const ComplexMatrix&) { return ComplexMatrix(ComplexMatrix::Zero(out, out)); });
  return family;
}

ChannelFamily constant_family(const KrausChannel& channel) {
  ChannelFamily family([channel](double) { return channel; }, channel.in_dim(), channel.out_dim(), {}, "constant");
  const int out = channel.out_dim();
  auto zero = [out](double, const ComplexMatrix&) { return ComplexMatrix(ComplexMatrix::Zero(out, out)); };
  family.with_derivatives(zero, zero);
  return family;
}

ComplexMatrix family_derivative(const ChannelFamily& family, const DensityMatrix& rho, double theta) {
  if (rho.dim() != family.in_dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match family input");
  return hermitian_part(family.derivative(theta, rho.matrix()));
}

EstimationTask::EstimationTask(ChannelFamily fam, Povm m, double theta)
    : family(std::move(fam)), povm(std::move(m)), eval_point(theta) {
  if (povm.dim() != family.out_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "POVM dimension " + std::to_string(povm.dim()) +
                                                  " does not match family output " + std::to_string(family.out_dim()));
  }
}

}  // namespace fisherwit
