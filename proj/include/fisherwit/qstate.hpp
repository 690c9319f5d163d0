#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fisherwit/numkernel.hpp"

namespace fisherwit {

/// Hermitian, positive semidefinite, unit-trace matrix. Instances are only
/// produced by validation, so holders can rely on the invariants.
class DensityMatrix {
 public:
  /// Validates m as a state. Eigenvalues in [−1e−10, 0) are clamped to zero
  /// and a trace drift of at most 1e−10 is renormalized away.
  static DensityMatrix validate(const ComplexMatrix& m);

  /// For outputs of already-validated operations: symmetrizes, clamps small
  /// negative eigenvalues and renormalizes. Throws NumericalFailure when the
  /// drift exceeds `tol`.
  static DensityMatrix from_computed(const ComplexMatrix& m, double tol = 1e-8);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix basis_state(int dim, int index);
  static DensityMatrix from_bloch(const Eigen::Vector3d& bloch);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Tr(ρ²)
  double purity() const;

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

DensityMatrix validate_state(const ComplexMatrix& m);

/// Convex combination Σ w_i ρ_i of states of equal dimension.
DensityMatrix mix(const std::vector<double>& weights, const std::vector<DensityMatrix>& states);

class Povm {
 public:
  /// Elements must be Hermitian PSD within 1e−10 and sum to the identity
  /// within 1e−9; a smaller completeness defect is spread over the elements
  /// as S^{−1/2} M_i S^{−1/2}.
  explicit Povm(std::vector<ComplexMatrix> elements);

  static Povm computational_basis(int dim);
  static Povm binary(const ComplexMatrix& effect);

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  std::size_t size() const { return elements_.size(); }
  const ComplexMatrix& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  std::vector<ComplexMatrix> elements_;
};

class KrausChannel {
 public:
  /// Requires Σ K†K = 1 within 1e−9.
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  static KrausChannel identity(int dim);
  static KrausChannel unitary(const ComplexMatrix& u);
  /// Full dephasing in the computational basis.
  static KrausChannel dephasing(int dim);
  /// Replaces every input with the given state.
  static KrausChannel preparation(int in_dim, const DensityMatrix& state);
  /// Σ_i p_i Φ_i for channels of matching dimensions.
  static KrausChannel mixture(const std::vector<double>& weights, const std::vector<KrausChannel>& channels);

  int in_dim() const { return static_cast<int>(ops_.front().cols()); }
  int out_dim() const { return static_cast<int>(ops_.front().rows()); }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }

  /// Σ_k K_k X K_k† for arbitrary X.
  ComplexMatrix apply(const ComplexMatrix& x) const;
  /// Heisenberg picture Σ_k K_k† Y K_k.
  ComplexMatrix adjoint(const ComplexMatrix& y) const;
  /// 1 ⊗ Φ with the identity acting on a leading factor of dimension `dim`.
  KrausChannel extend_left(int dim) const;

 private:
  std::vector<ComplexMatrix> ops_;
};

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho);

/// p_i = Tr(ρ M_i), clamped to [0, 1].
RealVector outcome_distribution(const DensityMatrix& rho, const Povm& povm);

struct ParameterDomain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double theta) const { return theta >= lo && theta <= hi; }
};

enum class DerivativeMode { Analytic, FiniteDifference };

/// θ ↦ Φ_θ with access to ∂Φ_θ(ρ)/∂θ and ∂²Φ_θ(ρ)/∂θ². Derivatives are
/// analytic when supplied, otherwise central differences.
class ChannelFamily {
 public:
  using ChannelFn = std::function<KrausChannel(double)>;
  using MapFn = std::function<ComplexMatrix(double, const ComplexMatrix&)>;

  static constexpr double kDefaultStep = 1e-5;
  static constexpr double kDefaultSecondStep = 1e-4;

  ChannelFamily(ChannelFn channel, int in_dim, int out_dim, ParameterDomain domain = {},
                std::string description = "custom");

  /// Supplies analytic first and (optionally) second derivatives.
  ChannelFamily& with_derivatives(MapFn first, MapFn second = {});
  ChannelFamily& with_step(double h);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  const ParameterDomain& domain() const { return domain_; }
  const std::string& description() const { return description_; }
  DerivativeMode derivative_mode() const { return first_ ? DerivativeMode::Analytic : DerivativeMode::FiniteDifference; }
  double step() const { return step_; }

  KrausChannel channel(double theta) const;
  ComplexMatrix output(double theta, const ComplexMatrix& rho) const;
  ComplexMatrix derivative(double theta, const ComplexMatrix& rho) const;
  ComplexMatrix second_derivative(double theta, const ComplexMatrix& rho) const;

  /// Central-difference derivative regardless of analytic availability.
  ComplexMatrix finite_difference_derivative(double theta, const ComplexMatrix& rho, double h) const;

 private:
  void require_in_domain(double theta) const;

  ChannelFn channel_;
  MapFn first_;
  MapFn second_;
  int in_dim_;
  int out_dim_;
  ParameterDomain domain_;
  std::string description_;
  double step_ = kDefaultStep;
};

/// Φ_θ(ρ) = e^{−iθG} ρ e^{iθG}
ChannelFamily unitary_family(const ComplexMatrix& generator);

/// Φ_θ = (1−θ)Φ₀ + θΦ₁ on θ ∈ [0, 1].
ChannelFamily mixture_family(const KrausChannel& at_zero, const KrausChannel& at_one);

/// Same channel for every θ.
ChannelFamily constant_family(const KrausChannel& channel);

/// dρ_θ/dθ, symmetrized. Output is traceless within 1e−7 for CPTP families.
ComplexMatrix family_derivative(const ChannelFamily& family, const DensityMatrix& rho, double theta);

struct EstimationTask {
  ChannelFamily family;
  Povm povm;
  double eval_point = 0.0;

  EstimationTask(ChannelFamily fam, Povm m, double theta = 0.0);
};

}  // namespace fisherwit
