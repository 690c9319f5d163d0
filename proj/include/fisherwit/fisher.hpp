#pragma once

#include <limits>

#include "fisherwit/qstate.hpp"

namespace fisherwit {

/// A Fisher-information value. `infinite` marks a divergent outcome term
/// (zero probability with non-vanishing slope); `value` is then +inf.
struct FisherValue {
  double value = 0.0;
  bool infinite = false;
  double eval_point = 0.0;

  static FisherValue inf(double theta = 0.0) {
    return {std::numeric_limits<double>::infinity(), true, theta};
  }
};

// Probability cutoff below which an outcome is treated as impossible.
inline constexpr double kOutcomeCutoff = 1e-12;
// Slope above which an impossible outcome makes the CFI diverge.
inline constexpr double kSlopeCutoff = 1e-9;
// λ_i + λ_j at or below this is outside the support for the SLD.
inline constexpr double kSupportCutoff = 1e-12;

/// CFI of a distribution p with slopes dp. Outcomes with p ≤ 1e−12 and
/// |dp| ≤ 1e−9 contribute their continuous limit 2·p'' when second
/// derivatives are supplied (p has a double zero there), otherwise nothing.
FisherValue classical_fisher(const RealVector& p, const RealVector& dp, const RealVector* ddp = nullptr,
                             double theta = 0.0);

/// F_C = Σ_i (∂_θ p_i)² / p_i at the task's evaluation point, p_i = Tr[Φ_θ(ρ) M_i].
FisherValue classical_fisher(const EstimationTask& task, const DensityMatrix& rho);

/// Same, at an explicit θ instead of task.eval_point.
FisherValue classical_fisher_at(const EstimationTask& task, const DensityMatrix& rho, double theta);

/// dp²/(p(1−p)) for a two-outcome experiment.
FisherValue binary_cfi(double p, double dp);

/// Symmetric logarithmic derivative solving ρD + Dρ = 2dρ on the support of ρ.
ComplexMatrix sld(const DensityMatrix& rho, const ComplexMatrix& drho);

/// Tr(ρD²), cross-checked against 2Σ|dρ_ij|²/(λ_i+λ_j).
FisherValue quantum_fisher(const DensityMatrix& rho, const ComplexMatrix& drho);

/// QFI of ρ under e^{−iθG}. For pure states also checks 4·Var_ρ(G).
FisherValue quantum_fisher_unitary(const DensityMatrix& rho, const ComplexMatrix& generator);

/// QFI of Φ_θ(ρ) at θ.
FisherValue quantum_fisher(const ChannelFamily& family, const DensityMatrix& rho, double theta);

/// Projective measurement onto the SLD eigenbasis of (Φ_θ(ρ), ∂_θΦ_θ(ρ)).
Povm sld_measurement(const ChannelFamily& family, const DensityMatrix& rho, double theta);

/// ⟨G²⟩ − ⟨G⟩²
double variance(const DensityMatrix& rho, const ComplexMatrix& op);

}  // namespace fisherwit
