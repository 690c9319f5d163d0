#pragma once

#include <limits>
#include <optional>
#include <string>

#include "fisherwit/freesets.hpp"
#include "fisherwit/sdp.hpp"

namespace fisherwit {

/// PSD operator with Tr(Wσ) ≤ 1 on the free set.
struct Witness {
  ComplexMatrix op;
  double free_value = 0.0;  // max over free states of Tr(Wσ)
};

struct RobustnessResult {
  double value = 0.0;  // +inf when ρ cannot be mixed into F
  bool infinite = false;
  std::optional<Witness> witness;  // absent when infinite
  std::string method;              // "sdp", "bloch-closed-form", "schmidt"
};

/// Generalized robustness R(ρ) = max{Tr(Wρ) − 1 : W ⪰ 0, Tr(Wσ) ≤ 1 on F}.
RobustnessResult generalized_robustness(const DensityMatrix& rho, const FreeSet& free);

/// Standard robustness: min λ with (ρ + λσ)/(1+λ) ∈ F for some σ ∈ F.
RobustnessResult standard_robustness(const DensityMatrix& rho, const FreeSet& free,
                                     double lambda_cap = 1e6);

/// Witness attaining the robustness, rescaled so its free maximum is 1.
Witness optimal_witness(const DensityMatrix& rho, const FreeSet& free);

/// Checks W ⪰ −1e−9 and max_F Tr(Wσ) ≤ 1 + 1e−7; fills free_value.
Witness validate_witness(const ComplexMatrix& w, const FreeSet& free);

/// Schmidt decomposition of a bipartite pure state |ψ⟩ ∈ C^da ⊗ C^db.
struct Schmidt {
  RealVector coefficients;  // descending, non-negative
  ComplexMatrix left;       // columns |u_i⟩
  ComplexMatrix right;      // columns |w_i⟩
};

Schmidt schmidt_decomposition(const ComplexVector& psi, int da, int db);

/// Entanglement robustness of a pure state, (Σ_i s_i)² − 1, with witness
/// |φ⟩⟨φ|, φ = Σ_i |u_i w_i⟩ (free maximum 1 over separable states).
RobustnessResult entanglement_robustness_pure(const ComplexVector& psi, int da, int db);

}  // namespace fisherwit
