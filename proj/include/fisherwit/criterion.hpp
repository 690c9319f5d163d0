#pragma once

#include "fisherwit/convexopt.hpp"

namespace fisherwit {

struct CriterionResult {
  double s_star = 0.0;
  double gap_sq = 0.0;  // (λ_max − λ_min)²
  bool certified = false;
  ComplexMatrix optimizer;  // X_AB on C^d ⊗ C^d
  int iterations = 0;
};

/// (λ_max − λ_min)²
double generator_gap(const ComplexMatrix& generator);

/// 2(G⊗1 − 1⊗G)²; its expectation in σ⊗σ is 4·Var_σ(G).
ComplexMatrix criterion_objective(const ComplexMatrix& generator);

/// s* = max 2Tr[(G⊗1 − 1⊗G)² X] over X ⪰ 0, Tr X = 1, with equal marginals
/// lying in F. A certified result proves some state beats every free state
/// at estimating θ in e^{−iθG}; an uncertified one is inconclusive.
CriterionResult criterion_sdp(const ComplexMatrix& generator, const FreeSet& free);

bool certify_useful(const ComplexMatrix& generator, const FreeSet& free);

}  // namespace fisherwit
