#pragma once

#include <vector>

#include "fisherwit/fisher.hpp"

namespace fisherwit {

/// Discrimination game for channels: state ρ_i (on ancilla ⊗ system) is sent
/// with probability p_i and guessed correctly when π_i clicks.
class OperationGame {
 public:
  OperationGame(std::vector<double> probabilities, std::vector<DensityMatrix> states,
                std::vector<ComplexMatrix> guesses, std::vector<KrausChannel> free_ops, int ancilla_dim = 1);

  std::size_t size() const { return probabilities_.size(); }
  int ancilla_dim() const { return ancilla_dim_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  const std::vector<ComplexMatrix>& guesses() const { return guesses_; }
  const std::vector<KrausChannel>& free_ops() const { return free_ops_; }

 private:
  std::vector<double> probabilities_;
  std::vector<DensityMatrix> states_;
  std::vector<ComplexMatrix> guesses_;
  std::vector<KrausChannel> free_ops_;
  int ancilla_dim_;
};

/// p_succ(Λ) = Σ_i p_i Tr[(1 ⊗ Λ)(ρ_i) π_i]
double op_psucc(const KrausChannel& channel, const OperationGame& game);

struct ChannelGap {
  double p_target = 0.0;
  double p_reference = 0.0;  // p_succ(Ω₀), the smallest over free operations
  std::size_t reference_index = 0;
  double cfi_target = 0.0;
  double cfi_free_max = 0.0;
  double gap = 0.0;
  bool divergent = false;  // p_succ(Ω₀) ∈ {0, 1}
  double explicit_residual = -1.0;  // |explicit − statistics| CFI, −1 if not run
};

/// CFI gap at θ = 0 between Ξ and the free operations along the trajectory
/// P(0|θ) = θ·p_succ(Λ) + (1 − θ)·p_succ(Ω₀).
ChannelGap channel_nc_gap(const KrausChannel& target, const OperationGame& game, bool explicit_check = true);

/// P(0|θ) of the explicit tensor construction (system ⊗ label ⊗ flag),
/// with Λ on the flag-0 branch and Ω₀ on the flag-1 branch.
double explicit_trajectory_probability(const KrausChannel& channel, const KrausChannel& reference,
                                       const OperationGame& game, double theta);

}  // namespace fisherwit
