#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fisherwit/convexopt.hpp"

namespace fisherwit {

struct NcBounds {
  double lower = 0.0;  // R²
  double upper = 0.0;  // R² + 2R
};

/// Fisher-information advantage of a probe over the best free state.
struct WitnessReport {
  double n_value = 0.0;
  double resource_value = 0.0;  // F_C or F_Q of the probe
  double free_max = 0.0;        // the subtracted maximum over F
  std::string task_descriptor;
  std::optional<NcBounds> bounds;
  std::optional<double> robustness;
  bool normalized = false;  // free_max ≤ 1
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

/// N_C(ρ|M) = F_C(ρ|M) − max_{σ∈F} F_C(σ|M)
WitnessReport n_c(const EstimationTask& task, const DensityMatrix& rho, const FreeSet& free, ScanOptions opts = {});

/// N_Q(ρ) = F_Q(ρ) − max_{σ∈F} F_Q(σ)
WitnessReport n_q(const ChannelFamily& family, const DensityMatrix& rho, const FreeSet& free, double theta = 0.0,
                  ScanOptions opts = {});

// Lower clamp on the free success probability of a constructed task; keeps
// the θ = 0 statistics away from the boundary of the simplex.
inline constexpr double kOffsetFloor = 1e-10;

/// Binary task whose outcome-0 probability for input τ is Tr(E_θ τ) with
/// E_θ = E₀ + θD; the channel measures and writes the outcome on a qubit.
EstimationTask affine_effect_task(const ComplexMatrix& e0, const ComplexMatrix& slope, double theta_max,
                                  std::string description);

struct DiscriminationTask {
  EstimationTask task;
  ComplexMatrix witness;
  double trace_w = 0.0;
  double free_min = 0.0;  // Tr(Wσ₀)
  double offset = 0.0;    // q, P(0|0)
  double scale = 0.0;     // c
  bool regularized = false;
};

/// Task from a witness: CFI at θ = 0 equals [Tr(Wτ) − Tr(Wσ₀)]² for every τ,
/// σ₀ minimizing Tr(Wσ) over F.
DiscriminationTask build_discrimination_task(const Witness& w, const FreeSet& free);

/// Same construction with the free minimum of Tr(Wσ) supplied directly.
DiscriminationTask build_discrimination_task(const ComplexMatrix& w, double free_min);

/// Game-based task P(0|θ) = θ·Tr(Qτ) + (1−θ)·min_F Tr(Qσ) for an effect 0 ⪯ Q ⪯ 1.
EstimationTask build_success_task(const ComplexMatrix& q_effect, const FreeSet& free);

/// Builds the witness task for ρ and reports N_C with bounds (R², R² + 2R).
WitnessReport nc_from_witness(const DensityMatrix& rho, const FreeSet& free, ScanOptions opts = {});

/// Pure bipartite state against separable states, via the Schmidt witness.
WitnessReport nc_from_witness_entanglement(const ComplexVector& psi, int da, int db);

/// Certified lower bound on the largest N_C over normalized tasks.
double nc_max_lower_bound(const DensityMatrix& rho, const FreeSet& free);

/// |∂_θ Tr[P Φ_θ(ρ)]| at the task's evaluation point.
double omega(const EstimationTask& task, const DensityMatrix& rho);

struct BinaryBounds {
  double n_c = 0.0;
  double r = 0.0;  // F_C(ρ|M)
  double omega = 0.0;
  double standard_robustness = 0.0;
  double q_min = 0.0;  // range of Tr[PΦ(τ)] over F
  double q_max = 0.0;
  double max_free_variance = 0.0;  // max q(1−q) over F
  double bound_tight = 0.0;
  double bound_loose = 0.0;
  bool vacuous = false;  // infinite standard robustness
  std::vector<std::string> flags;
};

/// Upper bounds on N_C for two-outcome tasks in terms of the standard robustness.
BinaryBounds nc_upper_bound_binary(const EstimationTask& task, const DensityMatrix& rho, const FreeSet& free,
                                   ScanOptions opts = {});

}  // namespace fisherwit
