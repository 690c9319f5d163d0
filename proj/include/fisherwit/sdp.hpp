#pragma once

#include <vector>

#include "fisherwit/numkernel.hpp"

namespace fisherwit {

enum class SdpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(SdpStatus s) noexcept;

namespace conic {

/// One linear equality ⟨A, X⟩ = b over all blocks. An empty matrix in `psd`
/// stands for a zero coefficient block; an empty `lp` for a zero LP row.
struct Row {
  std::vector<RealMatrix> psd;
  RealVector lp;
  double b = 0.0;
};

/// min Σ_k ⟨C_k, X_k⟩ + c_lpᵀx  s.t. rows, X_k ⪰ 0 (real symmetric), x ≥ 0.
struct Problem {
  std::vector<int> psd_sizes;
  int lp_size = 0;
  std::vector<RealMatrix> c_psd;  // empty entries mean zero
  RealVector c_lp;
  std::vector<Row> rows;
};

struct Options {
  int max_iterations = 200;
  double tolerance = 1e-10;
  // Residual level still accepted when progress stalls before `tolerance`.
  double accept_tolerance = 1e-7;
  double step_fraction = 0.98;
};

struct Solution {
  SdpStatus status = SdpStatus::Optimal;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  std::vector<RealMatrix> x_psd;
  RealVector x_lp;
  RealVector y;  // one multiplier per input row (dropped rows get 0)
  std::vector<RealMatrix> z_psd;
  RealVector z_lp;
  int iterations = 0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
};

/// Infeasible-start primal–dual interior point method (HKM direction,
/// Mehrotra predictor–corrector). Linearly dependent rows are removed
/// first; an inconsistent dependent row yields Infeasible.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace conic

/// [[Re X, −Im X], [Im X, Re X]]; Tr(AX) = ½⟨Ã, X̃⟩ for Hermitian A, X.
RealMatrix real_embedding(const ComplexMatrix& h);

/// Hermitian matrix represented by a symmetric 2n×2n Y; PSD Y gives PSD X.
ComplexMatrix from_real_embedding(const RealMatrix& y);

struct HermitianConstraint {
  ComplexMatrix a;
  double b = 0.0;
};

/// maximize Tr(CX) s.t. Tr(A_k X) = b_k, Tr(B_j X) ≤ c_j, X ⪰ 0 (Hermitian n×n).
struct SdpProblem {
  ComplexMatrix objective;
  int n = 0;
  std::vector<HermitianConstraint> equalities;
  std::vector<HermitianConstraint> inequalities;
};

struct SdpResult {
  SdpStatus status = SdpStatus::Optimal;
  double value = 0.0;
  ComplexMatrix x;
  int iterations = 0;
  double relative_gap = 0.0;
};

inline constexpr int kSdpMaxDim = 16;
inline constexpr int kSdpMaxConstraints = 64;

SdpResult solve_sdp(const SdpProblem& problem, const conic::Options& options = {});

}  // namespace fisherwit
