#include "fisherwit/witnesscraft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fisherwit {

namespace {

constexpr double kSandwichTol = 1e-6;
constexpr double kNormalizedTol = 1e-9;

ComplexMatrix flag_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

void fill_difference(WitnessReport& rep, const FisherValue& probe, const FisherValue& free_max) {
  rep.resource_value = probe.value;
  rep.free_max = free_max.value;
  if (free_max.infinite) {
    rep.flags.push_back("divergent_free_fisher");
    rep.n_value = probe.infinite ? std::numeric_limits<double>::quiet_NaN()
                                 : -std::numeric_limits<double>::infinity();
  } else if (probe.infinite) {
    rep.flags.push_back("divergent_fisher");
    rep.n_value = std::numeric_limits<double>::infinity();
  } else {
    rep.n_value = probe.value - free_max.value;
  }
  rep.normalized = !free_max.infinite && free_max.value <= 1.0 + kNormalizedTol;
}

void check_sandwich(const WitnessReport& rep, double r, bool affine) {
  const double lower = r * r;
  const double upper = r * r + 2.0 * r;
  if (rep.n_value < lower - kSandwichTol || rep.n_value > upper + kSandwichTol) {
    throw Error(ErrorKind::NumericalFailure, "N_C = " + std::to_string(rep.n_value) + " outside [" +
                                                 std::to_string(lower) + ", " + std::to_string(upper) + "]");
  }
  if (affine && std::abs(rep.n_value - lower) > kSandwichTol) {
    throw Error(ErrorKind::NumericalFailure,
                "affine theory but N_C = " + std::to_string(rep.n_value) + " differs from R² = " + std::to_string(lower));
  }
}

}  // namespace

bool WitnessReport::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

WitnessReport n_c(const EstimationTask& task, const DensityMatrix& rho, const FreeSet& free, ScanOptions opts) {
  WitnessReport rep;
  rep.task_descriptor = task.family.description();
  const FisherValue probe = classical_fisher(task, rho);
  const FreeMaximum fm = max_cfi_over_free(task, free, opts);
  if (fm.sampled) rep.flags.push_back("sampled_free_max");
  fill_difference(rep, probe, fm.value);
  return rep;
}

WitnessReport n_q(const ChannelFamily& family, const DensityMatrix& rho, const FreeSet& free, double theta,
                  ScanOptions opts) {
  WitnessReport rep;
  rep.task_descriptor = family.description();
  const FisherValue probe = quantum_fisher(family, rho, theta);
  const FreeMaximum fm = max_qfi_over_free(family, free, theta, opts);
  if (fm.sampled) rep.flags.push_back("sampled_free_max");
  fill_difference(rep, probe, fm.value);
  return rep;
}

EstimationTask affine_effect_task(const ComplexMatrix& e0, const ComplexMatrix& slope, double theta_max,
                                  std::string description) {
  require_hermitian(e0);
  require_hermitian(slope);
  if (e0.rows() != slope.rows()) throw Error(ErrorKind::DimensionMismatch, "effect and slope differ in size");
  const int d = static_cast<int>(e0.rows());
  const ComplexMatrix base = 0.5 * (e0 + e0.adjoint());
  const ComplexMatrix dir = 0.5 * (slope + slope.adjoint());

  auto channel = [base, dir, d](double theta) {
    const HermitianEig eig = hermitian_eig(base + theta * dir);
    const ComplexMatrix yes = spectral_map(eig, [](double l) { return std::sqrt(std::clamp(l, 0.0, 1.0)); });
    const ComplexMatrix no = spectral_map(eig, [](double l) { return std::sqrt(1.0 - std::clamp(l, 0.0, 1.0)); });
    std::vector<ComplexMatrix> ops;
    ops.reserve(2 * static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      const ComplexMatrix bra = basis_ket(d, j).adjoint();
      ops.push_back(basis_ket(2, 0) * bra * yes);
      ops.push_back(basis_ket(2, 1) * bra * no);
    }
    return KrausChannel(std::move(ops));
  };
  ChannelFamily family(channel, d, 2, ParameterDomain{0.0, theta_max}, std::move(description));
  const ComplexMatrix z = flag_z();
  family.with_derivatives(
      [dir, z](double, const ComplexMatrix& x) { return ComplexMatrix(trace_product(dir, x).real() * z); },
      [](double, const ComplexMatrix&) { return ComplexMatrix(ComplexMatrix::Zero(2, 2)); });
  return EstimationTask(std::move(family), Povm::computational_basis(2), 0.0);
}

DiscriminationTask build_discrimination_task(const ComplexMatrix& w, double free_min) {
  require_hermitian(w);
  const double t = w.trace().real();
  if (!(t > 0.0)) throw Error(ErrorKind::InfeasibleWitness, "witness has non-positive trace");
  if (hermitian_eig(w).min() < -1e-9) throw Error(ErrorKind::InfeasibleWitness, "witness is not PSD");
  const double q_raw = std::clamp(free_min / t, 0.0, 1.0);
  const bool regularized = q_raw < kOffsetFloor;
  const double q = std::max(q_raw, kOffsetFloor);
  const double c = t * std::sqrt(q * (1.0 - q));
  const int d = static_cast<int>(w.rows());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  // E_θ = θc·W/T + (1 − θc)·q·1, valid while θc ≤ 1.
  const double theta_max = c > 0.0 ? 1.0 / c : std::numeric_limits<double>::infinity();
  EstimationTask task = affine_effect_task(q * id, c * (w / t - q * id), theta_max, "witness-discrimination");
  return {std::move(task), w, t, free_min, q, c, regularized};
}

DiscriminationTask build_discrimination_task(const Witness& w, const FreeSet& free) {
  const Witness checked = validate_witness(w.op, free);
  const LinearExtremum lo = min_linear_over_free(free, checked.op);
  return build_discrimination_task(checked.op, lo.value);
}

EstimationTask build_success_task(const ComplexMatrix& q_effect, const FreeSet& free) {
  require_hermitian(q_effect);
  const HermitianEig eig = hermitian_eig(q_effect);
  if (eig.min() < -1e-10 || eig.max() > 1.0 + 1e-10) {
    throw Error(ErrorKind::InvalidPovm, "success effect must satisfy 0 ⪯ Q ⪯ 1");
  }
  const double p0 = min_linear_over_free(free, q_effect).value;
  const int d = static_cast<int>(q_effect.rows());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  return affine_effect_task(p0 * id, q_effect - p0 * id, 1.0, "success-probability");
}

WitnessReport nc_from_witness(const DensityMatrix& rho, const FreeSet& free, ScanOptions opts) {
  const RobustnessResult r = generalized_robustness(rho, free);
  if (r.infinite) {
    WitnessReport rep;
    rep.task_descriptor = "witness-discrimination";
    rep.n_value = std::numeric_limits<double>::infinity();
    rep.robustness = r.value;
    rep.flags.push_back("infinite_robustness");
    return rep;
  }
  const Witness w = optimal_witness(rho, free);
  const DiscriminationTask dt = build_discrimination_task(w, free);
  WitnessReport rep = n_c(dt.task, rho, free, opts);
  rep.robustness = r.value;
  rep.bounds = NcBounds{r.value * r.value, r.value * r.value + 2.0 * r.value};
  if (dt.regularized) rep.flags.push_back("regularized_offset");
  check_sandwich(rep, r.value, free.affine());
  return rep;
}

WitnessReport nc_from_witness_entanglement(const ComplexVector& psi, int da, int db) {
  if (db < 2) throw Error(ErrorKind::InvalidInput, "entanglement witness needs a second factor of dimension ≥ 2");
  const RobustnessResult r = entanglement_robustness_pure(psi, da, db);
  const ComplexMatrix& w = r.witness->op;
  const Schmidt s = schmidt_decomposition(psi / psi.norm(), da, db);

  // Product states at the ends of the separable range [0, 1] of Tr(Wσ):
  // |u₁w₁⟩ reaches 1, |u₁⟩ ⊗ (a vector orthogonal to w₁) reaches 0.
  const ComplexVector u1 = s.left.col(0);
  const ComplexVector w1 = s.right.col(0);
  ComplexVector w_perp = basis_ket(db, 0);
  if (std::abs(w1(0)) > 0.5) w_perp = basis_ket(db, 1);
  w_perp -= w1 * w1.dot(w_perp);
  w_perp.normalize();
  const DensityMatrix top = DensityMatrix::pure(kron(u1, w1));
  const DensityMatrix bottom = DensityMatrix::pure(kron(u1, w_perp));

  const double free_min = real_trace_product(w, bottom.matrix());
  const DiscriminationTask dt = build_discrimination_task(w, free_min);
  const DensityMatrix rho = DensityMatrix::pure(psi);

  WitnessReport rep;
  rep.task_descriptor = "witness-discrimination";
  const FisherValue probe = classical_fisher(dt.task, rho);
  // The CFI is convex in Tr(Wσ), so its separable maximum sits at an end of the range.
  FisherValue fm = classical_fisher(dt.task, top);
  const FisherValue fb = classical_fisher(dt.task, bottom);
  if (fb.infinite || (!fm.infinite && fb.value > fm.value)) fm = fb;
  fill_difference(rep, probe, fm);
  rep.flags.push_back("separable_range_analytic");
  if (dt.regularized) rep.flags.push_back("regularized_offset");
  rep.robustness = r.value;
  rep.bounds = NcBounds{r.value * r.value, r.value * r.value + 2.0 * r.value};
  check_sandwich(rep, r.value, false);
  return rep;
}

double nc_max_lower_bound(const DensityMatrix& rho, const FreeSet& free) {
  const WitnessReport rep = nc_from_witness(rho, free);
  if (!rep.robustness || std::isinf(*rep.robustness)) return std::numeric_limits<double>::infinity();
  return std::max(rep.n_value, *rep.robustness * *rep.robustness);
}

double omega(const EstimationTask& task, const DensityMatrix& rho) {
  if (task.povm.size() != 2) throw Error(ErrorKind::NotBinary, "ω needs a two-outcome measurement");
  const ComplexMatrix d = family_derivative(task.family, rho, task.eval_point);
  return std::abs(real_trace_product(task.povm[0], d));
}

BinaryBounds nc_upper_bound_binary(const EstimationTask& task, const DensityMatrix& rho, const FreeSet& free,
                                   ScanOptions opts) {
  if (task.povm.size() != 2) throw Error(ErrorKind::NotBinary, "bound needs a two-outcome measurement");
  BinaryBounds out;
  const WitnessReport rep = n_c(task, rho, free, opts);
  if (rep.has_flag("divergent_fisher")) throw Error(ErrorKind::InvalidInput, "probe CFI diverges; bound undefined");
  out.n_c = rep.n_value;
  out.r = rep.resource_value;
  out.flags = rep.flags;
  out.omega = omega(task, rho);

  const ComplexMatrix a = task.family.channel(task.eval_point).adjoint(task.povm[0]);
  out.q_min = min_linear_over_free(free, a).value;
  out.q_max = max_linear_over_free(free, a).value;
  // max q(1−q) over extreme points; the Bloch sphere is connected, so its
  // q values fill [q_min, q_max].
  if (const auto ext = extreme_points(free)) {
    out.max_free_variance = 0.0;
    for (const auto& v : *ext) {
      const double q = std::clamp(real_trace_product(a, v.matrix()), 0.0, 1.0);
      out.max_free_variance = std::max(out.max_free_variance, q * (1.0 - q));
    }
  } else {
    const double q_star = std::clamp(0.5, out.q_min, out.q_max);
    out.max_free_variance = q_star * (1.0 - q_star);
  }

  const RobustnessResult rs = standard_robustness(rho, free);
  out.standard_robustness = rs.value;
  if (rs.infinite) {
    out.vacuous = true;
    out.bound_tight = out.bound_loose = out.r;
    out.flags.push_back("infinite_standard_robustness");
    return out;
  }
  const double scale = (rs.value + 1.0) * (rs.value + 1.0);
  const double w2 = out.omega * out.omega;
  out.bound_loose = out.r - 4.0 * w2 / scale;
  if (w2 == 0.0) {
    out.bound_tight = out.r;
  } else if (out.max_free_variance <= 0.0) {
    out.bound_tight = -std::numeric_limits<double>::infinity();
    out.flags.push_back("degenerate_free_statistics");
  } else {
    out.bound_tight = out.r - w2 / (scale * out.max_free_variance);
  }
  return out;
}

}  // namespace fisherwit
