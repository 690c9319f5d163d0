#include "fisherwit/opwitness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fisherwit {

namespace {

constexpr double kClosedFormTol = 1e-8;
constexpr double kExplicitStep = 1e-6;

FisherValue trajectory_cfi(double p_channel, double p_reference) {
  return binary_cfi(p_reference, p_channel - p_reference);
}

}  // namespace

OperationGame::OperationGame(std::vector<double> probabilities, std::vector<DensityMatrix> states,
                             std::vector<ComplexMatrix> guesses, std::vector<KrausChannel> free_ops, int ancilla_dim)
    : probabilities_(std::move(probabilities)),
      states_(std::move(states)),
      guesses_(std::move(guesses)),
      free_ops_(std::move(free_ops)),
      ancilla_dim_(ancilla_dim) {
  if (probabilities_.empty()) throw Error(ErrorKind::InvalidInput, "game needs at least one state");
  if (states_.size() != probabilities_.size() || guesses_.size() != probabilities_.size()) {
    throw Error(ErrorKind::InvalidInput, "game needs one state and one guess element per probability");
  }
  if (ancilla_dim_ < 1) throw Error(ErrorKind::InvalidInput, "ancilla dimension must be positive");
  double total = 0.0;
  for (double p : probabilities_) {
    if (p < 0.0) throw Error(ErrorKind::InvalidInput, "negative game probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) throw Error(ErrorKind::InvalidInput, "game probabilities do not sum to 1");
  for (const auto& s : states_) {
    if (s.dim() % ancilla_dim_ != 0 || s.dim() != states_.front().dim())
      throw Error(ErrorKind::DimensionMismatch, "game states must share dimension ancilla·system");
  }
  for (auto& g : guesses_) {
    require_hermitian(g);
    g = 0.5 * (g + g.adjoint());
    if (hermitian_eig(g).min() < -1e-10) throw Error(ErrorKind::InvalidPovm, "guess element is not PSD");
  }
}

double op_psucc(const KrausChannel& channel, const OperationGame& game) {
  const int sys = game.states().front().dim() / game.ancilla_dim();
  if (channel.in_dim() != sys) throw Error(ErrorKind::DimensionMismatch, "channel does not act on the game system");
  const KrausChannel extended = channel.extend_left(game.ancilla_dim());
  double p = 0.0;
  for (std::size_t i = 0; i < game.size(); ++i) {
    const ComplexMatrix out = extended.apply(game.states()[i].matrix());
    if (game.guesses()[i].rows() != out.rows())
      throw Error(ErrorKind::DimensionMismatch, "guess element does not match channel output");
    p += game.probabilities()[i] * real_trace_product(out, game.guesses()[i]);
  }
  if (p > 1.0 + 1e-9 || p < -1e-9) throw Error(ErrorKind::InvalidPovm, "success probability " + std::to_string(p));
  return std::clamp(p, 0.0, 1.0);
}

double explicit_trajectory_probability(const KrausChannel& channel, const KrausChannel& reference,
                                       const OperationGame& game, double theta) {
  const auto n = static_cast<int>(game.size());
  const KrausChannel a = channel.extend_left(game.ancilla_dim());
  const KrausChannel b = reference.extend_left(game.ancilla_dim());
  const int out_dim = a.out_dim();
  if (out_dim * n * 2 > kMaxDim) throw Error(ErrorKind::DimensionLimit, "explicit trajectory exceeds dimension limit");

  const ComplexMatrix flag0 = outer(basis_ket(2, 0));
  const ComplexMatrix flag1 = outer(basis_ket(2, 1));
  const int big = out_dim * n * 2;
  ComplexMatrix evolved = ComplexMatrix::Zero(big, big);
  ComplexMatrix effect = ComplexMatrix::Zero(big, big);
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const ComplexMatrix label = outer(basis_ket(n, i));
    const double p = game.probabilities()[idx];
    const ComplexMatrix& rho = game.states()[idx].matrix();
    evolved += theta * p * kron(kron(a.apply(rho), label), flag0);
    evolved += (1.0 - theta) * p * kron(kron(b.apply(rho), label), flag1);
    effect += kron(kron(game.guesses()[idx], label), ComplexMatrix::Identity(2, 2));
  }
  return real_trace_product(evolved, effect);
}

ChannelGap channel_nc_gap(const KrausChannel& target, const OperationGame& game, bool explicit_check) {
  if (game.free_ops().empty()) throw Error(ErrorKind::EmptyFreeOps, "game lists no free operations");
  const auto& ops = game.free_ops();
  std::vector<double> free_p(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) free_p[k] = op_psucc(ops[k], game);

  ChannelGap out;
  out.reference_index = static_cast<std::size_t>(std::min_element(free_p.begin(), free_p.end()) - free_p.begin());
  out.p_reference = free_p[out.reference_index];
  out.p_target = op_psucc(target, game);
  out.divergent = out.p_reference <= 0.0 || out.p_reference >= 1.0;

  const FisherValue target_cfi = trajectory_cfi(out.p_target, out.p_reference);
  out.cfi_target = target_cfi.value;
  FisherValue best{0.0, false, 0.0};
  for (double p : free_p) {
    const FisherValue v = trajectory_cfi(p, out.p_reference);
    if (v.infinite || v.value > best.value) best = v;
  }
  out.cfi_free_max = best.value;
  out.gap = out.cfi_target - out.cfi_free_max;

  if (!out.divergent) {
    const double dp = out.p_target - out.p_reference;
    const double closed = dp * dp / (out.p_reference * (1.0 - out.p_reference));
    if (std::abs(closed - out.cfi_target) > kClosedFormTol * std::max(1.0, closed)) {
      throw Error(ErrorKind::NumericalFailure, "trajectory CFI disagrees with its closed form");
    }
  }

  const int sys_out = target.out_dim() * game.ancilla_dim();
  if (explicit_check && !out.divergent && sys_out * static_cast<int>(game.size()) * 2 <= kMaxDim) {
    const KrausChannel& ref = ops[out.reference_index];
    const double p0 = explicit_trajectory_probability(target, ref, game, 0.0);
    const double slope = (explicit_trajectory_probability(target, ref, game, kExplicitStep) - p0) / kExplicitStep;
    const FisherValue explicit_cfi = binary_cfi(p0, slope);
    out.explicit_residual = std::abs(explicit_cfi.value - out.cfi_target);
  }
  return out;
}

}  // namespace fisherwit
