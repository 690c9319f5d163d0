#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fisherwit/fisher.hpp"

namespace fisherwit {

struct PolytopeHull {
  std::vector<DensityMatrix> vertices;
};

/// States diagonal in the computational basis.
struct Incoherent {
  int dim = 2;
};

/// Qubit states with Bloch norm at most `radius`.
struct BlochBall {
  double radius = 1.0;
};

struct Singleton {
  DensityMatrix state;
};

class FreeSet {
 public:
  using Variant = std::variant<PolytopeHull, Incoherent, BlochBall, Singleton>;

  static FreeSet polytope(std::vector<DensityMatrix> vertices);
  static FreeSet incoherent(int dim);
  static FreeSet bloch_ball(double radius);
  static FreeSet singleton(const DensityMatrix& state);

  const Variant& variant() const { return variant_; }
  /// Free states form an affine slice of state space (Incoherent only).
  bool affine() const { return affine_; }
  int dim() const;
  std::string name() const;

  /// A free state of maximal support.
  ComplexMatrix barycenter() const;

 private:
  FreeSet(Variant v, bool affine) : variant_(std::move(v)), affine_(affine) {}
  Variant variant_;
  bool affine_;
};

// Membership tolerance shared by every variant.
inline constexpr double kMembershipTol = 1e-8;

bool contains(const FreeSet& free, const DensityMatrix& sigma);

/// Finite extreme set, or nullopt for the Bloch ball.
std::optional<std::vector<DensityMatrix>> extreme_points(const FreeSet& free);

/// Orthonormal columns spanning the support of the barycenter.
ComplexMatrix support_basis(const FreeSet& free, double cutoff = 1e-10);

/// Non-negative least squares min ‖Ax − b‖, x ≥ 0 (Lawson–Hanson).
RealVector nnls(const RealMatrix& a, const RealVector& b, int max_iter = 0);

/// n quasi-uniform unit vectors on the sphere, deterministic.
std::vector<Eigen::Vector3d> fibonacci_sphere(int n);

/// Convex hull of the real great-circle states cos(t/2)|0⟩ + sin(t/2)|1⟩
/// for t ∈ [π/2, 3π/2], discretized with `points` vertices.
FreeSet hemisphere_free_set(int points = 720);

inline constexpr int kBlochSamples = 2000;

struct ScanOptions {
  bool parallel = false;
  int jobs = 0;  // 0: runtime default
};

struct FreeMaximum {
  FisherValue value;
  DensityMatrix argmax;
  std::size_t index = 0;  // candidate index (Bloch ball: sample index)
  bool sampled = false;   // continuum set, value is a sampled lower bound
};

using StateFunctional = std::function<FisherValue(const DensityMatrix&)>;

/// Candidate states scanned for a maximum: the extreme points, or for the
/// Bloch ball the center plus a Fibonacci sample of its surface.
std::vector<DensityMatrix> scan_candidates(const FreeSet& free);

/// Values of f on every candidate, serially or with OpenMP.
std::vector<FisherValue> evaluate_serial(const std::vector<DensityMatrix>& states, const StateFunctional& f);
std::vector<FisherValue> evaluate_parallel(const std::vector<DensityMatrix>& states, const StateFunctional& f,
                                           int jobs = 0);

/// Max of a convex functional over F. Bloch-ball maxima are refined locally
/// on the surface around the best samples.
FreeMaximum maximize_over_free(const FreeSet& free, const StateFunctional& f, ScanOptions opts = {});

FreeMaximum max_cfi_over_free(const EstimationTask& task, const FreeSet& free, ScanOptions opts = {});
FreeMaximum max_qfi_over_free(const ChannelFamily& family, const FreeSet& free, double theta = 0.0,
                              ScanOptions opts = {});

struct LinearExtremum {
  double value = 0.0;
  DensityMatrix state;
  std::size_t index = 0;
};

/// Exact min/max of Tr(Aσ) over F; ties go to the lowest index.
LinearExtremum min_linear_over_free(const FreeSet& free, const ComplexMatrix& a);
LinearExtremum max_linear_over_free(const FreeSet& free, const ComplexMatrix& a);

}  // namespace fisherwit
