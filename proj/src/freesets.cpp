#include "fisherwit/freesets.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <string>

#ifdef FISHERWIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace fisherwit {

namespace {

// Strict improvement needed to displace an earlier candidate.
constexpr double kTieTol = 1e-12;

constexpr int kRefineSeeds = 5;
constexpr double kRefineStart = 0.05;
constexpr double kRefineStop = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool better(const FisherValue& a, const FisherValue& b) {
  if (a.infinite) return !b.infinite;
  if (b.infinite) return false;
  return a.value > b.value + kTieTol;
}

Eigen::Vector3d spherical(double radius, double polar, double azimuth) {
  return radius * Eigen::Vector3d(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                                  std::cos(polar));
}

void require_dim(const FreeSet& free, int dim) {
  if (free.dim() != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "free set has dimension " + std::to_string(free.dim()) + ", operand " + std::to_string(dim));
  }
}

// Pattern search over (polar, azimuth) on the sphere of the given radius.
std::pair<FisherValue, Eigen::Vector3d> refine_on_sphere(const StateFunctional& f, double radius,
                                                         const Eigen::Vector3d& seed, FisherValue seed_value) {
  const double n = seed.norm();
  double polar = n > 0.0 ? std::acos(std::clamp(seed(2) / n, -1.0, 1.0)) : 0.0;
  double azimuth = std::atan2(seed(1), seed(0));
  FisherValue best = seed_value;
  double step = kRefineStart;
  const double moves[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (step > kRefineStop && !best.infinite) {
    bool moved = false;
    for (const auto& m : moves) {
      const double pa = polar + m[0] * step;
      const double az = azimuth + m[1] * step;
      const FisherValue v = f(DensityMatrix::from_bloch(spherical(radius, pa, az)));
      if (v.infinite || v.value > best.value) {
        best = v;
        polar = pa;
        azimuth = az;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return {best, spherical(radius, polar, azimuth)};
}

}  // namespace

FreeSet FreeSet::polytope(std::vector<DensityMatrix> vertices) {
  if (vertices.empty()) throw Error(ErrorKind::InvalidInput, "polytope needs at least one vertex");
  for (const auto& v : vertices) {
    if (v.dim() != vertices.front().dim()) throw Error(ErrorKind::DimensionMismatch, "polytope vertices differ in dim");
  }
  return FreeSet(PolytopeHull{std::move(vertices)}, false);
}

FreeSet FreeSet::incoherent(int dim) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::DimensionLimit, "incoherent set dimension out of range");
  return FreeSet(Incoherent{dim}, true);
}

FreeSet FreeSet::bloch_ball(double radius) {
  if (!(radius > 0.0 && radius <= 1.0)) throw Error(ErrorKind::InvalidInput, "Bloch-ball radius must lie in (0, 1]");
  return FreeSet(BlochBall{radius}, false);
}

FreeSet FreeSet::singleton(const DensityMatrix& state) { return FreeSet(Singleton{state}, false); }

int FreeSet::dim() const {
  return std::visit(overloaded{[](const PolytopeHull& p) { return p.vertices.front().dim(); },
                               [](const Incoherent& i) { return i.dim; }, [](const BlochBall&) { return 2; },
                               [](const Singleton& s) { return s.state.dim(); }},
                    variant_);
}

std::string FreeSet::name() const {
  return std::visit(
      overloaded{[](const PolytopeHull& p) { return "polytope(" + std::to_string(p.vertices.size()) + ")"; },
                 [](const Incoherent& i) { return "incoherent(" + std::to_string(i.dim) + ")"; },
                 [](const BlochBall& b) { return "blochball(" + std::to_string(b.radius) + ")"; },
                 [](const Singleton&) { return std::string("singleton"); }},
      variant_);
}

ComplexMatrix FreeSet::barycenter() const {
  return std::visit(overloaded{[](const PolytopeHull& p) {
                                 ComplexMatrix m = ComplexMatrix::Zero(p.vertices.front().dim(), p.vertices.front().dim());
                                 for (const auto& v : p.vertices) m += v.matrix();
                                 return ComplexMatrix(m / static_cast<double>(p.vertices.size()));
                               },
                               [](const Incoherent& i) {
                                 return ComplexMatrix(ComplexMatrix::Identity(i.dim, i.dim) / double(i.dim));
                               },
                               [](const BlochBall&) { return ComplexMatrix(ComplexMatrix::Identity(2, 2) / 2.0); },
                               [](const Singleton& s) { return s.state.matrix(); }},
                    variant_);
}

RealVector nnls(const RealMatrix& a, const RealVector& b, int max_iter) {
  const Eigen::Index n = a.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 30);
  RealVector x = RealVector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-13 * std::max(1.0, a.norm() * b.norm());
  RealVector w = a.transpose() * (b - a * x);

  for (int outer = 0; outer < max_iter; ++outer) {
    Eigen::Index j = -1;
    double wmax = tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!passive[static_cast<std::size_t>(i)] && w(i) > wmax) {
        wmax = w(i);
        j = i;
      }
    }
    if (j < 0) break;
    passive[static_cast<std::size_t>(j)] = true;

    for (int inner = 0; inner < max_iter; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
      RealMatrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
      const RealVector sp = ap.colPivHouseholderQr().solve(b);
      RealVector s = RealVector::Zero(n);
      for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));

      bool feasible = true;
      for (Eigen::Index i : idx) feasible = feasible && s(i) > 0.0;
      if (feasible) {
        x = s;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index i : idx)
        if (s(i) <= 0.0) alpha = std::min(alpha, x(i) / (x(i) - s(i)));
      x += alpha * (s - x);
      for (Eigen::Index i : idx) {
        if (x(i) <= 1e-15) {
          x(i) = 0.0;
          passive[static_cast<std::size_t>(i)] = false;
        }
      }
    }
    w = a.transpose() * (b - a * x);
  }
  return x;
}

bool contains(const FreeSet& free, const DensityMatrix& sigma) {
  require_dim(free, sigma.dim());
  const ComplexMatrix& m = sigma.matrix();
  return std::visit(
      overloaded{[&](const Incoherent&) {
                   ComplexMatrix off = m;
                   off.diagonal().setZero();
                   return off.norm() <= kMembershipTol;
                 },
                 [&](const BlochBall& b) { return bloch_vector(m).norm() <= b.radius + kMembershipTol; },
                 [&](const Singleton& s) { return (m - s.state.matrix()).norm() <= kMembershipTol; },
                 [&](const PolytopeHull& p) {
                   const auto dd = static_cast<Eigen::Index>(m.rows() * m.rows());
                   RealMatrix a(dd, static_cast<Eigen::Index>(p.vertices.size()));
                   for (std::size_t k = 0; k < p.vertices.size(); ++k)
                     a.col(static_cast<Eigen::Index>(k)) = hermitian_coordinates(p.vertices[k].matrix());
                   const RealVector target = hermitian_coordinates(m);
                   const RealVector w = nnls(a, target);
                   return (a * w - target).norm() <= kMembershipTol;
                 }},
      free.variant());
}

std::optional<std::vector<DensityMatrix>> extreme_points(const FreeSet& free) {
  return std::visit(overloaded{[](const PolytopeHull& p) -> std::optional<std::vector<DensityMatrix>> {
                                 return p.vertices;
                               },
                               [](const Incoherent& i) -> std::optional<std::vector<DensityMatrix>> {
                                 std::vector<DensityMatrix> out;
                                 for (int k = 0; k < i.dim; ++k) out.push_back(DensityMatrix::basis_state(i.dim, k));
                                 return out;
                               },
                               [](const BlochBall&) -> std::optional<std::vector<DensityMatrix>> { return std::nullopt; },
                               [](const Singleton& s) -> std::optional<std::vector<DensityMatrix>> {
                                 return std::vector<DensityMatrix>{s.state};
                               }},
                    free.variant());
}

ComplexMatrix support_basis(const FreeSet& free, double cutoff) {
  const HermitianEig eig = hermitian_eig(free.barycenter());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k)
    if (eig.values(k) > cutoff) keep.push_back(k);
  ComplexMatrix v(eig.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = eig.vectors.col(keep[k]);
  return v;
}

std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return pts;
}

FreeSet hemisphere_free_set(int points) {
  if (points < 2) throw Error(ErrorKind::InvalidInput, "hemisphere discretization needs at least 2 points");
  std::vector<DensityMatrix> vertices;
  vertices.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double t = std::numbers::pi / 2.0 + k * std::numbers::pi / (points - 1);
    ComplexVector psi(2);
    psi << std::cos(t / 2.0), std::sin(t / 2.0);
    vertices.push_back(DensityMatrix::pure(psi));
  }
  return FreeSet::polytope(std::move(vertices));
}

std::vector<DensityMatrix> scan_candidates(const FreeSet& free) {
  if (auto pts = extreme_points(free)) return *pts;
  const double r = std::get<BlochBall>(free.variant()).radius;
  std::vector<DensityMatrix> out;
  out.reserve(kBlochSamples + 1);
  out.push_back(DensityMatrix::maximally_mixed(2));
  for (const auto& p : fibonacci_sphere(kBlochSamples)) out.push_back(DensityMatrix::from_bloch(r * p));
  return out;
}

std::vector<FisherValue> evaluate_serial(const std::vector<DensityMatrix>& states, const StateFunctional& f) {
  std::vector<FisherValue> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(f(s));
  return out;
}

std::vector<FisherValue> evaluate_parallel(const std::vector<DensityMatrix>& states, const StateFunctional& f,
                                           int jobs) {
  std::vector<FisherValue> out(states.size());
  const auto n = static_cast<long>(states.size());
  std::exception_ptr failure;
#ifdef FISHERWIT_HAVE_OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#else
  (void)jobs;
#endif
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(states[static_cast<std::size_t>(i)]);
    } catch (...) {
#ifdef FISHERWIT_HAVE_OPENMP
#pragma omp critical(fisherwit_scan_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

FreeMaximum maximize_over_free(const FreeSet& free, const StateFunctional& f, ScanOptions opts) {
  const std::vector<DensityMatrix> candidates = scan_candidates(free);
  const std::vector<FisherValue> values =
      opts.parallel ? evaluate_parallel(candidates, f, opts.jobs) : evaluate_serial(candidates, f);

  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (better(values[i], values[best])) best = i;
  FreeMaximum result{values[best], candidates[best], best, false};

  if (!std::holds_alternative<BlochBall>(free.variant())) return result;
  result.sampled = true;
  if (result.value.infinite) return result;

  // Convex maxima sit on the surface; polish the top surface samples.
  const double r = std::get<BlochBall>(free.variant()).radius;
  std::vector<std::size_t> order(values.size() - 1);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a].value > values[b].value; });
  const std::size_t seeds = std::min<std::size_t>(kRefineSeeds, order.size());
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::size_t idx = order[s];
    auto [v, bloch] = refine_on_sphere(f, r, bloch_vector(candidates[idx].matrix()), values[idx]);
    if (better(v, result.value)) {
      result.value = v;
      result.argmax = DensityMatrix::from_bloch(bloch);
      result.index = idx;
    }
  }
  return result;
}

FreeMaximum max_cfi_over_free(const EstimationTask& task, const FreeSet& free, ScanOptions opts) {
  require_dim(free, task.family.in_dim());
  return maximize_over_free(
      free, [&task](const DensityMatrix& s) { return classical_fisher(task, s); }, opts);
}

FreeMaximum max_qfi_over_free(const ChannelFamily& family, const FreeSet& free, double theta, ScanOptions opts) {
  require_dim(free, family.in_dim());
  return maximize_over_free(
      free, [&family, theta](const DensityMatrix& s) { return quantum_fisher(family, s, theta); }, opts);
}

namespace {

LinearExtremum linear_extremum(const FreeSet& free, const ComplexMatrix& a, double sign) {
  require_dim(free, static_cast<int>(a.rows()));
  require_hermitian(a);
  if (const auto* ball = std::get_if<BlochBall>(&free.variant())) {
    const double offset = 0.5 * a.trace().real();
    const Eigen::Vector3d b = 0.5 * bloch_vector(a);
    const double nb = b.norm();
    const Eigen::Vector3d s = nb > 0.0 ? Eigen::Vector3d(-sign * ball->radius * b / nb) : Eigen::Vector3d::Zero();
    return {offset - sign * ball->radius * nb, DensityMatrix::from_bloch(s), 0};
  }
  const auto pts = *extreme_points(free);
  std::size_t best = 0;
  double best_value = sign * real_trace_product(a, pts[0].matrix());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double v = sign * real_trace_product(a, pts[i].matrix());
    if (v < best_value - kTieTol) {
      best_value = v;
      best = i;
    }
  }
  return {sign * best_value, pts[best], best};
}

}  // namespace

LinearExtremum min_linear_over_free(const FreeSet& free, const ComplexMatrix& a) {
  return linear_extremum(free, a, 1.0);
}

LinearExtremum max_linear_over_free(const FreeSet& free, const ComplexMatrix& a) {
  return linear_extremum(free, a, -1.0);
}

}  // namespace fisherwit
