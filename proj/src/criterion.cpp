#include "fisherwit/criterion.hpp"

#include <string>
#include <type_traits>

namespace fisherwit {

namespace {

constexpr double kCertifyMargin = 1e-8;

}  // namespace

double generator_gap(const ComplexMatrix& generator) {
  const HermitianEig eig = hermitian_eig(generator);
  const double g = eig.max() - eig.min();
  return g * g;
}

ComplexMatrix criterion_objective(const ComplexMatrix& generator) {
  require_hermitian(generator);
  const int d = static_cast<int>(generator.rows());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix diff = kron(generator, id) - kron(id, generator);
  return 2.0 * diff * diff;
}

CriterionResult criterion_sdp(const ComplexMatrix& generator, const FreeSet& free) {
  require_hermitian(generator);
  const int d = static_cast<int>(generator.rows());
  if (d * d > kSdpMaxDim) throw Error(ErrorKind::SizeLimit, "criterion needs dim(G)² ≤ " + std::to_string(kSdpMaxDim));
  if (free.dim() != d) throw Error(ErrorKind::DimensionMismatch, "generator and free set differ in dimension");

  // Marginals in F force X onto supp(F) ⊗ supp(F); optimize over that face.
  const ComplexMatrix v = support_basis(free);
  const ComplexMatrix u = kron(v, v);
  const int k2 = static_cast<int>(u.cols());
  auto reduce = [&u](const ComplexMatrix& a) { return ComplexMatrix(u.adjoint() * a * u); };
  auto block = [&](const ComplexMatrix& a) { return RealMatrix(0.5 * real_embedding(reduce(a))); };

  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const auto basis = hermitian_basis(d);

  conic::Problem p;
  p.psd_sizes = {2 * k2};
  p.c_psd = {-block(criterion_objective(generator))};
  p.rows.push_back({{block(kron(id, id))}, RealVector(), 1.0});
  for (const auto& e : basis) p.rows.push_back({{block(kron(e, id) - kron(id, e))}, RealVector(), 0.0});

  std::visit(
      [&](const auto& set) {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, Singleton>) {
          for (const auto& e : basis)
            p.rows.push_back({{block(kron(e, id))}, RealVector(), real_trace_product(e, set.state.matrix())});
        } else if constexpr (std::is_same_v<T, Incoherent>) {
          for (std::size_t i = static_cast<std::size_t>(d); i < basis.size(); ++i)
            p.rows.push_back({{block(kron(basis[i], id))}, RealVector(), 0.0});
        } else if constexpr (std::is_same_v<T, PolytopeHull>) {
          p.lp_size = static_cast<int>(set.vertices.size());
          p.c_lp = RealVector::Zero(p.lp_size);
          for (const auto& e : basis) {
            RealVector lp(p.lp_size);
            for (int j = 0; j < p.lp_size; ++j)
              lp(j) = -real_trace_product(e, set.vertices[static_cast<std::size_t>(j)].matrix());
            p.rows.push_back({{block(kron(e, id))}, lp, 0.0});
          }
        } else {
          // Bloch ball: Z = 2·Tr_B X + (r − 1)·1 ⪰ 0 ⇔ |marginal Bloch vector| ≤ r.
          p.psd_sizes.push_back(4);
          for (const auto& e : basis) {
            p.rows.push_back(
                {{RealMatrix(-2.0 * block(kron(e, id))), RealMatrix(0.5 * real_embedding(e))},
                 RealVector(),
                 (set.radius - 1.0) * e.trace().real()});
          }
        }
      },
      free.variant());

  const conic::Solution s = conic::solve(p);
  if (s.status != SdpStatus::Optimal) {
    throw Error(ErrorKind::NumericalFailure, std::string("criterion program reported ") + to_string(s.status));
  }
  CriterionResult out;
  out.s_star = -s.primal_objective;
  out.gap_sq = generator_gap(generator);
  out.certified = out.gap_sq > out.s_star + kCertifyMargin;
  out.optimizer = u * from_real_embedding(s.x_psd.front()) * u.adjoint();
  out.iterations = s.iterations;
  return out;
}

bool certify_useful(const ComplexMatrix& generator, const FreeSet& free) {
  return criterion_sdp(generator, free).certified;
}

}  // namespace fisherwit
