#include "fisherwit/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace fisherwit {

const char* to_string(SdpStatus s) noexcept {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace conic {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kConsistencyTol = 1e-8;
constexpr double kDivergence = 1e8;

struct Blocks {
  std::vector<RealMatrix> psd;
  RealVector lp;
};

double frob_inner(const RealMatrix& a, const RealMatrix& b) { return (a.array() * b.array()).sum(); }

double inner(const Blocks& a, const Blocks& b) {
  double s = a.lp.size() > 0 ? a.lp.dot(b.lp) : 0.0;
  for (std::size_t k = 0; k < a.psd.size(); ++k) s += frob_inner(a.psd[k], b.psd[k]);
  return s;
}

double norm(const Blocks& a) { return std::sqrt(inner(a, a)); }

RealMatrix sym(const RealMatrix& m) { return 0.5 * (m + m.transpose()); }

// Largest α with x + α·dx ⪰ 0 (infinity when dx points into the cone).
double max_step(const RealMatrix& x, const RealMatrix& dx) {
  Eigen::LLT<RealMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix t = llt.matrixL().solve(dx);
  const RealMatrix m = llt.matrixL().solve(t.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(m), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const RealVector& x, const RealVector& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  return a;
}

double max_step(const Blocks& x, const Blocks& dx) {
  double a = max_step_lp(x.lp, dx.lp);
  for (std::size_t k = 0; k < x.psd.size(); ++k) a = std::min(a, max_step(x.psd[k], dx.psd[k]));
  return a;
}

class Solver {
 public:
  Solver(const Problem& p, const Options& o) : prob_(p), opt_(o) {}

  Solution run();

 private:
  bool preprocess(Solution& out);
  void initialize();
  Blocks apply_adjoint(const RealVector& y) const;
  double apply_row(std::size_t i, const Blocks& k) const;
  RealVector apply(const Blocks& k) const;
  Solution finish(SdpStatus status, int iter);

  const Problem& prob_;
  Options opt_;

  std::vector<std::size_t> kept_;
  std::vector<Row> rows_;  // scaled, independent
  std::vector<double> row_scale_;
  RealVector b_;
  Blocks c_;
  double c_scale_ = 1.0;

  Blocks x_, z_;
  RealVector y_;
  double pinf_ = 0.0, dinf_ = 0.0, gap_ = 0.0, pobj_ = 0.0, dobj_ = 0.0;
};

double Solver::apply_row(std::size_t i, const Blocks& k) const {
  const Row& r = rows_[i];
  double s = r.lp.size() > 0 ? r.lp.dot(k.lp) : 0.0;
  for (std::size_t b = 0; b < r.psd.size(); ++b)
    if (r.psd[b].size() > 0) s += frob_inner(r.psd[b], k.psd[b]);
  return s;
}

RealVector Solver::apply(const Blocks& k) const {
  RealVector out(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) out(static_cast<Eigen::Index>(i)) = apply_row(i, k);
  return out;
}

Blocks Solver::apply_adjoint(const RealVector& y) const {
  Blocks out;
  out.lp = RealVector::Zero(prob_.lp_size);
  for (int n : prob_.psd_sizes) out.psd.push_back(RealMatrix::Zero(n, n));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    const Row& r = rows_[i];
    if (r.lp.size() > 0) out.lp += yi * r.lp;
    for (std::size_t b = 0; b < r.psd.size(); ++b)
      if (r.psd[b].size() > 0) out.psd[b] += yi * r.psd[b];
  }
  return out;
}

bool Solver::preprocess(Solution& out) {
  const std::size_t nblocks = prob_.psd_sizes.size();
  Eigen::Index nvars = prob_.lp_size;
  for (int n : prob_.psd_sizes) nvars += Eigen::Index(n) * n;
  const auto m = static_cast<Eigen::Index>(prob_.rows.size());

  // Row i of `dense` is the vectorized constraint, normalized.
  RealMatrix dense = RealMatrix::Zero(m, nvars);
  RealVector b(m);
  std::vector<double> scale(static_cast<std::size_t>(m), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Row& r = prob_.rows[static_cast<std::size_t>(i)];
    if (r.psd.size() > nblocks) throw Error(ErrorKind::InvalidInput, "constraint row has too many blocks");
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < nblocks; ++k) {
      const int n = prob_.psd_sizes[k];
      if (k < r.psd.size() && r.psd[k].size() > 0) {
        if (r.psd[k].rows() != n || r.psd[k].cols() != n)
          throw Error(ErrorKind::DimensionMismatch, "constraint block size mismatch");
        dense.row(i).segment(off, Eigen::Index(n) * n) = sym(r.psd[k]).reshaped().transpose();
      }
      off += Eigen::Index(n) * n;
    }
    if (r.lp.size() > 0) {
      if (r.lp.size() != prob_.lp_size) throw Error(ErrorKind::DimensionMismatch, "constraint LP length mismatch");
      dense.row(i).segment(off, prob_.lp_size) = r.lp.transpose();
    }
    const double nrm = dense.row(i).norm();
    scale[static_cast<std::size_t>(i)] = nrm;
    b(i) = r.b;
    if (nrm > 0.0) {
      dense.row(i) /= nrm;
      b(i) /= nrm;
    }
  }

  std::vector<Eigen::Index> independent;
  if (m > 0) {
    Eigen::ColPivHouseholderQR<RealMatrix> qr(dense.transpose());
    qr.setThreshold(kRankTol);
    const Eigen::Index rank = qr.rank();
    for (Eigen::Index k = 0; k < rank; ++k) {
      const Eigen::Index idx = qr.colsPermutation().indices()(k);
      if (scale[static_cast<std::size_t>(idx)] > 0.0) independent.push_back(idx);
    }
    std::sort(independent.begin(), independent.end());
  }

  const auto r = static_cast<Eigen::Index>(independent.size());
  RealMatrix basis(nvars, r);
  RealVector b_kept(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    basis.col(k) = dense.row(independent[static_cast<std::size_t>(k)]).transpose();
    b_kept(k) = b(independent[static_cast<std::size_t>(k)]);
  }
  Eigen::ColPivHouseholderQR<RealMatrix> basis_qr;
  if (r > 0) basis_qr.compute(basis);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::binary_search(independent.begin(), independent.end(), i)) continue;
    double implied = 0.0;
    if (r > 0) {
      const RealVector coef = basis_qr.solve(RealVector(dense.row(i).transpose()));
      implied = coef.dot(b_kept);
    }
    if (std::abs(b(i) - implied) > kConsistencyTol * (1.0 + b.cwiseAbs().maxCoeff())) {
      out.status = SdpStatus::Infeasible;
      return false;
    }
  }

  for (Eigen::Index k = 0; k < r; ++k) {
    const auto idx = static_cast<std::size_t>(independent[static_cast<std::size_t>(k)]);
    Row row = prob_.rows[idx];
    const double s = scale[idx];
    row.psd.resize(nblocks);
    for (auto& blk : row.psd)
      if (blk.size() > 0) blk = sym(blk) / s;
    if (row.lp.size() > 0) row.lp /= s;
    row.b /= s;
    rows_.push_back(std::move(row));
    row_scale_.push_back(s);
    kept_.push_back(idx);
  }
  b_ = b_kept;

  c_.lp = prob_.c_lp.size() > 0 ? prob_.c_lp : RealVector(RealVector::Zero(prob_.lp_size));
  if (c_.lp.size() != prob_.lp_size) throw Error(ErrorKind::DimensionMismatch, "LP cost length mismatch");
  for (std::size_t k = 0; k < nblocks; ++k) {
    const int n = prob_.psd_sizes[k];
    if (k < prob_.c_psd.size() && prob_.c_psd[k].size() > 0) {
      if (prob_.c_psd[k].rows() != n) throw Error(ErrorKind::DimensionMismatch, "cost block size mismatch");
      c_.psd.push_back(sym(prob_.c_psd[k]));
    } else {
      c_.psd.push_back(RealMatrix::Zero(n, n));
    }
  }
  c_scale_ = std::max(1.0, norm(c_));
  c_.lp /= c_scale_;
  for (auto& blk : c_.psd) blk /= c_scale_;
  return true;
}

void Solver::initialize() {
  x_.psd.clear();
  z_.psd.clear();
  for (std::size_t k = 0; k < prob_.psd_sizes.size(); ++k) {
    const int n = prob_.psd_sizes[k];
    const double sn = std::sqrt(double(n));
    double xi = std::max(10.0, sn);
    double eta = std::max({10.0, sn, c_.psd[k].norm()});
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].psd[k].size() == 0) continue;
      const double an = rows_[i].psd[k].norm();
      xi = std::max(xi, sn * (1.0 + std::abs(b_(Eigen::Index(i)))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    x_.psd.push_back(xi * RealMatrix::Identity(n, n));
    z_.psd.push_back(eta * RealMatrix::Identity(n, n));
  }
  double xi = 10.0, eta = std::max(10.0, c_.lp.size() > 0 ? c_.lp.cwiseAbs().maxCoeff() : 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].lp.size() == 0) continue;
    const double an = rows_[i].lp.norm();
    xi = std::max(xi, (1.0 + std::abs(b_(Eigen::Index(i)))) / (1.0 + an));
    eta = std::max(eta, an);
  }
  x_.lp = RealVector::Constant(prob_.lp_size, xi);
  z_.lp = RealVector::Constant(prob_.lp_size, eta);
  y_ = RealVector::Zero(static_cast<Eigen::Index>(rows_.size()));
}

Solution Solver::finish(SdpStatus status, int iter) {
  Solution s;
  s.status = status;
  s.iterations = iter;
  s.primal_objective = pobj_ * c_scale_;
  s.dual_objective = dobj_ * c_scale_;
  s.x_psd = x_.psd;
  s.x_lp = x_.lp;
  s.z_psd = z_.psd;
  for (auto& zb : s.z_psd) zb *= c_scale_;
  s.z_lp = z_.lp * c_scale_;
  s.y = RealVector::Zero(static_cast<Eigen::Index>(prob_.rows.size()));
  for (std::size_t k = 0; k < kept_.size(); ++k)
    s.y(static_cast<Eigen::Index>(kept_[k])) = y_(static_cast<Eigen::Index>(k)) * c_scale_ / row_scale_[k];
  s.relative_gap = gap_;
  s.primal_infeasibility = pinf_;
  s.dual_infeasibility = dinf_;
  return s;
}

Solution Solver::run() {
  Solution early;
  if (!preprocess(early)) return early;
  initialize();

  double n_total = prob_.lp_size;
  for (int n : prob_.psd_sizes) n_total += n;
  if (n_total == 0) throw Error(ErrorKind::InvalidInput, "problem has no variables");
  const auto m = static_cast<Eigen::Index>(rows_.size());
  const double b_norm = b_.size() > 0 ? b_.norm() : 0.0;
  const double c_norm = norm(c_);
  const std::size_t nblocks = prob_.psd_sizes.size();

  for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
    const RealVector rp = b_ - apply(x_);
    Blocks rd = apply_adjoint(y_);
    rd.lp = c_.lp - z_.lp - rd.lp;
    for (std::size_t k = 0; k < nblocks; ++k) rd.psd[k] = c_.psd[k] - z_.psd[k] - rd.psd[k];
    const double xz = inner(x_, z_);
    const double mu = xz / n_total;
    pobj_ = inner(c_, x_);
    dobj_ = m > 0 ? b_.dot(y_) : 0.0;
    pinf_ = (m > 0 ? rp.norm() : 0.0) / (1.0 + b_norm);
    dinf_ = norm(rd) / (1.0 + c_norm);
    gap_ = std::max(std::abs(pobj_ - dobj_), std::abs(xz)) / (1.0 + std::abs(pobj_) + std::abs(dobj_));

    if (std::max({pinf_, dinf_, gap_}) <= opt_.tolerance) return finish(SdpStatus::Optimal, iter);
    if (dobj_ > kDivergence && dinf_ <= 1e-6 && (m > 0 && y_.norm() > kDivergence))
      return finish(SdpStatus::Infeasible, iter);
    if (pobj_ < -kDivergence && pinf_ <= 1e-6 && norm(x_) > kDivergence) return finish(SdpStatus::Unbounded, iter);
    if (iter == opt_.max_iterations) break;

    // Z⁻¹ per block.
    std::vector<RealMatrix> zinv(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) {
      Eigen::LLT<RealMatrix> llt(z_.psd[k]);
      if (llt.info() != Eigen::Success) break;
      zinv[k] = sym(llt.solve(RealMatrix::Identity(z_.psd[k].rows(), z_.psd[k].cols())));
    }
    bool zinv_ok = true;
    for (std::size_t k = 0; k < nblocks; ++k) zinv_ok = zinv_ok && zinv[k].size() > 0;
    if (!zinv_ok) break;
    const RealVector xz_lp = x_.lp.cwiseQuotient(z_.lp);

    // Schur complement M_ij = Σ Tr(A_i X A_j Z⁻¹) + a_iᵀ diag(x/z) a_j.
    RealMatrix schur = RealMatrix::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Row& rj = rows_[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < nblocks; ++k) {
        if (rj.psd[k].size() == 0) continue;
        const RealMatrix g = x_.psd[k] * rj.psd[k] * zinv[k];
        for (Eigen::Index i = 0; i <= j; ++i) {
          const Row& ri = rows_[static_cast<std::size_t>(i)];
          if (ri.psd[k].size() > 0) schur(i, j) += frob_inner(ri.psd[k], g);
        }
      }
      if (rj.lp.size() > 0) {
        const RealVector t = xz_lp.cwiseProduct(rj.lp);
        for (Eigen::Index i = 0; i <= j; ++i) {
          const Row& ri = rows_[static_cast<std::size_t>(i)];
          if (ri.lp.size() > 0) schur(i, j) += ri.lp.dot(t);
        }
      }
    }
    schur = schur.selfadjointView<Eigen::Upper>();
    Eigen::LLT<RealMatrix> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) {
      const double reg = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
      schur_llt.compute(schur + reg * RealMatrix::Identity(m, m));
      if (schur_llt.info() != Eigen::Success) break;
    }

    // Direction for a given centering target σμ and second-order term.
    auto direction = [&](double sigma_mu, const Blocks* dxa, const Blocks* dza, Blocks& dx, RealVector& dy,
                         Blocks& dz) {
      Blocks k_term;  // X Rd Z⁻¹ − σμ Z⁻¹ + dXa dZa Z⁻¹
      k_term.lp = (x_.lp.cwiseProduct(rd.lp) - RealVector::Constant(x_.lp.size(), sigma_mu)).cwiseQuotient(z_.lp);
      if (dxa != nullptr) k_term.lp += dxa->lp.cwiseProduct(dza->lp).cwiseQuotient(z_.lp);
      for (std::size_t k = 0; k < nblocks; ++k) {
        RealMatrix t = (x_.psd[k] * rd.psd[k] - sigma_mu * RealMatrix::Identity(x_.psd[k].rows(), x_.psd[k].cols()));
        if (dxa != nullptr) t += dxa->psd[k] * dza->psd[k];
        k_term.psd.push_back(t * zinv[k]);
      }
      const RealVector rhs = b_ + apply(k_term);
      dy = m > 0 ? RealVector(schur_llt.solve(rhs)) : RealVector();
      dz = apply_adjoint(dy);
      dz.lp = rd.lp - dz.lp;
      for (std::size_t k = 0; k < nblocks; ++k) dz.psd[k] = rd.psd[k] - dz.psd[k];
      dx.lp = -x_.lp - x_.lp.cwiseProduct(dz.lp).cwiseQuotient(z_.lp) + RealVector::Constant(x_.lp.size(), sigma_mu)
                                                                          .cwiseQuotient(z_.lp);
      if (dxa != nullptr) dx.lp -= dxa->lp.cwiseProduct(dza->lp).cwiseQuotient(z_.lp);
      dx.psd.clear();
      for (std::size_t k = 0; k < nblocks; ++k) {
        RealMatrix t = sigma_mu * zinv[k] - x_.psd[k] - x_.psd[k] * dz.psd[k] * zinv[k];
        if (dxa != nullptr) t -= dxa->psd[k] * dza->psd[k] * zinv[k];
        dx.psd.push_back(sym(t));
      }
    };

    Blocks dxa, dza;
    RealVector dya;
    direction(0.0, nullptr, nullptr, dxa, dya, dza);
    const double ap_aff = std::min(1.0, max_step(x_, dxa));
    const double ad_aff = std::min(1.0, max_step(z_, dza));
    Blocks xa = x_, za = z_;
    xa.lp += ap_aff * dxa.lp;
    za.lp += ad_aff * dza.lp;
    for (std::size_t k = 0; k < nblocks; ++k) {
      xa.psd[k] += ap_aff * dxa.psd[k];
      za.psd[k] += ad_aff * dza.psd[k];
    }
    const double mu_aff = inner(xa, za) / n_total;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    Blocks dx, dz;
    RealVector dy;
    direction(sigma * mu, &dxa, &dza, dx, dy, dz);
    const double ap = std::min(1.0, opt_.step_fraction * max_step(x_, dx));
    const double ad = std::min(1.0, opt_.step_fraction * max_step(z_, dz));
    if (!(ap > 1e-14) && !(ad > 1e-14)) break;

    x_.lp += ap * dx.lp;
    z_.lp += ad * dz.lp;
    for (std::size_t k = 0; k < nblocks; ++k) {
      x_.psd[k] = sym(x_.psd[k] + ap * dx.psd[k]);
      z_.psd[k] = sym(z_.psd[k] + ad * dz.psd[k]);
    }
    if (m > 0) y_ += ad * dy;
  }

  if (std::max({pinf_, dinf_, gap_}) <= opt_.accept_tolerance) return finish(SdpStatus::Optimal, opt_.max_iterations);
  if (dobj_ > 1e6 && dinf_ <= 1e-6) return finish(SdpStatus::Infeasible, opt_.max_iterations);
  if (pobj_ < -1e6 && pinf_ <= 1e-6) return finish(SdpStatus::Unbounded, opt_.max_iterations);
  throw Error(ErrorKind::NumericalFailure, "interior point stalled: primal residual " + std::to_string(pinf_) +
                                               ", dual residual " + std::to_string(dinf_) + ", gap " +
                                               std::to_string(gap_));
}

}  // namespace

Solution solve(const Problem& problem, const Options& options) { return Solver(problem, options).run(); }

}  // namespace conic

RealMatrix real_embedding(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

ComplexMatrix from_real_embedding(const RealMatrix& y) {
  const Eigen::Index n = y.rows() / 2;
  ComplexMatrix out(n, n);
  out.real() = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  out.imag() = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  return 0.5 * (out + out.adjoint());
}

SdpResult solve_sdp(const SdpProblem& p, const conic::Options& options) {
  if (p.n <= 0) throw Error(ErrorKind::InvalidInput, "SDP variable dimension must be positive");
  if (p.n > kSdpMaxDim) throw Error(ErrorKind::SizeLimit, "SDP dimension above " + std::to_string(kSdpMaxDim));
  const std::size_t count = p.equalities.size() + p.inequalities.size();
  if (count > kSdpMaxConstraints)
    throw Error(ErrorKind::SizeLimit, "more than " + std::to_string(kSdpMaxConstraints) + " constraints");
  auto check = [&](const ComplexMatrix& a) {
    if (a.rows() != p.n || a.cols() != p.n) throw Error(ErrorKind::DimensionMismatch, "SDP matrix has wrong size");
    require_hermitian(a);
  };
  check(p.objective);

  conic::Problem cp;
  cp.psd_sizes = {2 * p.n};
  cp.lp_size = static_cast<int>(p.inequalities.size());
  cp.c_psd = {-0.5 * real_embedding(p.objective)};
  cp.c_lp = RealVector::Zero(cp.lp_size);
  for (const auto& e : p.equalities) {
    check(e.a);
    cp.rows.push_back({{0.5 * real_embedding(e.a)}, RealVector(), e.b});
  }
  for (std::size_t j = 0; j < p.inequalities.size(); ++j) {
    check(p.inequalities[j].a);
    RealVector slack = RealVector::Zero(cp.lp_size);
    slack(static_cast<Eigen::Index>(j)) = 1.0;
    cp.rows.push_back({{0.5 * real_embedding(p.inequalities[j].a)}, slack, p.inequalities[j].b});
  }

  const conic::Solution s = conic::solve(cp, options);
  SdpResult r;
  r.iterations = s.iterations;
  r.relative_gap = s.relative_gap;
  switch (s.status) {
    case SdpStatus::Optimal:
      r.status = SdpStatus::Optimal;
      r.value = -s.primal_objective;
      r.x = from_real_embedding(s.x_psd.front());
      break;
    case SdpStatus::Infeasible:
      r.status = SdpStatus::Infeasible;
      r.value = -std::numeric_limits<double>::infinity();
      break;
    case SdpStatus::Unbounded:
      r.status = SdpStatus::Unbounded;
      r.value = std::numeric_limits<double>::infinity();
      break;
  }
  return r;
}

}  // namespace fisherwit
