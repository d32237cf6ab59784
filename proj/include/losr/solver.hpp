#pragma once

// Homogeneous self-dual interior-point solver for standard-form conic
// programs: min c'x s.t. Ax = b, x in a product of free, nonnegative and
// real-PSD cones. Produces certified optima or Farkas-style infeasibility
// certificates. Nesterov-Todd scaling, Mehrotra predictor-corrector, sparse
// regularized LDL^T KKT solves with iterative refinement.

#include "losr/program.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

namespace losr {

struct SolverOptions {
  double tolerance = 1e-8;
  double infeasibility_tolerance = 1e-8;
  int max_iterations = 200;
  bool verbose = false;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  double optimal_value = 0.0;
  RVec primal;          // block values in the original variable layout
  RVec dual_y, dual_z;  // equality multipliers and cone duals
  double primal_residual = std::numeric_limits<double>::infinity();
  double dual_residual = std::numeric_limits<double>::infinity();
  double gap_residual = std::numeric_limits<double>::infinity();
  double certificate_margin = 0.0;
  int iterations = 0;
  std::string message;
};

namespace detail {

inline RMat svec_to_mat(const Eigen::Ref<const RVec>& v, int n) {
  RMat m(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i, ++k) {
      double val = (i == j) ? v[k] : v[k] / kSqrt2;
      m(i, j) = val;
      m(j, i) = val;
    }
  return m;
}

inline void mat_to_svec(const RMat& m, Eigen::Ref<RVec> v) {
  const int n = static_cast<int>(m.rows());
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i, ++k) v[k] = (i == j) ? m(i, j) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
}

// Per-block Nesterov-Todd scaling state.
struct BlockScaling {
  // nonneg
  RVec w, lam;
  // psd
  RMat r, rinv, qinv;
  RVec lam_psd;
};

struct InternalBlock {
  Cone cone;
  int size;
  int offset;
  int dim;
};

class Ipm {
 public:
  Ipm(const ConicProgram& prog, const SolverOptions& opts) : prog_(prog), opts_(opts) {
    // Free blocks are split into differences of nonnegative pairs so the
    // whole variable lives in a symmetric cone.
    int off = 0;
    for (const auto& bl : prog.blocks()) {
      InternalBlock ib;
      ib.cone = bl.cone == Cone::Free ? Cone::NonNeg : bl.cone;
      ib.size = bl.cone == Cone::Free ? 2 * bl.size : bl.size;
      ib.dim = bl.cone == Cone::Free ? 2 * bl.dim : bl.dim;
      ib.offset = off;
      off += ib.dim;
      blocks_.push_back(ib);
    }
    n_ = off;
    m_ = prog.num_rows();

    // column map: original var -> (internal var, optional negated twin)
    col_plus_.resize(prog.num_vars());
    col_minus_.assign(prog.num_vars(), -1);
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& orig = prog.blocks()[k];
      const auto& ib = blocks_[k];
      for (int i = 0; i < orig.dim; ++i) {
        if (orig.cone == Cone::Free) {
          col_plus_[orig.offset + i] = ib.offset + 2 * i;
          col_minus_[orig.offset + i] = ib.offset + 2 * i + 1;
        } else {
          col_plus_[orig.offset + i] = ib.offset + i;
        }
      }
    }

    Eigen::SparseMatrix<double> a0 = prog.constraint_matrix();
    std::vector<Eigen::Triplet<double>> trips;
    for (int col = 0; col < a0.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(a0, col); it; ++it) {
        trips.emplace_back(it.row(), col_plus_[col], it.value());
        if (col_minus_[col] >= 0) trips.emplace_back(it.row(), col_minus_[col], -it.value());
      }
    a_.resize(m_, n_);
    a_.setFromTriplets(trips.begin(), trips.end());
    a_.makeCompressed();
    b_ = prog.rhs();

    RVec c0 = prog.cost();
    c_ = RVec::Zero(n_);
    for (int j = 0; j < prog.num_vars(); ++j) {
      c_[col_plus_[j]] += c0[j];
      if (col_minus_[j] >= 0) c_[col_minus_[j]] -= c0[j];
    }

    nu_ = 0.0;
    for (const auto& ib : blocks_) nu_ += (ib.cone == Cone::Psd) ? ib.size : ib.dim;
  }

  SolveResult run() {
    SolveResult best;
    best.status = SolveStatus::NumericalFailure;
    double best_metric = std::numeric_limits<double>::infinity();

    RVec x(n_), z(n_);
    set_identity(x);
    set_identity(z);
    RVec y = RVec::Zero(m_);
    double tau = 1.0, kappa = 1.0;

    build_kkt_pattern();

    const double bnorm = 1.0 + b_.norm();
    const double cnorm = 1.0 + c_.norm();
    int consecutive_short_steps = 0;

    for (int iter = 0; iter <= opts_.max_iterations; ++iter) {
      RVec res_x = at_mul(y) + z - c_ * tau;     // dual residual
      RVec res_y = a_ * x - b_ * tau;            // primal residual
      double res_t = c_.dot(x) - b_.dot(y) + kappa;
      double mu = (x.dot(z) + tau * kappa) / (nu_ + 1.0);

      double pres = res_y.norm() / tau / bnorm;
      double dres = res_x.norm() / tau / cnorm;
      double pobj = c_.dot(x) / tau;
      double dobj = b_.dot(y) / tau;
      double gapres = std::abs(pobj - dobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));

      if (opts_.verbose)
        std::cerr << "iter " << iter << " pres " << pres << " dres " << dres << " gap " << gapres
                  << " mu " << mu << " tau " << tau << " kappa " << kappa << "\n";

      double metric = std::max({pres, dres, gapres});
      if (metric < best_metric) {
        best_metric = metric;
        fill_point(best, x, y, z, tau);
        best.primal_residual = pres;
        best.dual_residual = dres;
        best.gap_residual = gapres;
        best.iterations = iter;
      }

      if (pres <= opts_.tolerance && dres <= opts_.tolerance && gapres <= opts_.tolerance) {
        SolveResult out;
        out.status = SolveStatus::Optimal;
        fill_point(out, x, y, z, tau);
        out.optimal_value = pobj + prog_.objective_offset();
        out.primal_residual = pres;
        out.dual_residual = dres;
        out.gap_residual = gapres;
        out.iterations = iter;
        return out;
      }

      // Farkas certificates of primal or dual infeasibility.
      double by = b_.dot(y);
      if (by > 1e-12) {
        double hres = (at_mul(y) + z).norm() / by;
        if (hres <= opts_.infeasibility_tolerance) {
          SolveResult out;
          out.status = SolveStatus::Infeasible;
          fill_point(out, x, y, z, 1.0);
          out.dual_y = y;
          out.dual_z = map_z_back(z);
          out.certificate_margin = (by - (at_mul(y) + z).norm()) / std::max(1e-300, y.norm());
          out.iterations = iter;
          out.message = "primal infeasibility certificate";
          return out;
        }
      }
      double cx = c_.dot(x);
      if (-cx > 1e-12) {
        double hres = (a_ * x).norm() / (-cx);
        if (hres <= opts_.infeasibility_tolerance) {
          SolveResult out;
          out.status = SolveStatus::Unbounded;
          fill_point(out, x, y, z, 1.0);
          out.certificate_margin = (-cx - (a_ * x).norm()) / std::max(1e-300, x.norm());
          out.iterations = iter;
          out.message = "dual infeasibility certificate (improving ray)";
          return out;
        }
      }

      if (iter == opts_.max_iterations || mu < 1e-17) break;

      // Nesterov-Todd scalings.
      if (!compute_scalings(x, z)) break;
      assemble_kkt();
      ldlt_.factorize(kkt_);
      if (ldlt_.info() != Eigen::Success) break;

      RVec rhs2(n_ + m_);
      rhs2.head(n_) = c_;
      rhs2.tail(m_) = b_;
      RVec u2 = kkt_solve(rhs2);

      // Affine direction: ds = -lam o lam, dkt = -tau*kappa; then
      // W^{-1}(lam \ ds) = -z.
      RVec rhs1(n_ + m_);
      rhs1.head(n_) = -res_x + z;
      rhs1.tail(m_) = -res_y;
      RVec u1 = kkt_solve(rhs1);

      double denom = c_.dot(u2.head(n_)) - b_.dot(u2.tail(m_)) - kappa / tau;
      double dtau_aff = (-res_t - c_.dot(u1.head(n_)) + b_.dot(u1.tail(m_)) + kappa) / denom;
      RVec dx_aff = u1.head(n_) + dtau_aff * u2.head(n_);
      RVec dy_aff = u1.tail(m_) + dtau_aff * u2.tail(m_);
      RVec dz_aff = -z - h_mul(dx_aff);
      double dkappa_aff = (-tau * kappa - kappa * dtau_aff) / tau;

      double alpha_aff = step_to_boundary(x, z, tau, kappa, dx_aff, dz_aff, dtau_aff, dkappa_aff);
      double sigma = std::pow(1.0 - std::min(1.0, alpha_aff), 3.0);

      // Combined direction with Mehrotra correction.
      RVec wid = combined_ds_term(dx_aff, dz_aff, sigma, mu);  // W^{-1}(lam \ ds)
      double dkt = -tau * kappa - dtau_aff * dkappa_aff + sigma * mu;
      rhs1.head(n_) = -(1.0 - sigma) * res_x - wid;
      rhs1.tail(m_) = -(1.0 - sigma) * res_y;
      u1 = kkt_solve(rhs1);
      double dtau =
          (-(1.0 - sigma) * res_t - c_.dot(u1.head(n_)) + b_.dot(u1.tail(m_)) - dkt / tau) / denom;
      RVec dx = u1.head(n_) + dtau * u2.head(n_);
      RVec dy = u1.tail(m_) + dtau * u2.tail(m_);
      RVec dz = wid - h_mul(dx);
      double dkappa = (dkt - kappa * dtau) / tau;

      double alpha = 0.99 * step_to_boundary(x, z, tau, kappa, dx, dz, dtau, dkappa);
      alpha = std::min(alpha, 1.0);
      if (alpha < 1e-8) {
        if (++consecutive_short_steps >= 2) break;
      } else {
        consecutive_short_steps = 0;
      }

      x += alpha * dx;
      y += alpha * dy;
      z += alpha * dz;
      tau += alpha * dtau;
      kappa += alpha * dkappa;
    }

    best.status = SolveStatus::NumericalFailure;
    best.message = "no certified optimum within the iteration cap; best iterate attached";
    best.optimal_value = best.primal.size() ? prog_.cost().dot(best.primal) + prog_.objective_offset() : 0.0;
    return best;
  }

 private:
  void set_identity(RVec& v) const {
    v.setZero();
    for (const auto& ib : blocks_) {
      if (ib.cone == Cone::NonNeg) {
        v.segment(ib.offset, ib.dim).setOnes();
      } else {
        for (int j = 0; j < ib.size; ++j) v[ib.offset + svec_index(ib.size, j, j)] = 1.0;
      }
    }
  }

  RVec at_mul(const RVec& y) const { return a_.transpose() * y; }

  void fill_point(SolveResult& out, const RVec& x, const RVec& y, const RVec& z, double tau) const {
    out.primal = RVec::Zero(prog_.num_vars());
    out.dual_z = RVec::Zero(prog_.num_vars());
    for (int j = 0; j < prog_.num_vars(); ++j) {
      double v = x[col_plus_[j]];
      if (col_minus_[j] >= 0) v -= x[col_minus_[j]];
      out.primal[j] = v / tau;
      out.dual_z[j] = (col_minus_[j] >= 0) ? 0.0 : z[col_plus_[j]] / tau;
    }
    out.dual_y = y / tau;
  }

  RVec map_z_back(const RVec& z) const {
    RVec out = RVec::Zero(prog_.num_vars());
    for (int j = 0; j < prog_.num_vars(); ++j)
      out[j] = (col_minus_[j] >= 0) ? 0.0 : z[col_plus_[j]];
    return out;
  }

  bool compute_scalings(const RVec& x, const RVec& z) {
    scal_.assign(blocks_.size(), BlockScaling());
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& ib = blocks_[k];
      auto& sc = scal_[k];
      if (ib.cone == Cone::NonNeg) {
        RVec xs = x.segment(ib.offset, ib.dim);
        RVec zs = z.segment(ib.offset, ib.dim);
        if ((xs.array() <= 0).any() || (zs.array() <= 0).any()) return false;
        sc.w = (xs.array() / zs.array()).sqrt();
        sc.lam = (xs.array() * zs.array()).sqrt();
      } else {
        RMat xm = svec_to_mat(x.segment(ib.offset, ib.dim), ib.size);
        RMat zm = svec_to_mat(z.segment(ib.offset, ib.dim), ib.size);
        Eigen::LLT<RMat> lx(xm), lz(zm);
        if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
        RMat lxm = lx.matrixL();
        RMat lzm = lz.matrixL();
        Eigen::JacobiSVD<RMat> svd(lzm.transpose() * lxm, Eigen::ComputeFullU | Eigen::ComputeFullV);
        RVec sig = svd.singularValues();
        if ((sig.array() <= 0).any()) return false;
        RVec isqrt = sig.array().sqrt().inverse();
        sc.r = lxm * svd.matrixV() * isqrt.asDiagonal();
        sc.rinv = isqrt.asDiagonal() * svd.matrixU().transpose() * lzm.transpose();
        sc.lam_psd = sig;
        sc.qinv = sc.rinv.transpose() * sc.rinv;
      }
    }
    return true;
  }

  // H = W^{-1} W^{-T}: diag(z/x) on nonneg blocks, congruence by Q^{-1} on PSD.
  RVec h_mul(const RVec& v) const {
    RVec out(n_);
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& ib = blocks_[k];
      const auto& sc = scal_[k];
      if (ib.cone == Cone::NonNeg) {
        out.segment(ib.offset, ib.dim) =
            v.segment(ib.offset, ib.dim).array() / sc.w.array().square();
      } else {
        RMat vm = svec_to_mat(v.segment(ib.offset, ib.dim), ib.size);
        RMat hm = sc.qinv * vm * sc.qinv;
        mat_to_svec(hm, out.segment(ib.offset, ib.dim));
      }
    }
    return out;
  }

  // W^{-1}(lam \ ds) for the combined step, with
  // ds = -lam o lam - (W^{-T}dx) o (W dz) + sigma*mu*e.
  RVec combined_ds_term(const RVec& dx, const RVec& dz, double sigma, double mu) const {
    RVec out(n_);
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& ib = blocks_[k];
      const auto& sc = scal_[k];
      if (ib.cone == Cone::NonNeg) {
        auto xs = dx.segment(ib.offset, ib.dim).array();
        auto zs = dz.segment(ib.offset, ib.dim).array();
        for (int i = 0; i < ib.dim; ++i) {
          double ds = -sc.lam[i] * sc.lam[i] - xs[i] * zs[i] + sigma * mu;
          out[ib.offset + i] = ds / sc.lam[i] / sc.w[i];
        }
      } else {
        RMat dxm = svec_to_mat(dx.segment(ib.offset, ib.dim), ib.size);
        RMat dzm = svec_to_mat(dz.segment(ib.offset, ib.dim), ib.size);
        RMat p = sc.rinv * dxm * sc.rinv.transpose();
        RMat d = sc.r.transpose() * dzm * sc.r;
        RMat eta = 0.5 * (p * d + d * p);
        RMat ds = -eta;
        for (int i = 0; i < ib.size; ++i)
          ds(i, i) += -sc.lam_psd[i] * sc.lam_psd[i] + sigma * mu;
        RMat dtil(ib.size, ib.size);
        for (int i = 0; i < ib.size; ++i)
          for (int j = 0; j < ib.size; ++j)
            dtil(i, j) = 2.0 * ds(i, j) / (sc.lam_psd[i] + sc.lam_psd[j]);
        RMat w = sc.rinv.transpose() * dtil * sc.rinv;
        mat_to_svec(w, out.segment(ib.offset, ib.dim));
      }
    }
    return out;
  }

  double step_to_boundary(const RVec& x, const RVec& z, double tau, double kappa, const RVec& dx,
                          const RVec& dz, double dtau, double dkappa) const {
    double alpha = 1.0e10;
    auto cap = [&](double num, double den) {
      if (den < 0) alpha = std::min(alpha, -num / den);
    };
    cap(tau, dtau);
    cap(kappa, dkappa);
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& ib = blocks_[k];
      if (ib.cone == Cone::NonNeg) {
        for (int i = 0; i < ib.dim; ++i) {
          cap(x[ib.offset + i], dx[ib.offset + i]);
          cap(z[ib.offset + i], dz[ib.offset + i]);
        }
      } else {
        for (const RVec* base : {&x, &z}) {
          const RVec* dir = (base == &x) ? &dx : &dz;
          RMat bm = svec_to_mat(base->segment(ib.offset, ib.dim), ib.size);
          RMat dm = svec_to_mat(dir->segment(ib.offset, ib.dim), ib.size);
          Eigen::LLT<RMat> llt(bm);
          if (llt.info() != Eigen::Success) return 0.0;
          RMat l = llt.matrixL();
          RMat t = l.triangularView<Eigen::Lower>().solve(dm);
          RMat m = l.triangularView<Eigen::Lower>().solve(t.transpose());
          double lmin = min_eigenvalue(RMat(0.5 * (m + m.transpose())));
          if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
        }
      }
    }
    return std::min(alpha, 1.0e10);
  }

  void build_kkt_pattern() {
    // Lower-triangular pattern of [[-H - eps I, A^T], [A, delta I]].
    std::vector<Eigen::Triplet<double>> trips;
    for (const auto& ib : blocks_) {
      if (ib.cone == Cone::NonNeg) {
        for (int i = 0; i < ib.dim; ++i) trips.emplace_back(ib.offset + i, ib.offset + i, -1.0);
      } else {
        for (int i = 0; i < ib.dim; ++i)
          for (int j = 0; j <= i; ++j) trips.emplace_back(ib.offset + i, ib.offset + j, (i == j) ? -1.0 : 0.0);
      }
    }
    for (int col = 0; col < a_.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(a_, col); it; ++it)
        trips.emplace_back(n_ + it.row(), it.col(), it.value());
    for (int r = 0; r < m_; ++r) trips.emplace_back(n_ + r, n_ + r, 1.0);
    kkt_.resize(n_ + m_, n_ + m_);
    kkt_.setFromTriplets(trips.begin(), trips.end());
    kkt_.makeCompressed();
    ldlt_.analyzePattern(kkt_);
  }

  void assemble_kkt() {
    const double eps = 1e-9;
    // Values are rewritten in place; the pattern is fixed.
    for (int col = 0; col < kkt_.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(kkt_, col); it; ++it) {
        int r = static_cast<int>(it.row());
        int c = col;
        if (r < n_ && c < n_) it.valueRef() = (r == c) ? -eps : 0.0;
        else if (r >= n_ && c >= n_) it.valueRef() = (r == c) ? eps : 0.0;
      }
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& ib = blocks_[k];
      const auto& sc = scal_[k];
      if (ib.cone == Cone::NonNeg) {
        for (int i = 0; i < ib.dim; ++i)
          kkt_.coeffRef(ib.offset + i, ib.offset + i) += -1.0 / (sc.w[i] * sc.w[i]);
      } else {
        // columns of symm-kron(Q^{-1}): svec(Q^{-1} E_pq Q^{-1})
        const int nn = ib.size;
        RVec col(svec_dim(nn));
        int cidx = 0;
        for (int q = 0; q < nn; ++q)
          for (int p = q; p < nn; ++p, ++cidx) {
            RVec qp = sc.qinv.col(p), qq = sc.qinv.col(q);
            RMat e;
            if (p == q)
              e = qp * qq.transpose();
            else
              e = (qp * qq.transpose() + qq * qp.transpose()) / kSqrt2;
            mat_to_svec(RMat(0.5 * (e + e.transpose())), col);
            for (int ridx = cidx; ridx < svec_dim(nn); ++ridx)
              kkt_.coeffRef(ib.offset + ridx, ib.offset + cidx) += -col[ridx];
          }
      }
    }
  }

  // Solve the quasidefinite KKT system with one round of iterative
  // refinement against the unregularized operator.
  RVec kkt_solve(const RVec& rhs) const {
    RVec sol = ldlt_.solve(rhs);
    for (int round = 0; round < 2; ++round) {
      RVec r = rhs - k0_mul(sol);
      if (r.cwiseAbs().maxCoeff() < 1e-13 * (1.0 + rhs.cwiseAbs().maxCoeff())) break;
      sol += ldlt_.solve(r);
    }
    return sol;
  }

  RVec k0_mul(const RVec& v) const {
    RVec out(n_ + m_);
    out.head(n_) = -h_mul(v.head(n_)) + at_mul(v.tail(m_));
    out.tail(m_) = a_ * v.head(n_);
    return out;
  }

  const ConicProgram& prog_;
  SolverOptions opts_;
  std::vector<InternalBlock> blocks_;
  std::vector<int> col_plus_, col_minus_;
  Eigen::SparseMatrix<double> a_;
  RVec b_, c_;
  int n_ = 0, m_ = 0;
  double nu_ = 0.0;
  std::vector<BlockScaling> scal_;
  Eigen::SparseMatrix<double> kkt_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>>
      ldlt_;
};

}  // namespace detail

inline SolveResult solve(const ConicProgram& prog, const SolverOptions& opts = {}) {
  if (!prog.infeasible_notes().empty()) {
    SolveResult out;
    out.status = SolveStatus::Infeasible;
    out.message = "structurally infeasible: " + prog.infeasible_notes().front();
    out.certificate_margin = std::numeric_limits<double>::infinity();
    return out;
  }
  std::string why;
  if (!prog.audit(&why)) {
    SolveResult out;
    out.status = SolveStatus::NumericalFailure;
    out.message = "program audit failed: " + why;
    return out;
  }
  detail::Ipm ipm(prog, opts);
  return ipm.run();
}

enum class FeasStatus { Feasible, Infeasible, Undecided };

struct FeasibilityResult {
  FeasStatus status = FeasStatus::Undecided;
  RVec point;           // feasible point (original layout)
  RVec cert_y, cert_z;  // separating dual certificate
  double margin = 0.0;
  std::string message;
};

// Membership-style feasibility: solve with a zero objective; Feasible points
// re-validate against the constraint list independently of solver internals.
inline FeasibilityResult feasibility(const ConicProgram& prog, const SolverOptions& opts = {}) {
  ConicProgram p = prog;
  p.set_objective(LinExpr());
  SolveResult r = solve(p, opts);
  FeasibilityResult out;
  if (r.status == SolveStatus::Optimal) {
    double eqres = prog.equality_residual(r.primal);
    double coneres = prog.cone_violation(r.primal);
    if (eqres <= 1e-7 && coneres >= -1e-7) {
      out.status = FeasStatus::Feasible;
      out.point = r.primal;
      out.message = "feasible point, equality residual " + std::to_string(eqres);
    } else {
      out.status = FeasStatus::Undecided;
      out.message = "solver point failed independent re-validation";
    }
  } else if (r.status == SolveStatus::Infeasible) {
    out.status = FeasStatus::Infeasible;
    out.cert_y = r.dual_y;
    out.cert_z = r.dual_z;
    out.margin = r.certificate_margin;
    out.message = r.message;
  } else {
    out.status = FeasStatus::Undecided;
    out.message = r.message;
  }
  return out;
}

}  // namespace losr
