#include "fdswipt/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fdswipt::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Real standard form
//
// A Hermitian d x d block maps to the structured real symmetric 2d x 2d block
//   T(H) = [ Re(H)  -Im(H) ]
//          [ Im(H)   Re(H) ],
// with trace(T(C) T(X)) = 2 trace(C X); coefficients carry a factor 1/2 so
// objective and constraint values are preserved. Inequality rows get a
// nonnegative scalar slack appended as an extra 1 x 1 block.
// ---------------------------------------------------------------------------

MatrixXd real_embed(const Matrix& h) {
  const Eigen::Index d = h.rows();
  MatrixXd t(2 * d, 2 * d);
  t.topLeftCorner(d, d) = h.real();
  t.topRightCorner(d, d) = -h.imag();
  t.bottomLeftCorner(d, d) = h.imag();
  t.bottomRightCorner(d, d) = h.real();
  return t;
}

Matrix real_extract(const MatrixXd& x) {
  const Eigen::Index d = x.rows() / 2;
  Matrix h =
      0.5 * (x.topLeftCorner(d, d) + x.bottomRightCorner(d, d)).cast<Complex>() +
      Complex(0.0, 0.5) *
          (x.bottomLeftCorner(d, d) - x.topRightCorner(d, d)).cast<Complex>();
  return 0.5 * (h + h.adjoint()).eval();
}

struct StandardForm {
  std::vector<int> dims;                  // real symmetric block sizes
  std::vector<MatrixXd> c;                // objective, per block
  std::vector<std::vector<MatrixXd>> a;   // [constraint][block]
  VectorXd b;
  int herm_blocks = 0;                    // leading blocks that map back
  int total_dim = 0;
};

StandardForm to_standard_form(const SdpProblem& p) {
  StandardForm sf;
  const int nb = static_cast<int>(p.block_dims.size());
  const int m = static_cast<int>(p.constraints.size());
  int n_slack = 0;
  for (const auto& con : p.constraints) {
    if (con.sense != Sense::eq) ++n_slack;
  }
  sf.herm_blocks = nb;
  sf.dims.reserve(nb + n_slack);
  for (int k = 0; k < nb; ++k) sf.dims.push_back(2 * p.block_dims[k]);
  for (int j = 0; j < n_slack; ++j) sf.dims.push_back(1);

  sf.c.reserve(sf.dims.size());
  for (int k = 0; k < nb; ++k) sf.c.push_back(0.5 * real_embed(p.objective[k]));
  for (int j = 0; j < n_slack; ++j) sf.c.push_back(MatrixXd::Zero(1, 1));

  sf.b.resize(m);
  sf.a.assign(m, {});
  int slack_index = 0;
  for (int i = 0; i < m; ++i) {
    const auto& con = p.constraints[i];
    auto& row = sf.a[i];
    row.reserve(sf.dims.size());
    for (int k = 0; k < nb; ++k) row.push_back(0.5 * real_embed(con.coeffs[k]));
    for (int j = 0; j < n_slack; ++j) row.push_back(MatrixXd::Zero(1, 1));
    if (con.sense != Sense::eq) {
      const double sign = con.sense == Sense::le ? 1.0 : -1.0;
      row[nb + slack_index](0, 0) = sign;
      ++slack_index;
    }
    sf.b(i) = con.rhs;
  }
  for (int d : sf.dims) sf.total_dim += d;
  return sf;
}

// Equilibrate constraint rows in place; violations are re-derived from the
// original problem afterwards, so only the solve sees the scaling.
void scale_rows(StandardForm& sf) {
  for (int i = 0; i < sf.b.size(); ++i) {
    double nrm = 0.0;
    for (const auto& blk : sf.a[i]) nrm = std::max(nrm, blk.cwiseAbs().maxCoeff());
    if (nrm > 0.0) {
      const double s = 1.0 / std::max(1.0, nrm);
      for (auto& blk : sf.a[i]) blk *= s;
      sf.b(i) *= s;
    }
  }
}

using BlockDiag = std::vector<MatrixXd>;

BlockDiag identity_like(const StandardForm& sf, double scale) {
  BlockDiag x;
  x.reserve(sf.dims.size());
  for (int d : sf.dims) x.push_back(scale * MatrixXd::Identity(d, d));
  return x;
}

double inner(const BlockDiag& x, const BlockDiag& y) {
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += x[k].cwiseProduct(y[k]).sum();
  return s;
}

VectorXd apply_a(const StandardForm& sf, const BlockDiag& x) {
  VectorXd out(sf.b.size());
  for (int i = 0; i < sf.b.size(); ++i) {
    double s = 0.0;
    for (size_t k = 0; k < x.size(); ++k) s += sf.a[i][k].cwiseProduct(x[k]).sum();
    out(i) = s;
  }
  return out;
}

BlockDiag apply_at(const StandardForm& sf, const VectorXd& y) {
  BlockDiag out;
  out.reserve(sf.dims.size());
  for (size_t k = 0; k < sf.dims.size(); ++k) {
    MatrixXd acc = MatrixXd::Zero(sf.dims[k], sf.dims[k]);
    for (int i = 0; i < y.size(); ++i) acc += y(i) * sf.a[i][k];
    out.push_back(std::move(acc));
  }
  return out;
}

double frob(const BlockDiag& x) {
  double s = 0.0;
  for (const auto& blk : x) s += blk.squaredNorm();
  return std::sqrt(s);
}

// Largest alpha with X + alpha * dX staying PSD, given L with X = L L^T.
double max_step(const MatrixXd& chol_l, const MatrixXd& dx) {
  MatrixXd t = chol_l.triangularView<Eigen::Lower>().solve(dx);
  t = chol_l.triangularView<Eigen::Lower>().solve(t.transpose().eval());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (t + t.transpose()),
                                             Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  if (lam_min >= -1e-14) return std::numeric_limits<double>::infinity();
  return -1.0 / lam_min;
}

struct IpmResult {
  bool optimal = false;
  bool unbounded = false;
  int iterations = 0;
  double pobj = 0.0;
  double dobj = 0.0;
  BlockDiag x;
};

// Infeasible-start primal-dual path following with NT scaling and an
// adaptive centering parameter from an affine predictor. Both Newton solves
// of an iteration share the same Schur factorization.
IpmResult ipm_solve(const StandardForm& sf, const SolverSettings& st) {
  const int m = static_cast<int>(sf.b.size());
  const size_t nb = sf.dims.size();
  const double n_cone = static_cast<double>(sf.total_dim);

  double bnorm = m > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0;
  double cnorm = 0.0;
  for (const auto& blk : sf.c) cnorm = std::max(cnorm, blk.norm());
  double anorm = 0.0;
  for (const auto& row : sf.a)
    for (const auto& blk : row) anorm = std::max(anorm, blk.norm());

  const double xi_p = 1.0 + bnorm;
  const double xi_d = 1.0 + std::max(cnorm, anorm);
  BlockDiag x = identity_like(sf, xi_p);
  BlockDiag s = identity_like(sf, xi_d);
  VectorXd y = VectorXd::Zero(m);

  IpmResult res;
  res.x = x;

  const double tol_feas = st.tol;
  const double tol_gap = 100.0 * st.tol;

  double best_merit = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  double last_rel_p = std::numeric_limits<double>::infinity();
  const double diverged_floor = 1e7 * (1.0 + bnorm + cnorm);
  auto classify_break = [&]() {
    if (res.pobj < -diverged_floor && last_rel_p <= 1e-4) res.unbounded = true;
  };

  std::vector<MatrixXd> lx(nb), ls(nb), w(nb), sinv(nb);

  for (int iter = 0; iter < st.max_iter; ++iter) {
    res.iterations = iter;

    VectorXd rp = sf.b - apply_a(sf, x);
    BlockDiag at_y = apply_at(sf, y);
    BlockDiag rd(nb);
    for (size_t k = 0; k < nb; ++k) rd[k] = sf.c[k] - s[k] - at_y[k];

    const double pobj = inner(sf.c, x);
    const double dobj = m > 0 ? sf.b.dot(y) : 0.0;
    const double gap = inner(x, s);
    const double mu = gap / n_cone;
    if (!std::isfinite(pobj) || !std::isfinite(gap)) {
      classify_break();
      return res;
    }

    const double rel_p = (m > 0 ? rp.cwiseAbs().maxCoeff() : 0.0) / (1.0 + bnorm);
    double rd_norm = 0.0;
    for (const auto& blk : rd) rd_norm = std::max(rd_norm, blk.norm());
    const double rel_d = rd_norm / (1.0 + cnorm);
    const double rel_gap =
        std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    res.pobj = pobj;
    res.dobj = dobj;
    res.x = x;
    last_rel_p = rel_p;

    if (rel_p <= tol_feas && rel_d <= tol_feas && rel_gap <= tol_gap) {
      res.optimal = true;
      return res;
    }
    // Primal objective diverging to -inf while near-feasible: unbounded below.
    if (pobj < -diverged_floor && rel_p <= 1e-4) {
      res.unbounded = true;
      return res;
    }
    // Dual objective diverging with dual residual under control certifies
    // primal infeasibility; the caller re-checks with phase 1.
    if (m > 0 && dobj > diverged_floor && rel_d <= 1e-4) {
      return res;
    }

    const double merit = std::max(rel_p, rel_d);
    if (merit < 0.9 * best_merit) {
      best_merit = merit;
      best_iter = iter;
    }
    if (iter - best_iter > 30 || mu < 1e-16 * xi_p * xi_d) {
      classify_break();
      return res;  // stalled
    }

    // NT scaling W with W S W = X, per block via  R^T L = U Sigma V^T,
    // W = L V Sigma^{-1} V^T L^T   (L, R Cholesky factors of X, S).
    bool scaling_ok = true;
    for (size_t k = 0; k < nb; ++k) {
      Eigen::LLT<MatrixXd> cx(x[k]);
      Eigen::LLT<MatrixXd> cs(s[k]);
      if (cx.info() != Eigen::Success || cs.info() != Eigen::Success) {
        scaling_ok = false;
        break;
      }
      lx[k] = cx.matrixL();
      ls[k] = cs.matrixL();
      Eigen::JacobiSVD<MatrixXd> svd(ls[k].transpose() * lx[k],
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
      VectorXd sig = svd.singularValues().cwiseMax(1e-150);
      MatrixXd lv = lx[k] * svd.matrixV();
      w[k] = lv * sig.cwiseInverse().asDiagonal() * lv.transpose();
      w[k] = 0.5 * (w[k] + w[k].transpose()).eval();
      MatrixXd id = MatrixXd::Identity(sf.dims[k], sf.dims[k]);
      sinv[k] = cs.solve(id);
      sinv[k] = 0.5 * (sinv[k] + sinv[k].transpose()).eval();
    }
    if (!scaling_ok) return res;

    // Schur complement M_ij = sum_k <A_ik, W A_jk W>
    MatrixXd schur(m, m);
    std::vector<BlockDiag> waw(m);
    for (int j = 0; j < m; ++j) {
      waw[j].resize(nb);
      for (size_t k = 0; k < nb; ++k) waw[j][k] = w[k] * sf.a[j][k] * w[k];
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j <= i; ++j) {
        double v = 0.0;
        for (size_t k = 0; k < nb; ++k) v += sf.a[i][k].cwiseProduct(waw[j][k]).sum();
        schur(i, j) = v;
        schur(j, i) = v;
      }
    }
    for (int i = 0; i < m; ++i) schur(i, i) += 1e-13 * (1.0 + schur(i, i));
    Eigen::LDLT<MatrixXd> schur_fact(schur);

    BlockDiag w_rd_w(nb);
    for (size_t k = 0; k < nb; ++k) w_rd_w[k] = w[k] * rd[k] * w[k];
    const VectorXd a_wrdw = apply_a(sf, w_rd_w);
    const VectorXd a_sinv = apply_a(sf, sinv);

    // One Newton solve for centering parameter sigma; rhs derived from
    //   dX + W dS W = sigma*mu*S^{-1} - X,  A(dX) = rp,  A*(dy) + dS = Rd.
    auto newton = [&](double sigma_mu, VectorXd& dy, BlockDiag& ds, BlockDiag& dx) {
      if (m > 0) {
        VectorXd rhs = sf.b - sigma_mu * a_sinv + a_wrdw;
        dy = schur_fact.solve(rhs);
      } else {
        dy.resize(0);
      }
      BlockDiag at_dy = apply_at(sf, dy);
      ds.resize(nb);
      dx.resize(nb);
      for (size_t k = 0; k < nb; ++k) {
        ds[k] = rd[k] - at_dy[k];
        dx[k] = sigma_mu * sinv[k] - x[k] - w[k] * ds[k] * w[k];
        dx[k] = 0.5 * (dx[k] + dx[k].transpose()).eval();
      }
    };

    auto step_bounds = [&](const BlockDiag& dx, const BlockDiag& ds, double& ap,
                           double& ad) {
      ap = 1.0;
      ad = 1.0;
      for (size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, 0.98 * max_step(lx[k], dx[k]));
        ad = std::min(ad, 0.98 * max_step(ls[k], ds[k]));
      }
    };

    VectorXd dy_aff;
    BlockDiag ds_aff, dx_aff;
    newton(0.0, dy_aff, ds_aff, dx_aff);
    double ap_aff, ad_aff;
    step_bounds(dx_aff, ds_aff, ap_aff, ad_aff);
    double gap_aff = 0.0;
    for (size_t k = 0; k < nb; ++k) {
      gap_aff += (x[k] + ap_aff * dx_aff[k]).cwiseProduct(s[k] + ad_aff * ds_aff[k]).sum();
    }
    gap_aff = std::max(gap_aff, 0.0);
    double sigma = std::pow(gap_aff / std::max(gap, 1e-300), 3.0);
    sigma = std::clamp(sigma, 1e-6, 0.999);

    VectorXd dy;
    BlockDiag ds, dx;
    newton(sigma * mu, dy, ds, dx);
    double ap, ad;
    step_bounds(dx, ds, ap, ad);

    // Apply, backing off if rounding pushed an iterate off the cone.
    for (int tries = 0; tries < 8; ++tries) {
      BlockDiag xn(nb), sn(nb);
      bool ok = true;
      for (size_t k = 0; k < nb; ++k) {
        xn[k] = x[k] + ap * dx[k];
        sn[k] = s[k] + ad * ds[k];
        if (!xn[k].allFinite() || !sn[k].allFinite() ||
            Eigen::LLT<MatrixXd>(xn[k]).info() != Eigen::Success ||
            Eigen::LLT<MatrixXd>(sn[k]).info() != Eigen::Success) {
          ok = false;
          break;
        }
      }
      if (ok) {
        x = std::move(xn);
        s = std::move(sn);
        if (m > 0) y += ad * dy;
        break;
      }
      ap *= 0.5;
      ad *= 0.5;
    }
    res.iterations = iter + 1;
  }
  res.x = x;
  classify_break();
  return res;
}

// Phase 1: minimize t subject to A(X) + t * (b - A(I)) = b, X PSD, t >= 0.
// (X, t) = (I, 1) is exactly feasible and interior, and the optimum is the
// minimum attainable infeasibility of the original constraints.
double phase1_min_infeasibility(const StandardForm& sf, const SolverSettings& st,
                                bool& decided) {
  StandardForm p1;
  // Keep only blocks that appear in some constraint; untouched blocks cannot
  // reduce infeasibility.
  std::vector<int> keep;
  for (size_t k = 0; k < sf.dims.size(); ++k) {
    bool used = false;
    for (const auto& row : sf.a) {
      if (row[k].cwiseAbs().maxCoeff() > 0.0) {
        used = true;
        break;
      }
    }
    if (used) keep.push_back(static_cast<int>(k));
  }
  for (int k : keep) {
    p1.dims.push_back(sf.dims[k]);
    p1.c.push_back(MatrixXd::Zero(sf.dims[k], sf.dims[k]));
  }
  p1.dims.push_back(1);
  p1.c.push_back(MatrixXd::Ones(1, 1));
  p1.herm_blocks = 0;

  const int m = static_cast<int>(sf.b.size());
  p1.b = sf.b;
  VectorXd residual_dir = sf.b;
  for (int i = 0; i < m; ++i) {
    for (int k : keep) residual_dir(i) -= sf.a[i][k].trace();
  }
  p1.a.assign(m, {});
  for (int i = 0; i < m; ++i) {
    for (int k : keep) p1.a[i].push_back(sf.a[i][k]);
    MatrixXd t(1, 1);
    t(0, 0) = residual_dir(i);
    p1.a[i].push_back(t);
  }
  for (int d : p1.dims) p1.total_dim += d;

  SolverSettings st1 = st;
  st1.tol = std::max(st.tol, 1e-9);
  IpmResult r = ipm_solve(p1, st1);
  decided = r.optimal;
  return r.pobj;
}

double max_abs_rhs(const SdpProblem& p) {
  double s = 0.0;
  for (const auto& con : p.constraints) s = std::max(s, std::abs(con.rhs));
  return s;
}

void write_matrix(std::ostream& os, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ' ';
      os << m(r, c).real() << ' ' << m(r, c).imag();
    }
    os << '\n';
  }
}

}  // namespace

void SdpProblem::validate() const {
  if (block_dims.empty()) throw std::invalid_argument("problem has no blocks");
  if (objective.size() != block_dims.size()) {
    throw std::invalid_argument("objective block count mismatch");
  }
  auto check_block = [&](const Matrix& m, int dim) {
    if (m.rows() != dim || m.cols() != dim) {
      throw std::invalid_argument("coefficient shape mismatch");
    }
    if (!m.allFinite()) throw std::invalid_argument("non-finite coefficient");
    if (!linalg::is_hermitian(m)) throw std::invalid_argument("not Hermitian");
  };
  for (size_t k = 0; k < block_dims.size(); ++k) {
    if (block_dims[k] <= 0) throw std::invalid_argument("block dimension must be positive");
    check_block(objective[k], block_dims[k]);
  }
  for (const auto& con : constraints) {
    if (con.coeffs.size() != block_dims.size()) {
      throw std::invalid_argument("constraint block count mismatch");
    }
    if (!std::isfinite(con.rhs)) throw std::invalid_argument("non-finite rhs");
    for (size_t k = 0; k < block_dims.size(); ++k) check_block(con.coeffs[k], block_dims[k]);
  }
}

void SdpProblem::dump(std::ostream& os) const {
  os << "sdp blocks " << block_dims.size() << '\n';
  os << "dims";
  for (int d : block_dims) os << ' ' << d;
  os << '\n';
  for (size_t k = 0; k < block_dims.size(); ++k) {
    os << "objective block " << k << '\n';
    write_matrix(os, objective[k]);
  }
  os << "constraints " << constraints.size() << '\n';
  for (size_t i = 0; i < constraints.size(); ++i) {
    const auto& con = constraints[i];
    const char* s = con.sense == Sense::le ? "<=" : con.sense == Sense::ge ? ">=" : "==";
    os << "constraint " << i << ' ' << s << ' ' << con.rhs << '\n';
    for (size_t k = 0; k < block_dims.size(); ++k) {
      os << "block " << k << '\n';
      write_matrix(os, con.coeffs[k]);
    }
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iterations: return "max-iterations";
  }
  return "unknown";
}

SdpSolution solve_sdp(const SdpProblem& problem, const SolverSettings& settings) {
  problem.validate();
  if (!(settings.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (settings.max_iter <= 0) throw std::invalid_argument("max_iter must be positive");

  StandardForm sf = to_standard_form(problem);
  scale_rows(sf);

  IpmResult r = ipm_solve(sf, settings);

  SdpSolution sol;
  sol.iterations = r.iterations;
  sol.block_values.reserve(problem.block_dims.size());
  for (int k = 0; k < sf.herm_blocks; ++k) {
    Matrix blk = real_extract(r.x[k]);
    if (!blk.allFinite()) blk.setZero();
    sol.block_values.push_back(std::move(blk));
  }
  double obj = 0.0;
  for (size_t k = 0; k < problem.block_dims.size(); ++k) {
    obj += (problem.objective[k].adjoint() * sol.block_values[k]).trace().real();
  }
  sol.objective_value = obj;

  if (r.optimal) {
    sol.status = SolveStatus::optimal;
  } else if (r.unbounded) {
    sol.status = SolveStatus::unbounded;
  } else {
    bool decided = false;
    const double t_min = phase1_min_infeasibility(sf, settings, decided);
    const double thresh =
        100.0 * settings.tol * (1.0 + (sf.b.size() > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0));
    if (decided && t_min > thresh) {
      sol.status = SolveStatus::infeasible;
    } else {
      sol.status = SolveStatus::max_iterations;
    }
  }

  Certificate cert = certify_solution(problem, sol);
  sol.max_constraint_violation = cert.max_violation;
  sol.min_block_eigenvalue = cert.min_eigenvalue;
  return sol;
}

Certificate certify_solution(const SdpProblem& problem, const SdpSolution& solution) {
  if (solution.block_values.size() != problem.block_dims.size()) {
    throw std::invalid_argument("solution block count mismatch");
  }
  Certificate cert;
  cert.max_violation = 0.0;
  for (const auto& con : problem.constraints) {
    double lhs = 0.0;
    for (size_t k = 0; k < problem.block_dims.size(); ++k) {
      lhs += (con.coeffs[k].adjoint() * solution.block_values[k]).trace().real();
    }
    double viol = 0.0;
    switch (con.sense) {
      case Sense::le: viol = std::max(0.0, lhs - con.rhs); break;
      case Sense::ge: viol = std::max(0.0, con.rhs - lhs); break;
      case Sense::eq: viol = std::abs(lhs - con.rhs); break;
    }
    cert.max_violation = std::max(cert.max_violation, viol);
  }
  cert.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& blk : solution.block_values) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (blk + blk.adjoint()),
                                             Eigen::EigenvaluesOnly);
    cert.min_eigenvalue = std::min(cert.min_eigenvalue, es.eigenvalues().minCoeff());
  }
  if (solution.block_values.empty()) cert.min_eigenvalue = 0.0;
  cert.feasible = cert.max_violation <= 1e-6 * (1.0 + max_abs_rhs(problem)) &&
                  cert.min_eigenvalue >= -1e-7;
  return cert;
}

}  // namespace fdswipt::sdp
