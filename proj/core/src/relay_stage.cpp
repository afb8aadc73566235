#include "fdswipt/relay_stage.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "fdswipt/rng.hpp"

namespace fdswipt {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Coefficient vector c with c^H vec(V) = (N_t^H u)^H V v for column-major vec.
Vector lift_vector(const Vector& a_proj, const Vector& v) {
  return kron(v.conjugate(), a_proj);
}

struct LiftTerms {
  // X-space quadratic forms (dim n = d*mr)
  Matrix f_a, f_b, f_ea, f_eb;  // |h^H W h'|^2 terms
  Matrix g_a, g_b, g_e;         // ||h^H W||^2 terms
  Matrix h_a, h_b;              // ||W h||^2 terms
  int n = 0;
};

LiftTerms make_lift_terms(const ChannelRealization& ch, const Matrix& n_t) {
  const int d = static_cast<int>(n_t.cols());
  const int mr = static_cast<int>(ch.h_ar.size());
  LiftTerms t;
  t.n = d * mr;
  const Vector a_a = n_t.adjoint() * ch.h_ra;
  const Vector a_b = n_t.adjoint() * ch.h_rb;
  const Vector a_e = n_t.adjoint() * ch.h_re;

  const Vector c_a = lift_vector(a_a, ch.h_br);
  const Vector c_b = lift_vector(a_b, ch.h_ar);
  const Vector c_ea = lift_vector(a_e, ch.h_ar);
  const Vector c_eb = lift_vector(a_e, ch.h_br);
  t.f_a = c_a * c_a.adjoint();
  t.f_b = c_b * c_b.adjoint();
  t.f_ea = c_ea * c_ea.adjoint();
  t.f_eb = c_eb * c_eb.adjoint();

  const Matrix id_mr = Matrix::Identity(mr, mr);
  const Matrix id_d = Matrix::Identity(d, d);
  t.g_a = kron(id_mr, Matrix(a_a * a_a.adjoint()));
  t.g_b = kron(id_mr, Matrix(a_b * a_b.adjoint()));
  t.g_e = kron(id_mr, Matrix(a_e * a_e.adjoint()));
  t.h_a = kron(Matrix(ch.h_ar.conjugate() * ch.h_ar.transpose()), id_d);
  t.h_b = kron(Matrix(ch.h_br.conjugate() * ch.h_br.transpose()), id_d);
  return t;
}

Matrix unvec(const Vector& x, int d, int mr) {
  Matrix v(d, mr);
  for (int j = 0; j < mr; ++j) v.col(j) = x.segment(j * d, d);
  return v;
}

struct CandidateChecks {
  DesignPoint design;
  PerfReport report;
  bool feasible = false;
};

// Power-minimal completion of a candidate pair of directions. With the
// beamformer direction W and AN direction Q fixed, every constraint of the
// relay subproblem is affine in the scales (tau, s) of (tau^(1/2) W, s Q),
// so the completion is a 2-variable LP solved by vertex enumeration:
//   sinr A/B:  tau * d_X - s * gamma_X q_X >= r_X        (lower bounds)
//   eaves:     tau * d_E - s * gamma_E q_E <= gamma_E
//   harvest:   tau * h_t + s * h_s         >= h_r
//   tau >= 0, s >= 0,  minimizing tau * w_pow + s * q_pow.
std::optional<CandidateChecks> repair_candidate(const Matrix& w, const Matrix& q,
                                                const ChannelRealization& ch,
                                                const SystemParams& params, double rho,
                                                double p_a, double p_b) {
  const double s2r = params.sigma2_r;
  auto quad = [](const Vector& h, const Matrix& m) {
    return (h.adjoint() * m * h).value().real();
  };

  const Vector wa = w.adjoint() * ch.h_ra;
  const Vector wb = w.adjoint() * ch.h_rb;
  const Vector we = w.adjoint() * ch.h_re;

  const double q_a = quad(ch.h_ra, q);
  const double q_b = quad(ch.h_rb, q);
  const double q_e = quad(ch.h_re, q);
  const double tr_q = q.trace().real();

  const double d_a = rho * p_b * std::norm(wa.dot(ch.h_br)) -
                     params.gamma_a * rho * s2r * wa.squaredNorm();
  const double r_a = params.gamma_a * (p_a * std::norm(ch.h_aa) + 1.0);
  if (d_a <= 0.0) return std::nullopt;

  const double d_b = rho * p_a * std::norm(wb.dot(ch.h_ar)) -
                     params.gamma_b * rho * s2r * wb.squaredNorm();
  const double r_b = params.gamma_b * (p_b * std::norm(ch.h_bb) + 1.0);
  if (d_b <= 0.0) return std::nullopt;

  const double d_e = rho * (p_a * std::norm(we.dot(ch.h_ar)) + p_b * std::norm(we.dot(ch.h_br))) -
                     params.gamma_e * rho * s2r * we.squaredNorm();

  const double w_pow = rho * (p_a * (w * ch.h_ar).squaredNorm() +
                              p_b * (w * ch.h_br).squaredNorm() + s2r * w.squaredNorm());
  const double harvest_base = ch.h_ar.squaredNorm() * p_a + ch.h_br.squaredNorm() * p_b +
                              s2r * static_cast<double>(params.mr);
  const double h_r = params.u_bar / params.beta / (1.0 - rho) - harvest_base;

  // rows as a*tau + b*s >= c (le rows negated)
  struct Row {
    double a, b, c;
  };
  const std::vector<Row> rows = {
      {d_a, -params.gamma_a * q_a, r_a},
      {d_b, -params.gamma_b * q_b, r_b},
      {-d_e, params.gamma_e * q_e, -params.gamma_e},
      {w_pow, tr_q, h_r},
      {1.0, 0.0, 0.0},
      {0.0, 1.0, 0.0},
  };
  auto feasible_at = [&](double tau, double s) {
    for (const auto& row : rows) {
      const double scale = std::max({std::abs(row.c), std::abs(row.a * tau),
                                     std::abs(row.b * s), 1e-12});
      if (row.a * tau + row.b * s < row.c - 1e-9 * scale) return false;
    }
    return true;
  };

  double best_obj = std::numeric_limits<double>::infinity();
  double best_tau = -1.0, best_s = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      const double det = rows[i].a * rows[j].b - rows[j].a * rows[i].b;
      const double det_scale = std::max({std::abs(rows[i].a * rows[j].b),
                                         std::abs(rows[j].a * rows[i].b), 1e-300});
      if (std::abs(det) <= 1e-12 * det_scale) continue;
      double tau = (rows[i].c * rows[j].b - rows[j].c * rows[i].b) / det;
      double s = (rows[i].a * rows[j].c - rows[j].a * rows[i].c) / det;
      tau = std::max(tau, 0.0);
      s = std::max(s, 0.0);
      if (!std::isfinite(tau) || !std::isfinite(s)) continue;
      if (!feasible_at(tau, s)) continue;
      const double obj = tau * w_pow + s * tr_q;
      if (obj < best_obj) {
        best_obj = obj;
        best_tau = tau;
        best_s = s;
      }
    }
  }
  if (best_tau <= 0.0) return std::nullopt;

  CandidateChecks out;
  out.design = {std::sqrt(best_tau) * w, best_s * q, rho, p_a, p_b};
  out.report = evaluate_performance(out.design, ch, params);
  const double tol = 1e-7;
  out.feasible = out.report.gamma_a >= params.gamma_a * (1.0 - tol) &&
                 out.report.gamma_b >= params.gamma_b * (1.0 - tol) &&
                 out.report.gamma_e <= params.gamma_e * (1.0 + tol) &&
                 out.report.u >= params.u_bar * (1.0 - tol) - tol;
  return out;
}

std::vector<ConstraintResidual> make_report(const PerfReport& rep, const SystemParams& params) {
  auto entry = [](std::string name, double value, double bound, bool lower) {
    ConstraintResidual r;
    r.name = std::move(name);
    r.value = value;
    r.bound = bound;
    const double scale = std::max(std::abs(bound), 1e-12);
    r.rel_margin = (lower ? value - bound : bound - value) / scale;
    r.satisfied = r.rel_margin >= -1e-6;
    return r;
  };
  return {
      entry("sinr_a", rep.gamma_a, params.gamma_a, true),
      entry("sinr_b", rep.gamma_b, params.gamma_b, true),
      entry("eaves", rep.gamma_e, params.gamma_e, false),
      entry("harvest", rep.u, params.u_bar, true),
  };
}

}  // namespace

NullspaceConstants nullspace_constants(const ChannelRealization& ch, const Matrix& n_t) {
  if (n_t.cols() < 1) throw std::invalid_argument("null basis has no columns");
  NullspaceConstants c;
  c.c_ra = (n_t.adjoint() * ch.h_ra).squaredNorm();
  c.c_rb = (n_t.adjoint() * ch.h_rb).squaredNorm();
  c.c_re = (n_t.adjoint() * ch.h_re).squaredNorm();
  c.c_nt = (n_t * n_t.adjoint()).trace().real();
  return c;
}

RelayProblem build_relay_sdp(const ChannelRealization& ch, const SystemParams& params,
                             double rho, double p_a, double p_b) {
  params.validate();
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (!(p_a > 0.0) || !(p_b > 0.0)) throw std::invalid_argument("powers must be positive");

  RelayProblem rp;
  rp.null_basis = linalg::null_space_basis(ch.h_rr);
  rp.d = static_cast<int>(rp.null_basis.cols());
  const int mt = params.mt;
  const double s2r = params.sigma2_r;

  LiftTerms lift = make_lift_terms(ch, rp.null_basis);
  const int n = lift.n;

  sdp::SdpProblem& p = rp.problem;
  p.block_dims = {n, mt};

  const Matrix id_x = Matrix::Identity(n, n);
  const Matrix id_q = Matrix::Identity(mt, mt);
  const Matrix relay_power_x = rho * (p_a * lift.h_a + p_b * lift.h_b + s2r * id_x);
  p.objective = {relay_power_x, id_q};

  auto outer = [](const Vector& h) { return Matrix(h * h.adjoint()); };

  sdp::LinearConstraint sinr_a;
  sinr_a.coeffs = {rho * p_b * lift.f_a - params.gamma_a * rho * s2r * lift.g_a,
                   -params.gamma_a * outer(ch.h_ra)};
  sinr_a.sense = sdp::Sense::ge;
  sinr_a.rhs = params.gamma_a * (p_a * std::norm(ch.h_aa) + 1.0);

  sdp::LinearConstraint sinr_b;
  sinr_b.coeffs = {rho * p_a * lift.f_b - params.gamma_b * rho * s2r * lift.g_b,
                   -params.gamma_b * outer(ch.h_rb)};
  sinr_b.sense = sdp::Sense::ge;
  sinr_b.rhs = params.gamma_b * (p_b * std::norm(ch.h_bb) + 1.0);

  sdp::LinearConstraint eaves;
  eaves.coeffs = {rho * p_a * lift.f_ea + rho * p_b * lift.f_eb -
                      params.gamma_e * rho * s2r * lift.g_e,
                  -params.gamma_e * outer(ch.h_re)};
  eaves.sense = sdp::Sense::le;
  eaves.rhs = params.gamma_e;

  const double one_minus_rho = 1.0 - rho;
  sdp::LinearConstraint harvest;
  harvest.coeffs = {one_minus_rho * relay_power_x, one_minus_rho * id_q};
  harvest.sense = sdp::Sense::ge;
  harvest.rhs = params.u_bar / params.beta -
                one_minus_rho * (ch.h_ar.squaredNorm() * p_a + ch.h_br.squaredNorm() * p_b +
                                 s2r * static_cast<double>(params.mr));

  p.constraints = {sinr_a, sinr_b, eaves, harvest};
  return rp;
}

std::string to_string(RelayStatus s) {
  switch (s) {
    case RelayStatus::optimal: return "optimal";
    case RelayStatus::infeasible: return "infeasible";
    case RelayStatus::recovered_approx: return "recovered-approx";
  }
  return "unknown";
}

RelayStageResult solve_relay_stage(const ChannelRealization& ch, const SystemParams& params,
                                   double rho, double p_a, double p_b,
                                   const RelayStageOptions& opts) {
  RelayStageResult result;
  RelayProblem rp = build_relay_sdp(ch, params, rho, p_a, p_b);
  const int d = rp.d;
  const int mr = params.mr;

  sdp::SdpSolution sol = sdp::solve_sdp(rp.problem, opts.sdp);
  if (sol.status == sdp::SolveStatus::infeasible ||
      sol.status == sdp::SolveStatus::unbounded) {
    result.status = RelayStatus::infeasible;
    return result;
  }

  const Matrix& x_lift = sol.block_values[0];
  const Matrix& q = sol.block_values[1];
  const Matrix q_psd = 0.5 * (q + q.adjoint());

  auto r1 = linalg::dominant_rank1(x_lift);
  result.rank1_ratio = r1.rank1_ratio;

  auto try_candidate = [&](const Vector& x) -> std::optional<CandidateChecks> {
    const Matrix w = rp.null_basis * unvec(x, d, mr);
    auto cand = repair_candidate(w, q_psd, ch, params, rho, p_a, p_b);
    if (cand && !cand->feasible) return std::nullopt;
    return cand;
  };

  const Vector x_direct = std::sqrt(std::max(r1.lambda1, 0.0)) * r1.v1;
  const bool direct_ok = sol.status == sdp::SolveStatus::optimal &&
                         result.rank1_ratio >= opts.rank1_threshold;
  if (direct_ok) {
    if (auto cand = try_candidate(x_direct)) {
      result.status = RelayStatus::optimal;
      result.w = cand->design.w;
      result.q = q_psd;
      result.objective = cand->report.p_r;
      result.constraint_report = make_report(cand->report, params);
      return result;
    }
  }

  // Gaussian randomization over the lift covariance; the dominant eigenpair
  // joins the pool as a deterministic candidate.
  Matrix factor;
  try {
    factor = linalg::psd_factor(0.5 * (x_lift + x_lift.adjoint()));
  } catch (const std::invalid_argument&) {
    result.status = RelayStatus::infeasible;
    return result;
  }

  std::optional<CandidateChecks> best;
  if (auto cand = try_candidate(x_direct)) best = cand;

  GaussianSource rng(splitmix64(opts.seed ^ 0x52454c41595354ULL));
  for (int i = 0; i < opts.randomization_count; ++i) {
    Vector g(factor.cols());
    for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = rng.complex_normal(1.0);
    const Vector x = factor * g;
    if (auto cand = try_candidate(x)) {
      if (!best || cand->report.p_r < best->report.p_r) best = cand;
    }
  }

  if (!best) {
    result.status = RelayStatus::infeasible;
    return result;
  }
  result.status = RelayStatus::recovered_approx;
  result.w = best->design.w;
  result.q = q_psd;
  result.objective = best->report.p_r;
  result.constraint_report = make_report(best->report, params);
  return result;
}

}  // namespace fdswipt
