#include "fdswipt/scalar_stages.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdswipt {

namespace {

constexpr double kRhoEps = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

double quad(const Vector& h, const Matrix& m) {
  return (h.adjoint() * m * h).value().real();
}

// Channel scalars every constraint of the scalar stages is built from.
struct LinkTerms {
  double gain_a = 0.0;  // |h_ra^H W h_br|^2
  double gain_b = 0.0;  // |h_rb^H W h_ar|^2
  double gain_ea = 0.0; // |h_re^H W h_ar|^2
  double gain_eb = 0.0; // |h_re^H W h_br|^2
  double leak_a = 0.0;  // ||h_ra^H W||^2
  double leak_b = 0.0;
  double leak_e = 0.0;
  double q_a = 0.0;     // h_ra^H Q h_ra
  double q_b = 0.0;
  double q_e = 0.0;
  double si_a = 0.0;    // |h_aa|^2
  double si_b = 0.0;
  double harv_a = 0.0;  // ||h_ar||^2
  double harv_b = 0.0;
  double wh_a = 0.0;    // ||W h_ar||^2
  double wh_b = 0.0;
  double w_fro2 = 0.0;
  double tr_q = 0.0;
};

LinkTerms make_terms(const ChannelRealization& ch, const Matrix& w, const Matrix& q) {
  LinkTerms t;
  const Vector wa = w.adjoint() * ch.h_ra;
  const Vector wb = w.adjoint() * ch.h_rb;
  const Vector we = w.adjoint() * ch.h_re;
  t.gain_a = std::norm(wa.dot(ch.h_br));
  t.gain_b = std::norm(wb.dot(ch.h_ar));
  t.gain_ea = std::norm(we.dot(ch.h_ar));
  t.gain_eb = std::norm(we.dot(ch.h_br));
  t.leak_a = wa.squaredNorm();
  t.leak_b = wb.squaredNorm();
  t.leak_e = we.squaredNorm();
  t.q_a = quad(ch.h_ra, q);
  t.q_b = quad(ch.h_rb, q);
  t.q_e = quad(ch.h_re, q);
  t.si_a = std::norm(ch.h_aa);
  t.si_b = std::norm(ch.h_bb);
  t.harv_a = ch.h_ar.squaredNorm();
  t.harv_b = ch.h_br.squaredNorm();
  t.wh_a = (w * ch.h_ar).squaredNorm();
  t.wh_b = (w * ch.h_br).squaredNorm();
  t.w_fro2 = w.squaredNorm();
  t.tr_q = q.trace().real();
  return t;
}

struct ConstraintEval {
  const LinkTerms& t;
  const SystemParams& p;
  double rho;

  double relay_power(double pa, double pb) const {
    return rho * (pa * t.wh_a + pb * t.wh_b + p.sigma2_r * t.w_fro2) + t.tr_q;
  }
  bool sinr_a_ok(double pa, double pb) const {
    const double lhs = rho * pb * t.gain_a;
    const double rhs =
        p.gamma_a * (rho * p.sigma2_r * t.leak_a + pa * t.si_a + t.q_a + 1.0);
    return lhs >= rhs * (1.0 - 1e-12);
  }
  bool sinr_b_ok(double pa, double pb) const {
    const double lhs = rho * pa * t.gain_b;
    const double rhs =
        p.gamma_b * (rho * p.sigma2_r * t.leak_b + pb * t.si_b + t.q_b + 1.0);
    return lhs >= rhs * (1.0 - 1e-12);
  }
  bool eaves_ok(double pa, double pb) const {
    const double lhs = rho * (pa * t.gain_ea + pb * t.gain_eb);
    const double rhs = p.gamma_e * (rho * p.sigma2_r * t.leak_e + t.q_e + 1.0);
    return lhs <= rhs * (1.0 + 1e-12);
  }
  bool harvest_ok(double pa, double pb) const {
    const double u = p.beta * (1.0 - rho) *
                     (pa * t.harv_a + pb * t.harv_b + relay_power(pa, pb) +
                      p.sigma2_r * static_cast<double>(p.mr));
    return u >= p.u_bar * (1.0 - 1e-12) - 1e-15;
  }
  bool all_ok(double pa, double pb) const {
    return sinr_a_ok(pa, pb) && sinr_b_ok(pa, pb) && eaves_ok(pa, pb) &&
           harvest_ok(pa, pb);
  }
};

struct CaseResult {
  bool feasible = false;
  double searched = 0.0;  // value of the non-pinned power
  double lo = 0.0, hi = 0.0;
  double objective = 0.0;
};

// Case "A at max": P_A pinned, P_B searched ascending. The objective is
// strictly increasing in P_B, so the first feasible point is optimal; the
// feasibility boundary between the last infeasible and first feasible grid
// point is then sharpened by bisection.
CaseResult search_pinned_case(const ChannelRealization& ch, const SystemParams& params,
                              const Matrix& w, const Matrix& q, double rho,
                              double pinned) {
  CaseResult out;
  const LinkTerms t = make_terms(ch, w, q);
  const ConstraintEval eval{t, params, rho};

  PowerBounds b = pb_bounds(ch, params, w, q, rho, pinned);
  const double eps_p = 1e-9 * params.p_max;
  const double lo = std::max(b.pb_min, eps_p);
  const double hi = std::min(b.pb_max, params.p_max);
  out.lo = b.pb_min;
  out.hi = b.pb_max;
  if (!(lo <= hi) || !std::isfinite(lo)) return out;

  constexpr int kGrid = 1000;
  const double step = (hi - lo) / static_cast<double>(kGrid - 1);
  int first_feasible = -1;
  for (int k = 0; k < kGrid; ++k) {
    const double pb = kGrid > 1 ? lo + step * k : lo;
    if (eval.all_ok(pinned, pb)) {
      first_feasible = k;
      break;
    }
  }
  if (first_feasible < 0) return out;

  double found = lo + step * first_feasible;
  if (first_feasible > 0) {
    double bad = found - step;
    double good = found;
    for (int it = 0; it < 80 && good - bad > 1e-14 * params.p_max; ++it) {
      const double mid = 0.5 * (bad + good);
      if (eval.all_ok(pinned, mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    found = good;
  }
  out.feasible = true;
  out.searched = found;
  out.objective = pinned + found + eval.relay_power(pinned, found);
  return out;
}

ChannelRealization swap_roles(const ChannelRealization& ch) {
  ChannelRealization s = ch;
  std::swap(s.h_ar, s.h_br);
  std::swap(s.h_ra, s.h_rb);
  std::swap(s.h_aa, s.h_bb);
  return s;
}

SystemParams swap_roles(const SystemParams& p) {
  SystemParams s = p;
  std::swap(s.gamma_a, s.gamma_b);
  return s;
}

}  // namespace

std::string to_string(RhoBound b) {
  switch (b) {
    case RhoBound::sinr_a: return "A-SINR";
    case RhoBound::sinr_b: return "B-SINR";
    case RhoBound::eaves: return "eaves";
    case RhoBound::energy: return "energy";
    case RhoBound::floor: return "floor";
  }
  return "unknown";
}

RhoResult optimize_rho(const ChannelRealization& ch, const SystemParams& params,
                       const Matrix& w, const Matrix& q, double p_a, double p_b) {
  params.validate();
  const LinkTerms t = make_terms(ch, w, q);
  RhoResult out;

  double lo = kRhoEps;
  RhoBound active = RhoBound::floor;
  double hi = 1.0 - kRhoEps;

  // Source SINR X: rho * a >= c with a = gain/gamma - sigma2R*leak.
  const double a_a = p_b * t.gain_a / params.gamma_a - params.sigma2_r * t.leak_a;
  const double c_a = p_a * t.si_a + t.q_a + 1.0;
  if (a_a <= 0.0) return out;
  if (c_a / a_a > lo) {
    lo = c_a / a_a;
    active = RhoBound::sinr_a;
  }

  const double a_b = p_a * t.gain_b / params.gamma_b - params.sigma2_r * t.leak_b;
  const double c_b = p_b * t.si_b + t.q_b + 1.0;
  if (a_b <= 0.0) return out;
  if (c_b / a_b > lo) {
    lo = c_b / a_b;
    active = RhoBound::sinr_b;
  }

  // Eavesdropper cap: rho * e <= f, an upper bound only when e > 0.
  const double e = p_a * t.gain_ea + p_b * t.gain_eb - params.gamma_e * params.sigma2_r * t.leak_e;
  const double f = params.gamma_e * (t.q_e + 1.0);
  if (e > 0.0) hi = std::min(hi, f / e);

  // Harvesting: (1 - rho)(S + rho * T) >= u_bar / beta, a downward parabola
  // in rho; feasible between its roots.
  const double cap_s = p_a * t.harv_a + p_b * t.harv_b + t.tr_q +
                       params.sigma2_r * static_cast<double>(params.mr);
  const double cap_t = p_a * t.wh_a + p_b * t.wh_b + params.sigma2_r * t.w_fro2;
  const double u_need = params.u_bar / params.beta;
  if (u_need > 0.0) {
    if (cap_t <= 1e-300) {
      if (cap_s < u_need) return out;
      hi = std::min(hi, 1.0 - u_need / cap_s);
    } else {
      const double disc = (cap_t + cap_s) * (cap_t + cap_s) - 4.0 * cap_t * u_need;
      if (disc < 0.0) return out;
      const double sq = std::sqrt(disc);
      const double r_lo = ((cap_t - cap_s) - sq) / (2.0 * cap_t);
      const double r_hi = ((cap_t - cap_s) + sq) / (2.0 * cap_t);
      if (r_lo > lo) {
        lo = r_lo;
        active = RhoBound::energy;
      }
      hi = std::min(hi, r_hi);
    }
  }

  if (lo > hi) return out;
  out.feasible = true;
  out.rho = lo;
  out.active_bound = active;
  out.lo = lo;
  out.hi = hi;
  return out;
}

PowerBounds pb_bounds(const ChannelRealization& ch, const SystemParams& params,
                      const Matrix& w, const Matrix& q, double rho, double p_a_fixed) {
  const LinkTerms t = make_terms(ch, w, q);
  PowerBounds b;

  const double num_min =
      params.gamma_a * (rho * params.sigma2_r * t.leak_a + p_a_fixed * t.si_a + t.q_a + 1.0);
  const double den_min = rho * t.gain_a;
  b.pb_min = den_min > 0.0 ? num_min / den_min : kInf;

  const double bracket = rho * p_a_fixed * t.gain_b -
                         params.gamma_b * (rho * params.sigma2_r * t.leak_b + t.q_b + 1.0);
  if (t.si_b > 0.0) {
    b.pb_max = std::max(bracket, 0.0) / (params.gamma_b * t.si_b);
  } else {
    b.pb_max = bracket >= 0.0 ? kInf : 0.0;
  }
  return b;
}

std::string to_string(PowerCase c) {
  return c == PowerCase::a_at_max ? "A-at-max" : "B-at-max";
}

PowerResult optimize_power(const ChannelRealization& ch, const SystemParams& params,
                           const Matrix& w, const Matrix& q, double rho) {
  params.validate();
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");

  const CaseResult case_a = search_pinned_case(ch, params, w, q, rho, params.p_max);
  const ChannelRealization ch_sw = swap_roles(ch);
  const SystemParams params_sw = swap_roles(params);
  const CaseResult case_b = search_pinned_case(ch_sw, params_sw, w, q, rho, params.p_max);

  PowerResult out;
  const bool prefer_a =
      case_a.feasible && (!case_b.feasible || case_a.objective <= case_b.objective);
  if (prefer_a) {
    out.feasible = true;
    out.case_used = PowerCase::a_at_max;
    out.p_a = params.p_max;
    out.p_b = case_a.searched;
    out.pb_min = case_a.lo;
    out.pb_max = case_a.hi;
    out.objective = case_a.objective;
  } else if (case_b.feasible) {
    out.feasible = true;
    out.case_used = PowerCase::b_at_max;
    out.p_b = params.p_max;
    out.p_a = case_b.searched;
    out.pb_min = case_b.lo;
    out.pb_max = case_b.hi;
    out.objective = case_b.objective;
  }
  return out;
}

}  // namespace fdswipt
