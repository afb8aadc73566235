#include "fdswipt/system_model.hpp"

#include <cmath>
#include <stdexcept>

#include "fdswipt/rng.hpp"

namespace fdswipt {

void SystemParams::validate() const {
  if (mr < 1 || mt <= mr) {
    throw std::invalid_argument("antenna counts must satisfy mt > mr >= 1");
  }
  if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be positive");
  if (!(gamma_a > 0.0) || !(gamma_b > 0.0) || !(gamma_e > 0.0)) {
    throw std::invalid_argument("SINR targets must be positive");
  }
  if (!(u_bar >= 0.0)) throw std::invalid_argument("u_bar must be nonnegative");
  if (!(sigma2_r >= 0.0)) throw std::invalid_argument("sigma2_r must be nonnegative");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(si_residual_factor >= 0.0 && si_residual_factor <= 1.0)) {
    throw std::invalid_argument("si_residual_factor must lie in [0, 1]");
  }
  if (!(rsi_variance >= 0.0)) throw std::invalid_argument("rsi_variance must be nonnegative");
}

ChannelRealization draw_channels(const SystemParams& params, std::uint64_t seed) {
  params.validate();
  GaussianSource rng(seed);
  const int mt = params.mt;
  const int mr = params.mr;

  auto draw_vec = [&](int n, double var) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal(var);
    return v;
  };

  ChannelRealization ch;
  ch.h_ar = draw_vec(mr, 1.0);
  ch.h_br = draw_vec(mr, 1.0);
  ch.h_ra = draw_vec(mt, 1.0);
  ch.h_rb = draw_vec(mt, 1.0);
  ch.h_re = draw_vec(mt, 1.0);
  ch.h_rr.resize(mr, mt);
  for (int r = 0; r < mr; ++r) {
    for (int c = 0; c < mt; ++c) ch.h_rr(r, c) = rng.complex_normal(params.rsi_variance);
  }
  const double si_var = params.si_residual_factor * params.rsi_variance;
  ch.h_aa = rng.complex_normal(si_var);
  ch.h_bb = rng.complex_normal(si_var);
  return ch;
}

void validate_design(const DesignPoint& design, const SystemParams& params) {
  if (design.w.rows() != params.mt || design.w.cols() != params.mr) {
    throw std::invalid_argument("W shape mismatch");
  }
  if (design.q.rows() != params.mt || design.q.cols() != params.mt) {
    throw std::invalid_argument("Q shape mismatch");
  }
  if (!(design.rho > 0.0 && design.rho < 1.0)) {
    throw std::invalid_argument("rho must lie in (0, 1)");
  }
  if (!(design.p_a > 0.0 && design.p_a <= params.p_max) ||
      !(design.p_b > 0.0 && design.p_b <= params.p_max)) {
    throw std::invalid_argument("source powers must lie in (0, p_max]");
  }
  if (!linalg::is_hermitian(design.q, 1e-8)) throw std::invalid_argument("Q not Hermitian");
  auto eig = linalg::hermitian_eig(0.5 * (design.q + design.q.adjoint()));
  const double lam_max = eig.values.size() ? eig.values.maxCoeff() : 0.0;
  if (eig.values.size() && eig.values.minCoeff() < -1e-8 * (1.0 + std::max(lam_max, 0.0))) {
    throw std::invalid_argument("Q not PSD");
  }
}

PerfReport evaluate_performance(const DesignPoint& design, const ChannelRealization& ch,
                                const SystemParams& params) {
  validate_design(design, params);
  const Matrix& w = design.w;
  const Matrix& q = design.q;
  const double rho = design.rho;
  const double pa = design.p_a;
  const double pb = design.p_b;
  const double s2r = params.sigma2_r;

  auto quad = [](const Vector& h, const Matrix& m) {
    return (h.adjoint() * m * h).value().real();
  };

  PerfReport rep;

  const Vector wa = w.adjoint() * ch.h_ra;  // (h_ra^H W)^H
  const Vector wb = w.adjoint() * ch.h_rb;
  const Vector we = w.adjoint() * ch.h_re;

  const double num_a = rho * pb * std::norm(wa.dot(ch.h_br));
  const double den_a = rho * s2r * wa.squaredNorm() + pa * std::norm(ch.h_aa) +
                       quad(ch.h_ra, q) + 1.0;
  rep.gamma_a = num_a / den_a;

  const double num_b = rho * pa * std::norm(wb.dot(ch.h_ar));
  const double den_b = rho * s2r * wb.squaredNorm() + pb * std::norm(ch.h_bb) +
                       quad(ch.h_rb, q) + 1.0;
  rep.gamma_b = num_b / den_b;

  const double num_e =
      rho * (pa * std::norm(we.dot(ch.h_ar)) + pb * std::norm(we.dot(ch.h_br)));
  const double den_e = rho * s2r * we.squaredNorm() + quad(ch.h_re, q) + 1.0;
  rep.gamma_e = num_e / den_e;

  rep.r_a = std::log2(1.0 + rep.gamma_a);
  rep.r_b = std::log2(1.0 + rep.gamma_b);
  rep.r_e = std::log2(1.0 + rep.gamma_e);
  rep.r_sec = std::max(rep.r_a + rep.r_b - rep.r_e, 0.0);

  rep.p_r = rho * (pa * (w * ch.h_ar).squaredNorm() + pb * (w * ch.h_br).squaredNorm() +
                   s2r * w.squaredNorm()) +
            q.trace().real();

  rep.u = params.beta * (1.0 - rho) *
          (ch.h_ar.squaredNorm() * pa + ch.h_br.squaredNorm() * pb + rep.p_r +
           s2r * static_cast<double>(params.mr));

  rep.zf_residual = (ch.h_rr * w).norm();
  return rep;
}

double total_power(const DesignPoint& design, const ChannelRealization& ch,
                   const SystemParams& params) {
  return design.p_a + design.p_b + evaluate_performance(design, ch, params).p_r;
}

}  // namespace fdswipt
