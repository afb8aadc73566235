#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdswipt/system_model.hpp"
#include "support/instances.hpp"
#include "support/reference_model.hpp"

using namespace fdswipt;
using testsupport::desk_params;
using testsupport::random_matrix;
using testsupport::random_psd;
using testsupport::ref_evaluate;

namespace {

DesignPoint random_design(const SystemParams& p, std::uint64_t seed) {
  GaussianSource rng(seed);
  DesignPoint d;
  d.w = random_matrix(p.mt, p.mr, rng);
  d.q = random_psd(p.mt, rng);
  d.rho = 0.1 + 0.8 * static_cast<double>(splitmix64(seed) % 1000) / 1000.0;
  d.p_a = p.p_max * (0.1 + 0.9 * static_cast<double>(splitmix64(seed + 1) % 1000) / 1000.0);
  d.p_b = p.p_max * (0.1 + 0.9 * static_cast<double>(splitmix64(seed + 2) % 1000) / 1000.0);
  return d;
}

}  // namespace

TEST_CASE("same seed reproduces the channel draw") {
  const SystemParams p = desk_params();
  const ChannelRealization a = draw_channels(p, 42);
  const ChannelRealization b = draw_channels(p, 42);
  CHECK((a.h_ar - b.h_ar).norm() == 0.0);
  CHECK((a.h_rr - b.h_rr).norm() == 0.0);
  CHECK(a.h_aa == b.h_aa);
  const ChannelRealization c = draw_channels(p, 43);
  CHECK((a.h_ar - c.h_ar).norm() > 0.0);
}

TEST_CASE("law of large numbers: channel entry variances") {
  SystemParams p = desk_params();
  p.rsi_variance = 0.8;
  p.si_residual_factor = 0.4;
  const int n = 100000;
  double s_info = 0.0, s_rr = 0.0, s_aa = 0.0;
  for (int i = 0; i < n; ++i) {
    const ChannelRealization ch = draw_channels(p, 90000 + i);
    s_info += std::norm(ch.h_ar(0));
    s_rr += std::norm(ch.h_rr(0, 0));
    s_aa += std::norm(ch.h_aa);
  }
  CHECK(s_info / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s_rr / n == doctest::Approx(p.rsi_variance).epsilon(0.02));
  // 60% of source SI eliminated -> 40% of the RSI variance remains
  CHECK(s_aa / n == doctest::Approx(0.4 * p.rsi_variance).epsilon(0.02));
}

TEST_CASE("limits: silent relay, vanishing P_B, rho near one") {
  const SystemParams p = desk_params();
  const ChannelRealization ch = draw_channels(p, 7);

  DesignPoint silent;
  silent.w = Matrix::Zero(p.mt, p.mr);
  silent.q = Matrix::Zero(p.mt, p.mt);
  silent.rho = 0.5;
  silent.p_a = silent.p_b = 1.0;
  const PerfReport rep = evaluate_performance(silent, ch, p);
  CHECK(rep.gamma_e == 0.0);
  CHECK(rep.r_e == 0.0);
  CHECK(rep.p_r == 0.0);
  CHECK(rep.gamma_a == 0.0);

  // gamma_a vanishes with p_b through the numerator
  DesignPoint d = random_design(p, 11);
  DesignPoint d_small = d;
  d_small.p_b = 1e-9;
  const PerfReport small = evaluate_performance(d_small, ch, p);
  CHECK(small.gamma_a <= 1e-6);
  CHECK(small.r_a <= 2e-6);

  // u -> 0 as rho -> 1 regardless of everything else
  DesignPoint near_one = d;
  near_one.rho = 1.0 - 1e-12;
  CHECK(evaluate_performance(near_one, ch, p).u <= 1e-9);
}

TEST_CASE("secrecy rate clamps at zero") {
  // strong eavesdropper channel, no jamming: R_A + R_B < R_E
  SystemParams p = desk_params();
  p.p_max = 100.0;
  ChannelRealization ch = draw_channels(p, 13);
  ch.h_re *= 50.0;
  ch.h_aa = Complex(0.0, 0.0);
  ch.h_bb = Complex(0.0, 0.0);
  DesignPoint d = random_design(p, 17);
  d.q = Matrix::Zero(p.mt, p.mt);
  d.p_a = d.p_b = p.p_max;
  const PerfReport rep = evaluate_performance(d, ch, p);
  REQUIRE(rep.r_a + rep.r_b - rep.r_e < 0.0);
  CHECK(rep.r_sec == 0.0);
}

TEST_CASE("second-path recomputation agrees to 1e-10 relative") {
  for (int i = 0; i < 1000; ++i) {
    const int mr = 1 + static_cast<int>(splitmix64(i) % 2);
    const int mt = mr + 1 + static_cast<int>(splitmix64(i * 13 + 5) % 2);
    const SystemParams p = desk_params(mt, mr);
    const ChannelRealization ch = draw_channels(p, 5000 + i);
    const DesignPoint d = random_design(p, 800 + i);
    const PerfReport got = evaluate_performance(d, ch, p);
    const auto want = ref_evaluate(d, ch, p);
    auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-10 * std::max({std::abs(a), std::abs(b), 1.0});
    };
    CHECK(close(got.gamma_a, want.gamma_a));
    CHECK(close(got.gamma_b, want.gamma_b));
    CHECK(close(got.gamma_e, want.gamma_e));
    CHECK(close(got.r_a, want.r_a));
    CHECK(close(got.r_b, want.r_b));
    CHECK(close(got.r_e, want.r_e));
    CHECK(close(got.r_sec, want.r_sec));
    CHECK(close(got.p_r, want.p_r));
    CHECK(close(got.u, want.u));
    CHECK(close(got.zf_residual, want.zf_residual));
  }
}

TEST_CASE("SINR and harvest monotonicity") {
  const SystemParams p = desk_params();
  const ChannelRealization ch = draw_channels(p, 23);
  const DesignPoint d = random_design(p, 29);
  const PerfReport base = evaluate_performance(d, ch, p);

  DesignPoint more_pb = d;
  more_pb.p_b = std::min(d.p_b * 1.2, p.p_max);
  CHECK(evaluate_performance(more_pb, ch, p).gamma_a > base.gamma_a);

  DesignPoint more_q = d;
  more_q.q = d.q + 0.5 * Matrix(ch.h_ra * ch.h_ra.adjoint());
  CHECK(evaluate_performance(more_q, ch, p).gamma_a < base.gamma_a);

  DesignPoint more_rho = d;
  more_rho.rho = std::min(d.rho + 0.2, 1.0 - 1e-9);
  CHECK(evaluate_performance(more_rho, ch, p).u < base.u);

  DesignPoint more_pa = d;
  more_pa.p_a = std::min(d.p_a * 1.2, p.p_max);
  CHECK(evaluate_performance(more_pa, ch, p).u > base.u);
}

TEST_CASE("clean channel collapses gamma_a to its numerator") {
  SystemParams p = desk_params();
  p.sigma2_r = 0.0;
  ChannelRealization ch = draw_channels(p, 31);
  ch.h_aa = Complex(0.0, 0.0);
  ch.h_bb = Complex(0.0, 0.0);
  DesignPoint d = random_design(p, 37);
  d.q = Matrix::Zero(p.mt, p.mt);
  const PerfReport rep = evaluate_performance(d, ch, p);
  const Vector wa = d.w.adjoint() * ch.h_ra;
  const double expect = d.rho * d.p_b * std::norm(wa.dot(ch.h_br));
  CHECK(rep.gamma_a == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("parameter and design validation") {
  SystemParams p = desk_params();
  p.mr = 3;  // mt == mr
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = desk_params();
  p.si_residual_factor = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  const SystemParams ok = desk_params();
  const ChannelRealization ch = draw_channels(ok, 41);
  DesignPoint d = random_design(ok, 43);
  d.rho = 1.0;
  CHECK_THROWS_AS(evaluate_performance(d, ch, ok), std::invalid_argument);
  d = random_design(ok, 43);
  d.q = -Matrix::Identity(ok.mt, ok.mt);
  CHECK_THROWS_AS(evaluate_performance(d, ch, ok), std::invalid_argument);
}
