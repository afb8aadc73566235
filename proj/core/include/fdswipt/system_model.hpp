#pragma once

#include <cstdint>

#include "fdswipt/linalg.hpp"

namespace fdswipt {

/// Static configuration of the two-way relay link. All powers and SINR
/// targets are linear and normalized to unit noise power at the sources and
/// the eavesdropper; dB conversion happens at the configuration boundary.
struct SystemParams {
  int mt = 3;                      // relay transmit antennas
  int mr = 2;                      // relay receive antennas, mr < mt
  double p_max = 10.0;             // per-source power budget
  double gamma_a = 0.31622776601683794;  // SINR floor at source A (-5 dB)
  double gamma_b = 0.31622776601683794;  // SINR floor at source B (-5 dB)
  double gamma_e = 0.03162277660168379;  // SINR cap at eavesdropper (-15 dB)
  double u_bar = 1.0;              // harvested-power target
  double sigma2_r = 1.0;           // relay receive noise variance
  double beta = 1.0;               // energy conversion efficiency
  double si_residual_factor = 0.4; // source SI power fraction left after cancellation
  double rsi_variance = 1.0;       // variance scale of residual SI channels

  void validate() const;  // throws std::invalid_argument
};

/// One draw of every channel in the network. Information channels are unit
/// variance; H_RR has variance rsi_variance and the scalar source loopbacks
/// si_residual_factor * rsi_variance.
struct ChannelRealization {
  Vector h_ar, h_br;        // source -> relay, length mr
  Vector h_ra, h_rb, h_re;  // relay -> source/eavesdropper, length mt
  Matrix h_rr;              // relay transmit -> relay receive, mr x mt
  Complex h_aa{0.0, 0.0};
  Complex h_bb{0.0, 0.0};
};

/// Candidate operating point: relay amplification matrix, artificial-noise
/// covariance, power-splitting ratio, and source powers.
struct DesignPoint {
  Matrix w;      // mt x mr
  Matrix q;      // mt x mt Hermitian PSD
  double rho = 0.5;
  double p_a = 0.0;
  double p_b = 0.0;
};

struct PerfReport {
  double gamma_a = 0.0, gamma_b = 0.0, gamma_e = 0.0;  // linear SINRs
  double r_a = 0.0, r_b = 0.0, r_e = 0.0;              // bits/channel-use
  double r_sec = 0.0;                                  // [r_a + r_b - r_e]^+
  double p_r = 0.0;                                    // relay transmit power
  double u = 0.0;                                      // harvested power
  double zf_residual = 0.0;                            // ||H_RR * W||_F
};

/// Deterministic Rayleigh draw: the same seed always produces the same
/// underlying unit normals, so realizations are paired across parameter
/// points that differ only in variance scales.
ChannelRealization draw_channels(const SystemParams& params, std::uint64_t seed);

void validate_design(const DesignPoint& design, const SystemParams& params);

PerfReport evaluate_performance(const DesignPoint& design, const ChannelRealization& ch,
                                const SystemParams& params);

/// Total transmit power p_a + p_b + p_r; the objective the three
/// optimization stages share.
double total_power(const DesignPoint& design, const ChannelRealization& ch,
                   const SystemParams& params);

}  // namespace fdswipt
