#pragma once

#include <string>

#include "fdswipt/system_model.hpp"

namespace fdswipt {

enum class RhoBound { sinr_a, sinr_b, eaves, energy, floor };

std::string to_string(RhoBound b);

struct RhoResult {
  bool feasible = false;
  double rho = 0.0;
  RhoBound active_bound = RhoBound::floor;
  double lo = 0.0;  // feasible interval, empty when infeasible
  double hi = 0.0;
};

/// Optimal power-splitting ratio for fixed (W, Q, P_A, P_B). Each source
/// SINR constraint yields a closed-form lower bound on rho, the eavesdropper
/// cap an upper bound when its bracket is positive, and the harvesting
/// constraint a quadratic interval; the smallest feasible rho minimizes the
/// total power since P_R is nondecreasing in rho. The interval is clipped to
/// (1e-6, 1 - 1e-6).
RhoResult optimize_rho(const ChannelRealization& ch, const SystemParams& params,
                       const Matrix& w, const Matrix& q, double p_a, double p_b);

struct PowerBounds {
  double pb_min = 0.0;  // floor from the far source's SINR constraint
  double pb_max = 0.0;  // cap from the searched source's own SI
};

/// Closed-form feasibility bounds on P_B when P_A is pinned (case "A at
/// max"). pb_min is +inf when the A-SINR numerator gain vanishes; pb_max is
/// +inf when |h_BB| = 0 with a positive bracket and 0 when the bracket is
/// negative.
PowerBounds pb_bounds(const ChannelRealization& ch, const SystemParams& params,
                      const Matrix& w, const Matrix& q, double rho, double p_a_fixed);

enum class PowerCase { a_at_max, b_at_max };

std::string to_string(PowerCase c);

struct PowerResult {
  bool feasible = false;
  double p_a = 0.0;
  double p_b = 0.0;
  PowerCase case_used = PowerCase::a_at_max;
  double pb_min = 0.0;  // bounds of the searched variable in the winning case
  double pb_max = 0.0;
  double objective = 0.0;  // p_a + p_b + p_r
};

/// Source-power stage for fixed (W, Q, rho): pin one source at p_max, sweep
/// the other ascending over [pb_min, min(pb_max, p_max)] on a 1000-point
/// grid with every constraint re-checked per point, refine the feasibility
/// boundary by bisection, and keep the cheaper of the two symmetric cases
/// (ties prefer A at max).
PowerResult optimize_power(const ChannelRealization& ch, const SystemParams& params,
                           const Matrix& w, const Matrix& q, double rho);

}  // namespace fdswipt
