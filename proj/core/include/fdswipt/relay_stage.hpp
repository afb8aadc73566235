#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdswipt/sdp.hpp"
#include "fdswipt/system_model.hpp"

namespace fdswipt {

/// Squared norms of the relay-side channels projected onto the ZF null-space
/// basis, plus trace(N_t N_t^H). Diagnostic quantities; the solved
/// formulation works with the full lifted constraint matrices instead.
struct NullspaceConstants {
  double c_ra = 0.0;
  double c_rb = 0.0;
  double c_re = 0.0;
  double c_nt = 0.0;
};

NullspaceConstants nullspace_constants(const ChannelRealization& ch, const Matrix& n_t);

/// Relay subproblem in lifted form. The beamformer is parameterized as
/// W = N_t * V with N_t an orthonormal null-space basis of H_RR, and
/// x = vec(V) is lifted to X = x x^H (rank constraint dropped), which makes
/// every SINR/harvesting term linear in (X, Q). Block 0 of the SDP is X
/// (dim d*mr), block 1 is Q (dim mt).
struct RelayProblem {
  sdp::SdpProblem problem;
  Matrix null_basis;  // mt x d
  int d = 0;
};

RelayProblem build_relay_sdp(const ChannelRealization& ch, const SystemParams& params,
                             double rho, double p_a, double p_b);

enum class RelayStatus { optimal, infeasible, recovered_approx };

std::string to_string(RelayStatus s);

struct ConstraintResidual {
  std::string name;       // sinr_a | sinr_b | eaves | harvest
  double value = 0.0;     // achieved quantity
  double bound = 0.0;     // target
  double rel_margin = 0.0;  // signed slack relative to the bound
  bool satisfied = false;
};

struct RelayStageResult {
  RelayStatus status = RelayStatus::infeasible;
  Matrix w;  // mt x mr
  Matrix q;  // mt x mt
  double objective = 0.0;  // relay transmit power of the recovered point
  double rank1_ratio = 0.0;
  std::vector<ConstraintResidual> constraint_report;
};

struct RelayStageOptions {
  double rank1_threshold = 0.999;
  int randomization_count = 200;
  std::uint64_t seed = 0;
  // Tighter than the solver default so recovered points sit well inside the
  // 1e-6 certification margin even on active constraints.
  sdp::SolverSettings sdp{1e-9, 200};
};

/// Solve the relay subproblem and recover W. Rank-1 lifts are unvectorized
/// directly; otherwise Gaussian randomization draws candidates from the lift
/// covariance, each minimally rescaled to meet the lower-bound constraints.
/// Every returned point is re-verified against the original SINR/harvesting
/// constraints via evaluate_performance.
RelayStageResult solve_relay_stage(const ChannelRealization& ch, const SystemParams& params,
                                   double rho, double p_a, double p_b,
                                   const RelayStageOptions& opts = {});

}  // namespace fdswipt
