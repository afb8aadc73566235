#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdswipt/relay_stage.hpp"
#include "fdswipt/scalar_stages.hpp"
#include "fdswipt/system_model.hpp"

namespace fdswipt {

enum class Stage { relay, rho, power };

std::string to_string(Stage s);

struct StageRecord {
  Stage stage = Stage::relay;
  double objective = 0.0;  // total power p_a + p_b + p_r after the stage
  bool feasible = false;
};

struct SolveTrace {
  std::vector<StageRecord> iterations;
  bool converged = false;
  bool feasible = false;   // a complete feasible design exists
  int outer_iterations = 0;
  DesignPoint final;
  PerfReport final_report;  // meaningful only when feasible
};

struct SolveOptions {
  int max_outer = 30;
  double obj_tol = 1e-4;
  std::uint64_t seed = 0;
  RelayStageOptions relay;
};

/// Alternating minimization of the total transmit power: relay stage
/// (W, Q via SDP), then power-splitting ratio, then source powers, repeated
/// until the relative objective change drops below obj_tol. Starts from
/// rho = 0.5 and both sources at p_max. A stage that fails before any
/// feasible design exists marks the trace infeasible; a later failure
/// returns the last feasible iterate with converged = false. Stages that
/// cannot improve the incumbent leave it untouched, so the recorded
/// objective sequence is nonincreasing.
SolveTrace optimize_joint(const ChannelRealization& ch, const SystemParams& params,
                          const SolveOptions& opts = {});

/// Baseline that keeps both sources at p_max and rho = 0.5 and optimizes
/// only the relay matrices, in a single relay-stage solve.
SolveTrace optimize_relay_only(const ChannelRealization& ch, const SystemParams& params,
                               const SolveOptions& opts = {});

}  // namespace fdswipt
