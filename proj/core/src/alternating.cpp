#include "fdswipt/alternating.hpp"

#include <cmath>

#include "fdswipt/rng.hpp"

namespace fdswipt {

namespace {

double rel_slack(double x) { return 1e-9 * (1.0 + std::abs(x)); }

}  // namespace

std::string to_string(Stage s) {
  switch (s) {
    case Stage::relay: return "relay";
    case Stage::rho: return "rho";
    case Stage::power: return "power";
  }
  return "unknown";
}

SolveTrace optimize_joint(const ChannelRealization& ch, const SystemParams& params,
                          const SolveOptions& opts) {
  params.validate();
  SolveTrace trace;

  double rho = 0.5;
  double p_a = params.p_max;
  double p_b = params.p_max;
  Matrix w, q;
  double total = 0.0;
  double prev_outer_total = 0.0;

  auto current_total = [&]() {
    return total_power({w, q, rho, p_a, p_b}, ch, params);
  };
  auto record = [&](Stage stage, bool ok) {
    trace.iterations.push_back({stage, ok ? total : 0.0, ok});
  };

  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    trace.outer_iterations = outer;

    RelayStageOptions relay_opts = opts.relay;
    relay_opts.seed = splitmix64(opts.seed + static_cast<std::uint64_t>(outer));
    RelayStageResult relay = solve_relay_stage(ch, params, rho, p_a, p_b, relay_opts);
    if (relay.status == RelayStatus::infeasible) {
      record(Stage::relay, false);
      trace.converged = false;
      if (!trace.feasible) return trace;
      break;
    }
    const double relay_total = p_a + p_b + relay.objective;
    if (!trace.feasible || relay_total <= total + rel_slack(total)) {
      w = relay.w;
      q = relay.q;
    }
    trace.feasible = true;
    total = current_total();
    record(Stage::relay, true);

    RhoResult rr = optimize_rho(ch, params, w, q, p_a, p_b);
    if (!rr.feasible) {
      record(Stage::rho, false);
      break;
    }
    if (rr.rho <= rho) rho = rr.rho;
    total = current_total();
    record(Stage::rho, true);

    PowerResult pr = optimize_power(ch, params, w, q, rho);
    if (!pr.feasible) {
      record(Stage::power, false);
      break;
    }
    if (pr.objective <= total + rel_slack(total)) {
      p_a = pr.p_a;
      p_b = pr.p_b;
    }
    total = current_total();
    record(Stage::power, true);

    if (outer > 1 &&
        std::abs(prev_outer_total - total) <= opts.obj_tol * (1.0 + std::abs(total))) {
      trace.converged = true;
      break;
    }
    prev_outer_total = total;
  }

  if (trace.feasible) {
    trace.final = {w, q, rho, p_a, p_b};
    trace.final_report = evaluate_performance(trace.final, ch, params);
  }
  return trace;
}

SolveTrace optimize_relay_only(const ChannelRealization& ch, const SystemParams& params,
                               const SolveOptions& opts) {
  params.validate();
  SolveTrace trace;
  trace.outer_iterations = 1;

  const double rho = 0.5;
  RelayStageOptions relay_opts = opts.relay;
  relay_opts.seed = splitmix64(opts.seed + 1);
  RelayStageResult relay =
      solve_relay_stage(ch, params, rho, params.p_max, params.p_max, relay_opts);
  if (relay.status == RelayStatus::infeasible) {
    trace.iterations.push_back({Stage::relay, 0.0, false});
    return trace;
  }
  trace.feasible = true;
  trace.converged = true;
  trace.final = {relay.w, relay.q, rho, params.p_max, params.p_max};
  trace.final_report = evaluate_performance(trace.final, ch, params);
  const double total = params.p_max * 2.0 + trace.final_report.p_r;
  trace.iterations.push_back({Stage::relay, total, true});
  return trace;
}

}  // namespace fdswipt
