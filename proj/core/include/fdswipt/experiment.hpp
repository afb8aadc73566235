#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdswipt/alternating.hpp"
#include "fdswipt/system_model.hpp"

namespace fdswipt {

enum class Mode { joint, relay_only };
enum class SweepVariable { pmax, rsi };

std::string to_string(Mode m);
std::string to_string(SweepVariable v);

struct ExperimentConfig {
  SystemParams params;      // p_max is overridden per point on a pmax sweep
  int trials = 1000;
  std::uint64_t master_seed = 1;
  SweepVariable sweep_variable = SweepVariable::pmax;
  std::vector<double> sweep_values;  // dB for pmax, linear variance for rsi
  std::vector<Mode> modes = {Mode::joint, Mode::relay_only};
  std::string output_path = "sweep.csv";

  void validate() const;
};

struct SweepRow {
  double sweep_value = 0.0;
  std::string mode;
  double mean_r_sec = 0.0;       // over feasible trials
  double mean_total_power = 0.0; // over feasible trials
  double feasible_fraction = 0.0;
  int trials_used = 0;           // feasible trial count
};

struct TrialRecord {
  double sweep_value = 0.0;
  Mode mode = Mode::joint;
  int trial = 0;
  bool feasible = false;
  double r_sec = 0.0;
  double total_power = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TrialRecord> trials;  // per-trial detail, row-major in (value, mode, trial)
};

/// Monte Carlo sweep. Trial t draws channels with seed
/// master_seed ^ splitmix64(t), so draws are paired across modes and sweep
/// values. Trials run in parallel; aggregation is in trial order, making the
/// CSV deterministic for a fixed master seed. The output file is opened
/// before any computation; an empty output_path skips the file.
SweepResult run_sweep(const ExperimentConfig& config);

void write_csv(std::ostream& os, SweepVariable variable, const std::vector<SweepRow>& rows);

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Build a config from CLI-style arguments (without argv[0]). A --config
/// file (flat key=value, # comments) supplies values that explicit flags
/// then override. dB quantities are converted to linear here and nowhere
/// else. Throws UsageError naming the offending flag.
ExperimentConfig parse_config(const std::vector<std::string>& args);

}  // namespace fdswipt
