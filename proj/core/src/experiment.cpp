#include "fdswipt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fdswipt/rng.hpp"

namespace fdswipt {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string format_g9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<double> default_sweep_values(SweepVariable v) {
  if (v == SweepVariable::pmax) return {0.0, 2.5, 5.0, 7.5, 10.0};
  return {0.25, 0.5, 1.0, 2.0, 4.0};
}

SystemParams params_at(const ExperimentConfig& config, double sweep_value) {
  SystemParams p = config.params;
  if (config.sweep_variable == SweepVariable::pmax) {
    p.p_max = db_to_linear(sweep_value);
  } else {
    p.rsi_variance = sweep_value;
  }
  return p;
}

struct FileValues {
  std::map<std::string, std::string> kv;
};

FileValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read file '" + path + "'");
  FileValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--config: line " + std::to_string(lineno) + " is not key=value");
    }
    out.kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_value_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      values.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  if (values.empty()) throw UsageError(flag + ": empty list");
  return values;
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::joint ? "joint" : "relay-only"; }

std::string to_string(SweepVariable v) {
  return v == SweepVariable::pmax ? "pmax" : "rsi";
}

void ExperimentConfig::validate() const {
  params.validate();
  if (trials < 1) throw UsageError("--trials: must be at least 1");
  if (sweep_values.empty()) throw UsageError("--sweep-values: must be nonempty");
  for (size_t i = 1; i < sweep_values.size(); ++i) {
    if (!(sweep_values[i] > sweep_values[i - 1])) {
      throw UsageError("--sweep-values: values must be strictly increasing");
    }
  }
  if (sweep_variable == SweepVariable::rsi) {
    for (double v : sweep_values) {
      if (!(v >= 0.0)) throw UsageError("--sweep-values: rsi variance must be nonnegative");
    }
  }
  if (modes.empty()) throw UsageError("--mode: no modes selected");
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();

  std::ofstream out_file;
  if (!config.output_path.empty()) {
    out_file.open(config.output_path, std::ios::trunc);
    if (!out_file) {
      throw std::runtime_error("cannot open output path '" + config.output_path + "'");
    }
  }

  SweepResult result;
  for (double value : config.sweep_values) {
    const SystemParams point = params_at(config, value);

    struct TrialOut {
      bool joint_feasible = false, relay_feasible = false;
      double joint_r_sec = 0.0, relay_r_sec = 0.0;
      double joint_total = 0.0, relay_total = 0.0;
    };
    std::vector<TrialOut> outs(static_cast<size_t>(config.trials));

    const bool want_joint =
        std::find(config.modes.begin(), config.modes.end(), Mode::joint) != config.modes.end();
    const bool want_relay =
        std::find(config.modes.begin(), config.modes.end(), Mode::relay_only) !=
        config.modes.end();

    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= config.trials) return;
        const std::uint64_t seed =
            config.master_seed ^ splitmix64(static_cast<std::uint64_t>(t));
        const ChannelRealization ch = draw_channels(point, seed);
        SolveOptions opts;
        opts.seed = seed;
        TrialOut& o = outs[static_cast<size_t>(t)];
        if (want_joint) {
          const SolveTrace trace = optimize_joint(ch, point, opts);
          o.joint_feasible = trace.feasible;
          if (trace.feasible) {
            o.joint_r_sec = trace.final_report.r_sec;
            o.joint_total = trace.final.p_a + trace.final.p_b + trace.final_report.p_r;
          }
        }
        if (want_relay) {
          const SolveTrace trace = optimize_relay_only(ch, point, opts);
          o.relay_feasible = trace.feasible;
          if (trace.feasible) {
            o.relay_r_sec = trace.final_report.r_sec;
            o.relay_total = trace.final.p_a + trace.final.p_b + trace.final_report.p_r;
          }
        }
      }
    };

    unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(config.trials));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (Mode mode : config.modes) {
      SweepRow row;
      row.sweep_value = value;
      row.mode = to_string(mode);
      double sum_r = 0.0, sum_p = 0.0;
      int n_feasible = 0;
      for (int t = 0; t < config.trials; ++t) {
        const TrialOut& o = outs[static_cast<size_t>(t)];
        const bool feasible = mode == Mode::joint ? o.joint_feasible : o.relay_feasible;
        const double r = mode == Mode::joint ? o.joint_r_sec : o.relay_r_sec;
        const double p = mode == Mode::joint ? o.joint_total : o.relay_total;
        result.trials.push_back({value, mode, t, feasible, r, p});
        if (feasible) {
          ++n_feasible;
          sum_r += r;
          sum_p += p;
        }
      }
      row.trials_used = n_feasible;
      row.feasible_fraction =
          static_cast<double>(n_feasible) / static_cast<double>(config.trials);
      row.mean_r_sec = n_feasible > 0 ? sum_r / n_feasible : 0.0;
      row.mean_total_power = n_feasible > 0 ? sum_p / n_feasible : 0.0;
      result.rows.push_back(row);
    }
  }

  if (out_file.is_open()) {
    write_csv(out_file, config.sweep_variable, result.rows);
  }
  return result;
}

void write_csv(std::ostream& os, SweepVariable variable, const std::vector<SweepRow>& rows) {
  os << "sweep_variable,sweep_value,mode,mean_R_sec,mean_total_power,"
        "feasible_fraction,trials_used\n";
  for (const auto& row : rows) {
    os << to_string(variable) << ',' << format_g9(row.sweep_value) << ',' << row.mode << ','
       << format_g9(row.mean_r_sec) << ',' << format_g9(row.mean_total_power) << ','
       << format_g9(row.feasible_fraction) << ',' << row.trials_used << '\n';
  }
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  double mt = 3, mr = 2;
  double pmax_db = 10.0;
  double gamma_a_db = -5.0, gamma_b_db = -5.0, gamma_e_db = -15.0;
  double ubar = 1.0, sigma2_r = 1.0, rsi_var = 1.0, si_residual = 0.4;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string mode = "both";
  std::string sweep = "pmax";
  std::string sweep_values_text;
  std::string out_path = "sweep.csv";
  std::string config_path;

  CLI::App app{"secure full-duplex two-way SWIPT relay sweep"};
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--mt", mt, "relay transmit antennas")->check(CLI::Range(2.0, 64.0));
  app.add_option("--mr", mr, "relay receive antennas")->check(CLI::Range(1.0, 63.0));
  app.add_option("--pmax-db", pmax_db, "source power budget (dB, used when not sweeping pmax)");
  app.add_option("--gamma-a-db", gamma_a_db, "SINR target at source A (dB)");
  app.add_option("--gamma-b-db", gamma_b_db, "SINR target at source B (dB)");
  app.add_option("--gamma-e-db", gamma_e_db, "eavesdropper SINR cap (dB)");
  app.add_option("--ubar", ubar, "harvested-power target (linear)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--sigma2-r", sigma2_r, "relay noise variance")->check(CLI::NonNegativeNumber);
  app.add_option("--rsi-var", rsi_var, "residual SI channel variance (used when not sweeping rsi)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--si-residual", si_residual,
                 "fraction of source SI power left after cancellation")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--trials", trials, "Monte Carlo trials per sweep point")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--mode", mode, "joint | relay-only | both")
      ->check(CLI::IsMember({"joint", "relay-only", "both"}));
  app.add_option("--sweep", sweep, "pmax | rsi")->check(CLI::IsMember({"pmax", "rsi"}));
  app.add_option("--sweep-values", sweep_values_text,
                 "comma-separated sweep values (dB for pmax, variance for rsi)");
  app.add_option("--out", out_path, "output CSV path");

  // Config file first, flags override: apply the file by re-parsing it as a
  // flag list ahead of the real arguments.
  std::vector<std::string> full_args;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config: missing path");
      config_path = args[i + 1];
      break;
    }
    const std::string prefix = "--config=";
    if (args[i].rfind(prefix, 0) == 0) {
      config_path = args[i].substr(prefix.size());
      break;
    }
  }
  if (!config_path.empty()) {
    const FileValues file = read_config_file(config_path);
    for (const auto& [key, value] : file.kv) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (flag == "--config") continue;
      full_args.push_back(flag);
      full_args.push_back(value);
    }
  }
  full_args.insert(full_args.end(), args.begin(), args.end());

  std::vector<const char*> argv;
  argv.push_back("fdswipt-sim");
  for (const auto& a : full_args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  ExperimentConfig config;
  config.params.mt = static_cast<int>(mt);
  config.params.mr = static_cast<int>(mr);
  config.params.p_max = db_to_linear(pmax_db);
  config.params.gamma_a = db_to_linear(gamma_a_db);
  config.params.gamma_b = db_to_linear(gamma_b_db);
  config.params.gamma_e = db_to_linear(gamma_e_db);
  config.params.u_bar = ubar;
  config.params.sigma2_r = sigma2_r;
  config.params.rsi_variance = rsi_var;
  config.params.si_residual_factor = si_residual;
  config.trials = static_cast<int>(trials);
  config.master_seed = seed;
  config.sweep_variable = sweep == "pmax" ? SweepVariable::pmax : SweepVariable::rsi;
  config.sweep_values = sweep_values_text.empty()
                            ? default_sweep_values(config.sweep_variable)
                            : parse_value_list(sweep_values_text, "--sweep-values");
  if (mode == "joint") {
    config.modes = {Mode::joint};
  } else if (mode == "relay-only") {
    config.modes = {Mode::relay_only};
  } else {
    config.modes = {Mode::joint, Mode::relay_only};
  }
  config.output_path = out_path;

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

}  // namespace fdswipt
