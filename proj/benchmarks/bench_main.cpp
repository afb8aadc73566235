#include <benchmark/benchmark.h>

#include "fdswipt/alternating.hpp"
#include "fdswipt/relay_stage.hpp"
#include "fdswipt/sdp.hpp"
#include "fdswipt/system_model.hpp"

namespace {

using namespace fdswipt;

SystemParams bench_params() {
  SystemParams p;
  p.p_max = 10.0;
  return p;
}

void bm_draw_channels(benchmark::State& state) {
  const SystemParams params = bench_params();
  std::uint64_t seed = 42;
  for (auto _ : state) {
    ChannelRealization ch = draw_channels(params, seed++);
    benchmark::DoNotOptimize(ch);
  }
}
BENCHMARK(bm_draw_channels);

void bm_relay_sdp_solve(benchmark::State& state) {
  const SystemParams params = bench_params();
  const ChannelRealization ch = draw_channels(params, 7);
  const RelayProblem rp = build_relay_sdp(ch, params, 0.5, params.p_max, params.p_max);
  for (auto _ : state) {
    auto sol = sdp::solve_sdp(rp.problem);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(bm_relay_sdp_solve)->Unit(benchmark::kMillisecond);

void bm_relay_stage(benchmark::State& state) {
  const SystemParams params = bench_params();
  const ChannelRealization ch = draw_channels(params, 7);
  for (auto _ : state) {
    auto res = solve_relay_stage(ch, params, 0.5, params.p_max, params.p_max);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(bm_relay_stage)->Unit(benchmark::kMillisecond);

void bm_joint_trial(benchmark::State& state) {
  const SystemParams params = bench_params();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    ChannelRealization ch = draw_channels(params, seed++);
    auto trace = optimize_joint(ch, params);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(bm_joint_trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
