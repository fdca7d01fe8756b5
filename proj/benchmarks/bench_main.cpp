// Microbenchmarks for the per-frame hot paths: activation enumeration, the
// weighted schedule search, the per-slot policy table, a full simulated
// frame, and one dual step of the static benchmark.

#include <benchmark/benchmark.h>

#include <vector>

#include "framesched/channel.hpp"
#include "framesched/policy.hpp"
#include "framesched/scheduling.hpp"
#include "framesched/sim.hpp"
#include "framesched/static_solver.hpp"
#include "framesched/topology.hpp"
#include "framesched/traffic.hpp"

using namespace framesched;

namespace {

ExperimentConfig ten_link_config(ChannelKind kind, SchedulerKind scheduler) {
  const int links = 10;
  ChannelModel channel =
      kind == ChannelKind::kUnknownPerSlot
          ? ChannelModel::unknown_per_slot(std::vector<double>(links, 0.96))
          : ChannelModel::known(std::vector<DiscreteDistribution>(
                links, DiscreteDistribution::bernoulli(0.96)));
  ExperimentConfig config(ten_link_demo_graph(),
                          ArrivalModel::frame_start(
                              3, std::vector<DiscreteDistribution>(
                                     links, DiscreteDistribution::bernoulli(0.6))),
                          std::move(channel));
  config.scheduler = scheduler;
  config.sched.w.assign(links, 1.0);
  config.sched.p.assign(links, 0.1);
  return config;
}

void BM_EnumerateActivations(benchmark::State& state) {
  for (auto _ : state) {
    auto graph = ten_link_demo_graph();  // enumeration happens at construction
    benchmark::DoNotOptimize(graph.maximal_activation_masks().size());
  }
}
BENCHMARK(BM_EnumerateActivations);

void BM_MaxWeightSchedule(benchmark::State& state) {
  auto config = ten_link_config(ChannelKind::kKnown, SchedulerKind::kMaxWeight);
  RngStream arrivals(1, "arrivals"), channel(1, "channel");
  auto frame = generate_frame(config.arrivals, arrivals);
  auto realization = sample_channel(config.channel, 3, channel);
  auto deficits = DeficitState::zeros(10);
  for (auto _ : state) {
    auto s = max_weight_schedule_known(frame, realization, deficits, config.sched,
                                       config.graph);
    benchmark::DoNotOptimize(s.link_total(1));
  }
}
BENCHMARK(BM_MaxWeightSchedule);

void BM_PolicyTableValue(benchmark::State& state) {
  const int links = static_cast<int>(state.range(0));
  auto graph = InterferenceGraph::colocated(links);
  FrameArrivals arrivals;
  arrivals.frame_length = 3;
  arrivals.windows.resize(static_cast<std::size_t>(links));
  for (int l = 0; l < links; ++l) arrivals.windows[static_cast<std::size_t>(l)].push_back({1, 1, 3});
  SchedulerConfig cfg;
  cfg.w.assign(static_cast<std::size_t>(links), 1.0);
  cfg.p.assign(static_cast<std::size_t>(links), 0.1);
  std::vector<double> cbar(static_cast<std::size_t>(links), 0.96);
  auto deficits = DeficitState::zeros(links);
  for (auto _ : state) {
    PolicyTable table(arrivals, deficits, cfg, cbar, graph);
    benchmark::DoNotOptimize(table.value());
  }
}
BENCHMARK(BM_PolicyTableValue)->Arg(3)->Arg(6);

void BM_RunFrameKnown(benchmark::State& state) {
  auto config = ten_link_config(ChannelKind::kKnown, SchedulerKind::kMaxWeight);
  SimState sim(config);
  for (auto _ : state) {
    auto record = run_frame(sim, config);
    benchmark::DoNotOptimize(record.delivered[0]);
  }
}
BENCHMARK(BM_RunFrameKnown);

void BM_RunFramePerSlotDp(benchmark::State& state) {
  auto config =
      ten_link_config(ChannelKind::kUnknownPerSlot, SchedulerKind::kPerSlotDp);
  SimState sim(config);
  for (auto _ : state) {
    auto record = run_frame(sim, config);
    benchmark::DoNotOptimize(record.delivered[0]);
  }
}
BENCHMARK(BM_RunFramePerSlotDp);

void BM_StaticDualStep(benchmark::State& state) {
  // The full ten-link support product is huge; benchmark a three-link slice.
  ExperimentConfig small(
      InterferenceGraph::colocated(3),
      ArrivalModel::frame_start(3, std::vector<DiscreteDistribution>(
                                       3, DiscreteDistribution::bernoulli(0.6))),
      ChannelModel::known(std::vector<DiscreteDistribution>(
          3, DiscreteDistribution::bernoulli(0.96))));
  small.sched.w.assign(3, 1.0);
  small.sched.p.assign(3, 0.1);
  auto problem = build_static_problem(small);
  DualIterate iterate;
  iterate.d_hat.assign(3, 0.0);
  for (auto _ : state) {
    subgradient_step(problem, iterate);
    benchmark::DoNotOptimize(iterate.mu_star[0]);
  }
}
BENCHMARK(BM_StaticDualStep);

}  // namespace

BENCHMARK_MAIN();
