#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "framesched/channel.hpp"
#include "framesched/policy.hpp"
#include "framesched/rng.hpp"
#include "framesched/scheduling.hpp"
#include "framesched/static_solver.hpp"
#include "framesched/topology.hpp"
#include "framesched/traffic.hpp"
#include "framesched/types.hpp"

namespace framesched {

enum class SchedulerKind {
  kMaxWeight,        // known-state or per-frame channels
  kPerSlotDp,        // per-slot channels, optimal policy table per frame
  kGreedyColocated,  // per-slot channels, colocated single-packet traffic
};

const char* to_string(SchedulerKind kind);

/// Everything one simulation run needs. Construct, adjust fields, then
/// validate() before use (run_simulation validates on entry).
struct ExperimentConfig {
  InterferenceGraph graph;
  ArrivalModel arrivals;
  ChannelModel channel;
  SchedulerKind scheduler = SchedulerKind::kMaxWeight;
  SchedulerConfig sched;
  long long frames = 100'000;
  std::uint64_t seed = 1;
  long long trajectory_samples = 1000;
  long long static_support_limit = 4096;
  long long static_iterations = 10'000;

  ExperimentConfig(InterferenceGraph g, ArrivalModel a, ChannelModel c)
      : graph(std::move(g)), arrivals(std::move(a)), channel(std::move(c)) {}

  /// Throws on inconsistent dimensions or a scheduler/channel pairing that
  /// would leak hidden channel state.
  void validate() const;

  /// Model-assumption violations worth reporting (never fatal).
  std::vector<std::string> warnings() const;
};

/// Rolling state of a run: deficits plus one named substream per source of
/// randomness, so arrival draws do not depend on the scheduler under test.
struct SimState {
  DeficitState deficits;
  RngStream arrival_rng;
  RngStream channel_rng;
  RngStream thinning_rng;
  long long frame_index = 0;

  explicit SimState(const ExperimentConfig& config)
      : deficits(DeficitState::zeros(config.graph.link_count())),
        arrival_rng(config.seed, "arrivals"),
        channel_rng(config.seed, "channel"),
        thinning_rng(config.seed, "thinning") {}
};

/// Everything one frame produced.
struct FrameRecord {
  FrameArrivals arrivals;
  ChannelRealization channel;
  Schedule schedule;
  std::vector<int> delivered;  // packets the channel actually carried
  std::vector<int> credited;   // service fed into the deficit update
  std::vector<int> thinned;    // arrivals surviving the loss-tolerance coin
};

/// Advances one frame: draw arrivals and channel, schedule under the
/// channel kind's visibility rules, credit service, thin arrivals, update
/// deficits.
FrameRecord run_frame(SimState& state, const ExperimentConfig& config);

struct LinkMetrics {
  long long arrived = 0;
  long long delivered = 0;
  long long credited = 0;
  double avg_service = 0.0;       // credited per frame
  double drop_probability = 0.0;  // 1 - delivered/arrived (0 when no arrivals)
  double avg_deficit = 0.0;
  double final_deficit = 0.0;
};

struct TrajectorySample {
  long long frame = 0;  // 1-based, sampled after the frame's update
  double sum_deficit = 0.0;
  double lyapunov = 0.0;  // 0.5 * sum_l d_l^2
  std::vector<double> deficits;
};

struct Metrics {
  long long frames = 0;
  std::vector<LinkMetrics> links;
  double objective = 0.0;  // sum_l w_l * avg_service_l over the whole run
  // Averages over the last half of the run (first half = burn-in).
  double steady_objective = 0.0;
  double steady_objective_stderr = 0.0;  // batch-means standard error
  double steady_sum_deficit = 0.0;
  std::vector<TrajectorySample> trajectory;
};

/// Runs config.frames frames. Identical (config, seed) pairs produce
/// bit-identical Metrics.
Metrics run_simulation(const ExperimentConfig& config);

/// The static service benchmark implied by the config's supports. Defined
/// for known-state channels (arrival x rate support product) and per-frame
/// channels (arrival support with mean-rate service scaling); per-slot
/// configs have no frame-schedule benchmark and are rejected.
StaticProblem build_static_problem(const ExperimentConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  double objective = 0.0;
  double steady_objective = 0.0;
  double steady_objective_stderr = 0.0;
  double steady_sum_deficit = 0.0;
  double static_objective = 0.0;
  bool static_infeasible = false;
  double gap = 0.0;  // static_objective - steady_objective
};

/// Reruns the experiment for each epsilon (same seed: common random numbers)
/// and pairs it with the static benchmark at that epsilon.
std::vector<SweepRow> sweep_epsilon(const ExperimentConfig& base,
                                    const std::vector<double>& epsilons);

struct ModelComparison {
  ChannelKind kind = ChannelKind::kKnown;
  PerFrameDeficitMode perframe_mode = PerFrameDeficitMode::kAttempts;
  Metrics metrics;
};

/// Runs the same traffic under all three channel kinds (per-frame in both
/// deficit modes), holding the arrival stream fixed. The base config must
/// use on/off channels so the kinds are comparable.
std::vector<ModelComparison> compare_channel_models(const ExperimentConfig& base);

}  // namespace framesched
