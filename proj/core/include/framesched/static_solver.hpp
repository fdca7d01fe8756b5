#pragma once

#include <vector>

#include "framesched/channel.hpp"
#include "framesched/scheduling.hpp"
#include "framesched/topology.hpp"
#include "framesched/traffic.hpp"
#include "framesched/types.hpp"

namespace framesched {

/// Service benchmark over a finite arrival/channel support: maximize
/// sum_l w_l mu_l over long-run service vectors mu that the network can
/// sustain while delivering at least lambda_l (1 - p_l) per frame on every
/// link. Solved by dual iteration; each step runs one weighted schedule
/// search per support point.
class StaticProblem {
 public:
  /// `channel_support` entries must be known-state realizations (the slot
  /// caps the scheduler would see). `service_scale` converts scheduled
  /// transmissions into expected service per link: all-ones for known-state
  /// channels, the mean rates for blind per-frame operation.
  StaticProblem(InterferenceGraph graph,
                std::vector<std::pair<FrameArrivals, double>> arrival_support,
                std::vector<std::pair<ChannelRealization, double>> channel_support,
                std::vector<double> service_scale, SchedulerConfig cfg,
                long long support_limit = 4096);

  const InterferenceGraph& graph() const { return graph_; }
  const std::vector<std::pair<FrameArrivals, double>>& arrival_support() const {
    return arrival_support_;
  }
  const std::vector<std::pair<ChannelRealization, double>>& channel_support() const {
    return channel_support_;
  }
  const std::vector<double>& service_scale() const { return service_scale_; }
  const SchedulerConfig& config() const { return cfg_; }

  /// Mean arrivals per frame, from the arrival support.
  const std::vector<double>& lambda() const { return lambda_; }

  /// lambda_l (1 - p_l): the service each link must receive.
  std::vector<double> required_rates() const;

  int link_count() const { return graph_.link_count(); }
  int frame_length() const { return frame_length_; }

 private:
  InterferenceGraph graph_;
  std::vector<std::pair<FrameArrivals, double>> arrival_support_;
  std::vector<std::pair<ChannelRealization, double>> channel_support_;
  std::vector<double> service_scale_;
  SchedulerConfig cfg_;
  std::vector<double> lambda_;
  int frame_length_ = 1;
};

/// Dual state: scaled multipliers d_hat plus the service vector of the last
/// step's maximizing schedules.
struct DualIterate {
  std::vector<double> d_hat;
  std::vector<double> mu_star;
};

/// One dual step: solve the weighted schedule search on every support point
/// with weights (w_l/eps + d_hat_l) * scale_l, average the resulting service
/// vectors into mu_star, then d_hat <- [d_hat + lambda(1-p) - mu_star]^+.
void subgradient_step(const StaticProblem& problem, DualIterate& iterate);

struct StaticIterRecord {
  long long k = 0;
  std::vector<double> d_hat;    // after the step
  std::vector<double> mu_star;  // service vector of the step
  double objective = 0.0;       // sum_l w_l mu_star_l
};

struct StaticResult {
  std::vector<double> mu_avg;  // mu_star averaged over the tail window
  double objective = 0.0;      // sum_l w_l mu_avg_l
  bool likely_infeasible = false;
  double min_deficit_slope = 0.0;  // fitted growth of min_l d_hat_l per step
  std::vector<StaticIterRecord> trajectory;
};

/// Runs `iterations` dual steps from d_hat = 0 and averages mu_star over the
/// last `avg_window` steps (0 = last half). An instance whose QoS targets are
/// unreachable makes every multiplier grow without bound; the run is flagged
/// likely_infeasible when min_l d_hat_l still climbs faster than 0.01 per
/// step over the tail window.
StaticResult solve_static(const StaticProblem& problem, long long iterations,
                          long long avg_window = 0, long long trajectory_stride = 1);

}  // namespace framesched
