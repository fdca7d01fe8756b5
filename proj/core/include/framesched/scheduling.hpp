#pragma once

#include <string>
#include <vector>

#include "framesched/channel.hpp"
#include "framesched/topology.hpp"
#include "framesched/traffic.hpp"
#include "framesched/types.hpp"

namespace framesched {

/// Transmission plan of one frame: s(l, t) packets of link l in slot t.
struct Schedule {
  int links = 0;
  int slots = 0;
  std::vector<int> s;  // link-major: s[(l-1)*slots + (t-1)]

  Schedule() = default;
  Schedule(int link_count, int frame_length)
      : links(link_count), slots(frame_length),
        s(static_cast<std::size_t>(link_count) * frame_length, 0) {}

  int at(LinkId l, int t) const {
    return s[static_cast<std::size_t>(l - 1) * slots + (t - 1)];
  }
  void set(LinkId l, int t, int v) {
    s[static_cast<std::size_t>(l - 1) * slots + (t - 1)] = v;
  }
  /// Total transmissions of link l across the frame.
  int link_total(LinkId l) const;
};

/// Per-link deficit counters; non-negative by construction of every update.
struct DeficitState {
  std::vector<double> d;

  static DeficitState zeros(int link_count) {
    return DeficitState{std::vector<double>(static_cast<std::size_t>(link_count), 0.0)};
  }
  int link_count() const { return static_cast<int>(d.size()); }
};

/// What a blind per-frame scheduler feeds back into its deficit: scheduled
/// attempts, or only the attempts the channel actually carried.
enum class PerFrameDeficitMode { kAttempts, kSuccesses };

const char* to_string(PerFrameDeficitMode mode);

/// Weights and QoS parameters shared by all schedulers. The scheduling
/// priority of link l is w[l-1]/epsilon + d[l-1].
struct SchedulerConfig {
  std::vector<double> w;       // utility weight per link, >= 0
  double epsilon = 0.1;        // optimality knob, > 0
  std::vector<double> p;       // tolerable loss fraction per link, in [0, 1]
  long long search_node_limit = 10'000'000;
  long long dp_state_limit = 1'000'000;
  PerFrameDeficitMode perframe_deficit = PerFrameDeficitMode::kAttempts;

  void validate(int link_count) const;
  std::vector<double> priorities(const DeficitState& d) const;
};

/// True iff `s` is feasible for arrivals `a`, channel `c` and graph `g`:
/// non-negative, zero outside arrival windows, within per-window packet
/// budgets (successes within budget for per-slot channels), within the
/// channel's slot cap, and interference-free in every slot. `why`, when
/// given, receives the first violated condition.
bool validate_schedule(const Schedule& s, const FrameArrivals& a,
                       const ChannelRealization& c, const InterferenceGraph& g,
                       std::string* why = nullptr);

/// Exact weighted schedule search shared by the frame schedulers and the
/// static benchmark. Maximizes sum_l weight[l] * (transmissions of l) over
/// all feasible schedules with per-slot caps `slot_caps`.
///
/// The maximizer is made unique in three stages: highest objective, then
/// fewest total transmissions (so zero-weight links are never scheduled),
/// then earliest service (slot-major flattened plan, preferring transmissions
/// as early and on as low a link index as possible). Throws CapacityError
/// once the memoized search exceeds `node_limit` states.
Schedule max_weight_schedule(const FrameArrivals& a,
                             const std::vector<int>& slot_caps,
                             const std::vector<double>& weights,
                             const InterferenceGraph& g,
                             long long node_limit = 10'000'000);

/// Known-channel scheduler: weight w_l/eps + d_l, slot cap c_l.
Schedule max_weight_schedule_known(const FrameArrivals& a,
                                   const ChannelRealization& c,
                                   const DeficitState& d,
                                   const SchedulerConfig& cfg,
                                   const InterferenceGraph& g);

/// Blind per-frame scheduler: runs before the frame's channel state is
/// known, so it weights by the mean rate instead: (w_l/eps + d_l) * cbar_l,
/// slot cap 1.
Schedule max_weight_schedule_perframe(const FrameArrivals& a,
                                      const DeficitState& d,
                                      const SchedulerConfig& cfg,
                                      const std::vector<double>& cbar,
                                      const InterferenceGraph& g);

/// d'_l = max(d_l + thinned_l - served_l, 0).
DeficitState deficit_update(const DeficitState& d, const std::vector<int>& thinned,
                            const std::vector<int>& served);

/// Service credited against deficits for the frame: transmissions for known
/// channels, attempts or carried attempts for per-frame channels (see
/// PerFrameDeficitMode), per-slot successes for per-slot channels.
std::vector<int> served_count(const Schedule& s, const ChannelRealization& c,
                              PerFrameDeficitMode perframe_mode =
                                  PerFrameDeficitMode::kAttempts);

}  // namespace framesched
