#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "framesched/channel.hpp"
#include "framesched/scheduling.hpp"
#include "framesched/topology.hpp"
#include "framesched/traffic.hpp"
#include "framesched/types.hpp"

namespace framesched {

/// Optimal per-slot transmission policy for one frame of a per-slot feedback
/// channel, as a value table over (slot, remaining packets per link).
///
/// Actions are maximal activations restricted to backlogged links, evaluated
/// in activation order; a later action must beat the incumbent by more than
/// 1e-12 to replace it, so ties resolve to the earliest activation. States
/// are expanded lazily from the frame's initial backlog, so value/action
/// queries mutate an internal memo and are not thread-safe.
class PolicyTable {
 public:
  PolicyTable(const FrameArrivals& a, const DeficitState& d,
              const SchedulerConfig& cfg, const std::vector<double>& cbar,
              const InterferenceGraph& g);

  /// Expected priority-weighted successes from frame start.
  double value();

  /// Expected remaining reward at slot t with `remaining` packets per link.
  double value_at(int t, const std::vector<int>& remaining);

  /// Links to serve at slot t with `remaining` packets per link.
  std::vector<LinkId> action_at(int t, const std::vector<int>& remaining);

  /// Expected successes per link when the policy runs from frame start.
  std::vector<double> service_rates();

  const FrameArrivals& arrivals() const { return arrivals_; }
  int frame_length() const { return arrivals_.frame_length; }
  int link_count() const { return static_cast<int>(cbar_.size()); }

  /// Remaining packets per link at slot 1.
  std::vector<int> initial_remaining() const;

  /// Applies the deterministic window openings/expiries between slot t and
  /// t+1 to a remaining vector, in place.
  void roll_windows(int t, std::vector<int>& r) const;

 private:
  struct StateInfo {
    double value = 0.0;
    std::uint64_t action = 0;
  };

  std::uint64_t action_mask_at(int t, const std::vector<int>& remaining);
  StateInfo solve(int t, const std::vector<int>& r);
  std::vector<double> successes(int t, const std::vector<int>& r);
  void check_query(int t, const std::vector<int>& r) const;
  std::uint64_t pack(const std::vector<int>& r) const;

  FrameArrivals arrivals_;
  std::vector<double> pi_;
  std::vector<double> cbar_;
  std::vector<std::uint64_t> activations_;
  long long state_limit_;
  long long states_ = 0;
  bool packable_ = false;
  std::vector<int> shift_;
  std::vector<int> win_at_;   // [ l*(T+2) + t ]
  std::vector<std::vector<int>> win_count_;
  std::vector<std::map<std::vector<int>, StateInfo>> memo_;
  std::vector<std::unordered_map<std::uint64_t, StateInfo>> memo_packed_;
  std::vector<std::map<std::vector<int>, std::vector<double>>> mu_memo_;
};

/// Builds the optimal per-slot policy for the frame.
PolicyTable optimal_policy_value(const FrameArrivals& a, const DeficitState& d,
                                 const SchedulerConfig& cfg,
                                 const std::vector<double>& cbar,
                                 const InterferenceGraph& g);

/// Runs the policy against a realized per-slot channel, reading each slot's
/// feedback only after that slot (enforced through ChannelView, which throws
/// on any premature read).
Schedule policy_schedule(PolicyTable& table, const FrameArrivals& a,
                         const ChannelRealization& c, const InterferenceGraph& g);

/// One slot of the colocated single-packet policy: among backlogged links,
/// serve the one maximizing (w_l/eps + d_l) * cbar_l, ties to the smallest
/// link index; nothing when no link is backlogged.
std::optional<LinkId> greedy_colocated_step(const std::vector<LinkId>& backlogged,
                                            const DeficitState& d,
                                            const SchedulerConfig& cfg,
                                            const std::vector<double>& cbar);

/// Decision rule over a colocated network: which backlogged link to serve
/// given the set still holding packets and the number of slots left. May
/// return nullopt to idle.
using ColocatedPolicy =
    std::function<std::optional<LinkId>(const std::vector<LinkId>& backlogged,
                                        int slots_remaining)>;

/// The greedy rule above as a reusable policy object.
ColocatedPolicy greedy_colocated_policy(const DeficitState& d,
                                        const SchedulerConfig& cfg,
                                        std::vector<double> cbar);

/// Expected priority-weighted successes of an arbitrary colocated policy
/// serving single-packet backlogs over j slots: each attempt on link l
/// succeeds with probability cbar_l, removing l from the backlog.
double expected_utility(const ColocatedPolicy& policy,
                        const std::vector<LinkId>& backlogged, int slots,
                        const DeficitState& d, const SchedulerConfig& cfg,
                        const std::vector<double>& cbar);

}  // namespace framesched
