#pragma once

#include <string>
#include <vector>

#include "framesched/distributions.hpp"
#include "framesched/rng.hpp"
#include "framesched/types.hpp"

namespace framesched {

/// Template for one arrival batch of a link: `count` packets arrive at
/// `slot` and expire after `deadline` (inclusive). Windows of one link never
/// overlap.
struct WindowSpec {
  int slot = 1;
  DiscreteDistribution count = DiscreteDistribution::constant(0);
  int deadline = 1;
};

/// Per-frame traffic law. Every frame is drawn i.i.d. from this model.
class ArrivalModel {
 public:
  /// `windows[l-1]` lists link l's batches sorted by slot.
  ArrivalModel(int frame_length, std::vector<std::vector<WindowSpec>> windows);

  /// Classic shape: every packet of link l arrives at slot 1 with deadline
  /// `frame_length`.
  static ArrivalModel frame_start(int frame_length,
                                  std::vector<DiscreteDistribution> counts);

  int frame_length() const { return frame_length_; }
  int link_count() const { return static_cast<int>(windows_.size()); }
  const std::vector<WindowSpec>& windows(LinkId l) const;

  /// Mean/variance of a link's total arrivals per frame.
  double mean(LinkId l) const;
  double variance(LinkId l) const;

  /// True when every link can produce an empty frame and a one-packet frame;
  /// the drift analysis behind the deficit scheduler assumes both. Violations
  /// are reported, not rejected.
  std::vector<std::string> assumption_warnings() const;

  /// Frame-start with count support contained in {0, 1} on every link;
  /// the shape required by the one-shot greedy policy.
  bool frame_start_binary() const;

 private:
  int frame_length_ = 1;
  std::vector<std::vector<WindowSpec>> windows_;
};

/// One realized batch: `count` > 0 packets of link l usable in slots
/// [slot, deadline].
struct ArrivalWindow {
  int slot = 1;
  int count = 0;
  int deadline = 1;
};

/// Realized arrivals of one frame; windows per link sorted by slot, counts
/// strictly positive.
struct FrameArrivals {
  int frame_length = 1;
  std::vector<std::vector<ArrivalWindow>> windows;  // [l-1]

  int link_count() const { return static_cast<int>(windows.size()); }

  /// Total packets of link l in the frame.
  int total(LinkId l) const;

  /// Window of link l covering slot t, or nullptr.
  const ArrivalWindow* window_at(LinkId l, int t) const;

  /// Packets of link l arriving exactly at slot t (0 if none).
  int count_at(LinkId l, int t) const;
};

/// Draws one frame of arrivals. Zero-count draws produce no window.
FrameArrivals generate_frame(const ArrivalModel& model, RngStream& rng);

/// Keeps each of `count` packets independently with probability 1-p: one
/// coin toss per packet, in packet order, so a run consumes exactly `count`
/// draws from `rng`.
int thin(int count, double p, RngStream& rng);

}  // namespace framesched
