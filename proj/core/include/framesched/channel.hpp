#pragma once

#include <cstdint>
#include <vector>

#include "framesched/distributions.hpp"
#include "framesched/rng.hpp"
#include "framesched/types.hpp"

namespace framesched {

/// When the transmitter learns the channel state.
enum class ChannelKind {
  kKnown,          // integer rate per frame, revealed at frame start
  kUnknownPerFrame,  // on/off per frame, revealed after the frame
  kUnknownPerSlot,   // on/off per slot, each slot's outcome revealed at slot end
};

const char* to_string(ChannelKind kind);

/// Stochastic law of the channel. For kKnown each link carries a finite rate
/// distribution; the unknown kinds are on/off with a per-link mean.
class ChannelModel {
 public:
  static ChannelModel known(std::vector<DiscreteDistribution> rates);
  static ChannelModel unknown_per_frame(std::vector<double> means);
  static ChannelModel unknown_per_slot(std::vector<double> means);

  ChannelKind kind() const { return kind_; }
  int link_count() const;

  /// Mean rate per link; the only channel statistic blind schedulers may use.
  const std::vector<double>& mean_rates() const { return means_; }

  /// kKnown only.
  const std::vector<DiscreteDistribution>& rate_distributions() const;

 private:
  ChannelKind kind_ = ChannelKind::kKnown;
  std::vector<DiscreteDistribution> rates_;  // kKnown
  std::vector<double> means_;
};

/// Realized channel of one frame. Owned by the simulation engine; schedulers
/// only ever see it through ChannelView.
struct ChannelRealization {
  ChannelKind kind = ChannelKind::kKnown;
  int link_count = 0;
  int frame_length = 1;
  std::vector<int> frame_rates;          // [l-1]; kKnown and kUnknownPerFrame
  std::vector<std::uint8_t> slot_outcomes;  // [ (l-1)*T + (t-1) ]; kUnknownPerSlot

  int frame_rate(LinkId l) const { return frame_rates.at(static_cast<std::size_t>(l - 1)); }
  int slot_outcome(LinkId l, int t) const {
    return slot_outcomes.at(static_cast<std::size_t>(l - 1) * frame_length + (t - 1));
  }
};

/// Draws one frame. Per-slot outcomes are sampled up front (one Bernoulli per
/// link and slot) and revealed lazily through ChannelView.
ChannelRealization sample_channel(const ChannelModel& model, int frame_length,
                                  RngStream& rng);

/// Read gate over a realization. Any access beyond what the channel kind has
/// revealed so far raises VisibilityError, which is how the scheduler audit
/// catches out-of-model reads.
class ChannelView {
 public:
  ChannelView(const ChannelRealization& realization, int slots_revealed);

  ChannelKind kind() const { return realization_->kind; }
  int link_count() const { return realization_->link_count; }
  int slots_revealed() const { return slots_revealed_; }

  /// Marks slots 1..t as finished; their feedback becomes readable.
  void advance(int t);

  /// Frame rate of link l. kKnown: always readable. kUnknownPerFrame:
  /// readable once the whole frame is revealed. kUnknownPerSlot: never.
  int frame_rate(LinkId l) const;

  /// ACK history of link l at slot t <= slots_revealed(). kUnknownPerSlot only.
  int slot_outcome(LinkId l, int t) const;

 private:
  const ChannelRealization* realization_;
  int slots_revealed_ = 0;
};

/// Channel knowledge available when deciding slot `slot` (1-based): for
/// kKnown the full realization, for kUnknownPerSlot the outcomes of slots
/// < slot, for kUnknownPerFrame nothing until the frame ends.
ChannelView visible_information(const ChannelRealization& realization, int slot);

}  // namespace framesched
