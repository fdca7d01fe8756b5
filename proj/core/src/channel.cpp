#include "framesched/channel.hpp"

#include <string>

namespace framesched {

const char* to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::kKnown: return "known";
    case ChannelKind::kUnknownPerFrame: return "per_frame";
    case ChannelKind::kUnknownPerSlot: return "per_slot";
  }
  return "?";
}

ChannelModel ChannelModel::known(std::vector<DiscreteDistribution> rates) {
  if (rates.empty()) throw InputError("channel model needs >= 1 link");
  ChannelModel m;
  m.kind_ = ChannelKind::kKnown;
  for (const DiscreteDistribution& d : rates) m.means_.push_back(d.mean());
  m.rates_ = std::move(rates);
  return m;
}

ChannelModel ChannelModel::unknown_per_frame(std::vector<double> means) {
  if (means.empty()) throw InputError("channel model needs >= 1 link");
  for (double c : means) {
    if (c < 0.0 || c > 1.0) throw InputError("on/off channel mean must lie in [0, 1]");
  }
  ChannelModel m;
  m.kind_ = ChannelKind::kUnknownPerFrame;
  m.means_ = std::move(means);
  return m;
}

ChannelModel ChannelModel::unknown_per_slot(std::vector<double> means) {
  ChannelModel m = unknown_per_frame(std::move(means));
  m.kind_ = ChannelKind::kUnknownPerSlot;
  return m;
}

int ChannelModel::link_count() const { return static_cast<int>(means_.size()); }

const std::vector<DiscreteDistribution>& ChannelModel::rate_distributions() const {
  if (kind_ != ChannelKind::kKnown) {
    throw InputError("rate distributions exist only for the known-state kind");
  }
  return rates_;
}

ChannelRealization sample_channel(const ChannelModel& model, int frame_length,
                                  RngStream& rng) {
  if (frame_length < 1) throw InputError("frame_length must be >= 1");
  ChannelRealization r;
  r.kind = model.kind();
  r.link_count = model.link_count();
  r.frame_length = frame_length;
  switch (model.kind()) {
    case ChannelKind::kKnown:
      for (const DiscreteDistribution& d : model.rate_distributions()) {
        r.frame_rates.push_back(d.sample(rng));
      }
      break;
    case ChannelKind::kUnknownPerFrame:
      for (double c : model.mean_rates()) {
        r.frame_rates.push_back(rng.uniform() < c ? 1 : 0);
      }
      break;
    case ChannelKind::kUnknownPerSlot:
      r.slot_outcomes.resize(static_cast<std::size_t>(r.link_count) * frame_length);
      for (int l = 0; l < r.link_count; ++l) {
        const double c = model.mean_rates()[l];
        for (int t = 0; t < frame_length; ++t) {
          r.slot_outcomes[static_cast<std::size_t>(l) * frame_length + t] =
              rng.uniform() < c ? 1 : 0;
        }
      }
      break;
  }
  return r;
}

ChannelView::ChannelView(const ChannelRealization& realization, int slots_revealed)
    : realization_(&realization) {
  advance(slots_revealed);
}

void ChannelView::advance(int t) {
  if (t < slots_revealed_ || t > realization_->frame_length) {
    throw InputError("ChannelView::advance: slot cursor must move forward within the frame");
  }
  slots_revealed_ = t;
}

int ChannelView::frame_rate(LinkId l) const {
  if (l < 1 || l > realization_->link_count) throw InputError("link index out of range");
  switch (realization_->kind) {
    case ChannelKind::kKnown:
      return realization_->frame_rate(l);
    case ChannelKind::kUnknownPerFrame:
      if (slots_revealed_ < realization_->frame_length) {
        throw VisibilityError(
            "per-frame channel state is hidden until the frame ends");
      }
      return realization_->frame_rate(l);
    case ChannelKind::kUnknownPerSlot:
      throw VisibilityError("per-slot channels have no frame rate to reveal");
  }
  throw InputError("corrupt channel kind");
}

int ChannelView::slot_outcome(LinkId l, int t) const {
  if (realization_->kind != ChannelKind::kUnknownPerSlot) {
    throw VisibilityError("slot feedback exists only for per-slot channels");
  }
  if (l < 1 || l > realization_->link_count) throw InputError("link index out of range");
  if (t < 1 || t > realization_->frame_length) throw InputError("slot index out of range");
  if (t > slots_revealed_) {
    throw VisibilityError("slot " + std::to_string(t) +
                          " feedback requested before the slot finished");
  }
  return realization_->slot_outcome(l, t);
}

ChannelView visible_information(const ChannelRealization& realization, int slot) {
  if (slot < 1 || slot > realization.frame_length + 1) {
    throw InputError("slot index out of range");
  }
  return ChannelView(realization, slot - 1);
}

}  // namespace framesched
