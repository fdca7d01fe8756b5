#include "framesched/traffic.hpp"

#include <string>

namespace framesched {

ArrivalModel::ArrivalModel(int frame_length,
                           std::vector<std::vector<WindowSpec>> windows)
    : frame_length_(frame_length), windows_(std::move(windows)) {
  if (frame_length_ < 1) throw InputError("frame_length must be >= 1");
  if (windows_.empty()) throw InputError("arrival model needs >= 1 link");
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const std::string who = "link " + std::to_string(i + 1);
    int prev_end = 0;
    for (const WindowSpec& w : windows_[i]) {
      if (w.slot < 1 || w.slot > frame_length_) {
        throw InputError(who + ": window slot outside the frame");
      }
      if (w.deadline < w.slot || w.deadline > frame_length_) {
        throw InputError(who + ": window deadline must lie in [slot, frame_length]");
      }
      if (w.slot <= prev_end) {
        throw InputError(who + ": windows must be disjoint and sorted by slot");
      }
      prev_end = w.deadline;
    }
  }
}

ArrivalModel ArrivalModel::frame_start(int frame_length,
                                       std::vector<DiscreteDistribution> counts) {
  std::vector<std::vector<WindowSpec>> windows;
  windows.reserve(counts.size());
  for (DiscreteDistribution& d : counts) {
    windows.push_back({WindowSpec{1, std::move(d), frame_length}});
  }
  return ArrivalModel(frame_length, std::move(windows));
}

const std::vector<WindowSpec>& ArrivalModel::windows(LinkId l) const {
  if (l < 1 || l > link_count()) throw InputError("link index out of range");
  return windows_[l - 1];
}

double ArrivalModel::mean(LinkId l) const {
  double m = 0.0;
  for (const WindowSpec& w : windows(l)) m += w.count.mean();
  return m;
}

double ArrivalModel::variance(LinkId l) const {
  double v = 0.0;
  for (const WindowSpec& w : windows(l)) v += w.count.variance();
  return v;
}

std::vector<std::string> ArrivalModel::assumption_warnings() const {
  std::vector<std::string> out;
  for (LinkId l = 1; l <= link_count(); ++l) {
    // Pr(total = 0) = prod Pr(w = 0); Pr(total = 1) = sum_w Pr(w = 1) prod_o Pr(o = 0).
    double p_zero = 1.0;
    for (const WindowSpec& w : windows(l)) p_zero *= w.count.prob_of(0);
    double p_one = 0.0;
    for (std::size_t i = 0; i < windows_[l - 1].size(); ++i) {
      double term = windows_[l - 1][i].count.prob_of(1);
      for (std::size_t j = 0; j < windows_[l - 1].size(); ++j) {
        if (j != i) term *= windows_[l - 1][j].count.prob_of(0);
      }
      p_one += term;
    }
    if (p_zero <= 0.0) {
      out.push_back("link " + std::to_string(l) +
                    ": empty frames have probability 0");
    }
    if (p_one <= 0.0) {
      out.push_back("link " + std::to_string(l) +
                    ": single-packet frames have probability 0");
    }
  }
  return out;
}

bool ArrivalModel::frame_start_binary() const {
  for (const auto& link_windows : windows_) {
    if (link_windows.size() > 1) return false;
    for (const WindowSpec& w : link_windows) {
      if (w.slot != 1 || w.count.max_value() > 1) return false;
    }
  }
  return true;
}

int FrameArrivals::total(LinkId l) const {
  int sum = 0;
  for (const ArrivalWindow& w : windows.at(static_cast<std::size_t>(l - 1))) {
    sum += w.count;
  }
  return sum;
}

const ArrivalWindow* FrameArrivals::window_at(LinkId l, int t) const {
  for (const ArrivalWindow& w : windows.at(static_cast<std::size_t>(l - 1))) {
    if (w.slot <= t && t <= w.deadline) return &w;
  }
  return nullptr;
}

int FrameArrivals::count_at(LinkId l, int t) const {
  for (const ArrivalWindow& w : windows.at(static_cast<std::size_t>(l - 1))) {
    if (w.slot == t) return w.count;
  }
  return 0;
}

FrameArrivals generate_frame(const ArrivalModel& model, RngStream& rng) {
  FrameArrivals frame;
  frame.frame_length = model.frame_length();
  frame.windows.resize(static_cast<std::size_t>(model.link_count()));
  for (LinkId l = 1; l <= model.link_count(); ++l) {
    for (const WindowSpec& spec : model.windows(l)) {
      const int count = spec.count.sample(rng);
      if (count > 0) {
        frame.windows[l - 1].push_back({spec.slot, count, spec.deadline});
      }
    }
  }
  return frame;
}

int thin(int count, double p, RngStream& rng) {
  if (count < 0) throw InputError("thin: count must be >= 0");
  if (p < 0.0 || p > 1.0) throw InputError("thin: p must lie in [0, 1]");
  int kept = 0;
  for (int i = 0; i < count; ++i) {
    // One uniform per packet regardless of p, so runs that differ only in p
    // stay aligned on the thinning stream.
    if (rng.uniform() < 1.0 - p) ++kept;
  }
  return kept;
}

}  // namespace framesched
