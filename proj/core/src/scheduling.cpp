#include "framesched/scheduling.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>

namespace framesched {

int Schedule::link_total(LinkId l) const {
  int sum = 0;
  for (int t = 1; t <= slots; ++t) sum += at(l, t);
  return sum;
}

const char* to_string(PerFrameDeficitMode mode) {
  switch (mode) {
    case PerFrameDeficitMode::kAttempts: return "attempts";
    case PerFrameDeficitMode::kSuccesses: return "successes";
  }
  return "?";
}

void SchedulerConfig::validate(int link_count) const {
  const auto n = static_cast<std::size_t>(link_count);
  if (w.size() != n || p.size() != n) {
    throw InputError("scheduler config must carry one w and one p per link");
  }
  if (!(epsilon > 0.0)) throw InputError("epsilon must be > 0");
  for (double wl : w) {
    if (wl < 0.0) throw InputError("utility weights must be >= 0");
  }
  for (double pl : p) {
    if (pl < 0.0 || pl > 1.0) throw InputError("loss tolerances must lie in [0, 1]");
  }
  if (search_node_limit < 1 || dp_state_limit < 1) {
    throw InputError("search/DP limits must be >= 1");
  }
}

std::vector<double> SchedulerConfig::priorities(const DeficitState& d) const {
  validate(d.link_count());
  std::vector<double> pi(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) pi[i] = w[i] / epsilon + d.d[i];
  return pi;
}

namespace {

// Exact search over per-slot activations. States are (slot, remaining packets
// of the window each link is currently inside). Per slot the candidate
// actions are "serve every eligible link of one maximal activation at full
// rate"; links with zero weight are never eligible, which realizes the
// fewest-transmissions tie-break, and action choice during reconstruction
// realizes the earliest-service one.
class WeightedSearch {
 public:
  WeightedSearch(const FrameArrivals& a, const std::vector<int>& caps,
                 const std::vector<double>& weights, const InterferenceGraph& g,
                 long long node_limit)
      : L_(a.link_count()), T_(a.frame_length), caps_(caps), weights_(weights),
        activations_(g.maximal_activation_masks()), node_limit_(node_limit) {
    win_at_.assign(static_cast<std::size_t>(L_) * (T_ + 2), -1);
    win_count_.resize(static_cast<std::size_t>(L_));
    for (int l = 0; l < L_; ++l) {
      const auto& ws = a.windows[static_cast<std::size_t>(l)];
      for (std::size_t i = 0; i < ws.size(); ++i) {
        win_count_[l].push_back(ws[i].count);
        for (int t = ws[i].slot; t <= ws[i].deadline; ++t) {
          win_at_[idx(l, t)] = static_cast<int>(i);
        }
      }
    }

    int total_bits = 0;
    shift_.resize(static_cast<std::size_t>(L_));
    for (int l = 0; l < L_; ++l) {
      int max_count = 1;
      for (int c : win_count_[l]) max_count = std::max(max_count, c);
      shift_[l] = total_bits;
      total_bits += std::bit_width(static_cast<unsigned>(max_count));
    }
    packable_ = total_bits <= 64;
    memo_.resize(static_cast<std::size_t>(T_) + 2);
    memo_gen_.resize(static_cast<std::size_t>(T_) + 2);
  }

  Schedule run() {
    std::vector<int> r(static_cast<std::size_t>(L_), 0);
    for (int l = 0; l < L_; ++l) {
      const int wi = win_at_[idx(l, 1)];
      if (wi >= 0) r[l] = win_count_[l][wi];
    }
    solve(1, r);

    Schedule s(L_, T_);
    for (int t = 1; t <= T_; ++t) {
      const Entry here = lookup(t, r);
      std::uint64_t best_mask = 0;
      bool found = false;
      for (const Action& act : actions(t, r)) {
        std::vector<int> next = r;
        apply(t, act.mask, next);
        const Entry child = lookup(t + 1, next);
        if (act.gain + child.value == here.value &&
            act.trans + child.trans == here.trans) {
          if (!found || mask_lex_larger(act.mask, best_mask)) {
            best_mask = act.mask;
            found = true;
          }
        }
      }
      for (std::uint64_t rest = best_mask; rest;) {
        const int l = std::countr_zero(rest);
        rest &= rest - 1;
        s.set(l + 1, t, std::min(caps_[static_cast<std::size_t>(l)], r[l]));
      }
      apply(t, best_mask, r);
    }
    return s;
  }

 private:
  struct Entry {
    double value = 0.0;
    long long trans = 0;
  };
  struct Action {
    std::uint64_t mask = 0;
    double gain = 0.0;
    long long trans = 0;
  };

  std::size_t idx(int l, int t) const {
    return static_cast<std::size_t>(l) * (T_ + 2) + t;
  }

  // True when the lowest link in which the actions differ is served by `a`.
  static bool mask_lex_larger(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t diff = a ^ b;
    if (diff == 0) return false;
    return (a >> std::countr_zero(diff)) & 1u;
  }

  std::uint64_t pack(const std::vector<int>& r) const {
    std::uint64_t key = 0;
    for (int l = 0; l < L_; ++l) {
      key |= static_cast<std::uint64_t>(r[l]) << shift_[l];
    }
    return key;
  }

  std::vector<Action> actions(int t, const std::vector<int>& r) const {
    std::uint64_t eligible = 0;
    for (int l = 0; l < L_; ++l) {
      if (r[l] > 0 && caps_[static_cast<std::size_t>(l)] > 0 &&
          weights_[static_cast<std::size_t>(l)] > 0.0) {
        eligible |= 1ull << l;
      }
    }
    std::vector<Action> out;
    for (std::uint64_t m : activations_) {
      const std::uint64_t e = m & eligible;
      bool seen = false;
      for (const Action& prev : out) {
        if (prev.mask == e) { seen = true; break; }
      }
      if (seen) continue;
      Action act;
      act.mask = e;
      for (std::uint64_t rest = e; rest;) {
        const int l = std::countr_zero(rest);
        rest &= rest - 1;
        const int x = std::min(caps_[static_cast<std::size_t>(l)], r[l]);
        act.gain += weights_[static_cast<std::size_t>(l)] * x;
        act.trans += x;
      }
      out.push_back(act);
    }
    return out;
  }

  // Serves `mask` at slot t and rolls the window state to slot t+1, in place.
  void apply(int t, std::uint64_t mask, std::vector<int>& r) const {
    for (std::uint64_t rest = mask; rest;) {
      const int l = std::countr_zero(rest);
      rest &= rest - 1;
      r[l] -= std::min(caps_[static_cast<std::size_t>(l)], r[l]);
    }
    for (int l = 0; l < L_; ++l) {
      const int cur = win_at_[idx(l, t)];
      const int nxt = win_at_[idx(l, t + 1)];
      if (nxt == cur) continue;
      r[l] = (nxt < 0) ? 0 : win_count_[l][nxt];
    }
  }

  Entry lookup(int t, const std::vector<int>& r) const {
    if (t > T_) return {};
    if (packable_) return memo_[t].at(pack(r));
    return memo_gen_[t].at(r);
  }

  Entry solve(int t, const std::vector<int>& r) {
    if (t > T_) return {};
    if (packable_) {
      auto it = memo_[t].find(pack(r));
      if (it != memo_[t].end()) return it->second;
    } else {
      auto it = memo_gen_[t].find(r);
      if (it != memo_gen_[t].end()) return it->second;
    }

    Entry best;
    bool first = true;
    for (const Action& act : actions(t, r)) {
      std::vector<int> next = r;
      apply(t, act.mask, next);
      const Entry child = solve(t + 1, next);
      const Entry cand{act.gain + child.value, act.trans + child.trans};
      if (first || cand.value > best.value ||
          (cand.value == best.value && cand.trans < best.trans)) {
        best = cand;
        first = false;
      }
    }

    if (++nodes_ > node_limit_) {
      throw CapacityError("max_weight_schedule exceeded its search_node_limit");
    }
    if (packable_) {
      memo_[t].emplace(pack(r), best);
    } else {
      memo_gen_[t].emplace(r, best);
    }
    return best;
  }

  int L_;
  int T_;
  const std::vector<int>& caps_;
  const std::vector<double>& weights_;
  const std::vector<std::uint64_t>& activations_;
  long long node_limit_;
  long long nodes_ = 0;
  bool packable_ = false;
  std::vector<int> shift_;
  std::vector<int> win_at_;
  std::vector<std::vector<int>> win_count_;
  std::vector<std::unordered_map<std::uint64_t, Entry>> memo_;
  std::vector<std::map<std::vector<int>, Entry>> memo_gen_;
};

void check_frame_arrivals(const FrameArrivals& a, int link_count) {
  if (a.link_count() != link_count) {
    throw InputError("arrival frame does not match the link count");
  }
  if (a.frame_length < 1) throw InputError("frame_length must be >= 1");
  for (int l = 1; l <= link_count; ++l) {
    int prev_end = 0;
    for (const ArrivalWindow& w : a.windows[static_cast<std::size_t>(l - 1)]) {
      if (w.slot < 1 || w.slot > a.frame_length || w.deadline < w.slot ||
          w.deadline > a.frame_length) {
        throw InputError("arrival window outside the frame");
      }
      if (w.slot <= prev_end) {
        throw InputError("arrival windows must be disjoint and sorted");
      }
      if (w.count <= 0) throw InputError("realized windows must hold >= 1 packet");
      prev_end = w.deadline;
    }
  }
}

}  // namespace

Schedule max_weight_schedule(const FrameArrivals& a,
                             const std::vector<int>& slot_caps,
                             const std::vector<double>& weights,
                             const InterferenceGraph& g, long long node_limit) {
  check_frame_arrivals(a, g.link_count());
  if (slot_caps.size() != static_cast<std::size_t>(g.link_count()) ||
      weights.size() != static_cast<std::size_t>(g.link_count())) {
    throw InputError("slot_caps/weights must carry one entry per link");
  }
  for (int c : slot_caps) {
    if (c < 0) throw InputError("slot caps must be >= 0");
  }
  WeightedSearch search(a, slot_caps, weights, g, node_limit);
  return search.run();
}

Schedule max_weight_schedule_known(const FrameArrivals& a,
                                   const ChannelRealization& c,
                                   const DeficitState& d,
                                   const SchedulerConfig& cfg,
                                   const InterferenceGraph& g) {
  if (c.kind != ChannelKind::kKnown) {
    throw InputError("known-channel scheduler needs a known-state realization");
  }
  if (c.link_count != g.link_count() || c.frame_length != a.frame_length) {
    throw InputError("channel realization does not match the instance");
  }
  cfg.validate(g.link_count());
  if (d.link_count() != g.link_count()) {
    throw InputError("deficit state does not match the link count");
  }
  return max_weight_schedule(a, c.frame_rates, cfg.priorities(d), g,
                             cfg.search_node_limit);
}

Schedule max_weight_schedule_perframe(const FrameArrivals& a,
                                      const DeficitState& d,
                                      const SchedulerConfig& cfg,
                                      const std::vector<double>& cbar,
                                      const InterferenceGraph& g) {
  cfg.validate(g.link_count());
  if (d.link_count() != g.link_count() ||
      cbar.size() != static_cast<std::size_t>(g.link_count())) {
    throw InputError("deficit state / mean rates do not match the link count");
  }
  for (double c : cbar) {
    if (c < 0.0 || c > 1.0) throw InputError("mean rates must lie in [0, 1]");
  }
  std::vector<double> pi = cfg.priorities(d);
  for (std::size_t i = 0; i < pi.size(); ++i) pi[i] *= cbar[i];
  const std::vector<int> unit_caps(static_cast<std::size_t>(g.link_count()), 1);
  return max_weight_schedule(a, unit_caps, pi, g, cfg.search_node_limit);
}

bool validate_schedule(const Schedule& s, const FrameArrivals& a,
                       const ChannelRealization& c, const InterferenceGraph& g,
                       std::string* why) {
  check_frame_arrivals(a, g.link_count());
  if (s.links != g.link_count() || s.slots != a.frame_length ||
      c.link_count != g.link_count() || c.frame_length != a.frame_length) {
    throw InputError("schedule/arrivals/channel dimensions disagree");
  }
  auto fail = [&](const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
  };

  for (LinkId l = 1; l <= s.links; ++l) {
    for (int t = 1; t <= s.slots; ++t) {
      const int v = s.at(l, t);
      if (v < 0) return fail("negative transmission count");
      if (v == 0) continue;
      if (a.window_at(l, t) == nullptr) {
        return fail("link " + std::to_string(l) + " scheduled outside its windows at slot " +
                    std::to_string(t));
      }
      const int cap = (c.kind == ChannelKind::kKnown) ? c.frame_rate(l) : 1;
      if (v > cap) {
        return fail("link " + std::to_string(l) + " exceeds its slot cap at slot " +
                    std::to_string(t));
      }
    }
  }

  for (LinkId l = 1; l <= s.links; ++l) {
    for (const ArrivalWindow& w : a.windows[static_cast<std::size_t>(l - 1)]) {
      int used = 0;
      for (int t = w.slot; t <= w.deadline; ++t) {
        // Against a per-slot channel only carried packets consume the window
        // budget; retries of lost slots are free.
        const int weight = (c.kind == ChannelKind::kUnknownPerSlot)
                               ? c.slot_outcome(l, t)
                               : 1;
        used += weight * s.at(l, t);
      }
      if (used > w.count) {
        return fail("link " + std::to_string(l) + " overdraws the window at slot " +
                    std::to_string(w.slot));
      }
    }
  }

  for (int t = 1; t <= s.slots; ++t) {
    std::uint64_t active = 0;
    for (LinkId l = 1; l <= s.links; ++l) {
      if (s.at(l, t) > 0) active |= 1ull << (l - 1);
    }
    for (std::uint64_t rest = active; rest;) {
      const int l = std::countr_zero(rest);
      rest &= rest - 1;
      if (g.conflict_mask(l + 1) & active) {
        return fail("conflicting links transmit together in slot " + std::to_string(t));
      }
    }
  }
  return true;
}

DeficitState deficit_update(const DeficitState& d, const std::vector<int>& thinned,
                            const std::vector<int>& served) {
  const std::size_t n = d.d.size();
  if (thinned.size() != n || served.size() != n) {
    throw InputError("deficit update needs one thinned/served entry per link");
  }
  DeficitState out = d;
  for (std::size_t i = 0; i < n; ++i) {
    if (thinned[i] < 0 || served[i] < 0) {
      throw InputError("thinned/served counts must be >= 0");
    }
    out.d[i] = std::max(d.d[i] + thinned[i] - served[i], 0.0);
  }
  return out;
}

std::vector<int> served_count(const Schedule& s, const ChannelRealization& c,
                              PerFrameDeficitMode perframe_mode) {
  if (c.link_count != s.links || c.frame_length != s.slots) {
    throw InputError("schedule/channel dimensions disagree");
  }
  std::vector<int> served(static_cast<std::size_t>(s.links), 0);
  for (LinkId l = 1; l <= s.links; ++l) {
    int v = 0;
    switch (c.kind) {
      case ChannelKind::kKnown:
        v = s.link_total(l);
        break;
      case ChannelKind::kUnknownPerFrame:
        v = (perframe_mode == PerFrameDeficitMode::kAttempts)
                ? s.link_total(l)
                : c.frame_rate(l) * s.link_total(l);
        break;
      case ChannelKind::kUnknownPerSlot:
        for (int t = 1; t <= s.slots; ++t) v += c.slot_outcome(l, t) * s.at(l, t);
        break;
    }
    served[static_cast<std::size_t>(l - 1)] = v;
  }
  return served;
}

}  // namespace framesched
