#include "framesched/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace framesched {

namespace {

constexpr double kArgmaxTolerance = 1e-12;

std::uint64_t backlog_mask(const std::vector<int>& r) {
  std::uint64_t m = 0;
  for (std::size_t l = 0; l < r.size(); ++l) {
    if (r[l] > 0) m |= 1ull << l;
  }
  return m;
}

}  // namespace

PolicyTable::PolicyTable(const FrameArrivals& a, const DeficitState& d,
                         const SchedulerConfig& cfg,
                         const std::vector<double>& cbar,
                         const InterferenceGraph& g)
    : arrivals_(a), cbar_(cbar),
      activations_(g.maximal_activation_masks()),
      state_limit_(cfg.dp_state_limit) {
  cfg.validate(g.link_count());
  if (a.link_count() != g.link_count() ||
      cbar.size() != static_cast<std::size_t>(g.link_count()) ||
      d.link_count() != g.link_count()) {
    throw InputError("policy instance dimensions disagree");
  }
  for (double c : cbar_) {
    if (c < 0.0 || c > 1.0) throw InputError("mean rates must lie in [0, 1]");
  }
  pi_ = cfg.priorities(d);

  const int L = g.link_count();
  const int T = arrivals_.frame_length;
  win_at_.assign(static_cast<std::size_t>(L) * (T + 2), -1);
  win_count_.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    const auto& ws = arrivals_.windows[static_cast<std::size_t>(l)];
    int prev_end = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (ws[i].slot < 1 || ws[i].slot > T || ws[i].deadline < ws[i].slot ||
          ws[i].deadline > T || ws[i].count <= 0 || ws[i].slot <= prev_end) {
        throw InputError("malformed arrival windows");
      }
      prev_end = ws[i].deadline;
      win_count_[l].push_back(ws[i].count);
      for (int t = ws[i].slot; t <= ws[i].deadline; ++t) {
        win_at_[static_cast<std::size_t>(l) * (T + 2) + t] = static_cast<int>(i);
      }
    }
  }

  int total_bits = 0;
  shift_.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    int max_count = 1;
    for (int c : win_count_[l]) max_count = std::max(max_count, c);
    shift_[l] = total_bits;
    total_bits += std::bit_width(static_cast<unsigned>(max_count));
  }
  packable_ = total_bits <= 64;
  memo_.resize(static_cast<std::size_t>(T) + 2);
  memo_packed_.resize(static_cast<std::size_t>(T) + 2);
  mu_memo_.resize(static_cast<std::size_t>(T) + 2);
}

std::vector<int> PolicyTable::initial_remaining() const {
  const int T = arrivals_.frame_length;
  std::vector<int> r(static_cast<std::size_t>(link_count()), 0);
  for (int l = 0; l < link_count(); ++l) {
    const int wi = win_at_[static_cast<std::size_t>(l) * (T + 2) + 1];
    if (wi >= 0) r[l] = win_count_[l][wi];
  }
  return r;
}

std::uint64_t PolicyTable::pack(const std::vector<int>& r) const {
  std::uint64_t key = 0;
  for (int l = 0; l < link_count(); ++l) {
    key |= static_cast<std::uint64_t>(r[l]) << shift_[l];
  }
  return key;
}

void PolicyTable::roll_windows(int t, std::vector<int>& r) const {
  const int T = arrivals_.frame_length;
  for (int l = 0; l < link_count(); ++l) {
    const int cur = win_at_[static_cast<std::size_t>(l) * (T + 2) + t];
    const int nxt = win_at_[static_cast<std::size_t>(l) * (T + 2) + t + 1];
    if (nxt == cur) continue;
    r[l] = (nxt < 0) ? 0 : win_count_[l][nxt];
  }
}

void PolicyTable::check_query(int t, const std::vector<int>& r) const {
  if (t < 1 || t > arrivals_.frame_length + 1) {
    throw InputError("slot index out of range");
  }
  if (r.size() != static_cast<std::size_t>(link_count())) {
    throw InputError("remaining vector does not match the link count");
  }
  for (int v : r) {
    if (v < 0) throw InputError("remaining packet counts must be >= 0");
  }
}

PolicyTable::StateInfo PolicyTable::solve(int t, const std::vector<int>& r) {
  if (t > arrivals_.frame_length) return {};
  if (packable_) {
    auto it = memo_packed_[t].find(pack(r));
    if (it != memo_packed_[t].end()) return it->second;
  } else {
    auto it = memo_[t].find(r);
    if (it != memo_[t].end()) return it->second;
  }

  const std::uint64_t backlog = backlog_mask(r);
  StateInfo best;
  bool first = true;
  std::vector<std::uint64_t> seen;
  for (std::uint64_t m : activations_) {
    const std::uint64_t act = m & backlog;
    if (std::find(seen.begin(), seen.end(), act) != seen.end()) continue;
    seen.push_back(act);

    double gain = 0.0;
    for (std::uint64_t rest = act; rest;) {
      const int l = std::countr_zero(rest);
      rest &= rest - 1;
      gain += pi_[static_cast<std::size_t>(l)] * cbar_[static_cast<std::size_t>(l)];
    }

    // Expectation over the independent per-link outcomes of this action.
    double expect = 0.0;
    std::uint64_t sub = act;
    while (true) {
      double prob = 1.0;
      for (std::uint64_t rest = act; rest;) {
        const int l = std::countr_zero(rest);
        rest &= rest - 1;
        const bool ok = (sub >> l) & 1u;
        prob *= ok ? cbar_[static_cast<std::size_t>(l)]
                   : 1.0 - cbar_[static_cast<std::size_t>(l)];
      }
      if (prob > 0.0) {
        std::vector<int> next = r;
        for (std::uint64_t rest = sub; rest;) {
          const int l = std::countr_zero(rest);
          rest &= rest - 1;
          --next[l];
        }
        roll_windows(t, next);
        expect += prob * solve(t + 1, next).value;
      }
      if (sub == 0) break;
      sub = (sub - 1) & act;
    }

    const double v = gain + expect;
    if (first || v > best.value + kArgmaxTolerance) {
      best.value = v;
      best.action = act;
      first = false;
    }
  }

  if (++states_ > state_limit_) {
    throw CapacityError("policy value table exceeded its dp_state_limit");
  }
  if (packable_) {
    memo_packed_[t].emplace(pack(r), best);
  } else {
    memo_[t].emplace(r, best);
  }
  return best;
}

double PolicyTable::value() { return solve(1, initial_remaining()).value; }

double PolicyTable::value_at(int t, const std::vector<int>& remaining) {
  check_query(t, remaining);
  return solve(t, remaining).value;
}

std::uint64_t PolicyTable::action_mask_at(int t, const std::vector<int>& remaining) {
  check_query(t, remaining);
  if (t > arrivals_.frame_length) return 0;
  return solve(t, remaining).action;
}

std::vector<LinkId> PolicyTable::action_at(int t, const std::vector<int>& remaining) {
  std::vector<LinkId> out;
  for (std::uint64_t rest = action_mask_at(t, remaining); rest;) {
    const int l = std::countr_zero(rest);
    rest &= rest - 1;
    out.push_back(l + 1);
  }
  return out;
}

std::vector<double> PolicyTable::successes(int t, const std::vector<int>& r) {
  const std::size_t L = static_cast<std::size_t>(link_count());
  if (t > arrivals_.frame_length) return std::vector<double>(L, 0.0);
  auto it = mu_memo_[t].find(r);
  if (it != mu_memo_[t].end()) return it->second;

  const std::uint64_t act = solve(t, r).action;
  std::vector<double> mu(L, 0.0);
  for (std::uint64_t rest = act; rest;) {
    const int l = std::countr_zero(rest);
    rest &= rest - 1;
    mu[static_cast<std::size_t>(l)] += cbar_[static_cast<std::size_t>(l)];
  }

  std::uint64_t sub = act;
  while (true) {
    double prob = 1.0;
    for (std::uint64_t rest = act; rest;) {
      const int l = std::countr_zero(rest);
      rest &= rest - 1;
      const bool ok = (sub >> l) & 1u;
      prob *= ok ? cbar_[static_cast<std::size_t>(l)]
                 : 1.0 - cbar_[static_cast<std::size_t>(l)];
    }
    if (prob > 0.0) {
      std::vector<int> next = r;
      for (std::uint64_t rest = sub; rest;) {
        const int l = std::countr_zero(rest);
        rest &= rest - 1;
        --next[l];
      }
      roll_windows(t, next);
      const std::vector<double> tail = successes(t + 1, next);
      for (std::size_t i = 0; i < L; ++i) mu[i] += prob * tail[i];
    }
    if (sub == 0) break;
    sub = (sub - 1) & act;
  }

  mu_memo_[t].emplace(r, mu);
  return mu;
}

std::vector<double> PolicyTable::service_rates() {
  return successes(1, initial_remaining());
}

PolicyTable optimal_policy_value(const FrameArrivals& a, const DeficitState& d,
                                 const SchedulerConfig& cfg,
                                 const std::vector<double>& cbar,
                                 const InterferenceGraph& g) {
  return PolicyTable(a, d, cfg, cbar, g);
}

Schedule policy_schedule(PolicyTable& table, const FrameArrivals& a,
                         const ChannelRealization& c, const InterferenceGraph& g) {
  if (c.kind != ChannelKind::kUnknownPerSlot) {
    throw InputError("policy_schedule needs a per-slot channel realization");
  }
  if (c.link_count != g.link_count() || c.frame_length != a.frame_length ||
      a.link_count() != g.link_count() ||
      table.link_count() != g.link_count() ||
      table.frame_length() != a.frame_length) {
    throw InputError("policy execution dimensions disagree");
  }

  const int T = a.frame_length;
  Schedule s(g.link_count(), T);
  ChannelView view = visible_information(c, 1);
  std::vector<int> r = table.initial_remaining();
  for (int t = 1; t <= T; ++t) {
    const std::vector<LinkId> act = table.action_at(t, r);
    for (LinkId l : act) s.set(l, t, 1);
    view.advance(t);
    for (LinkId l : act) {
      if (view.slot_outcome(l, t) == 1) --r[l - 1];
    }
    // Same deterministic transition the table used, so every state reached
    // here is one the table has a value for.
    table.roll_windows(t, r);
  }
  return s;
}

std::optional<LinkId> greedy_colocated_step(const std::vector<LinkId>& backlogged,
                                            const DeficitState& d,
                                            const SchedulerConfig& cfg,
                                            const std::vector<double>& cbar) {
  cfg.validate(static_cast<int>(cbar.size()));
  if (d.d.size() != cbar.size()) {
    throw InputError("deficit state / mean rates do not match");
  }
  const std::vector<double> pi = cfg.priorities(d);
  std::optional<LinkId> best;
  double best_score = 0.0;
  for (LinkId l : backlogged) {
    if (l < 1 || l > static_cast<int>(cbar.size())) {
      throw InputError("backlogged link index out of range");
    }
    const double score = pi[static_cast<std::size_t>(l - 1)] *
                         cbar[static_cast<std::size_t>(l - 1)];
    if (!best || score > best_score || (score == best_score && l < *best)) {
      best = l;
      best_score = score;
    }
  }
  return best;
}

ColocatedPolicy greedy_colocated_policy(const DeficitState& d,
                                        const SchedulerConfig& cfg,
                                        std::vector<double> cbar) {
  return [d, cfg, cbar = std::move(cbar)](const std::vector<LinkId>& backlogged,
                                          int) -> std::optional<LinkId> {
    return greedy_colocated_step(backlogged, d, cfg, cbar);
  };
}

double expected_utility(const ColocatedPolicy& policy,
                        const std::vector<LinkId>& backlogged, int slots,
                        const DeficitState& d, const SchedulerConfig& cfg,
                        const std::vector<double>& cbar) {
  cfg.validate(static_cast<int>(cbar.size()));
  if (slots < 0 || slots > 62) throw InputError("slots must lie in 0..62");
  const std::vector<double> pi = cfg.priorities(d);

  std::uint64_t mask = 0;
  for (LinkId l : backlogged) {
    if (l < 1 || l > static_cast<int>(cbar.size())) {
      throw InputError("backlogged link index out of range");
    }
    mask |= 1ull << (l - 1);
  }

  std::unordered_map<std::uint64_t, double> memo;
  std::function<double(std::uint64_t, int)> u = [&](std::uint64_t m, int j) -> double {
    if (j == 0 || m == 0) return 0.0;
    const std::uint64_t key = (m << 6) | static_cast<std::uint64_t>(j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    std::vector<LinkId> links;
    for (std::uint64_t rest = m; rest;) {
      const int l = std::countr_zero(rest);
      rest &= rest - 1;
      links.push_back(l + 1);
    }
    const std::optional<LinkId> pick = policy(links, j);
    double val = 0.0;
    if (pick.has_value()) {
      const LinkId l = *pick;
      if (l < 1 || ((m >> (l - 1)) & 1u) == 0) {
        throw InputError("policy served a link that is not backlogged");
      }
      const double c = cbar[static_cast<std::size_t>(l - 1)];
      val = pi[static_cast<std::size_t>(l - 1)] * c +
            (1.0 - c) * u(m, j - 1) + c * u(m & ~(1ull << (l - 1)), j - 1);
    } else {
      val = u(m, j - 1);
    }
    memo.emplace(key, val);
    return val;
  };
  return u(mask, slots);
}

}  // namespace framesched
