#include "framesched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>

namespace framesched {

const char* to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kMaxWeight: return "max_weight";
    case SchedulerKind::kPerSlotDp: return "per_slot_dp";
    case SchedulerKind::kGreedyColocated: return "greedy_colocated";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  const int links = graph.link_count();
  if (arrivals.link_count() != links) {
    throw InputError("config: arrival model covers " +
                     std::to_string(arrivals.link_count()) + " links, graph has " +
                     std::to_string(links));
  }
  if (channel.link_count() != links) {
    throw InputError("config: channel model covers " +
                     std::to_string(channel.link_count()) + " links, graph has " +
                     std::to_string(links));
  }
  sched.validate(links);
  if (frames < 0) throw InputError("config: frames must be >= 0");
  if (trajectory_samples < 0) throw InputError("config: trajectory_samples must be >= 0");
  if (static_support_limit < 1) throw InputError("config: static_support_limit must be >= 1");
  if (static_iterations < 1) throw InputError("config: static_iterations must be >= 1");

  switch (scheduler) {
    case SchedulerKind::kMaxWeight:
      if (channel.kind() == ChannelKind::kUnknownPerSlot) {
        throw InputError(
            "config: the frame scheduler decides whole frames and cannot use "
            "per-slot feedback; pick the per_slot_dp scheduler");
      }
      break;
    case SchedulerKind::kPerSlotDp:
      if (channel.kind() != ChannelKind::kUnknownPerSlot) {
        throw InputError("config: the per_slot_dp scheduler requires a per_slot channel");
      }
      break;
    case SchedulerKind::kGreedyColocated:
      if (channel.kind() != ChannelKind::kUnknownPerSlot) {
        throw InputError("config: the greedy_colocated scheduler requires a per_slot channel");
      }
      if (!is_colocated(graph)) {
        throw InputError(
            "config: the greedy_colocated scheduler assumes every pair of links "
            "interferes");
      }
      if (!arrivals.frame_start_binary()) {
        throw InputError(
            "config: the greedy_colocated scheduler assumes at most one "
            "frame-start packet per link per frame");
      }
      break;
  }
}

std::vector<std::string> ExperimentConfig::warnings() const {
  return arrivals.assumption_warnings();
}

namespace {

// One-link-per-slot policy: serve the highest-priority backlogged link, learn
// the ACK, retry on failure while the window is still open.
Schedule run_greedy_frame(const FrameArrivals& a, const ChannelRealization& c,
                          const DeficitState& d, const SchedulerConfig& cfg,
                          const std::vector<double>& cbar) {
  const int links = a.link_count();
  const int frame_length = a.frame_length;
  Schedule s(links, frame_length);
  std::vector<int> remaining(static_cast<std::size_t>(links), 0);
  for (LinkId l = 1; l <= links; ++l) remaining[l - 1] = a.total(l);

  ChannelView view(c, 0);
  std::vector<LinkId> backlogged;
  for (int t = 1; t <= frame_length; ++t) {
    backlogged.clear();
    for (LinkId l = 1; l <= links; ++l) {
      if (remaining[l - 1] > 0 && a.window_at(l, t) != nullptr) backlogged.push_back(l);
    }
    const std::optional<LinkId> pick = greedy_colocated_step(backlogged, d, cfg, cbar);
    if (pick) s.set(*pick, t, 1);
    view.advance(t);
    if (pick && view.slot_outcome(*pick, t) == 1) --remaining[*pick - 1];
  }
  return s;
}

Schedule decide_schedule(SimState& state, const ExperimentConfig& config,
                         const FrameArrivals& a, const ChannelRealization& c) {
  switch (config.scheduler) {
    case SchedulerKind::kMaxWeight:
      if (config.channel.kind() == ChannelKind::kKnown) {
        return max_weight_schedule_known(a, c, state.deficits, config.sched, config.graph);
      }
      return max_weight_schedule_perframe(a, state.deficits, config.sched,
                                          config.channel.mean_rates(), config.graph);
    case SchedulerKind::kPerSlotDp: {
      PolicyTable table = optimal_policy_value(a, state.deficits, config.sched,
                                               config.channel.mean_rates(), config.graph);
      return policy_schedule(table, a, c, config.graph);
    }
    case SchedulerKind::kGreedyColocated:
      return run_greedy_frame(a, c, state.deficits, config.sched,
                              config.channel.mean_rates());
  }
  throw InputError("config: unknown scheduler");
}

}  // namespace

FrameRecord run_frame(SimState& state, const ExperimentConfig& config) {
  const int links = config.graph.link_count();
  FrameRecord rec;
  rec.arrivals = generate_frame(config.arrivals, state.arrival_rng);
  rec.channel =
      sample_channel(config.channel, config.arrivals.frame_length(), state.channel_rng);
  rec.schedule = decide_schedule(state, config, rec.arrivals, rec.channel);
  rec.delivered = served_count(rec.schedule, rec.channel, PerFrameDeficitMode::kSuccesses);
  rec.credited = served_count(rec.schedule, rec.channel, config.sched.perframe_deficit);
  rec.thinned.resize(static_cast<std::size_t>(links));
  for (LinkId l = 1; l <= links; ++l) {
    rec.thinned[l - 1] =
        thin(rec.arrivals.total(l), config.sched.p[l - 1], state.thinning_rng);
  }
  state.deficits = deficit_update(state.deficits, rec.thinned, rec.credited);
  ++state.frame_index;
  return rec;
}

Metrics run_simulation(const ExperimentConfig& config) {
  config.validate();
  const int links = config.graph.link_count();
  const long long total = config.frames;
  const long long steady_start = total / 2;  // 0-based; first half is burn-in
  const long long steady_count = total - steady_start;
  const long long stride =
      config.trajectory_samples > 0
          ? std::max<long long>(1, total / config.trajectory_samples)
          : 0;
  constexpr int kBatches = 20;

  SimState state(config);
  Metrics m;
  m.frames = total;
  m.links.assign(static_cast<std::size_t>(links), LinkMetrics{});
  if (total == 0) return m;

  std::vector<double> deficit_sum(static_cast<std::size_t>(links), 0.0);
  double steady_obj_sum = 0.0;
  double steady_def_sum = 0.0;
  std::vector<double> batch_sum(kBatches, 0.0);
  std::vector<long long> batch_len(kBatches, 0);

  for (long long k = 0; k < total; ++k) {
    const FrameRecord rec = run_frame(state, config);
    double frame_obj = 0.0;
    double sum_d = 0.0;
    double sum_d2 = 0.0;
    for (int i = 0; i < links; ++i) {
      LinkMetrics& lm = m.links[static_cast<std::size_t>(i)];
      lm.arrived += rec.arrivals.total(i + 1);
      lm.delivered += rec.delivered[static_cast<std::size_t>(i)];
      lm.credited += rec.credited[static_cast<std::size_t>(i)];
      const double d = state.deficits.d[static_cast<std::size_t>(i)];
      deficit_sum[static_cast<std::size_t>(i)] += d;
      sum_d += d;
      sum_d2 += d * d;
      frame_obj += config.sched.w[static_cast<std::size_t>(i)] *
                   rec.credited[static_cast<std::size_t>(i)];
    }
    if (k >= steady_start) {
      steady_obj_sum += frame_obj;
      steady_def_sum += sum_d;
      const int b = static_cast<int>((k - steady_start) * kBatches / steady_count);
      batch_sum[static_cast<std::size_t>(b)] += frame_obj;
      ++batch_len[static_cast<std::size_t>(b)];
    }
    if (stride > 0 && ((k + 1) % stride == 0 || k + 1 == total)) {
      m.trajectory.push_back({k + 1, sum_d, 0.5 * sum_d2, state.deficits.d});
    }
  }

  for (int i = 0; i < links; ++i) {
    LinkMetrics& lm = m.links[static_cast<std::size_t>(i)];
    lm.avg_service = static_cast<double>(lm.credited) / static_cast<double>(total);
    lm.drop_probability =
        lm.arrived > 0
            ? 1.0 - static_cast<double>(lm.delivered) / static_cast<double>(lm.arrived)
            : 0.0;
    lm.avg_deficit = deficit_sum[static_cast<std::size_t>(i)] / static_cast<double>(total);
    lm.final_deficit = state.deficits.d[static_cast<std::size_t>(i)];
    m.objective += config.sched.w[static_cast<std::size_t>(i)] * lm.avg_service;
  }
  m.steady_objective = steady_obj_sum / static_cast<double>(steady_count);
  m.steady_sum_deficit = steady_def_sum / static_cast<double>(steady_count);

  std::vector<double> batch_means;
  for (int b = 0; b < kBatches; ++b) {
    if (batch_len[static_cast<std::size_t>(b)] > 0) {
      batch_means.push_back(batch_sum[static_cast<std::size_t>(b)] /
                            static_cast<double>(batch_len[static_cast<std::size_t>(b)]));
    }
  }
  if (batch_means.size() >= 2) {
    const double n = static_cast<double>(batch_means.size());
    const double grand =
        std::accumulate(batch_means.begin(), batch_means.end(), 0.0) / n;
    double var = 0.0;
    for (double bm : batch_means) var += (bm - grand) * (bm - grand);
    var /= n - 1.0;
    m.steady_objective_stderr = std::sqrt(var / n);
  }
  return m;
}

StaticProblem build_static_problem(const ExperimentConfig& config) {
  config.validate();
  if (config.channel.kind() == ChannelKind::kUnknownPerSlot) {
    throw InputError(
        "static benchmark: per-slot feedback has no frame-schedule benchmark; "
        "use a known or per_frame channel");
  }
  const int links = config.graph.link_count();
  const int frame_length = config.arrivals.frame_length();
  const double limit = static_cast<double>(config.static_support_limit);

  struct WindowCell {
    int link = 0;  // 0-based
    const WindowSpec* spec = nullptr;
  };
  std::vector<WindowCell> cells;
  double arrival_points = 1.0;
  for (int i = 0; i < links; ++i) {
    for (const WindowSpec& w : config.arrivals.windows(i + 1)) {
      cells.push_back({i, &w});
      arrival_points *= static_cast<double>(w.count.values().size());
    }
  }
  double channel_points = 1.0;
  if (config.channel.kind() == ChannelKind::kKnown) {
    for (const DiscreteDistribution& dist : config.channel.rate_distributions()) {
      channel_points *= static_cast<double>(dist.values().size());
    }
  }
  if (arrival_points * channel_points > limit) {
    throw CapacityError("static benchmark: support product needs " +
                        std::to_string(arrival_points * channel_points) +
                        " points, limit is " +
                        std::to_string(config.static_support_limit));
  }

  std::vector<std::pair<FrameArrivals, double>> arrival_support;
  std::vector<std::size_t> idx(cells.size(), 0);
  while (true) {
    FrameArrivals fa;
    fa.frame_length = frame_length;
    fa.windows.assign(static_cast<std::size_t>(links), {});
    double prob = 1.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const DiscreteDistribution& dist = cells[i].spec->count;
      const int v = dist.values()[idx[i]];
      prob *= dist.probs()[idx[i]];
      if (v > 0) {
        fa.windows[static_cast<std::size_t>(cells[i].link)].push_back(
            {cells[i].spec->slot, v, cells[i].spec->deadline});
      }
    }
    if (prob > 0.0) arrival_support.emplace_back(std::move(fa), prob);
    std::size_t i = 0;
    for (; i < cells.size(); ++i) {
      if (++idx[i] < cells[i].spec->count.values().size()) break;
      idx[i] = 0;
    }
    if (i == cells.size()) break;
  }

  std::vector<std::pair<ChannelRealization, double>> channel_support;
  std::vector<double> scale(static_cast<std::size_t>(links), 1.0);
  if (config.channel.kind() == ChannelKind::kKnown) {
    const std::vector<DiscreteDistribution>& dists = config.channel.rate_distributions();
    std::vector<std::size_t> cidx(static_cast<std::size_t>(links), 0);
    while (true) {
      ChannelRealization c;
      c.kind = ChannelKind::kKnown;
      c.link_count = links;
      c.frame_length = frame_length;
      c.frame_rates.resize(static_cast<std::size_t>(links));
      double prob = 1.0;
      for (int i = 0; i < links; ++i) {
        c.frame_rates[static_cast<std::size_t>(i)] =
            dists[static_cast<std::size_t>(i)].values()[cidx[static_cast<std::size_t>(i)]];
        prob *= dists[static_cast<std::size_t>(i)].probs()[cidx[static_cast<std::size_t>(i)]];
      }
      if (prob > 0.0) channel_support.emplace_back(std::move(c), prob);
      int i = 0;
      for (; i < links; ++i) {
        if (++cidx[static_cast<std::size_t>(i)] <
            dists[static_cast<std::size_t>(i)].values().size())
          break;
        cidx[static_cast<std::size_t>(i)] = 0;
      }
      if (i == links) break;
    }
  } else {
    // Blind per-frame operation serves at most one attempt per slot and a
    // fraction cbar_l of attempts lands: same capacity region as unit slot
    // caps with service scaled by the mean rate.
    ChannelRealization c;
    c.kind = ChannelKind::kKnown;
    c.link_count = links;
    c.frame_length = frame_length;
    c.frame_rates.assign(static_cast<std::size_t>(links), 1);
    channel_support.emplace_back(std::move(c), 1.0);
    scale = config.channel.mean_rates();
  }

  return StaticProblem(config.graph, std::move(arrival_support),
                       std::move(channel_support), std::move(scale), config.sched,
                       config.static_support_limit);
}

std::vector<SweepRow> sweep_epsilon(const ExperimentConfig& base,
                                    const std::vector<double>& epsilons) {
  base.validate();
  if (epsilons.empty()) throw InputError("sweep: need at least one epsilon");
  std::vector<SweepRow> rows;
  rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    ExperimentConfig cfg = base;
    cfg.sched.epsilon = eps;  // SchedulerConfig::validate rejects eps <= 0
    const Metrics m = run_simulation(cfg);
    const StaticProblem problem = build_static_problem(cfg);
    const StaticResult st =
        solve_static(problem, cfg.static_iterations, 0,
                     std::max<long long>(1, cfg.static_iterations / 100));
    SweepRow row;
    row.epsilon = eps;
    row.objective = m.objective;
    row.steady_objective = m.steady_objective;
    row.steady_objective_stderr = m.steady_objective_stderr;
    row.steady_sum_deficit = m.steady_sum_deficit;
    row.static_objective = st.objective;
    row.static_infeasible = st.likely_infeasible;
    row.gap = st.objective - m.steady_objective;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ModelComparison> compare_channel_models(const ExperimentConfig& base) {
  base.validate();
  const std::vector<double>& cbar = base.channel.mean_rates();
  if (base.channel.kind() == ChannelKind::kKnown) {
    for (const DiscreteDistribution& dist : base.channel.rate_distributions()) {
      if (dist.max_value() > 1) {
        throw InputError("model comparison: needs on/off channels on every link");
      }
    }
  }

  std::vector<DiscreteDistribution> on_off;
  on_off.reserve(cbar.size());
  for (double c : cbar) on_off.push_back(DiscreteDistribution::bernoulli(c));

  struct Variant {
    ChannelModel channel;
    SchedulerKind scheduler;
    PerFrameDeficitMode mode;
  };
  const std::vector<Variant> variants = {
      {ChannelModel::known(on_off), SchedulerKind::kMaxWeight,
       PerFrameDeficitMode::kAttempts},
      {ChannelModel::unknown_per_frame(cbar), SchedulerKind::kMaxWeight,
       PerFrameDeficitMode::kAttempts},
      {ChannelModel::unknown_per_frame(cbar), SchedulerKind::kMaxWeight,
       PerFrameDeficitMode::kSuccesses},
      {ChannelModel::unknown_per_slot(cbar), SchedulerKind::kPerSlotDp,
       PerFrameDeficitMode::kAttempts},
  };

  std::vector<ModelComparison> out;
  out.reserve(variants.size());
  for (const Variant& v : variants) {
    ExperimentConfig cfg = base;
    cfg.channel = v.channel;
    cfg.scheduler = v.scheduler;
    cfg.sched.perframe_deficit = v.mode;
    ModelComparison mc;
    mc.kind = v.channel.kind();
    mc.perframe_mode = v.mode;
    mc.metrics = run_simulation(cfg);
    out.push_back(std::move(mc));
  }
  return out;
}

}  // namespace framesched
