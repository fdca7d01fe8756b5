#include "support/instances.hpp"

#include <algorithm>
#include <utility>

namespace framesched::testing {
namespace {

int uniform_int(RngStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

// k probabilities, each a positive multiple of 1/8, summing to 1.
std::vector<double> eighth_probs(int k, RngStream& rng) {
  std::vector<int> counts(static_cast<std::size_t>(k), 1);
  for (int ball = k; ball < 8; ++ball) {
    ++counts[static_cast<std::size_t>(uniform_int(rng, 0, k - 1))];
  }
  std::vector<double> probs;
  for (int c : counts) probs.push_back(c / 8.0);
  return probs;
}

}  // namespace

double dyadic_weight(RngStream& rng, double max_value) {
  const int ticks = static_cast<int>(max_value * 1024.0);
  return uniform_int(rng, 0, ticks) / 1024.0;
}

InterferenceGraph random_graph(int links, double edge_prob, RngStream& rng) {
  std::vector<std::pair<LinkId, LinkId>> conflicts;
  for (LinkId a = 1; a <= links; ++a) {
    for (LinkId b = a + 1; b <= links; ++b) {
      if (rng.bernoulli(edge_prob)) conflicts.emplace_back(a, b);
    }
  }
  return InterferenceGraph(links, conflicts);
}

FrameArrivals random_arrivals(int links, int frame_length, RngStream& rng) {
  FrameArrivals a;
  a.frame_length = frame_length;
  a.windows.resize(static_cast<std::size_t>(links));
  for (int l = 0; l < links; ++l) {
    int t = 1;
    while (t <= frame_length) {
      if (!rng.bernoulli(0.7)) {
        ++t;
        continue;
      }
      int deadline = uniform_int(rng, t, frame_length);
      int count = uniform_int(rng, 1, 2);
      a.windows[static_cast<std::size_t>(l)].push_back({t, count, deadline});
      t = deadline + 1;
    }
  }
  return a;
}

ColocatedPolicyInstance random_colocated_policy_instance(RngStream& rng, int max_links,
                                                         int max_slots) {
  const int links = uniform_int(rng, 1, max_links);
  const int slots = uniform_int(rng, 1, max_slots);

  ColocatedPolicyInstance inst{
      InterferenceGraph::colocated(links), FrameArrivals{}, DeficitState::zeros(links),
      SchedulerConfig{},                   {},              {}};
  inst.arrivals.frame_length = slots;
  inst.arrivals.windows.resize(static_cast<std::size_t>(links));
  inst.sched.epsilon = 1.0;
  inst.sched.w.resize(static_cast<std::size_t>(links));
  inst.sched.p.assign(static_cast<std::size_t>(links), 0.0);
  inst.cbar.resize(static_cast<std::size_t>(links));
  for (int l = 0; l < links; ++l) {
    inst.sched.w[static_cast<std::size_t>(l)] = 10.0 * rng.uniform();
    inst.deficits.d[static_cast<std::size_t>(l)] = 10.0 * rng.uniform();
    inst.cbar[static_cast<std::size_t>(l)] = 0.1 + 0.9 * rng.uniform();
    if (rng.bernoulli(0.7)) {
      inst.backlogged.push_back(l + 1);
      inst.arrivals.windows[static_cast<std::size_t>(l)].push_back({1, 1, slots});
    }
  }
  return inst;
}

ScheduleInstance random_schedule_instance(RngStream& rng, int max_links, int max_slots) {
  const int links = uniform_int(rng, 1, max_links);
  const int slots = uniform_int(rng, 1, max_slots);
  ScheduleInstance inst{random_graph(links, 0.5, rng),
                        random_arrivals(links, slots, rng),
                        {},
                        {}};
  for (int l = 0; l < links; ++l) {
    int cap = uniform_int(rng, 0, 9);
    inst.slot_caps.push_back(cap == 0 ? 0 : (cap <= 5 ? 1 : 2));
    inst.weights.push_back(dyadic_weight(rng));
  }
  // Equal weights exercise the tie-break chain.
  if (links > 1 && rng.bernoulli(0.2)) {
    std::fill(inst.weights.begin(), inst.weights.end(), inst.weights.front());
  }
  return inst;
}

StaticProblem random_static_problem(RngStream& rng) {
  const int links = uniform_int(rng, 1, 3);
  const int frame_length = uniform_int(rng, 1, 2);
  InterferenceGraph graph = random_graph(links, 0.5, rng);

  const int arrival_points = uniform_int(rng, 1, 3);
  auto arrival_probs = eighth_probs(arrival_points, rng);
  std::vector<std::pair<FrameArrivals, double>> arrival_support;
  for (int i = 0; i < arrival_points; ++i) {
    arrival_support.emplace_back(random_arrivals(links, frame_length, rng),
                                 arrival_probs[static_cast<std::size_t>(i)]);
  }

  const int channel_points = uniform_int(rng, 1, 2);
  auto channel_probs = eighth_probs(channel_points, rng);
  std::vector<std::pair<ChannelRealization, double>> channel_support;
  for (int j = 0; j < channel_points; ++j) {
    ChannelRealization c;
    c.kind = ChannelKind::kKnown;
    c.link_count = links;
    c.frame_length = frame_length;
    for (int l = 0; l < links; ++l) c.frame_rates.push_back(uniform_int(rng, 0, 2));
    channel_support.emplace_back(std::move(c), channel_probs[static_cast<std::size_t>(j)]);
  }

  SchedulerConfig cfg;
  cfg.epsilon = 0.05;
  for (int l = 0; l < links; ++l) {
    cfg.w.push_back(dyadic_weight(rng));
    cfg.p.push_back(0.3 + 0.6 * rng.uniform());
  }
  return StaticProblem(std::move(graph), std::move(arrival_support),
                       std::move(channel_support),
                       std::vector<double>(static_cast<std::size_t>(links), 1.0),
                       std::move(cfg));
}

}  // namespace framesched::testing
