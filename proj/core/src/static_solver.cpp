#include "framesched/static_solver.hpp"

#include <algorithm>
#include <cmath>

namespace framesched {

namespace {

constexpr double kInfeasibleSlopePerStep = 0.01;

void check_support_probs(double total, const char* what) {
  if (std::abs(total - 1.0) > 1e-9) {
    throw InputError(std::string(what) + " probabilities must sum to 1");
  }
}

}  // namespace

StaticProblem::StaticProblem(
    InterferenceGraph graph,
    std::vector<std::pair<FrameArrivals, double>> arrival_support,
    std::vector<std::pair<ChannelRealization, double>> channel_support,
    std::vector<double> service_scale, SchedulerConfig cfg, long long support_limit)
    : graph_(std::move(graph)), arrival_support_(std::move(arrival_support)),
      channel_support_(std::move(channel_support)),
      service_scale_(std::move(service_scale)), cfg_(std::move(cfg)) {
  const int L = graph_.link_count();
  cfg_.validate(L);
  if (arrival_support_.empty() || channel_support_.empty()) {
    throw InputError("static problem needs non-empty supports");
  }
  if (support_limit < 1) throw InputError("support_limit must be >= 1");
  const long long solves = static_cast<long long>(arrival_support_.size()) *
                           static_cast<long long>(channel_support_.size());
  if (solves > support_limit) {
    throw CapacityError("static supports need " + std::to_string(solves) +
                        " schedule solves per step, above the limit of " +
                        std::to_string(support_limit));
  }
  if (service_scale_.size() != static_cast<std::size_t>(L)) {
    throw InputError("service_scale must carry one entry per link");
  }
  for (double s : service_scale_) {
    if (s < 0.0 || s > 1.0) throw InputError("service_scale entries must lie in [0, 1]");
  }

  frame_length_ = arrival_support_.front().first.frame_length;
  double pa_total = 0.0;
  lambda_.assign(static_cast<std::size_t>(L), 0.0);
  for (const auto& [a, pa] : arrival_support_) {
    if (pa < 0.0) throw InputError("support probabilities must be >= 0");
    if (a.link_count() != L || a.frame_length != frame_length_) {
      throw InputError("arrival support dimensions disagree");
    }
    pa_total += pa;
    for (LinkId l = 1; l <= L; ++l) {
      lambda_[static_cast<std::size_t>(l - 1)] += pa * a.total(l);
    }
  }
  check_support_probs(pa_total, "arrival support");

  double pc_total = 0.0;
  for (const auto& [c, pc] : channel_support_) {
    if (pc < 0.0) throw InputError("support probabilities must be >= 0");
    if (c.kind != ChannelKind::kKnown || c.link_count != L ||
        c.frame_length != frame_length_) {
      throw InputError("channel support must hold known-state realizations of "
                       "matching dimensions");
    }
    pc_total += pc;
  }
  check_support_probs(pc_total, "channel support");
}

std::vector<double> StaticProblem::required_rates() const {
  std::vector<double> g(lambda_.size());
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    g[i] = lambda_[i] * (1.0 - cfg_.p[i]);
  }
  return g;
}

void subgradient_step(const StaticProblem& problem, DualIterate& iterate) {
  const int L = problem.link_count();
  if (iterate.d_hat.size() != static_cast<std::size_t>(L)) {
    throw InputError("dual iterate does not match the link count");
  }

  std::vector<double> weights(static_cast<std::size_t>(L));
  const SchedulerConfig& cfg = problem.config();
  for (int l = 0; l < L; ++l) {
    weights[l] = (cfg.w[l] / cfg.epsilon + iterate.d_hat[l]) *
                 problem.service_scale()[l];
  }

  std::vector<double> mu(static_cast<std::size_t>(L), 0.0);
  for (const auto& [a, pa] : problem.arrival_support()) {
    for (const auto& [c, pc] : problem.channel_support()) {
      const Schedule s = max_weight_schedule(a, c.frame_rates, weights,
                                             problem.graph(),
                                             cfg.search_node_limit);
      const double pr = pa * pc;
      for (int l = 0; l < L; ++l) {
        mu[l] += pr * problem.service_scale()[l] * s.link_total(l + 1);
      }
    }
  }

  const std::vector<double> g = problem.required_rates();
  for (int l = 0; l < L; ++l) {
    iterate.d_hat[l] = std::max(iterate.d_hat[l] + g[l] - mu[l], 0.0);
  }
  iterate.mu_star = std::move(mu);
}

StaticResult solve_static(const StaticProblem& problem, long long iterations,
                          long long avg_window, long long trajectory_stride) {
  if (iterations < 1) throw InputError("iterations must be >= 1");
  if (avg_window < 0 || avg_window > iterations) {
    throw InputError("avg_window must lie in 0..iterations");
  }
  if (avg_window == 0) avg_window = std::max<long long>(1, iterations / 2);
  if (trajectory_stride < 1) throw InputError("trajectory_stride must be >= 1");

  const int L = problem.link_count();
  DualIterate iterate;
  iterate.d_hat.assign(static_cast<std::size_t>(L), 0.0);

  StaticResult result;
  std::vector<double> mu_sum(static_cast<std::size_t>(L), 0.0);
  // (k, min_l d_hat_l) samples of the tail window, for the divergence test.
  std::vector<std::pair<double, double>> slope_pts;

  for (long long k = 1; k <= iterations; ++k) {
    subgradient_step(problem, iterate);
    if (k > iterations - avg_window) {
      for (int l = 0; l < L; ++l) mu_sum[l] += iterate.mu_star[l];
    }
    if (k > iterations / 2) {
      const double dmin =
          *std::min_element(iterate.d_hat.begin(), iterate.d_hat.end());
      slope_pts.emplace_back(static_cast<double>(k), dmin);
    }
    if ((k - 1) % trajectory_stride == 0 || k == iterations) {
      double obj = 0.0;
      for (int l = 0; l < L; ++l) obj += problem.config().w[l] * iterate.mu_star[l];
      result.trajectory.push_back({k, iterate.d_hat, iterate.mu_star, obj});
    }
  }

  result.mu_avg.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    result.mu_avg[l] = mu_sum[l] / static_cast<double>(avg_window);
    result.objective += problem.config().w[l] * result.mu_avg[l];
  }

  if (slope_pts.size() >= 2) {
    double mean_k = 0.0, mean_d = 0.0;
    for (const auto& [k, v] : slope_pts) {
      mean_k += k;
      mean_d += v;
    }
    mean_k /= static_cast<double>(slope_pts.size());
    mean_d /= static_cast<double>(slope_pts.size());
    double num = 0.0, den = 0.0;
    for (const auto& [k, v] : slope_pts) {
      num += (k - mean_k) * (v - mean_d);
      den += (k - mean_k) * (k - mean_k);
    }
    result.min_deficit_slope = (den > 0.0) ? num / den : 0.0;
  }
  result.likely_infeasible = result.min_deficit_slope > kInfeasibleSlopePerStep;
  return result;
}

}  // namespace framesched
