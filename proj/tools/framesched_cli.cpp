// Command-line front end: run simulations, epsilon sweeps, channel-model
// comparisons, greedy-vs-optimal checks and the static benchmark from a JSON
// experiment file.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framesched/config.hpp"
#include "framesched/io.hpp"
#include "framesched/policy.hpp"
#include "framesched/rng.hpp"
#include "framesched/sim.hpp"

namespace {

using namespace framesched;

struct CommonArgs {
  std::string config_path;
  std::optional<long long> frames;
  std::optional<long long> seed;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool with_overrides = true) {
  cmd->add_option("config", args->config_path, "experiment JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  if (with_overrides) {
    cmd->add_option("--frames", args->frames, "override the frame count");
    cmd->add_option("--seed", args->seed, "override the rng seed");
  }
  cmd->add_option("-o,--out-dir", args->out_dir, "write CSV outputs into this directory");
}

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig config = load_experiment_config(args.config_path);
  if (args.frames) config.frames = *args.frames;
  if (args.seed) config.seed = static_cast<std::uint64_t>(*args.seed);
  config.validate();
  return config;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

int cmd_simulate(const CommonArgs& args) {
  const ExperimentConfig config = load(args);
  const Metrics metrics = run_simulation(config);
  std::cout << summary_text(config, metrics);
  if (!args.out_dir.empty()) {
    write_summary_csv(out_path(args.out_dir, "summary.csv"), config, metrics);
    write_trajectory_csv(out_path(args.out_dir, "trajectory.csv"), metrics);
    std::cout << "wrote " << args.out_dir << "/summary.csv and trajectory.csv\n";
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::vector<double>& epsilons) {
  const ExperimentConfig config = load(args);
  const std::vector<SweepRow> rows = sweep_epsilon(config, epsilons);
  std::printf("%10s %14s %14s %14s %14s %6s\n", "epsilon", "steady_obj", "static_obj",
              "gap", "sum_deficit", "infeas");
  for (const SweepRow& r : rows) {
    std::printf("%10.5g %14.6f %14.6f %14.6f %14.4f %6s\n", r.epsilon,
                r.steady_objective, r.static_objective, r.gap, r.steady_sum_deficit,
                r.static_infeasible ? "yes" : "no");
  }
  if (!args.out_dir.empty()) {
    write_sweep_csv(out_path(args.out_dir, "sweep.csv"), rows);
    std::cout << "wrote " << args.out_dir << "/sweep.csv\n";
  }
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const ExperimentConfig config = load(args);
  const std::vector<ModelComparison> results = compare_channel_models(config);
  for (const ModelComparison& mc : results) {
    std::string name = to_string(mc.kind);
    if (mc.kind == ChannelKind::kUnknownPerFrame) {
      name += std::string("/") + to_string(mc.perframe_mode);
    }
    std::printf("== %s ==\n", name.c_str());
    double worst_drop = 0.0;
    for (const LinkMetrics& lm : mc.metrics.links) {
      worst_drop = std::max(worst_drop, lm.drop_probability);
    }
    std::printf("objective %.6f, worst drop %.4f\n", mc.metrics.objective, worst_drop);
    if (!args.out_dir.empty()) {
      std::string file = "summary_" + std::string(to_string(mc.kind));
      if (mc.kind == ChannelKind::kUnknownPerFrame) {
        file += std::string("_") + to_string(mc.perframe_mode);
      }
      file += ".csv";
      ExperimentConfig variant = config;  // for the per-link context columns
      variant.sched.perframe_deficit = mc.perframe_mode;
      write_summary_csv(out_path(args.out_dir, file), variant, mc.metrics);
    }
  }
  if (!args.out_dir.empty()) std::cout << "wrote per-model summaries to " << args.out_dir << "\n";
  return 0;
}

int cmd_verify_greedy(const CommonArgs& args, int trials, double tolerance) {
  const ExperimentConfig config = load(args);
  if (config.scheduler != SchedulerKind::kGreedyColocated) {
    throw InputError("verify-greedy: the config must use the greedy_colocated scheduler");
  }
  const int links = config.graph.link_count();
  const int frame_length = config.arrivals.frame_length();
  const std::vector<double>& cbar = config.channel.mean_rates();

  RngStream rng(config.seed, "verify-greedy");
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    DeficitState d = DeficitState::zeros(links);
    std::vector<LinkId> backlogged;
    for (int i = 0; i < links; ++i) {
      d.d[static_cast<std::size_t>(i)] = 10.0 * rng.uniform();
      if (rng.uniform() < 0.5) backlogged.push_back(i + 1);
    }
    FrameArrivals fa;
    fa.frame_length = frame_length;
    fa.windows.assign(static_cast<std::size_t>(links), {});
    for (LinkId l : backlogged) {
      fa.windows[static_cast<std::size_t>(l - 1)].push_back({1, 1, frame_length});
    }
    PolicyTable table(fa, d, config.sched, cbar, config.graph);
    const double optimal = table.value();
    const double greedy =
        expected_utility(greedy_colocated_policy(d, config.sched, cbar), backlogged,
                         frame_length, d, config.sched, cbar);
    worst = std::max(worst, std::abs(optimal - greedy));
  }
  std::printf("verify-greedy: %d trials, %d links, %d slots, max |optimal - greedy| = %.3g\n",
              trials, links, frame_length, worst);
  if (worst > tolerance) {
    std::printf("FAIL: exceeds tolerance %.3g\n", tolerance);
    return 1;
  }
  std::printf("OK (tolerance %.3g)\n", tolerance);
  return 0;
}

int cmd_static(const CommonArgs& args, long long iterations) {
  const ExperimentConfig config = load(args);
  const StaticProblem problem = build_static_problem(config);
  const long long iters = iterations > 0 ? iterations : config.static_iterations;
  const StaticResult result =
      solve_static(problem, iters, 0, std::max<long long>(1, iters / 1000));
  std::printf("static benchmark: %lld dual steps, objective %.6f%s\n", iters,
              result.objective, result.likely_infeasible ? " (LIKELY INFEASIBLE)" : "");
  std::printf("  (service vector recovered by averaging the per-step maximizers "
              "over the last %lld steps)\n",
              std::max<long long>(1, iters / 2));
  const std::vector<double> required = problem.required_rates();
  for (int i = 0; i < problem.link_count(); ++i) {
    std::printf("  link %d: service %.6f, required %.6f\n", i + 1,
                result.mu_avg[static_cast<std::size_t>(i)],
                required[static_cast<std::size_t>(i)]);
  }
  if (result.likely_infeasible) {
    std::printf("  min multiplier still grows %.3g per step; QoS targets look unreachable\n",
                result.min_deficit_slope);
  }
  if (!args.out_dir.empty()) {
    write_static_csv(out_path(args.out_dir, "static.csv"), result);
    std::cout << "wrote " << args.out_dir << "/static.csv\n";
  }
  return result.likely_infeasible ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame-based wireless scheduling with per-link loss tolerances"};
  app.require_subcommand(1);

  CommonArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "run one experiment");
  add_common(simulate, &sim_args);

  CommonArgs sweep_args;
  std::vector<double> epsilons;
  CLI::App* sweep = app.add_subcommand("sweep-epsilon", "rerun across epsilon values");
  add_common(sweep, &sweep_args);
  sweep->add_option("-e,--epsilons", epsilons, "epsilon values to sweep")
      ->required()
      ->delimiter(',');

  CommonArgs cmp_args;
  CLI::App* compare = app.add_subcommand(
      "compare-models", "same traffic under known, per-frame and per-slot channels");
  add_common(compare, &cmp_args);

  CommonArgs greedy_args;
  int trials = 200;
  double tolerance = 1e-9;
  CLI::App* verify = app.add_subcommand(
      "verify-greedy", "check the greedy colocated policy against the optimal policy");
  add_common(verify, &greedy_args, /*with_overrides=*/false);
  verify->add_option("--seed", greedy_args.seed, "override the rng seed");
  verify->add_option("--trials", trials, "random deficit/backlog draws")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", tolerance, "max allowed utility difference");

  CommonArgs static_args;
  long long iterations = 0;
  CLI::App* stat = app.add_subcommand("static-opt", "solve the static service benchmark");
  add_common(stat, &static_args, /*with_overrides=*/false);
  stat->add_option("--iterations", iterations, "dual steps (default from config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args, epsilons);
    if (compare->parsed()) return cmd_compare(cmp_args);
    if (verify->parsed()) return cmd_verify_greedy(greedy_args, trials, tolerance);
    if (stat->parsed()) return cmd_static(static_args, iterations);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
