#include "framesched/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace framesched {
namespace {

/// Shortest decimal that round-trips a double.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lf", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_summary_csv(const std::string& path, const ExperimentConfig& config,
                       const Metrics& metrics) {
  std::ofstream out = open_out(path);
  out << "link,arrived,delivered,credited,avg_service,drop_probability,"
         "avg_deficit,final_deficit,mean_arrivals,required_rate,w,loss_tolerance\n";
  for (int i = 0; i < static_cast<int>(metrics.links.size()); ++i) {
    const LinkMetrics& lm = metrics.links[static_cast<std::size_t>(i)];
    const double lambda = config.arrivals.mean(i + 1);
    const double p = config.sched.p[static_cast<std::size_t>(i)];
    out << (i + 1) << ',' << lm.arrived << ',' << lm.delivered << ',' << lm.credited
        << ',' << num(lm.avg_service) << ',' << num(lm.drop_probability) << ','
        << num(lm.avg_deficit) << ',' << num(lm.final_deficit) << ',' << num(lambda)
        << ',' << num(lambda * (1.0 - p)) << ','
        << num(config.sched.w[static_cast<std::size_t>(i)]) << ',' << num(p) << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Metrics& metrics) {
  std::ofstream out = open_out(path);
  const int links = static_cast<int>(metrics.links.size());
  out << "frame,sum_deficit,lyapunov";
  for (int i = 1; i <= links; ++i) out << ",deficit_" << i;
  out << '\n';
  for (const TrajectorySample& s : metrics.trajectory) {
    out << s.frame << ',' << num(s.sum_deficit) << ',' << num(s.lyapunov);
    for (double d : s.deficits) out << ',' << num(d);
    out << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out = open_out(path);
  out << "epsilon,objective,steady_objective,steady_objective_stderr,"
         "steady_sum_deficit,static_objective,static_infeasible,gap\n";
  for (const SweepRow& r : rows) {
    out << num(r.epsilon) << ',' << num(r.objective) << ',' << num(r.steady_objective)
        << ',' << num(r.steady_objective_stderr) << ',' << num(r.steady_sum_deficit)
        << ',' << num(r.static_objective) << ',' << (r.static_infeasible ? 1 : 0) << ','
        << num(r.gap) << '\n';
  }
}

void write_static_csv(const std::string& path, const StaticResult& result) {
  std::ofstream out = open_out(path);
  const int links = result.trajectory.empty()
                        ? static_cast<int>(result.mu_avg.size())
                        : static_cast<int>(result.trajectory.front().d_hat.size());
  out << "k";
  for (int i = 1; i <= links; ++i) out << ",d_hat_" << i;
  for (int i = 1; i <= links; ++i) out << ",mu_star_" << i;
  out << ",objective\n";
  for (const StaticIterRecord& rec : result.trajectory) {
    out << rec.k;
    for (double d : rec.d_hat) out << ',' << num(d);
    for (double mu : rec.mu_star) out << ',' << num(mu);
    out << ',' << num(rec.objective) << '\n';
  }
}

std::string summary_text(const ExperimentConfig& config, const Metrics& metrics) {
  std::ostringstream out;
  out << "frames " << metrics.frames << ", seed " << config.seed << ", scheduler "
      << to_string(config.scheduler) << ", channel " << to_string(config.channel.kind());
  if (config.channel.kind() == ChannelKind::kUnknownPerFrame) {
    out << " (deficit: " << to_string(config.sched.perframe_deficit) << ")";
  }
  out << "\n";
  out << "objective sum_l w_l*service = " << num(metrics.objective)
      << "   steady (last half) = " << num(metrics.steady_objective) << " +/- "
      << num(metrics.steady_objective_stderr) << "\n";
  out << "steady sum of deficits = " << num(metrics.steady_sum_deficit) << "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%4s %10s %10s %9s %9s %9s %9s\n", "link",
                "arrived", "delivered", "drop", "required", "service", "deficit");
  out << line;
  for (int i = 0; i < static_cast<int>(metrics.links.size()); ++i) {
    const LinkMetrics& lm = metrics.links[static_cast<std::size_t>(i)];
    const double lambda = config.arrivals.mean(i + 1);
    const double required = lambda * (1.0 - config.sched.p[static_cast<std::size_t>(i)]);
    std::snprintf(line, sizeof(line), "%4d %10lld %10lld %9.4f %9.4f %9.4f %9.4f\n",
                  i + 1, lm.arrived, lm.delivered, lm.drop_probability, required,
                  lm.avg_service, lm.avg_deficit);
    out << line;
  }
  for (const std::string& w : config.warnings()) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace framesched
