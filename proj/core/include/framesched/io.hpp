#pragma once

#include <string>
#include <vector>

#include "framesched/sim.hpp"
#include "framesched/static_solver.hpp"

namespace framesched {

/// Per-link run summary (arrivals, deliveries, drop probability, deficits).
void write_summary_csv(const std::string& path, const ExperimentConfig& config,
                       const Metrics& metrics);

/// Sampled deficit trajectory: frame, sum of deficits, quadratic potential,
/// one column per link.
void write_trajectory_csv(const std::string& path, const Metrics& metrics);

/// One row per epsilon of a sweep.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Dual trajectory of a static benchmark run.
void write_static_csv(const std::string& path, const StaticResult& result);

/// Human-readable run report, also used by the CLI's stdout.
std::string summary_text(const ExperimentConfig& config, const Metrics& metrics);

}  // namespace framesched
