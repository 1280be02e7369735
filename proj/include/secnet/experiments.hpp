#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "secnet/network_model.hpp"

// Experiment driver: seeded Monte Carlo sweeps over the solvers, CSV/JSON
// emission, and the sampling-based verification suites behind the
// verify-bounds / verify-outage commands.

namespace secnet {

struct ExperimentConfig {
  std::string scenario = "perfect";          // perfect | partial | robust
  std::string objective = "maximin-secrecy"; // maximin-secrecy | see | maximin-see
  int links = 10;
  int trials = 50;
  std::uint64_t master_seed = 1;
  std::string sweep_param;                   // "P" | "c" | "" (single point)
  std::vector<double> sweep_values;          // mW for P, bps/Hz for c

  double budget_mw = 20.0;
  double zeta = 2.5;
  double circuit_mw = 5.0;
  double qos_bps_hz = 0.0;
  double eps_ev = 0.1;
  double eps_c = 0.1;
  double delta = 0.1;

  double eps_tol = 1e-4;
  double eps_b = 1e-9;
  double solver_tol = 1e-7;
};

/// Parses and validates a JSON config; schema errors name the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

struct TrialResult {
  double sweep_value = 0.0;
  int trial = 0;
  double objective = 0.0;    // bps/Hz (secrecy) or bits/mJ (EE)
  int iterations = 0;
  double power_mw = 0.0;
  double throughput = 0.0;   // sum rate, bps/Hz
  bool converged = false;
  bool failed = false;
  std::string error;
};

struct SweepAggregate {
  double sweep_value = 0.0;
  double mean_objective = 0.0;
  double min_objective = 0.0;
  double mean_iterations = 0.0;
  double mean_power_mw = 0.0;
  double mean_throughput = 0.0;
  int converged = 0;
  int failures = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  std::vector<SweepAggregate> aggregates;  // ordered like config.sweep_values
};

/// Runs the configured sweep; trials execute on a worker pool capped by
/// SECNET_THREADS. Output is deterministic for a fixed master_seed.
ExperimentReport run(const ExperimentConfig& config);

void write_csv(const ExperimentReport& report, const std::string& path);
void write_summary_json(const ExperimentReport& report, const std::string& path);

/// Figure-style CSV: x column plus one mean-objective column per labelled
/// curve. All curves must share the x grid of the first.
void emit_plotdata(
    const std::vector<std::pair<std::string, ExperimentReport>>& curves,
    const std::string& path);

/// One named verification probe: pass iff worst <= threshold.
struct CheckResult {
  std::string name;
  double worst = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

/// Sampling checks of every bounding inequality (direction + anchor tightness).
std::vector<CheckResult> run_bound_checks(std::int64_t samples,
                                          std::uint64_t seed);

/// Closed-form outage probabilities vs Monte Carlo (3-sigma binomial bands)
/// plus quantile-root consistency checks.
std::vector<CheckResult> run_outage_checks(std::int64_t draws,
                                           std::uint64_t seed);

/// Worker count: SECNET_THREADS if set and positive, else hardware concurrency.
int thread_budget();

}  // namespace secnet
