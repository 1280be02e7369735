// Command-line front end: experiment runs, parameter sweeps and the
// verification suites. Rates are bps/Hz at this boundary (nats / ln 2).

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secnet/experiments.hpp"

namespace {

int print_checks(const std::vector<secnet::CheckResult>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%-18s worst %.3e  (threshold %.1e)  %s\n", c.name.c_str(),
                c.worst, c.threshold, c.pass ? "PASS" : "FAIL");
    ok = ok && c.pass;
  }
  std::printf("%s\n", ok ? "all checks passed" : "CHECK FAILURES");
  return ok ? 0 : 1;
}

void write_outputs(const secnet::ExperimentReport& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);
  secnet::write_csv(rep, dir + "/results.csv");
  secnet::write_summary_json(rep, dir + "/summary.json");
  std::string label = rep.config.scenario + "_" + rep.config.objective;
  secnet::emit_plotdata({{label, rep}}, dir + "/plotdata.csv");
  for (const auto& a : rep.aggregates) {
    std::printf("sweep=%-8g mean_obj=%-12.6g mean_iters=%-6.2f converged=%d failed=%d\n",
                a.sweep_value, a.mean_objective, a.mean_iterations, a.converged,
                a.failures);
  }
  std::printf("results in %s\n", dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secrecy-aware power allocation for interference networks"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  auto* run_cmd = app.add_subcommand("run", "run a configured experiment");
  run_cmd->add_option("--config", config_path, "JSON config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory")->required();

  std::int64_t samples = 100000, draws = 1000000;
  std::uint64_t seed = 1;
  auto* vb_cmd = app.add_subcommand("verify-bounds", "check every bounding inequality");
  vb_cmd->add_option("--samples", samples, "random tuples per bound");
  vb_cmd->add_option("--seed", seed, "rng seed");
  auto* vo_cmd = app.add_subcommand("verify-outage",
                                    "check outage closed forms against Monte Carlo");
  vo_cmd->add_option("--draws", draws, "Monte Carlo draws per instance");
  vo_cmd->add_option("--seed", seed, "rng seed");

  secnet::ExperimentConfig cfg;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep a parameter from the command line");
  sweep_cmd->add_option("--param", cfg.sweep_param, "P (budget, mW) or c (QoS, bps/Hz)")
      ->required();
  sweep_cmd->add_option("--values", cfg.sweep_values, "sweep values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--scenario", cfg.scenario, "perfect|partial|robust");
  sweep_cmd->add_option("--objective", cfg.objective,
                        "maximin-secrecy|see|maximin-see");
  sweep_cmd->add_option("--links", cfg.links, "number of links M");
  sweep_cmd->add_option("--trials", cfg.trials, "channel draws per sweep value");
  sweep_cmd->add_option("--seed", cfg.master_seed, "master seed");
  sweep_cmd->add_option("--budget-mw", cfg.budget_mw, "per-transmitter budget");
  sweep_cmd->add_option("--qos-bps-hz", cfg.qos_bps_hz, "per-link QoS");
  sweep_cmd->add_option("--eps-ev", cfg.eps_ev, "wiretap outage level");
  sweep_cmd->add_option("--eps-c", cfg.eps_c, "robust rate outage level");
  sweep_cmd->add_option("--delta", cfg.delta, "channel uncertainty scale");
  sweep_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) {
      write_outputs(secnet::run(secnet::load_config(config_path)), out_dir);
      return 0;
    }
    if (*vb_cmd) return print_checks(secnet::run_bound_checks(samples, seed));
    if (*vo_cmd) return print_checks(secnet::run_outage_checks(draws, seed));
    write_outputs(secnet::run(cfg), out_dir);  // sweep
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
