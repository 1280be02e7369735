#include "secnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "secnet/bounds_toolbox.hpp"
#include "secnet/outage.hpp"
#include "secnet/path_following.hpp"
#include "secnet/surrogates.hpp"

namespace secnet {
namespace {

using nlohmann::json;

constexpr double kLn2 = std::numbers::ln2;

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// -- config ------------------------------------------------------------------

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  throw std::runtime_error("config." + path + ": " + msg);
}

double num_field(const json& j, const std::string& name, double def) {
  if (!j.contains(name)) return def;
  if (!j.at(name).is_number()) config_error(name, "expected a number");
  return j.at(name).get<double>();
}

std::string str_field(const json& j, const std::string& name,
                      const std::string& def) {
  if (!j.contains(name)) return def;
  if (!j.at(name).is_string()) config_error(name, "expected a string");
  return j.at(name).get<std::string>();
}

void validate_config(const ExperimentConfig& c) {
  if (c.scenario != "perfect" && c.scenario != "partial" && c.scenario != "robust")
    config_error("scenario", "must be perfect|partial|robust, got '" + c.scenario + "'");
  if (c.objective != "maximin-secrecy" && c.objective != "see" &&
      c.objective != "maximin-see")
    config_error("objective",
                 "must be maximin-secrecy|see|maximin-see, got '" + c.objective + "'");
  if (c.links < 1) config_error("links", "must be >= 1");
  if (c.trials < 1) config_error("trials", "must be >= 1");
  if (!c.sweep_param.empty() && c.sweep_param != "P" && c.sweep_param != "c")
    config_error("sweep.param", "must be P or c");
  for (double v : c.sweep_values) {
    if (!(v > 0.0)) config_error("sweep.values", "values must be positive");
  }
  if (!(c.budget_mw > 0.0)) config_error("budget_mw", "must be positive");
  if (!(c.zeta > 0.0)) config_error("zeta", "must be positive");
  if (c.circuit_mw < 0.0) config_error("circuit_mw", "must be nonnegative");
  if (c.qos_bps_hz < 0.0) config_error("qos_bps_hz", "must be nonnegative");
  if (!(c.eps_ev > 0.0 && c.eps_ev < 1.0)) config_error("eps_ev", "must be in (0,1)");
  if (!(c.eps_c > 0.0 && c.eps_c < 1.0)) config_error("eps_c", "must be in (0,1)");
  if (!(c.delta > 0.0)) config_error("delta", "must be positive");
  if (!(c.eps_tol > 0.0)) config_error("eps_tol", "must be positive");
  if (!(c.eps_b > 0.0)) config_error("eps_b", "must be positive");
  if (!(c.solver_tol > 0.0)) config_error("solver_tol", "must be positive");
}

CsiMode mode_of(const std::string& scenario) {
  if (scenario == "perfect") return CsiMode::perfect;
  if (scenario == "partial") return CsiMode::partial;
  return CsiMode::robust;
}

ScenarioParams scenario_params(const ExperimentConfig& c) {
  ScenarioParams p;
  p.csi_mode = mode_of(c.scenario);
  p.P_budget = c.budget_mw;
  p.zeta = c.zeta;
  p.Pc_per_tx = c.circuit_mw;
  if (c.qos_bps_hz > 0.0) {
    p.qos.assign(static_cast<size_t>(c.links), c.qos_bps_hz * kLn2);
  }
  p.eps_ev = c.eps_ev;
  p.eps_c = c.eps_c;
  p.delta = c.delta;
  return p;
}

PathFollowingOptions solve_options(const ExperimentConfig& c) {
  PathFollowingOptions o;
  o.eps_tol = c.eps_tol;
  o.solver_tol = c.solver_tol;
  o.bisection.eps_b = c.eps_b;
  return o;
}

SolveReport dispatch(const ExperimentConfig& c, const NetworkInstance& inst,
                     const ScenarioParams& params,
                     const PathFollowingOptions& opts) {
  if (c.scenario == "perfect") {
    if (c.objective == "maximin-secrecy")
      return maximin_secrecy_perfect(inst, params, {}, opts);
    PowerAllocation p0 = init_perfect_qos(inst, params, {}, opts);
    return c.objective == "see" ? see_perfect(inst, params, p0, opts)
                                : maximin_ee_perfect(inst, params, p0, opts);
  }
  if (c.scenario == "partial") {
    if (c.objective == "maximin-secrecy")
      return maximin_secrecy_partial(inst, params, opts);
    return c.objective == "see" ? see_partial(inst, params, opts)
                                : maximin_see_partial(inst, params, opts);
  }
  if (c.objective == "maximin-secrecy")
    return maximin_secrecy_robust(inst, params, opts);
  return c.objective == "see" ? see_robust(inst, params, opts)
                              : maximin_see_robust(inst, params, opts);
}

TrialResult run_trial(const ExperimentConfig& c, size_t sweep_idx, int trial) {
  TrialResult out;
  out.trial = trial;
  ScenarioParams params = scenario_params(c);
  out.sweep_value =
      c.sweep_values.empty() ? c.budget_mw : c.sweep_values[sweep_idx];
  if (c.sweep_param == "P") {
    params.P_budget = out.sweep_value;
  } else if (c.sweep_param == "c") {
    params.qos.assign(static_cast<size_t>(c.links), out.sweep_value * kLn2);
  }
  try {
    // One channel draw per trial index, shared by every sweep point, so sweep
    // curves are paired samples rather than independent ones.
    NetworkInstance inst = generate_instance(
        c.links, derive_seed(c.master_seed, 0, static_cast<uint64_t>(trial)),
        params.csi_mode);
    SolveReport rep = dispatch(c, inst, params, solve_options(c));
    out.objective = rep.trace.back() / kLn2;
    out.iterations = rep.iterations;
    out.converged = rep.status == PathStatus::converged;
    for (double pi : rep.final_p.p) out.power_mw += pi;
    for (int i = 0; i < c.links; ++i)
      out.throughput += throughput(inst, rep.final_p, i) / kLn2;
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  c.scenario = str_field(j, "scenario", c.scenario);
  c.objective = str_field(j, "objective", c.objective);
  c.links = static_cast<int>(num_field(j, "links", c.links));
  c.trials = static_cast<int>(num_field(j, "trials", c.trials));
  c.master_seed = static_cast<std::uint64_t>(
      num_field(j, "master_seed", static_cast<double>(c.master_seed)));
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (!s.is_object()) config_error("sweep", "expected an object");
    c.sweep_param = str_field(s, "param", "");
    if (s.contains("values")) {
      if (!s.at("values").is_array()) config_error("sweep.values", "expected an array");
      for (const auto& v : s.at("values")) {
        if (!v.is_number()) config_error("sweep.values", "expected numbers");
        c.sweep_values.push_back(v.get<double>());
      }
    }
  }
  c.budget_mw = num_field(j, "budget_mw", c.budget_mw);
  c.zeta = num_field(j, "zeta", c.zeta);
  c.circuit_mw = num_field(j, "circuit_mw", c.circuit_mw);
  c.qos_bps_hz = num_field(j, "qos_bps_hz", c.qos_bps_hz);
  c.eps_ev = num_field(j, "eps_ev", c.eps_ev);
  c.eps_c = num_field(j, "eps_c", c.eps_c);
  c.delta = num_field(j, "delta", c.delta);
  c.eps_tol = num_field(j, "eps_tol", c.eps_tol);
  c.eps_b = num_field(j, "eps_b", c.eps_b);
  c.solver_tol = num_field(j, "solver_tol", c.solver_tol);
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

int thread_budget() {
  if (const char* s = std::getenv("SECNET_THREADS")) {
    int v = std::atoi(s);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

ExperimentReport run(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentReport rep;
  rep.config = config;
  const size_t n_sweep =
      config.sweep_values.empty() ? 1 : config.sweep_values.size();
  const size_t total = n_sweep * static_cast<size_t>(config.trials);
  rep.trials.resize(total);

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      size_t sweep_idx = idx / static_cast<size_t>(config.trials);
      int trial = static_cast<int>(idx % static_cast<size_t>(config.trials));
      rep.trials[idx] = run_trial(config, sweep_idx, trial);
    }
  };
  const int workers =
      std::min<int>(thread_budget(), static_cast<int>(total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t s = 0; s < n_sweep; ++s) {
    SweepAggregate agg;
    agg.sweep_value =
        config.sweep_values.empty() ? config.budget_mw : config.sweep_values[s];
    agg.min_objective = std::numeric_limits<double>::infinity();
    for (int t = 0; t < config.trials; ++t) {
      const TrialResult& r =
          rep.trials[s * static_cast<size_t>(config.trials) + static_cast<size_t>(t)];
      if (r.failed) {
        ++agg.failures;
        continue;
      }
      if (!r.converged) continue;  // aggregates cover converged trials only
      ++agg.converged;
      agg.mean_objective += r.objective;
      agg.min_objective = std::min(agg.min_objective, r.objective);
      agg.mean_iterations += r.iterations;
      agg.mean_power_mw += r.power_mw;
      agg.mean_throughput += r.throughput;
    }
    if (agg.converged > 0) {
      agg.mean_objective /= agg.converged;
      agg.mean_iterations /= agg.converged;
      agg.mean_power_mw /= agg.converged;
      agg.mean_throughput /= agg.converged;
    } else {
      agg.min_objective = 0.0;
    }
    rep.aggregates.push_back(agg);
  }
  return rep;
}

void write_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "sweep_value,trial,objective,iterations,power_mw,throughput,status\n";
  for (const TrialResult& r : report.trials) {
    const char* status =
        r.failed ? "failed" : (r.converged ? "converged" : "iteration_cap");
    out << fmt(r.sweep_value) << ',' << r.trial << ',' << fmt(r.objective) << ','
        << r.iterations << ',' << fmt(r.power_mw) << ',' << fmt(r.throughput)
        << ',' << status << '\n';
  }
}

void write_summary_json(const ExperimentReport& report, const std::string& path) {
  json j;
  j["scenario"] = report.config.scenario;
  j["objective"] = report.config.objective;
  j["links"] = report.config.links;
  j["trials"] = report.config.trials;
  j["master_seed"] = report.config.master_seed;
  j["sweep_param"] = report.config.sweep_param;
  json rows = json::array();
  for (const SweepAggregate& a : report.aggregates) {
    rows.push_back({{"sweep_value", a.sweep_value},
                    {"mean_objective", a.mean_objective},
                    {"min_objective", a.min_objective},
                    {"mean_iterations", a.mean_iterations},
                    {"mean_power_mw", a.mean_power_mw},
                    {"mean_throughput", a.mean_throughput},
                    {"converged", a.converged},
                    {"failures", a.failures}});
  }
  j["aggregates"] = rows;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void emit_plotdata(
    const std::vector<std::pair<std::string, ExperimentReport>>& curves,
    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x";
  for (const auto& [label, rep] : curves) out << ',' << label;
  out << '\n';
  if (curves.empty()) return;
  const auto& base = curves.front().second.aggregates;
  for (size_t row = 0; row < base.size(); ++row) {
    out << fmt(base[row].sweep_value, "%.17g");
    for (const auto& [label, rep] : curves) {
      if (rep.aggregates.size() != base.size() ||
          rep.aggregates[row].sweep_value != base[row].sweep_value) {
        throw std::runtime_error("plotdata: curves disagree on the x grid");
      }
      out << ',' << fmt(rep.aggregates[row].mean_objective, "%.17g");
    }
    out << '\n';
  }
}

// ===========================================================================
// verify-bounds
// ===========================================================================

namespace {

double loguni(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double uni(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

struct WorstTracker {
  double violation = 0.0;  // positive = bound on the wrong side
  double anchor = 0.0;     // |bound(anchor) - exact(anchor)|
};

// Two-transmitter instance used to exercise the coupled-term surrogates.
NetworkInstance pair_instance(CsiMode mode, std::mt19937_64& rng) {
  NetworkInstance inst;
  inst.M = 2;
  inst.mode = mode;
  std::vector<std::vector<double>> g{{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)},
                                     {loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)}};
  if (mode == CsiMode::robust) {
    inst.mean_gains = g;
  } else {
    inst.gains = g;
  }
  inst.eve_gains = {loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)};
  inst.noise_user = {1.0, 1.0};
  inst.noise_eve = 1.0;
  return inst;
}

ScenarioParams probe_params(CsiMode mode) {
  ScenarioParams p;
  p.csi_mode = mode;
  p.P_budget = 1e4;  // boxes irrelevant for bound probes
  return p;
}

}  // namespace

std::vector<CheckResult> run_bound_checks(std::int64_t samples,
                                          std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify-bounds: samples must be >= 1");
  std::vector<CheckResult> out;
  auto push = [&out](const std::string& name, double worst, double threshold) {
    out.push_back({name, worst, threshold, worst <= threshold});
  };
  const int n = static_cast<int>(samples);

  {  // ln(1+1/t) >= 1/(t+1)
    std::mt19937_64 rng(seed ^ 0x1111);
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
      worst = std::max(worst, -lemma1_gap(loguni(rng, 1e-4, 1e4)));
    push("log-recip-gap", worst, 1e-10);
  }
  {  // first-order lower bound of ln(1+1/(xy))
    std::mt19937_64 rng(seed ^ 0x2222);
    WorstTracker w;
    for (int k = 0; k < n; ++k) {
      Anchor2 a{loguni(rng, 1e-3, 1e3), loguni(rng, 1e-3, 1e3)};
      double x = loguni(rng, 1e-3, 1e3), y = loguni(rng, 1e-3, 1e3);
      double exact = std::log1p(1.0 / (x * y));
      w.violation = std::max(w.violation, log_recip_lower(x, y, a) - exact);
      double ae = std::log1p(1.0 / (a.xbar * a.ybar));
      w.anchor = std::max(w.anchor,
                          std::abs(log_recip_lower(a.xbar, a.ybar, a) - ae));
    }
    push("log-recip-lower", w.violation, 1e-10);
    push("log-recip-lower-anchor", w.anchor, 1e-9);
  }
  {  // first-order lower bound of ln(1+1/(xy))/t
    std::mt19937_64 rng(seed ^ 0x3333);
    WorstTracker w;
    for (int k = 0; k < n; ++k) {
      Anchor3 a{loguni(rng, 1e-3, 1e3), loguni(rng, 1e-3, 1e3),
                loguni(rng, 1e-3, 1e3)};
      double x = loguni(rng, 1e-3, 1e3), y = loguni(rng, 1e-3, 1e3),
             t = loguni(rng, 1e-3, 1e3);
      double exact = std::log1p(1.0 / (x * y)) / t;
      w.violation =
          std::max(w.violation, log_recip_over_t_lower(x, y, t, a) - exact);
      double ae = std::log1p(1.0 / (a.xbar * a.ybar)) / a.tbar;
      w.anchor = std::max(
          w.anchor,
          std::abs(log_recip_over_t_lower(a.xbar, a.ybar, a.tbar, a) - ae));
    }
    push("log-recip-over-t-lower", w.violation, 1e-10);
    push("log-recip-over-t-anchor", w.anchor, 1e-9);
  }
  {  // lower bound of -ln(1+x)/t with the alpha validity cap
    std::mt19937_64 rng(seed ^ 0x4444);
    const double x_cap = 1e3;
    const double alpha = alpha_for_cap(x_cap);
    WorstTracker w;
    for (int k = 0; k < n; ++k) {
      double xb = loguni(rng, 1e-4, x_cap), tb = loguni(rng, 1e-3, 1e3);
      double x = loguni(rng, 1e-4, x_cap), t = loguni(rng, 1e-3, 1e3);
      double exact = -std::log1p(x) / t;
      w.violation =
          std::max(w.violation, neg_log_over_t_lower(x, t, xb, tb, alpha) - exact);
      double ae = -std::log1p(xb) / tb;
      w.anchor = std::max(
          w.anchor, std::abs(neg_log_over_t_lower(xb, tb, xb, tb, alpha) - ae));
    }
    push("neg-log-over-t-lower", w.violation, 1e-10);
    push("neg-log-over-t-anchor", w.anchor, 1e-9);
  }
  {  // g-upper: convex upper bound of ln(1+x/y) used by the wiretap surrogate
    std::mt19937_64 rng(seed ^ 0x5555);
    WorstTracker w;
    for (int k = 0; k < n; ++k) {
      double xb = loguni(rng, 1e-3, 1e3), yb = loguni(rng, 1e-3, 1e3);
      double x = loguni(rng, 1e-3, 1e3), y = loguni(rng, 1e-3, 1e3);
      double exact = std::log1p(x / y);
      w.violation = std::max(w.violation, exact - log_ratio_upper(x, y, xb, yb));
      double ae = std::log1p(xb / yb);
      w.anchor =
          std::max(w.anchor, std::abs(log_ratio_upper(xb, yb, xb, yb) - ae));
    }
    push("g-upper", w.violation, 1e-10);
    push("g-upper-anchor", w.anchor, 1e-9);
  }
  {  // midpoint convexity of ln(1+1/(xy))
    std::mt19937_64 rng(seed ^ 0x6666);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      double x1 = loguni(rng, 1e-3, 1e3), y1 = loguni(rng, 1e-3, 1e3);
      double x2 = loguni(rng, 1e-3, 1e3), y2 = loguni(rng, 1e-3, 1e3);
      auto f = [](double x, double y) { return std::log1p(1.0 / (x * y)); };
      double mid = f(0.5 * (x1 + x2), 0.5 * (y1 + y2));
      worst = std::max(worst, mid - 0.5 * (f(x1, y1) + f(x2, y2)));
    }
    push("log-ratio-upper", worst, 1e-10);
  }
  push("midpoint-convexity", convexity_probe(n, seed ^ 0x7777), 1e-10);
  {  // Lambda lower-bounds p_i ln(1+x_ij) on the tr1 region
    std::mt19937_64 rng(seed ^ 0x8888);
    WorstTracker w;
    ScenarioParams params = probe_params(CsiMode::partial);
    for (int k = 0; k < n; ++k) {
      NetworkInstance inst = pair_instance(CsiMode::partial, rng);
      PowerAllocation pk{{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)}};
      std::vector<double> rk{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)};
      IterateState st = make_iterate_state(inst, pk, rk);
      SurrogateContext ctx = make_surrogate_context(inst, params, std::move(st));
      double u = uni(rng, 0.01, 2.4);
      double v = uni(rng, 0.01, 2.49 - u);
      double r = u * rk[0], pj = v * pk.p[1];
      double pi = pk.p[0] * loguni(rng, 1e-2, 1e2);
      double exact =
          pi * std::log1p(r * inst.eve_gains[1] * pj / (inst.eve_gains[0] * pi));
      w.violation =
          std::max(w.violation, surrogate_Lambda(ctx, 0, 1, r, pj, pi) - exact);
      double ae = pk.p[0] * std::log1p(rk[0] * inst.eve_gains[1] * pk.p[1] /
                                       (inst.eve_gains[0] * pk.p[0]));
      w.anchor = std::max(
          w.anchor,
          std::abs(surrogate_Lambda(ctx, 0, 1, rk[0], pk.p[1], pk.p[0]) - ae));
    }
    push("weighted-log-lower-tr", w.violation, 1e-10);
    push("weighted-log-lower-anchor", w.anchor, 1e-9);
  }
  {  // Upsilon upper-bounds R_i p_j
    std::mt19937_64 rng(seed ^ 0x9999);
    WorstTracker w;
    ScenarioParams params = probe_params(CsiMode::robust);
    for (int k = 0; k < n; ++k) {
      NetworkInstance inst = pair_instance(CsiMode::robust, rng);
      PowerAllocation pk{{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)}};
      std::vector<double> rk{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)};
      std::vector<double> Rk{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)};
      IterateState st = make_iterate_state(inst, pk, rk, Rk);
      SurrogateContext ctx = make_surrogate_context(inst, params, std::move(st));
      double R = Rk[0] * uni(rng, 0.5, 3.0), pj = pk.p[1] * uni(rng, 0.5, 3.0);
      w.violation =
          std::max(w.violation, R * pj - surrogate_Upsilon(ctx, 0, 1, R, pj));
      w.anchor = std::max(
          w.anchor,
          std::abs(surrogate_Upsilon(ctx, 0, 1, Rk[0], pk.p[1]) - Rk[0] * pk.p[1]));
    }
    push("bilinear-upper-tr", w.violation, 1e-10);
    push("bilinear-upper-anchor", w.anchor, 1e-9);
  }
  {  // Phi upper-bounds p_i ln(1 + h_ji R p_j / (h_ii p_i))
    std::mt19937_64 rng(seed ^ 0xaaaa);
    WorstTracker w;
    ScenarioParams params = probe_params(CsiMode::robust);
    for (int k = 0; k < n; ++k) {
      NetworkInstance inst = pair_instance(CsiMode::robust, rng);
      PowerAllocation pk{{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)}};
      std::vector<double> rk{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)};
      std::vector<double> Rk{loguni(rng, 0.1, 10), loguni(rng, 0.1, 10)};
      IterateState st = make_iterate_state(inst, pk, rk, Rk);
      SurrogateContext ctx = make_surrogate_context(inst, params, std::move(st));
      double R = Rk[0] * uni(rng, 0.5, 3.0), pj = pk.p[1] * uni(rng, 0.5, 3.0);
      double pi = pk.p[0] * loguni(rng, 1e-2, 1e2);
      const double hii = inst.mean_gains[0][0], hji = inst.mean_gains[1][0];
      double exact = pi * std::log1p(hji * R * pj / (hii * pi));
      w.violation =
          std::max(w.violation, exact - surrogate_Phi(ctx, 0, 1, R, pj, pi));
      double ae = pk.p[0] *
                  std::log1p(hji * Rk[0] * pk.p[1] / (hii * pk.p[0]));
      w.anchor = std::max(
          w.anchor,
          std::abs(surrogate_Phi(ctx, 0, 1, Rk[0], pk.p[1], pk.p[0]) - ae));
    }
    push("weighted-log-upper-tr", w.violation, 1e-10);
    push("weighted-log-upper-anchor", w.anchor, 1e-9);
  }
  return out;
}

// ===========================================================================
// verify-outage
// ===========================================================================

std::vector<CheckResult> run_outage_checks(std::int64_t draws,
                                           std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("verify-outage: draws must be >= 1");
  std::vector<CheckResult> out;
  const double band_guard = 10.0 / static_cast<double>(draws);

  double worst_below = 0.0, worst_dom = 0.0, worst_exc = 0.0, worst_above = 0.0;
  std::mt19937_64 rng(seed ^ 0xbeef);
  for (int k = 0; k < 20; ++k) {
    const int m = 1 + k % 10;
    ExponentialMix mix;
    mix.sigma2 = 1.0;
    for (int i = 0; i < m; ++i) {
      mix.powers.push_back(loguni(rng, 0.1, 10));
      mix.means.push_back(loguni(rng, 0.1, 10));
    }
    const double r = loguni(rng, 0.05, 5);
    const double c = loguni(rng, 0.1, 10);

    std::int64_t hits_below = 0, hits_dom = 0, hits_exc = 0, hits_above = 0;
    ExpSampler sampler(derive_seed(seed, 7, static_cast<uint64_t>(k)));
    std::vector<double> z(static_cast<size_t>(m));
    for (std::int64_t d = 0; d < draws; ++d) {
      for (int i = 0; i < m; ++i) z[static_cast<size_t>(i)] = mix.means[static_cast<size_t>(i)] * sampler.next();
      double num = mix.powers[0] * z[0];
      double interf = 0.0;
      for (int i = 1; i < m; ++i) interf += mix.powers[static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
      double sinr = num / (interf + mix.sigma2);
      if (sinr < r) ++hits_below;
      if (num <= interf) ++hits_dom;
      if (num > c + interf) ++hits_exc;
      if (sinr > r) ++hits_above;
    }
    auto z_score = [&](double p_closed, std::int64_t hits) {
      double p_hat = static_cast<double>(hits) / static_cast<double>(draws);
      double sigma =
          std::sqrt(std::max(p_closed * (1.0 - p_closed), 0.0) /
                    static_cast<double>(draws));
      return std::abs(p_hat - p_closed) / (3.0 * sigma + band_guard);
    };
    worst_below = std::max(worst_below, z_score(prob_sinr_below(mix, r), hits_below));
    worst_dom = std::max(worst_dom, z_score(prob_dominated(mix), hits_dom));
    worst_exc = std::max(worst_exc, z_score(prob_exceed_offset(mix, c), hits_exc));
    worst_above = std::max(worst_above, z_score(prob_sinr_above(mix, r), hits_above));
  }
  auto push = [&out](const std::string& name, double worst, double threshold) {
    out.push_back({name, worst, threshold, worst <= threshold});
  };
  push("sinr-below-mc", worst_below, 1.0);
  push("dominated-mc", worst_dom, 1.0);
  push("exceed-offset-mc", worst_exc, 1.0);
  push("sinr-above-mc", worst_above, 1.0);

  {  // eve quantile root plugs back into the closed form at eps_ev
    std::mt19937_64 qrng(seed ^ 0xfeed);
    BisectionSettings bs;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int m = 1 + k % 5;
      std::vector<double> means, others;
      means.push_back(loguni(qrng, 0.1, 10));
      for (int i = 1; i < m; ++i) {
        means.push_back(loguni(qrng, 0.1, 10));
        others.push_back(loguni(qrng, 0.1, 10));
      }
      double p_i = loguni(qrng, 0.1, 10);
      double eps = uni(qrng, 0.05, 0.6);
      double r = solve_eve_quantile(p_i, means, others, 1.0, eps, bs);
      ExponentialMix mix;
      mix.powers.push_back(p_i);
      for (double q : others) mix.powers.push_back(q);
      mix.means = means;
      worst = std::max(worst, std::abs(prob_sinr_below(mix, r) - eps));
    }
    push("eve-quantile-consistency", worst, 1e-6);
  }
  {  // robust rate approaches the nominal SINR as delta -> 0
    std::mt19937_64 qrng(seed ^ 0xdead);
    BisectionSettings bs;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int m = 1 + k % 5;
      std::vector<double> means, others;
      means.push_back(loguni(qrng, 0.1, 10));
      for (int i = 1; i < m; ++i) {
        means.push_back(loguni(qrng, 0.1, 10));
        others.push_back(loguni(qrng, 0.1, 10));
      }
      double p_i = loguni(qrng, 0.1, 10);
      double R = solve_robust_rate(p_i, means, others, 1.0, 0.1, 1e-3, bs);
      double interf = 1.0;
      for (size_t i = 0; i < others.size(); ++i) interf += means[i + 1] * others[i];
      double nominal = means[0] * p_i / interf;
      worst = std::max(worst, std::abs(R / nominal - 1.0));
    }
    push("robust-rate-delta-limit", worst, 5e-3);
  }
  return out;
}

}  // namespace secnet
