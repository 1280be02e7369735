#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "secnet/network_model.hpp"
#include "secnet/outage.hpp"

// Shared test utilities: exact objective evaluation for every scenario
// (re-deriving the outage-rate variables from their root equations rather
// than trusting solver state), brute-force grid oracles for M<=2, and a
// central finite-difference gradient checker.

namespace secnet::testutil {

enum class Objective { maximin_secrecy, see, maximin_see };

/// Exact per-link secrecy at p, in nats. Partial/robust recompute the
/// outage-rate variables from scratch via their root equations.
inline std::vector<double> exact_secrecy_all(const NetworkInstance& inst,
                                             const ScenarioParams& params,
                                             const std::vector<double>& p) {
  const int M = inst.M;
  BisectionSettings bs;
  std::vector<double> out(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    double fwd = 0.0;
    if (inst.mode == CsiMode::robust) {
      std::vector<double> row{inst.mean_gains[static_cast<size_t>(i)]
                                             [static_cast<size_t>(i)]};
      std::vector<double> powers;
      for (int j = 0; j < M; ++j) {
        if (j == i) continue;
        row.push_back(inst.mean_gains[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        powers.push_back(p[static_cast<size_t>(j)]);
      }
      double R = solve_robust_rate(p[static_cast<size_t>(i)], row, powers,
                                   inst.noise_user[static_cast<size_t>(i)],
                                   params.eps_c, params.delta, bs);
      fwd = std::log1p(R);
    } else {
      double interf = inst.noise_user[static_cast<size_t>(i)];
      for (int j = 0; j < M; ++j)
        if (j != i)
          interf += inst.gains[static_cast<size_t>(j)][static_cast<size_t>(i)] *
                    p[static_cast<size_t>(j)];
      fwd = std::log1p(inst.gains[static_cast<size_t>(i)][static_cast<size_t>(i)] *
                       p[static_cast<size_t>(i)] / interf);
    }

    double eve = 0.0;
    if (inst.mode == CsiMode::perfect) {
      double interf = inst.noise_eve;
      for (int j = 0; j < M; ++j)
        if (j != i) interf += inst.eve_gains[static_cast<size_t>(j)] * p[static_cast<size_t>(j)];
      eve = std::log1p(inst.eve_gains[static_cast<size_t>(i)] *
                       p[static_cast<size_t>(i)] / interf);
    } else {
      std::vector<double> means{inst.eve_gains[static_cast<size_t>(i)]};
      std::vector<double> powers;
      for (int j = 0; j < M; ++j) {
        if (j == i) continue;
        means.push_back(inst.eve_gains[static_cast<size_t>(j)]);
        powers.push_back(p[static_cast<size_t>(j)]);
      }
      double r = solve_eve_quantile(p[static_cast<size_t>(i)], means, powers,
                                    inst.noise_eve, params.eps_ev, bs);
      eve = std::log1p(r);
    }
    out[static_cast<size_t>(i)] = fwd - eve;
  }
  return out;
}

/// Exact objective value at p (nats or nats/mJ); -inf when the QoS targets
/// are violated (used by the grid oracles to skip infeasible points).
inline double exact_objective(const NetworkInstance& inst,
                              const ScenarioParams& params, Objective obj,
                              const std::vector<double>& p,
                              double qos_slack_tol = 1e-9) {
  std::vector<double> sec = exact_secrecy_all(inst, params, p);
  for (int i = 0; i < inst.M; ++i)
    if (sec[static_cast<size_t>(i)] < params.qos_at(i) - qos_slack_tol)
      return -std::numeric_limits<double>::infinity();
  switch (obj) {
    case Objective::maximin_secrecy:
      return *std::min_element(sec.begin(), sec.end());
    case Objective::see: {
      double num = 0.0, pw = params.Pc_per_tx * inst.M;
      for (int i = 0; i < inst.M; ++i) {
        num += sec[static_cast<size_t>(i)];
        pw += params.zeta * p[static_cast<size_t>(i)];
      }
      return num / pw;
    }
    case Objective::maximin_see: {
      double worst = std::numeric_limits<double>::infinity();
      for (int i = 0; i < inst.M; ++i)
        worst = std::min(worst, sec[static_cast<size_t>(i)] /
                                    (params.zeta * p[static_cast<size_t>(i)] +
                                     params.Pc_per_tx));
      return worst;
    }
  }
  return 0.0;
}

/// Candidate values per power axis: linear sweep plus log-spaced points near
/// zero. EE optima can park a transmitter at ~1e-5 of the budget, which a
/// linear grid never samples.
inline std::vector<double> grid_axis(double P, int linear_points, int log_points) {
  std::vector<double> v;
  v.reserve(static_cast<size_t>(linear_points + log_points));
  for (int k = 1; k <= linear_points; ++k)
    v.push_back(P * static_cast<double>(k) / linear_points);
  const double lo = 1e-6 * P;
  for (int k = 0; k < log_points; ++k)
    v.push_back(lo * std::pow(P / lo, static_cast<double>(k) / (log_points - 1)));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct GridResult {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> argmax;
};

/// Exhaustive search over the axis product for M in {1,2}, followed by a few
/// local zoom rounds around the incumbent so the reported optimum is tight
/// enough for a 1e-3 relative comparison. `seeds` adds extra candidate points
/// (e.g. a solver's answer) before refinement, so the zoom also sharpens
/// optima the coarse scan only brackets loosely.
inline GridResult grid_oracle(const NetworkInstance& inst,
                              const ScenarioParams& params, Objective obj,
                              int linear_points = 200, int log_points = 40,
                              int zoom_rounds = 3, int zoom_points = 21,
                              const std::vector<std::vector<double>>& seeds = {}) {
  const int M = inst.M;
  std::vector<double> axis = grid_axis(params.P_budget, linear_points, log_points);
  GridResult res;
  res.argmax.assign(static_cast<size_t>(M), params.P_budget);

  auto consider = [&](const std::vector<double>& p) {
    double v = exact_objective(inst, params, obj, p);
    if (v > res.best) {
      res.best = v;
      res.argmax = p;
    }
  };

  std::vector<double> p(static_cast<size_t>(M));
  if (M == 1) {
    for (double a : axis) {
      p[0] = a;
      consider(p);
    }
  } else {
    for (double a : axis)
      for (double b : axis) {
        p[0] = a;
        p[1] = b;
        consider(p);
      }
  }

  for (const std::vector<double>& s : seeds)
    if (static_cast<int>(s.size()) == M) consider(s);

  // Local refinement: shrink a box around the incumbent.
  double span = params.P_budget * (1.0 / linear_points);
  for (int round = 0; round < zoom_rounds; ++round) {
    std::vector<double> center = res.argmax;
    std::vector<std::vector<double>> local(static_cast<size_t>(M));
    for (int d = 0; d < M; ++d) {
      double c = center[static_cast<size_t>(d)];
      double lo = std::max(1e-9, c - span);
      double hi = std::min(params.P_budget, c + span);
      for (int k = 0; k < zoom_points; ++k)
        local[static_cast<size_t>(d)].push_back(
            lo + (hi - lo) * static_cast<double>(k) / (zoom_points - 1));
    }
    if (M == 1) {
      for (double a : local[0]) {
        p[0] = a;
        consider(p);
      }
    } else {
      for (double a : local[0])
        for (double b : local[1]) {
          p[0] = a;
          p[1] = b;
          consider(p);
        }
    }
    span /= zoom_points / 2.0;
  }
  return res;
}

/// Worst relative error between an analytic gradient and central finite
/// differences, over `points` random points drawn log-uniformly per
/// coordinate from [lo, hi].
inline double gradient_check(
    const std::function<double(std::span<const double>, std::span<double>)>& fn,
    int dim, int points, std::uint64_t seed, double lo = 0.05, double hi = 20.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> x(static_cast<size_t>(dim)), g(static_cast<size_t>(dim));
  std::vector<double> scratch(static_cast<size_t>(dim));
  double worst = 0.0;
  for (int pt = 0; pt < points; ++pt) {
    for (auto& xi : x) xi = std::exp(u(rng));
    std::fill(g.begin(), g.end(), 0.0);
    fn(x, g);
    for (int d = 0; d < dim; ++d) {
      double h = 1e-6 * std::max(1.0, std::abs(x[static_cast<size_t>(d)]));
      double keep = x[static_cast<size_t>(d)];
      x[static_cast<size_t>(d)] = keep + h;
      double fp = fn(x, scratch);
      x[static_cast<size_t>(d)] = keep - h;
      double fm = fn(x, scratch);
      x[static_cast<size_t>(d)] = keep;
      double fd = (fp - fm) / (2.0 * h);
      double denom = std::max({std::abs(fd), std::abs(g[static_cast<size_t>(d)]), 1.0});
      worst = std::max(worst, std::abs(fd - g[static_cast<size_t>(d)]) / denom);
    }
  }
  return worst;
}

inline bool trace_nondecreasing(const std::vector<double>& trace,
                                double slack = 1e-8) {
  for (size_t k = 1; k < trace.size(); ++k)
    if (trace[k] < trace[k - 1] - slack) return false;
  return true;
}

}  // namespace secnet::testutil
