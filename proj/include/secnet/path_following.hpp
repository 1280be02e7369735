#pragma once

#include <vector>

#include "secnet/network_model.hpp"
#include "secnet/outage.hpp"

// Outer path-following loops: at each iteration a convex surrogate subproblem
// tight at the current iterate is solved, outage-rate variables are tightened
// back to their root equations by bisection, and the exact objective is
// re-evaluated. Traces are monotone nondecreasing by construction.

namespace secnet {

struct PathFollowingOptions {
  double eps_tol = 1e-4;   // relative-improvement stopping threshold
  int max_outer = 200;
  double solver_tol = 1e-7;
  BisectionSettings bisection{};
  double p0_fraction = 0.5;  // default start p_i = fraction * P_i
  double p_floor = 1e-9;     // interior-point stand-in for p_i > 0
};

enum class PathStatus { converged, iteration_cap };

struct SolveReport {
  std::vector<double> trace;  // exact objective per outer iteration (incl. start)
  PowerAllocation final_p;
  std::vector<double> final_r;  // eve-rate variables (partial/robust)
  std::vector<double> final_R;  // user-rate variables (robust)
  int iterations = 0;
  PathStatus status = PathStatus::iteration_cap;
  double qos_slack = 0.0;  // min_i (secrecy_i - c_i) at the final iterate
  bool trust_region_active = false;  // a trust-region row was near-binding at the end
};

// -- perfect CSI -------------------------------------------------------------

/// Maximin secrecy throughput (epigraph-lifted min of f_i - g_i surrogates).
/// p0 empty selects p_i = p0_fraction * P_budget.
SolveReport maximin_secrecy_perfect(const NetworkInstance& inst,
                                    const ScenarioParams& params,
                                    const PowerAllocation& p0,
                                    const PathFollowingOptions& opts = {});

/// QoS feasibility generator: drives min_i (f_i - g_i)/c_i above 1.
/// Throws std::runtime_error when the QoS targets are unreachable.
PowerAllocation init_perfect_qos(const NetworkInstance& inst,
                                 const ScenarioParams& params,
                                 const PowerAllocation& p_start,
                                 const PathFollowingOptions& opts = {});

/// Network SEE maximization; p0 must already satisfy the exact QoS constraints.
SolveReport see_perfect(const NetworkInstance& inst, const ScenarioParams& params,
                        const PowerAllocation& p0,
                        const PathFollowingOptions& opts = {});

/// Maximin per-transmitter EE under QoS; p0 as in see_perfect.
SolveReport maximin_ee_perfect(const NetworkInstance& inst,
                               const ScenarioParams& params,
                               const PowerAllocation& p0,
                               const PathFollowingOptions& opts = {});

// -- partial wiretap CSI -----------------------------------------------------

SolveReport maximin_secrecy_partial(const NetworkInstance& inst,
                                    const ScenarioParams& params,
                                    const PathFollowingOptions& opts = {});
SolveReport see_partial(const NetworkInstance& inst, const ScenarioParams& params,
                        const PathFollowingOptions& opts = {});
SolveReport maximin_see_partial(const NetworkInstance& inst,
                                const ScenarioParams& params,
                                const PathFollowingOptions& opts = {});

// -- robust (imperfect direct-link CSI) --------------------------------------

SolveReport maximin_secrecy_robust(const NetworkInstance& inst,
                                   const ScenarioParams& params,
                                   const PathFollowingOptions& opts = {});
SolveReport see_robust(const NetworkInstance& inst, const ScenarioParams& params,
                       const PathFollowingOptions& opts = {});
SolveReport maximin_see_robust(const NetworkInstance& inst,
                               const ScenarioParams& params,
                               const PathFollowingOptions& opts = {});

}  // namespace secnet
