#pragma once

#include <functional>
#include <span>
#include <vector>

// Per-iteration smooth concave maximization over a box with smooth concave
// inequality constraints g_k(x) >= 0, solved by a logarithmic-barrier
// interior scheme with damped Newton steps. Problems are tiny (n <= 3M+1)
// so dense linear algebra and finite-difference Hessians of the oracles
// are used throughout; gradients are analytic.

namespace secnet {

/// Oracle returning the function value and filling the gradient. The gradient
/// span is either empty (value-only evaluation, e.g. line search) or has
/// length n; for sparse constraints only the declared variables are
/// read/written.
using SmoothOracle = std::function<double(std::span<const double>, std::span<double>)>;

struct SmoothConcaveProgram {
  int n = 0;
  std::vector<double> lower, upper;
  SmoothOracle objective;
  std::vector<SmoothOracle> constraints;
  /// Optional sparsity: constraint_vars[k] lists the variables constraint k
  /// depends on. Empty outer vector (or empty inner list) means dense.
  std::vector<std::vector<int>> constraint_vars;
};

struct Multipliers {
  std::vector<double> ineq;       // one per constraint
  std::vector<double> lower_box;  // one per variable
  std::vector<double> upper_box;
};

enum class SolveStatus { optimal, max_iter, infeasible_start_unrecovered };

struct SubproblemSolution {
  std::vector<double> x;
  double objective_value = 0.0;
  double kkt_residual = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  Multipliers multipliers;
};

/// Infinity norm of first-order optimality violations of the maximization
/// Lagrangian f + sum lambda_k g_k + lam_lo (x-l) + lam_hi (u-x):
/// stationarity, complementarity and sign/feasibility violations.
double kkt_residual(const SmoothConcaveProgram& program,
                    std::span<const double> point, const Multipliers& mult);

/// Barrier solve from a start inside the box. An infeasible start (some
/// g_k < 0) triggers a phase-one max-min-slack relaxation first. The
/// returned point never has a lower objective than a feasible start.
SubproblemSolution solve(const SmoothConcaveProgram& program,
                         std::span<const double> start, double tol = 1e-7);

}  // namespace secnet
