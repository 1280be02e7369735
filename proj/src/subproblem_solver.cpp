#include "secnet/subproblem_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secnet {

namespace {

// Barrier shift: constraints enter the barrier as ln(g_k + kShift), so any
// returned point satisfies g_k > -kShift, matching the feasibility contract.
// It also makes warm starts sitting exactly on an active constraint usable.
constexpr double kShift = 1e-9;

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Cholesky factorization in place; returns false if not positive definite.
bool cholesky(std::vector<double>& a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[static_cast<size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      double l = a[static_cast<size_t>(j) * n + k];
      d -= l * l;
    }
    if (d <= 0.0) return false;
    d = std::sqrt(d);
    a[static_cast<size_t>(j) * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = a[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= a[static_cast<size_t>(i) * n + k] * a[static_cast<size_t>(j) * n + k];
      a[static_cast<size_t>(i) * n + j] = s / d;
    }
  }
  return true;
}

void chol_solve(const std::vector<double>& l, int n, std::vector<double>& b) {
  for (int i = 0; i < n; ++i) {
    double s = b[static_cast<size_t>(i)];
    for (int k = 0; k < i; ++k) s -= l[static_cast<size_t>(i) * n + k] * b[static_cast<size_t>(k)];
    b[static_cast<size_t>(i)] = s / l[static_cast<size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<size_t>(i)];
    for (int k = i + 1; k < n; ++k) s -= l[static_cast<size_t>(k) * n + i] * b[static_cast<size_t>(k)];
    b[static_cast<size_t>(i)] = s / l[static_cast<size_t>(i) * n + i];
  }
}

struct Evaluation {
  double f = 0.0;
  std::vector<double> grad_f;
  std::vector<double> g;
  std::vector<std::vector<double>> grad_g;
};

class BarrierSolver {
 public:
  BarrierSolver(const SmoothConcaveProgram& prog, double tol)
      : prog_(prog), tol_(tol), n_(prog.n), m_(static_cast<int>(prog.constraints.size())) {
    all_vars_.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) all_vars_[static_cast<size_t>(i)] = i;
  }

  const std::vector<int>& vars_of(int k) const {
    const auto& cv = prog_.constraint_vars;
    if (static_cast<size_t>(k) < cv.size() && !cv[static_cast<size_t>(k)].empty())
      return cv[static_cast<size_t>(k)];
    return all_vars_;
  }

  void evaluate(std::span<const double> x, Evaluation& ev) const {
    ev.grad_f.assign(static_cast<size_t>(n_), 0.0);
    ev.f = prog_.objective(x, ev.grad_f);
    ev.g.resize(static_cast<size_t>(m_));
    ev.grad_g.resize(static_cast<size_t>(m_));
    for (int k = 0; k < m_; ++k) {
      auto& gk = ev.grad_g[static_cast<size_t>(k)];
      gk.assign(static_cast<size_t>(n_), 0.0);
      ev.g[static_cast<size_t>(k)] = prog_.constraints[static_cast<size_t>(k)](x, gk);
    }
  }

  double barrier_value(std::span<const double> x, double mu, bool* ok) const {
    // value-only: an empty grad span lets the oracles skip derivative work
    std::span<double> no_grad;
    double b = prog_.objective(x, no_grad);
    *ok = true;
    for (int k = 0; k < m_; ++k) {
      double g = prog_.constraints[static_cast<size_t>(k)](x, no_grad) + kShift;
      if (!(g > 0.0)) { *ok = false; return -std::numeric_limits<double>::infinity(); }
      b += mu * std::log(g);
    }
    for (int i = 0; i < n_; ++i) {
      double lo = x[static_cast<size_t>(i)] - prog_.lower[static_cast<size_t>(i)];
      double hi = prog_.upper[static_cast<size_t>(i)] - x[static_cast<size_t>(i)];
      if (!(lo > 0.0) || !(hi > 0.0)) { *ok = false; return -std::numeric_limits<double>::infinity(); }
      b += mu * (std::log(lo) + std::log(hi));
    }
    return b;
  }

  // Central-difference Hessian of one oracle over its variable support,
  // accumulated into dense "neg" with the given sign/scale.
  void accumulate_fd_hessian(const SmoothOracle& oracle, const std::vector<int>& vars,
                             std::span<const double> x, double scale,
                             std::vector<double>& neg) const {
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> gp(static_cast<size_t>(n_)), gm(static_cast<size_t>(n_));
    for (int v : vars) {
      const size_t uv = static_cast<size_t>(v);
      // relative step: rate variables live at 1e-5 scale and their rows have
      // power-law curvature, so an absolute step would leave the curvature's
      // validity region entirely
      double h = std::max(1e-5 * std::abs(x[uv]), 1e-11);
      double orig = xp[uv];
      xp[uv] = orig + h;
      std::fill(gp.begin(), gp.end(), 0.0);
      oracle(xp, gp);
      xp[uv] = orig - h;
      std::fill(gm.begin(), gm.end(), 0.0);
      oracle(xp, gm);
      xp[uv] = orig;
      for (int w : vars) {
        const size_t uw = static_cast<size_t>(w);
        // symmetrized on accumulation (half into (v,w) and (w,v))
        double hvw = (gp[uw] - gm[uw]) / (2.0 * h);
        neg[uv * static_cast<size_t>(n_) + uw] += 0.5 * scale * hvw;
        neg[uw * static_cast<size_t>(n_) + uv] += 0.5 * scale * hvw;
      }
    }
  }

  // Negative barrier Hessian at x (positive definite for a concave program),
  // factored in place with a ridge fallback for FD noise.
  bool factor_hessian(std::span<const double> x, const Evaluation& ev, double mu,
                      std::vector<double>& neg, std::vector<double>& fac) const {
    std::fill(neg.begin(), neg.end(), 0.0);
    accumulate_fd_hessian(prog_.objective, all_vars_, x, -1.0, neg);
    for (int k = 0; k < m_; ++k) {
      const size_t uk = static_cast<size_t>(k);
      double denom = ev.g[uk] + kShift;
      accumulate_fd_hessian(prog_.constraints[uk], vars_of(k), x, -mu / denom, neg);
      for (int v : vars_of(k))
        for (int w : vars_of(k))
          neg[static_cast<size_t>(v) * static_cast<size_t>(n_) + static_cast<size_t>(w)] +=
              mu * ev.grad_g[uk][static_cast<size_t>(v)] *
              ev.grad_g[uk][static_cast<size_t>(w)] / (denom * denom);
    }
    for (int i = 0; i < n_; ++i) {
      const size_t ui = static_cast<size_t>(i);
      double lo = x[ui] - prog_.lower[ui];
      double hi = prog_.upper[ui] - x[ui];
      neg[ui * static_cast<size_t>(n_) + ui] += mu * (1.0 / (lo * lo) + 1.0 / (hi * hi));
    }
    double scale = 0.0;
    for (int i = 0; i < n_; ++i)
      scale = std::max(scale, std::abs(neg[static_cast<size_t>(i) * n_ + i]));
    scale = std::max(scale, 1.0);
    double ridge = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      fac = neg;
      if (ridge > 0.0)
        for (int i = 0; i < n_; ++i) fac[static_cast<size_t>(i) * n_ + i] += ridge;
      if (cholesky(fac, n_)) return true;
      ridge = (ridge == 0.0) ? 1e-12 * scale : ridge * 100.0;
    }
    return false;
  }

  // One barrier stage: damped Newton on B_mu until the gradient norm target.
  // The FD Hessian dominates the cost, so its factorization is reused for a
  // few iterations; a stale factor of a PD matrix still yields an ascent
  // direction, and it is refreshed whenever the step quality degrades.
  // Returns false when no progress could be made.
  bool newton_stage(std::vector<double>& x, double mu, double grad_tol) const {
    Evaluation ev;
    std::vector<double> gB(static_cast<size_t>(n_));
    std::vector<double> neg(static_cast<size_t>(n_) * static_cast<size_t>(n_));
    std::vector<double> fac;
    constexpr int kFactorReuse = 5;  // longer reuse starts costing line-search backtracks
    int fac_age = -1;                // -1: no factorization yet
    const int inner_cap = 60;
    for (int it = 0; it < inner_cap; ++it) {
      evaluate(x, ev);
      // gradient of the barrier
      for (int i = 0; i < n_; ++i) {
        const size_t ui = static_cast<size_t>(i);
        double lo = x[ui] - prog_.lower[ui];
        double hi = prog_.upper[ui] - x[ui];
        gB[ui] = ev.grad_f[ui] + mu * (1.0 / lo - 1.0 / hi);
      }
      for (int k = 0; k < m_; ++k) {
        double denom = ev.g[static_cast<size_t>(k)] + kShift;
        for (int v : vars_of(k))
          gB[static_cast<size_t>(v)] +=
              mu * ev.grad_g[static_cast<size_t>(k)][static_cast<size_t>(v)] / denom;
      }
      if (inf_norm(gB) <= grad_tol) return true;

      if (fac_age < 0 || fac_age >= kFactorReuse) {
        if (!factor_hessian(x, ev, mu, neg, fac)) return false;
        fac_age = 0;
      }

      bool retried = false;
      while (true) {
        std::vector<double> d(gB);
        chol_solve(fac, n_, d);

        double slope = 0.0;
        for (int i = 0; i < n_; ++i)
          slope += gB[static_cast<size_t>(i)] * d[static_cast<size_t>(i)];
        bool moved = false;
        if (slope > 0.0) {
          bool ok0 = false;
          double b0 = barrier_value(x, mu, &ok0);
          double t = 1.0;
          std::vector<double> xt(static_cast<size_t>(n_));
          while (t > 1e-14) {
            for (int i = 0; i < n_; ++i)
              xt[static_cast<size_t>(i)] =
                  x[static_cast<size_t>(i)] + t * d[static_cast<size_t>(i)];
            bool ok = false;
            double bt = barrier_value(xt, mu, &ok);
            if (ok && bt >= b0 + 1e-4 * t * slope) {
              x = xt;
              moved = true;
              break;
            }
            t *= 0.5;
          }
        }
        if (moved) {
          ++fac_age;
          break;
        }
        // stalled: retry once with a fresh factorization before giving up
        if (fac_age > 0 && !retried) {
          if (!factor_hessian(x, ev, mu, neg, fac)) return false;
          fac_age = 0;
          retried = true;
          continue;
        }
        if (!(slope > 0.0)) return false;  // not an ascent direction
        return it > 0;  // stalled; accept if any progress this stage
      }
    }
    return true;
  }

  void run(std::vector<double>& x, double mu_min) const {
    double mu = 1.0;
    while (true) {
      double grad_tol = std::max(0.1 * mu, 0.3 * tol_);
      if (!newton_stage(x, mu, grad_tol)) break;
      if (mu <= mu_min) break;
      mu = std::max(mu * 0.1, mu_min);
    }
  }

  Multipliers multipliers_at(std::span<const double> x, double mu) const {
    Evaluation ev;
    evaluate(x, ev);
    Multipliers mult;
    mult.ineq.resize(static_cast<size_t>(m_));
    for (int k = 0; k < m_; ++k)
      mult.ineq[static_cast<size_t>(k)] = mu / (ev.g[static_cast<size_t>(k)] + kShift);
    mult.lower_box.resize(static_cast<size_t>(n_));
    mult.upper_box.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      const size_t ui = static_cast<size_t>(i);
      mult.lower_box[ui] = mu / (x[ui] - prog_.lower[ui]);
      mult.upper_box[ui] = mu / (prog_.upper[ui] - x[ui]);
    }
    return mult;
  }

 private:
  const SmoothConcaveProgram& prog_;
  double tol_;
  int n_, m_;
  std::vector<int> all_vars_;
};

void clip_into_box(const SmoothConcaveProgram& prog, std::vector<double>& x) {
  for (int i = 0; i < prog.n; ++i) {
    const size_t ui = static_cast<size_t>(i);
    // only move points on or outside the boundary: nudging a strictly
    // interior warm start can push near-floor rate seeds across their
    // trust regions
    double span = prog.upper[ui] - prog.lower[ui];
    double margin = std::max(1e-13, 1e-12 * span);
    if (x[ui] <= prog.lower[ui])
      x[ui] = prog.lower[ui] + margin;
    else if (x[ui] >= prog.upper[ui])
      x[ui] = prog.upper[ui] - margin;
  }
}

double min_slack(const SmoothConcaveProgram& prog, std::span<const double> x) {
  std::span<double> no_grad;
  double s = std::numeric_limits<double>::infinity();
  for (const auto& g : prog.constraints) s = std::min(s, g(x, no_grad));
  return s;
}

// Max-min-slack relaxation used to recover a strictly feasible start.
bool phase_one(const SmoothConcaveProgram& prog, std::vector<double>& x, double tol) {
  const int n = prog.n;
  std::vector<double> scratch(static_cast<size_t>(n));
  double s0 = min_slack(prog, x);

  SmoothConcaveProgram relax;
  relax.n = n + 1;
  relax.lower = prog.lower;
  relax.upper = prog.upper;
  relax.lower.push_back(s0 - 2.0);
  relax.upper.push_back(1.0);
  relax.objective = [n](std::span<const double> z, std::span<double> grad) {
    if (!grad.empty()) {
      for (int i = 0; i < n; ++i) grad[static_cast<size_t>(i)] = 0.0;
      grad[static_cast<size_t>(n)] = 1.0;
    }
    return z[static_cast<size_t>(n)];
  };
  for (size_t k = 0; k < prog.constraints.size(); ++k) {
    const SmoothOracle& g = prog.constraints[k];
    relax.constraints.push_back(
        [&g, n](std::span<const double> z, std::span<double> grad) {
          double v = g(z.first(static_cast<size_t>(n)),
                       grad.empty() ? std::span<double>{}
                                    : grad.first(static_cast<size_t>(n)));
          if (!grad.empty()) grad[static_cast<size_t>(n)] = -1.0;
          return v - z[static_cast<size_t>(n)];
        });
    std::vector<int> vars;
    if (k < prog.constraint_vars.size() && !prog.constraint_vars[k].empty())
      vars = prog.constraint_vars[k];
    else
      for (int i = 0; i < n; ++i) vars.push_back(i);
    vars.push_back(n);
    relax.constraint_vars.push_back(std::move(vars));
  }

  std::vector<double> z(x);
  z.push_back(s0 - 1.0);
  clip_into_box(relax, z);
  BarrierSolver solver(relax, tol);
  solver.run(z, std::max(1e-6, 0.3 * tol));
  double s = z[static_cast<size_t>(n)];
  if (!(s > 0.0)) return false;
  x.assign(z.begin(), z.begin() + n);
  return true;
}

}  // namespace

double kkt_residual(const SmoothConcaveProgram& program,
                    std::span<const double> point, const Multipliers& mult) {
  const int n = program.n;
  const int m = static_cast<int>(program.constraints.size());
  std::vector<double> stat(static_cast<size_t>(n), 0.0);
  std::vector<double> grad(static_cast<size_t>(n));
  program.objective(point, grad);
  for (int i = 0; i < n; ++i) stat[static_cast<size_t>(i)] = grad[static_cast<size_t>(i)];
  double res = 0.0;
  for (int k = 0; k < m; ++k) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double g = program.constraints[static_cast<size_t>(k)](point, grad);
    double lam = mult.ineq[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i)
      stat[static_cast<size_t>(i)] += lam * grad[static_cast<size_t>(i)];
    res = std::max(res, std::abs(lam * g));
    res = std::max(res, std::max(0.0, -lam));
    res = std::max(res, std::max(0.0, -g - 1e-9));
  }
  for (int i = 0; i < n; ++i) {
    const size_t ui = static_cast<size_t>(i);
    stat[ui] += mult.lower_box[ui] - mult.upper_box[ui];
    res = std::max(res, std::abs(mult.lower_box[ui] * (point[ui] - program.lower[ui])));
    res = std::max(res, std::abs(mult.upper_box[ui] * (program.upper[ui] - point[ui])));
  }
  res = std::max(res, inf_norm(stat));
  return res;
}

SubproblemSolution solve(const SmoothConcaveProgram& program,
                         std::span<const double> start, double tol) {
  if (program.n < 1 || static_cast<int>(start.size()) != program.n)
    throw std::invalid_argument("solve: start size must match program.n");
  std::vector<double> x(start.begin(), start.end());
  clip_into_box(program, x);

  std::vector<double> scratch(static_cast<size_t>(program.n));
  std::vector<double> x0(x);
  double slack0 = min_slack(program, x0);
  bool start_feasible = slack0 >= -1e-9;

  if (slack0 <= -1e-10) {
    if (!phase_one(program, x, tol)) {
      SubproblemSolution sol;
      sol.x = x0;
      sol.objective_value = program.objective(x0, scratch);
      sol.status = SolveStatus::infeasible_start_unrecovered;
      return sol;
    }
    clip_into_box(program, x);
  }

  BarrierSolver solver(program, tol);
  const double mu_min = std::max(0.3 * tol, 1e-12);
  solver.run(x, mu_min);

  SubproblemSolution sol;
  sol.x = x;
  sol.objective_value = program.objective(x, scratch);
  sol.multipliers = solver.multipliers_at(x, mu_min);
  sol.kkt_residual = kkt_residual(program, x, sol.multipliers);

  // never return worse than a feasible warm start
  if (start_feasible) {
    double f0 = program.objective(x0, scratch);
    if (f0 > sol.objective_value) {
      sol.x = x0;
      sol.objective_value = f0;
      sol.multipliers = solver.multipliers_at(sol.x, mu_min);
      sol.kkt_residual = kkt_residual(program, sol.x, sol.multipliers);
    }
  }
  double final_slack = min_slack(program, sol.x);
  sol.status = (sol.kkt_residual <= tol && final_slack >= -1e-9)
                   ? SolveStatus::optimal
                   : SolveStatus::max_iter;
  return sol;
}

}  // namespace secnet
