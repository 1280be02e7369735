#include "secnet/path_following.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secnet/subproblem_solver.hpp"
#include "secnet/surrogates.hpp"

namespace secnet {
namespace {

// Epigraph-variable box; objective values (nats or nats/mJ) stay far inside.
constexpr double kTLo = -50.0;
constexpr double kTHi = 50.0;
// Wider box for QoS-ratio feasibility runs (ratios blow up for small c_i).
constexpr double kRatioLo = -1e6;
constexpr double kRatioHi = 1e6;
constexpr double kRFloor = 1e-12;   // eve-rate variable box floor
constexpr double kRobustRFloor = 1e-9;  // user-rate variable floor (sec6c stand-in)
// Relative slack added to bisection roots when seeding the next subproblem so
// the root-active constraints start strictly feasible.
constexpr double kSeedSlack = 1e-7;

// Relative improvement with the denominator floored at a small objective
// scale (nats / nats-per-mJ): near-zero objectives would otherwise make the
// relative stopping rule unreachable and every run crawl to the iteration cap.
double rel_gain(double prev, double next) {
  return (next - prev) / std::max(std::abs(prev), 0.1);
}

std::vector<int> all_p_vars(int M) {
  std::vector<int> v(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) v[static_cast<size_t>(i)] = i;
  return v;
}

std::vector<int> with_extra(std::vector<int> v, std::initializer_list<int> extra) {
  v.insert(v.end(), extra);
  return v;
}

struct Layout {
  int M = 0;
  bool has_r = false, has_R = false, has_t = false;
  int r_idx(int i) const { return M + i; }
  int R_idx(int i) const { return M + (has_r ? M : 0) + i; }
  int t_idx() const { return M + (has_r ? M : 0) + (has_R ? M : 0); }
  int n() const {
    return M + (has_r ? M : 0) + (has_R ? M : 0) + (has_t ? 1 : 0);
  }
};

// -- exact objective pieces --------------------------------------------------

double exact_secrecy_partial(const NetworkInstance& inst,
                             const PowerAllocation& p,
                             const std::vector<double>& r, int i) {
  return throughput(inst, p, i) - std::log1p(r[static_cast<size_t>(i)]);
}

double exact_secrecy_robust(const std::vector<double>& R,
                            const std::vector<double>& r, int i) {
  return std::log1p(R[static_cast<size_t>(i)]) -
         std::log1p(r[static_cast<size_t>(i)]);
}

// -- bisection tightening ----------------------------------------------------

std::vector<double> eve_quantiles(const NetworkInstance& inst,
                                  const ScenarioParams& params,
                                  const std::vector<double>& p,
                                  const BisectionSettings& bs) {
  const int M = inst.M;
  std::vector<double> r(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    std::vector<double> means{inst.eve_gains[static_cast<size_t>(i)]};
    std::vector<double> others;
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      means.push_back(inst.eve_gains[static_cast<size_t>(j)]);
      others.push_back(p[static_cast<size_t>(j)]);
    }
    r[static_cast<size_t>(i)] =
        std::max(solve_eve_quantile(p[static_cast<size_t>(i)], means, others,
                                    inst.noise_eve, params.eps_ev, bs),
                 kRFloor);
  }
  return r;
}

std::vector<double> robust_rates(const NetworkInstance& inst,
                                 const ScenarioParams& params,
                                 const std::vector<double>& p,
                                 const BisectionSettings& bs) {
  const int M = inst.M;
  std::vector<double> R(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    std::vector<double> means{
        inst.mean_gains[static_cast<size_t>(i)][static_cast<size_t>(i)]};
    std::vector<double> others;
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      means.push_back(
          inst.mean_gains[static_cast<size_t>(j)][static_cast<size_t>(i)]);
      others.push_back(p[static_cast<size_t>(j)]);
    }
    R[static_cast<size_t>(i)] = std::max(
        solve_robust_rate(p[static_cast<size_t>(i)], means, others,
                          inst.noise_user[static_cast<size_t>(i)], params.eps_c,
                          params.delta, bs),
        kRobustRFloor);
  }
  return R;
}

// Box caps for the rate variables: any quantile root at feasible powers lies
// strictly below these (the linear term of the root equation alone forces
// r <= -ln(1-eps) p h / sigma^2, doubled for slack).
double r_box_cap(const NetworkInstance& inst, const ScenarioParams& params) {
  double hmax = 0.0;
  for (double h : inst.eve_gains) hmax = std::max(hmax, h);
  return std::max(1.0, 2.0 * (-std::log1p(-params.eps_ev)) * params.P_budget *
                           hmax / inst.noise_eve);
}

double R_box_cap(const NetworkInstance& inst, const ScenarioParams& params) {
  double m = 0.0;
  for (int i = 0; i < inst.M; ++i) {
    m = std::max(m, inst.mean_gains[static_cast<size_t>(i)][static_cast<size_t>(i)] /
                        inst.noise_user[static_cast<size_t>(i)]);
  }
  return std::max(1.0, 2.0 * (1.0 - params.delta * std::log1p(-params.eps_c)) *
                           params.P_budget * m);
}

// -- subproblem assembly -----------------------------------------------------

struct SubBuilder {
  SmoothConcaveProgram prog;
  Layout lay;

  SubBuilder(const SurrogateContext& ctx, Layout layout,
             const PathFollowingOptions& opts, double r_cap, double R_cap,
             bool tr3_boxes)
      : lay(layout) {
    const int M = lay.M;
    const auto& pk = ctx.state.p_k.p;
    prog.n = lay.n();
    prog.lower.assign(static_cast<size_t>(prog.n), 0.0);
    prog.upper.assign(static_cast<size_t>(prog.n), 0.0);
    for (int i = 0; i < M; ++i) {
      double lo = opts.p_floor;
      // tr3 rows 2 p_j >= p_j^k fold into the box (every j interferes when M>1)
      if (tr3_boxes && M >= 2) lo = std::max(lo, 0.5 * pk[static_cast<size_t>(i)]);
      prog.lower[static_cast<size_t>(i)] = lo;
      prog.upper[static_cast<size_t>(i)] = ctx.params.P_budget;
    }
    if (lay.has_r) {
      for (int i = 0; i < M; ++i) {
        prog.lower[static_cast<size_t>(lay.r_idx(i))] = kRFloor;
        prog.upper[static_cast<size_t>(lay.r_idx(i))] = r_cap;
      }
    }
    if (lay.has_R) {
      const auto& Rk = ctx.state.R_k;
      for (int i = 0; i < M; ++i) {
        double lo = kRobustRFloor;
        if (tr3_boxes && M >= 2) lo = std::max(lo, 0.5 * Rk[static_cast<size_t>(i)]);
        prog.lower[static_cast<size_t>(lay.R_idx(i))] = lo;
        prog.upper[static_cast<size_t>(lay.R_idx(i))] = R_cap;
      }
    }
    if (lay.has_t) {
      prog.lower[static_cast<size_t>(lay.t_idx())] = kTLo;
      prog.upper[static_cast<size_t>(lay.t_idx())] = kTHi;
    }
  }

  void ratio_t_box() {
    prog.lower[static_cast<size_t>(lay.t_idx())] = kRatioLo;
    prog.upper[static_cast<size_t>(lay.t_idx())] = kRatioHi;
  }

  void add(SmoothOracle g, std::vector<int> vars) {
    prog.constraints.push_back(std::move(g));
    prog.constraint_vars.push_back(std::move(vars));
  }
};

void add_span(std::span<double> grad, std::span<const double> src, int count) {
  for (int j = 0; j < count; ++j) grad[static_cast<size_t>(j)] += src[static_cast<size_t>(j)];
}

// scale * (f_i^(k) - g_i^(k)) - c_off - t_coeff * t  (perfect secrecy rows:
// epigraph, QoS and feasibility-ratio variants; the ratio rows use
// scale = 1/c_i so the epigraph variable stays at ratio scale).
SmoothOracle perfect_secrecy_row(const SurrogateContext& ctx, Layout lay, int i,
                                 double c_off, double t_coeff,
                                 double scale = 1.0) {
  const int M = lay.M;
  const int ti = lay.has_t ? lay.t_idx() : -1;
  return [&ctx, M, ti, i, c_off, t_coeff, scale,
          gf = std::vector<double>(static_cast<size_t>(M)),
          gg = std::vector<double>(static_cast<size_t>(M))](
             std::span<const double> x, std::span<double> grad) mutable {
    auto p = x.first(static_cast<size_t>(M));
    double v =
        scale * (surrogate_f(ctx, i, p, gf) - surrogate_g(ctx, i, p, gg)) -
        c_off;
    if (!grad.empty()) {
      for (int j = 0; j < M; ++j) {
        grad[static_cast<size_t>(j)] +=
            scale * (gf[static_cast<size_t>(j)] - gg[static_cast<size_t>(j)]);
      }
    }
    if (t_coeff != 0.0) {
      v -= t_coeff * x[static_cast<size_t>(ti)];
      if (!grad.empty()) grad[static_cast<size_t>(ti)] -= t_coeff;
    }
    return v;
  };
}

// F~_i + G~_i - t  (perfect per-link EE epigraph row).
SmoothOracle perfect_ee_link_row(const SurrogateContext& ctx, Layout lay, int i) {
  const int M = lay.M;
  const int ti = lay.t_idx();
  return [&ctx, M, ti, i, gF = std::vector<double>(static_cast<size_t>(M)),
          gG = std::vector<double>(static_cast<size_t>(M))](
             std::span<const double> x, std::span<double> grad) mutable {
    auto p = x.first(static_cast<size_t>(M));
    double v = surrogate_F_link(ctx, i, p, gF) + surrogate_G_link(ctx, i, p, gG) -
               x[static_cast<size_t>(ti)];
    if (!grad.empty()) {
      for (int j = 0; j < M; ++j) {
        grad[static_cast<size_t>(j)] +=
            gF[static_cast<size_t>(j)] + gG[static_cast<size_t>(j)];
      }
      grad[static_cast<size_t>(ti)] -= 1.0;
    }
    return v;
  };
}

SmoothOracle see_perfect_objective(const SurrogateContext& ctx, int M) {
  return [&ctx, M, gF = std::vector<double>(static_cast<size_t>(M)),
          gG = std::vector<double>(static_cast<size_t>(M))](
             std::span<const double> x, std::span<double> grad) mutable {
    auto p = x.first(static_cast<size_t>(M));
    double v = 0.0;
    for (int i = 0; i < M; ++i) {
      v += surrogate_F_ee(ctx, i, p, gF) + surrogate_G_ee(ctx, i, p, gG);
      if (!grad.empty()) {
        for (int j = 0; j < M; ++j) {
          grad[static_cast<size_t>(j)] +=
              gF[static_cast<size_t>(j)] + gG[static_cast<size_t>(j)];
        }
      }
    }
    return v;
  };
}

SmoothOracle t_objective(Layout lay) {
  const int ti = lay.t_idx();
  return [ti](std::span<const double> x, std::span<double> grad) {
    if (!grad.empty()) grad[static_cast<size_t>(ti)] += 1.0;
    return x[static_cast<size_t>(ti)];
  };
}

// Eve outage-rate feasibility surrogate: p_i h_ie ln(1-eps) + sigma_e^2 r_i
// + h_ie sum_{j != i} Lambda_ij >= 0, which implies the exact quantile
// condition r_i >= root.
SmoothOracle eve_outage_row(const SurrogateContext& ctx, Layout lay, int i) {
  const int M = lay.M;
  const int ri = lay.r_idx(i);
  return [&ctx, M, ri, i](std::span<const double> x, std::span<double> grad) {
    const auto& he = ctx.inst->eve_gains;
    const double lg = std::log1p(-ctx.params.eps_ev);
    const double hi = he[static_cast<size_t>(i)];
    const double r = x[static_cast<size_t>(ri)];
    double v = x[static_cast<size_t>(i)] * hi * lg +
               ctx.inst->noise_eve * r;
    if (!grad.empty()) {
      grad[static_cast<size_t>(i)] += hi * lg;
      grad[static_cast<size_t>(ri)] += ctx.inst->noise_eve;
    }
    const bool want_grad = !grad.empty();
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      double dr = 0.0, dpj = 0.0, dpi = 0.0;
      double L = surrogate_Lambda(ctx, i, j, r, x[static_cast<size_t>(j)],
                                  x[static_cast<size_t>(i)],
                                  want_grad ? &dr : nullptr,
                                  want_grad ? &dpj : nullptr,
                                  want_grad ? &dpi : nullptr);
      v += hi * L;
      if (want_grad) {
        grad[static_cast<size_t>(ri)] += hi * dr;
        grad[static_cast<size_t>(j)] += hi * dpj;
        grad[static_cast<size_t>(i)] += hi * dpi;
      }
    }
    return v;
  };
}

void add_tr1_rows(SubBuilder& b, const SurrogateContext& ctx) {
  const Layout lay = b.lay;
  const int M = lay.M;
  for (int i = 0; i < M; ++i) {
    const int ri = lay.r_idx(i);
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      b.add(
          [&ctx, i, j, ri](std::span<const double> x, std::span<double> grad) {
            const bool want_grad = !grad.empty();
            double dr = 0.0, dpj = 0.0, dpi = 0.0;
            double v = surrogate_lambda(ctx, i, j, x[static_cast<size_t>(ri)],
                                        x[static_cast<size_t>(j)],
                                        x[static_cast<size_t>(i)],
                                        want_grad ? &dr : nullptr,
                                        want_grad ? &dpj : nullptr,
                                        want_grad ? &dpi : nullptr);
            if (want_grad) {
              grad[static_cast<size_t>(ri)] += dr;
              grad[static_cast<size_t>(j)] += dpj;
              grad[static_cast<size_t>(i)] += dpi;
            }
            return v;
          },
          {i, j, ri});
      const double rk = ctx.state.r_k[static_cast<size_t>(i)];
      const double pkj = ctx.state.p_k.p[static_cast<size_t>(j)];
      b.add(
          [j, ri, rk, pkj](std::span<const double> x, std::span<double> grad) {
            double v = 2.5 - x[static_cast<size_t>(ri)] / rk -
                       x[static_cast<size_t>(j)] / pkj;
            if (!grad.empty()) {
              grad[static_cast<size_t>(ri)] -= 1.0 / rk;
              grad[static_cast<size_t>(j)] -= 1.0 / pkj;
            }
            return v;
          },
          {j, ri});
    }
  }
}

// scale * (f_i^(k)(p) - a_i^(k)(r_i)) - c_off - t_coeff * t  (partial
// epigraph / QoS; ratio rows use scale = 1/c_i).
SmoothOracle partial_secrecy_row(const SurrogateContext& ctx, Layout lay, int i,
                                 double c_off, double t_coeff,
                                 double scale = 1.0) {
  const int M = lay.M;
  const int ri = lay.r_idx(i);
  const int ti = lay.has_t ? lay.t_idx() : -1;
  return [&ctx, M, ri, ti, i, c_off, t_coeff, scale,
          gf = std::vector<double>(static_cast<size_t>(M))](
             std::span<const double> x, std::span<double> grad) mutable {
    auto p = x.first(static_cast<size_t>(M));
    const bool want_grad = !grad.empty();
    double da = 0.0;
    double v = scale * (surrogate_f(ctx, i, p,
                                    want_grad ? std::span<double>(gf)
                                              : std::span<double>{}) -
                        surrogate_a(ctx, i, x[static_cast<size_t>(ri)],
                                    want_grad ? &da : nullptr)) -
               c_off;
    if (want_grad) {
      for (int j = 0; j < M; ++j)
        grad[static_cast<size_t>(j)] += scale * gf[static_cast<size_t>(j)];
      grad[static_cast<size_t>(ri)] -= scale * da;
    }
    if (t_coeff != 0.0) {
      v -= t_coeff * x[static_cast<size_t>(ti)];
      if (!grad.empty()) grad[static_cast<size_t>(ti)] -= t_coeff;
    }
    return v;
  };
}

SmoothOracle see_partial_objective(const SurrogateContext& ctx, Layout lay) {
  const int M = lay.M;
  return [&ctx, lay, M, gF = std::vector<double>(static_cast<size_t>(M)),
          gA = std::vector<double>(static_cast<size_t>(M))](
             std::span<const double> x, std::span<double> grad) mutable {
    auto p = x.first(static_cast<size_t>(M));
    double v = 0.0;
    for (int i = 0; i < M; ++i) {
      v += surrogate_F_ee(ctx, i, p, gF);
      if (!grad.empty()) add_span(grad, gF, M);
      double dr = 0.0;
      std::fill(gA.begin(), gA.end(), 0.0);
      v += surrogate_a_over_pi(ctx, i, x[static_cast<size_t>(lay.r_idx(i))], p,
                               &dr, gA);
      if (!grad.empty()) {
        add_span(grad, gA, M);
        grad[static_cast<size_t>(lay.r_idx(i))] += dr;
      }
    }
    return v;
  };
}

// F~_i(p) + a~link_i(r_i, p_i) - t  (partial maximin-SEE epigraph row).
SmoothOracle partial_see_link_row(const SurrogateContext& ctx, Layout lay, int i) {
  const int M = lay.M;
  const int ri = lay.r_idx(i);
  const int ti = lay.t_idx();
  return [&ctx, M, ri, ti, i, gF = std::vector<double>(static_cast<size_t>(M))](
             std::span<const double> x, std::span<double> grad) mutable {
    auto p = x.first(static_cast<size_t>(M));
    double dr = 0.0, dpi = 0.0;
    double v = surrogate_F_link(ctx, i, p, gF) +
               surrogate_a_over_pi_link(ctx, i, x[static_cast<size_t>(ri)],
                                        x[static_cast<size_t>(i)], &dr, &dpi) -
               x[static_cast<size_t>(ti)];
    if (!grad.empty()) {
      add_span(grad, gF, M);
      grad[static_cast<size_t>(ri)] += dr;
      grad[static_cast<size_t>(i)] += dpi;
      grad[static_cast<size_t>(ti)] -= 1.0;
    }
    return v;
  };
}

// Robust user-rate feasibility surrogate, negated so >= 0 is required:
// -[p_i h_ii (d ln(1-eps_c) - 1) + sigma_i^2 R_i + sum h_ji Ups_ij
//   + d h_ii sum Phi_ij] >= 0, implying the exact outage condition R_i <= root.
SmoothOracle user_rate_row_raw(const SurrogateContext& ctx, Layout lay, int i) {
  const int M = lay.M;
  const int Ri = lay.R_idx(i);
  return [&ctx, M, Ri, i](std::span<const double> x, std::span<double> grad) {
    const auto& hm = ctx.inst->mean_gains;
    const double hii = hm[static_cast<size_t>(i)][static_cast<size_t>(i)];
    const double d = ctx.params.delta;
    const double base = d * std::log1p(-ctx.params.eps_c) - 1.0;
    const double R = x[static_cast<size_t>(Ri)];
    double v = x[static_cast<size_t>(i)] * hii * base +
               ctx.inst->noise_user[static_cast<size_t>(i)] * R;
    double gR = ctx.inst->noise_user[static_cast<size_t>(i)];
    double gpi = hii * base;
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      const double hji = hm[static_cast<size_t>(j)][static_cast<size_t>(i)];
      double dR = 0.0, dpj = 0.0, dpi = 0.0;
      double U = surrogate_Upsilon_scaled(ctx, i, j, R, x[static_cast<size_t>(j)],
                                          &dR, &dpj);
      v += hji * U;
      double gpj = hji * dpj;
      gR += hji * dR;
      dR = dpj = dpi = 0.0;
      double P = surrogate_Phi_scaled(ctx, i, j, R, x[static_cast<size_t>(j)],
                                      x[static_cast<size_t>(i)], &dR, &dpj, &dpi);
      v += d * hii * P;
      gR += d * hii * dR;
      gpj += d * hii * dpj;
      gpi += d * hii * dpi;
      if (!grad.empty()) grad[static_cast<size_t>(j)] -= gpj;
    }
    if (!grad.empty()) {
      grad[static_cast<size_t>(i)] -= gpi;
      grad[static_cast<size_t>(Ri)] -= gR;
    }
    return -v;
  };
}

// When the R_i root sits below the rate-variable floor, the clamped anchor
// leaves this row slightly negative (by at most the row slope times the
// floor). Shift it by the anchor deficit so warm starts stay feasible.
SmoothOracle user_rate_row(const SurrogateContext& ctx, Layout lay, int i) {
  SmoothOracle raw = user_rate_row_raw(ctx, lay, i);
  std::vector<double> anchor(static_cast<size_t>(lay.n()), 0.0);
  for (int j = 0; j < lay.M; ++j)
    anchor[static_cast<size_t>(j)] = ctx.state.p_k.p[static_cast<size_t>(j)];
  anchor[static_cast<size_t>(lay.R_idx(i))] =
      ctx.state.R_k[static_cast<size_t>(i)];
  double v0 = raw(anchor, {});
  if (v0 >= 0.0) return raw;
  return [raw = std::move(raw), off = -v0](std::span<const double> x,
                                           std::span<double> grad) {
    return raw(x, grad) + off;
  };
}

// scale * (A_i^(k)(R_i) - a_i^(k)(r_i)) - c_off - t_coeff * t  (robust
// epigraph / QoS; ratio rows use scale = 1/c_i).
SmoothOracle robust_secrecy_row(const SurrogateContext& ctx, Layout lay, int i,
                                double c_off, double t_coeff,
                                double scale = 1.0) {
  const int ri = lay.r_idx(i);
  const int Ri = lay.R_idx(i);
  const int ti = lay.has_t ? lay.t_idx() : -1;
  return [&ctx, ri, Ri, ti, i, c_off, t_coeff, scale](std::span<const double> x,
                                                      std::span<double> grad) {
    double dA = 0.0, da = 0.0;
    double v = scale * (surrogate_A(ctx, i, x[static_cast<size_t>(Ri)], &dA) -
                        surrogate_a(ctx, i, x[static_cast<size_t>(ri)], &da)) -
               c_off;
    if (!grad.empty()) {
      grad[static_cast<size_t>(Ri)] += scale * dA;
      grad[static_cast<size_t>(ri)] -= scale * da;
    }
    if (t_coeff != 0.0) {
      v -= t_coeff * x[static_cast<size_t>(ti)];
      if (!grad.empty()) grad[static_cast<size_t>(ti)] -= t_coeff;
    }
    return v;
  };
}

SmoothOracle see_robust_objective(const SurrogateContext& ctx, Layout lay) {
  const int M = lay.M;
  return [&ctx, lay, M, gA = std::vector<double>(static_cast<size_t>(M)),
          ga = std::vector<double>(static_cast<size_t>(M))](
             std::span<const double> x, std::span<double> grad) mutable {
    auto p = x.first(static_cast<size_t>(M));
    double v = 0.0;
    for (int i = 0; i < M; ++i) {
      double dR = 0.0, dr = 0.0;
      std::fill(gA.begin(), gA.end(), 0.0);
      std::fill(ga.begin(), ga.end(), 0.0);
      v += surrogate_A_over_pi(ctx, i, x[static_cast<size_t>(lay.R_idx(i))], p,
                               &dR, gA);
      v += surrogate_a_over_pi(ctx, i, x[static_cast<size_t>(lay.r_idx(i))], p,
                               &dr, ga);
      if (!grad.empty()) {
        add_span(grad, gA, M);
        add_span(grad, ga, M);
        grad[static_cast<size_t>(lay.R_idx(i))] += dR;
        grad[static_cast<size_t>(lay.r_idx(i))] += dr;
      }
    }
    return v;
  };
}

// A~link_i(R_i, p_i) + a~link_i(r_i, p_i) - t  (robust maximin-SEE row).
SmoothOracle robust_see_link_row(const SurrogateContext& ctx, Layout lay, int i) {
  const int ri = lay.r_idx(i);
  const int Ri = lay.R_idx(i);
  const int ti = lay.t_idx();
  return [&ctx, ri, Ri, ti, i](std::span<const double> x,
                               std::span<double> grad) {
    double dR = 0.0, dpi1 = 0.0, dr = 0.0, dpi2 = 0.0;
    double v = surrogate_A_over_pi_link(ctx, i, x[static_cast<size_t>(Ri)],
                                        x[static_cast<size_t>(i)], &dR, &dpi1) +
               surrogate_a_over_pi_link(ctx, i, x[static_cast<size_t>(ri)],
                                        x[static_cast<size_t>(i)], &dr, &dpi2) -
               x[static_cast<size_t>(ti)];
    if (!grad.empty()) {
      grad[static_cast<size_t>(Ri)] += dR;
      grad[static_cast<size_t>(ri)] += dr;
      grad[static_cast<size_t>(i)] += dpi1 + dpi2;
      grad[static_cast<size_t>(ti)] -= 1.0;
    }
    return v;
  };
}

// -- shared driver scaffolding -----------------------------------------------

enum class Objective { maximin_secrecy, see, maximin_ee, qos_ratio };

bool needs_t(Objective o) { return o != Objective::see; }

void check_instance(const NetworkInstance& inst, const ScenarioParams& params,
                    CsiMode expected) {
  validate(inst);
  validate(params);
  if (inst.mode != expected || params.csi_mode != expected) {
    throw std::invalid_argument("instance/params CSI mode mismatch for solver");
  }
  if (!params.qos.empty() &&
      params.qos.size() != static_cast<size_t>(inst.M)) {
    throw std::invalid_argument("qos vector length != M");
  }
}

std::vector<double> default_start(const ScenarioParams& params, int M,
                                  const PathFollowingOptions& opts) {
  return std::vector<double>(static_cast<size_t>(M),
                             opts.p0_fraction * params.P_budget);
}

bool any_positive_qos(const ScenarioParams& params) {
  for (double c : params.qos) {
    if (c > 0.0) return true;
  }
  return false;
}

[[noreturn]] void solver_abort(int outer, const SubproblemSolution& sol) {
  throw std::runtime_error(
      "inner solver could not recover a feasible point at outer iteration " +
      std::to_string(outer) + " (kkt residual " +
      std::to_string(sol.kkt_residual) + ")");
}

// Epigraph warm start: every epigraph row carries t with coefficient -1, so
// evaluating the t-rows at the seeded start with t = 0 gives the largest
// feasible t directly. Place t a hair below that, clamped into the t box.
// (Computing from the rows, not the exact anchor objective, keeps the start
// feasible when seed perturbations are amplified by row scaling.)
void seed_t(const SmoothConcaveProgram& prog, int t_idx,
            std::vector<double>& start) {
  start.push_back(0.0);
  double m = std::numeric_limits<double>::infinity();
  std::span<const double> x(start);
  for (size_t k = 0; k < prog.constraints.size(); ++k) {
    const auto& vars = prog.constraint_vars[k];
    if (std::find(vars.begin(), vars.end(), t_idx) == vars.end()) continue;
    m = std::min(m, prog.constraints[k](x, {}));
  }
  if (!std::isfinite(m)) m = 0.0;
  const double lo = prog.lower.back(), hi = prog.upper.back();
  const double margin = 1e-6 * std::max(1.0, std::abs(m));
  start.back() = std::min(std::max(m - margin, lo + 1e-6), hi - 1e-6);
}

}  // namespace

// ===========================================================================
// Perfect CSI
// ===========================================================================

namespace {

double exact_perfect(const NetworkInstance& inst, const ScenarioParams& params,
                     const PowerAllocation& p, Objective obj) {
  double v = 0.0;
  switch (obj) {
    case Objective::maximin_secrecy: {
      v = secrecy_throughput(inst, p, 0);
      for (int i = 1; i < inst.M; ++i)
        v = std::min(v, secrecy_throughput(inst, p, i));
      break;
    }
    case Objective::see:
      v = see_objective(inst, p, params);
      break;
    case Objective::maximin_ee: {
      v = per_link_ee(inst, p, 0, params);
      for (int i = 1; i < inst.M; ++i)
        v = std::min(v, per_link_ee(inst, p, i, params));
      break;
    }
    case Objective::qos_ratio: {
      v = kRatioHi;
      for (int i = 0; i < inst.M; ++i) {
        double c = params.qos_at(i);
        if (c > 0.0) v = std::min(v, secrecy_throughput(inst, p, i) / c);
      }
      break;
    }
  }
  return v;
}

struct PerfectStep {
  PowerAllocation p;
  double exact = 0.0;
};

PerfectStep perfect_step(const NetworkInstance& inst,
                         const ScenarioParams& params,
                         const PathFollowingOptions& opts,
                         const PowerAllocation& p, Objective obj, int outer) {
  const int M = inst.M;
  IterateState state = make_iterate_state(inst, p);
  SurrogateContext ctx = make_surrogate_context(inst, params, std::move(state));
  Layout lay{M, false, false, needs_t(obj)};
  SubBuilder b(ctx, lay, opts, 0.0, 0.0, false);
  if (obj == Objective::qos_ratio) b.ratio_t_box();

  for (int i = 0; i < M; ++i) {
    const double c = params.qos_at(i);
    switch (obj) {
      case Objective::maximin_secrecy:
        b.add(perfect_secrecy_row(ctx, lay, i, 0.0, 1.0),
              with_extra(all_p_vars(M), {lay.t_idx()}));
        break;
      case Objective::see:
        if (c > 0.0) b.add(perfect_secrecy_row(ctx, lay, i, c, 0.0), all_p_vars(M));
        break;
      case Objective::maximin_ee:
        b.add(perfect_ee_link_row(ctx, lay, i),
              with_extra(all_p_vars(M), {lay.t_idx()}));
        if (c > 0.0) b.add(perfect_secrecy_row(ctx, lay, i, c, 0.0), all_p_vars(M));
        break;
      case Objective::qos_ratio:
        if (c > 0.0) {
          b.add(perfect_secrecy_row(ctx, lay, i, 0.0, 1.0, 1.0 / c),
                with_extra(all_p_vars(M), {lay.t_idx()}));
        }
        break;
    }
  }
  b.prog.objective = needs_t(obj) ? t_objective(lay) : see_perfect_objective(ctx, M);

  std::vector<double> start = p.p;
  if (lay.has_t) seed_t(b.prog, lay.t_idx(), start);
  SubproblemSolution sol = solve(b.prog, start, opts.solver_tol);
  if (sol.status == SolveStatus::infeasible_start_unrecovered)
    solver_abort(outer, sol);

  PerfectStep out;
  out.p.p.assign(sol.x.begin(), sol.x.begin() + M);
  out.exact = exact_perfect(inst, params, out.p, obj);
  return out;
}

SolveReport run_perfect(const NetworkInstance& inst, const ScenarioParams& params,
                        const PowerAllocation& p0, const PathFollowingOptions& opts,
                        Objective obj) {
  check_instance(inst, params, CsiMode::perfect);
  PowerAllocation p;
  p.p = p0.p.empty() ? default_start(params, inst.M, opts) : p0.p;
  validate_allocation(p, params);
  if (obj == Objective::see || obj == Objective::maximin_ee) {
    for (int i = 0; i < inst.M; ++i) {
      double c = params.qos_at(i);
      if (c > 0.0 && secrecy_throughput(inst, p, i) < c - 1e-8) {
        throw std::invalid_argument(
            "start point violates the QoS constraints; run init_perfect_qos first");
      }
    }
  }

  SolveReport rep;
  double obj_val = exact_perfect(inst, params, p, obj);
  rep.trace.push_back(obj_val);
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    PerfectStep step = perfect_step(inst, params, opts, p, obj, outer);
    rep.iterations = outer;
    if (step.exact < obj_val) {  // surrogate gain below numeric noise: stop
      rep.status = PathStatus::converged;
      break;
    }
    p = step.p;
    rep.trace.push_back(step.exact);
    if (rel_gain(obj_val, step.exact) <= opts.eps_tol) {
      obj_val = step.exact;
      rep.status = PathStatus::converged;
      break;
    }
    obj_val = step.exact;
  }
  rep.final_p = p;
  rep.qos_slack = secrecy_throughput(inst, p, 0) - params.qos_at(0);
  for (int i = 1; i < inst.M; ++i) {
    rep.qos_slack = std::min(
        rep.qos_slack, secrecy_throughput(inst, p, i) - params.qos_at(i));
  }
  return rep;
}

}  // namespace

SolveReport maximin_secrecy_perfect(const NetworkInstance& inst,
                                    const ScenarioParams& params,
                                    const PowerAllocation& p0,
                                    const PathFollowingOptions& opts) {
  return run_perfect(inst, params, p0, opts, Objective::maximin_secrecy);
}

SolveReport see_perfect(const NetworkInstance& inst, const ScenarioParams& params,
                        const PowerAllocation& p0,
                        const PathFollowingOptions& opts) {
  return run_perfect(inst, params, p0, opts, Objective::see);
}

SolveReport maximin_ee_perfect(const NetworkInstance& inst,
                               const ScenarioParams& params,
                               const PowerAllocation& p0,
                               const PathFollowingOptions& opts) {
  return run_perfect(inst, params, p0, opts, Objective::maximin_ee);
}

PowerAllocation init_perfect_qos(const NetworkInstance& inst,
                                 const ScenarioParams& params,
                                 const PowerAllocation& p_start,
                                 const PathFollowingOptions& opts) {
  check_instance(inst, params, CsiMode::perfect);
  PowerAllocation p;
  p.p = p_start.p.empty() ? default_start(params, inst.M, opts) : p_start.p;
  validate_allocation(p, params);
  if (!any_positive_qos(params)) return p;  // vacuous QoS: ratio convention +inf

  double ratio = exact_perfect(inst, params, p, Objective::qos_ratio);
  if (ratio >= 1.0) return p;
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    PerfectStep step =
        perfect_step(inst, params, opts, p, Objective::qos_ratio, outer);
    if (step.exact >= 1.0) return step.p;
    if (rel_gain(ratio, step.exact) <= opts.eps_tol) break;  // stalled short of 1
    p = step.p;
    ratio = step.exact;
  }
  throw std::runtime_error(
      "QoS targets unreachable within the power budget (feasibility ratio " +
      std::to_string(ratio) + " < 1)");
}

// ===========================================================================
// Partial wiretap CSI
// ===========================================================================

namespace {

double exact_partial(const NetworkInstance& inst, const ScenarioParams& params,
                     const PowerAllocation& p, const std::vector<double>& r,
                     Objective obj) {
  const int M = inst.M;
  double v = 0.0;
  switch (obj) {
    case Objective::maximin_secrecy: {
      v = exact_secrecy_partial(inst, p, r, 0);
      for (int i = 1; i < M; ++i)
        v = std::min(v, exact_secrecy_partial(inst, p, r, i));
      break;
    }
    case Objective::see: {
      double s = 0.0;
      for (int i = 0; i < M; ++i) s += exact_secrecy_partial(inst, p, r, i);
      v = s / power_consumption(p, params);
      break;
    }
    case Objective::maximin_ee: {
      v = kRatioHi;
      for (int i = 0; i < M; ++i) {
        v = std::min(v, exact_secrecy_partial(inst, p, r, i) /
                            per_link_power(p.p[static_cast<size_t>(i)], params));
      }
      break;
    }
    case Objective::qos_ratio: {
      v = kRatioHi;
      for (int i = 0; i < M; ++i) {
        double c = params.qos_at(i);
        if (c > 0.0) v = std::min(v, exact_secrecy_partial(inst, p, r, i) / c);
      }
      break;
    }
  }
  return v;
}

struct PartialStep {
  PowerAllocation p;
  std::vector<double> r;
  double exact = 0.0;
  bool tr_active = false;
};

PartialStep partial_step(const NetworkInstance& inst,
                         const ScenarioParams& params,
                         const PathFollowingOptions& opts, double r_cap,
                         const PowerAllocation& p, const std::vector<double>& r,
                         Objective obj, int outer) {
  const int M = inst.M;
  IterateState state = make_iterate_state(inst, p, r);
  SurrogateContext ctx =
      make_surrogate_context(inst, params, std::move(state), r_cap);
  Layout lay{M, true, false, needs_t(obj)};
  SubBuilder b(ctx, lay, opts, r_cap, 0.0, false);
  if (obj == Objective::qos_ratio) b.ratio_t_box();

  for (int i = 0; i < M; ++i) {
    b.add(eve_outage_row(ctx, lay, i), with_extra(all_p_vars(M), {lay.r_idx(i)}));
  }
  add_tr1_rows(b, ctx);
  for (int i = 0; i < M; ++i) {
    const double c = params.qos_at(i);
    switch (obj) {
      case Objective::maximin_secrecy:
        b.add(partial_secrecy_row(ctx, lay, i, 0.0, 1.0),
              with_extra(all_p_vars(M), {lay.r_idx(i), lay.t_idx()}));
        break;
      case Objective::see:
        if (c > 0.0) {
          b.add(partial_secrecy_row(ctx, lay, i, c, 0.0),
                with_extra(all_p_vars(M), {lay.r_idx(i)}));
        }
        break;
      case Objective::maximin_ee:
        b.add(partial_see_link_row(ctx, lay, i),
              with_extra(all_p_vars(M), {lay.r_idx(i), lay.t_idx()}));
        if (c > 0.0) {
          b.add(partial_secrecy_row(ctx, lay, i, c, 0.0),
                with_extra(all_p_vars(M), {lay.r_idx(i)}));
        }
        break;
      case Objective::qos_ratio:
        if (c > 0.0) {
          b.add(partial_secrecy_row(ctx, lay, i, 0.0, 1.0, 1.0 / c),
                with_extra(all_p_vars(M), {lay.r_idx(i), lay.t_idx()}));
        }
        break;
    }
  }
  b.prog.objective =
      needs_t(obj) ? t_objective(lay) : see_partial_objective(ctx, lay);

  std::vector<double> start = p.p;
  for (int i = 0; i < M; ++i) {
    // seed slightly above the root so the root-active rows start interior
    // relative-only slack: an absolute offset would break the r/r_k trust
    // rows when the root sits near its floor
    double rs = r[static_cast<size_t>(i)] * (1.0 + kSeedSlack);
    start.push_back(std::min(rs, r_cap * (1.0 - 1e-9)));
  }
  if (lay.has_t) seed_t(b.prog, lay.t_idx(), start);
  SubproblemSolution sol = solve(b.prog, start, opts.solver_tol);
  if (sol.status == SolveStatus::infeasible_start_unrecovered)
    solver_abort(outer, sol);

  PartialStep out;
  out.p.p.assign(sol.x.begin(), sol.x.begin() + M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M && !out.tr_active; ++j) {
      if (j == i) continue;
      double row2 = 2.5 - sol.x[static_cast<size_t>(lay.r_idx(i))] /
                              ctx.state.r_k[static_cast<size_t>(i)] -
                    sol.x[static_cast<size_t>(j)] /
                        ctx.state.p_k.p[static_cast<size_t>(j)];
      if (row2 < 1e-6) out.tr_active = true;
    }
  }
  out.r = eve_quantiles(inst, params, out.p.p, opts.bisection);
  out.exact = exact_partial(inst, params, out.p, out.r, obj);
  return out;
}

void qos_feasibility_partial(const NetworkInstance& inst,
                             const ScenarioParams& params,
                             const PathFollowingOptions& opts, double r_cap,
                             PowerAllocation& p, std::vector<double>& r) {
  double ratio = exact_partial(inst, params, p, r, Objective::qos_ratio);
  if (ratio >= 1.0) return;
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    PartialStep step = partial_step(inst, params, opts, r_cap, p, r,
                                    Objective::qos_ratio, outer);
    if (step.exact >= 1.0) {
      p = step.p;
      r = step.r;
      return;
    }
    if (rel_gain(ratio, step.exact) <= opts.eps_tol) break;
    p = step.p;
    r = step.r;
    ratio = step.exact;
  }
  throw std::runtime_error(
      "QoS targets unreachable under the outage constraints (feasibility ratio " +
      std::to_string(ratio) + " < 1)");
}

SolveReport run_partial(const NetworkInstance& inst, const ScenarioParams& params,
                        const PathFollowingOptions& opts, Objective obj) {
  check_instance(inst, params, CsiMode::partial);
  const double r_cap = r_box_cap(inst, params);
  PowerAllocation p;
  p.p = default_start(params, inst.M, opts);
  std::vector<double> r = eve_quantiles(inst, params, p.p, opts.bisection);
  if ((obj == Objective::see || obj == Objective::maximin_ee) &&
      any_positive_qos(params)) {
    qos_feasibility_partial(inst, params, opts, r_cap, p, r);
  }

  SolveReport rep;
  double obj_val = exact_partial(inst, params, p, r, obj);
  rep.trace.push_back(obj_val);
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    PartialStep step =
        partial_step(inst, params, opts, r_cap, p, r, obj, outer);
    rep.iterations = outer;
    rep.trust_region_active = step.tr_active;
    if (step.exact < obj_val) {
      rep.status = PathStatus::converged;
      break;
    }
    p = step.p;
    r = step.r;
    rep.trace.push_back(step.exact);
    if (rel_gain(obj_val, step.exact) <= opts.eps_tol) {
      obj_val = step.exact;
      rep.status = PathStatus::converged;
      break;
    }
    obj_val = step.exact;
  }
  rep.final_p = p;
  rep.final_r = r;
  rep.qos_slack = exact_secrecy_partial(inst, p, r, 0) - params.qos_at(0);
  for (int i = 1; i < inst.M; ++i) {
    rep.qos_slack = std::min(
        rep.qos_slack, exact_secrecy_partial(inst, p, r, i) - params.qos_at(i));
  }
  return rep;
}

}  // namespace

SolveReport maximin_secrecy_partial(const NetworkInstance& inst,
                                    const ScenarioParams& params,
                                    const PathFollowingOptions& opts) {
  return run_partial(inst, params, opts, Objective::maximin_secrecy);
}

SolveReport see_partial(const NetworkInstance& inst, const ScenarioParams& params,
                        const PathFollowingOptions& opts) {
  return run_partial(inst, params, opts, Objective::see);
}

SolveReport maximin_see_partial(const NetworkInstance& inst,
                                const ScenarioParams& params,
                                const PathFollowingOptions& opts) {
  return run_partial(inst, params, opts, Objective::maximin_ee);
}

// ===========================================================================
// Robust direct-link CSI
// ===========================================================================

namespace {

double exact_robust(const ScenarioParams& params, const PowerAllocation& p,
                    const std::vector<double>& R, const std::vector<double>& r,
                    Objective obj) {
  const int M = static_cast<int>(p.p.size());
  double v = 0.0;
  switch (obj) {
    case Objective::maximin_secrecy: {
      v = exact_secrecy_robust(R, r, 0);
      for (int i = 1; i < M; ++i) v = std::min(v, exact_secrecy_robust(R, r, i));
      break;
    }
    case Objective::see: {
      double s = 0.0;
      for (int i = 0; i < M; ++i) s += exact_secrecy_robust(R, r, i);
      v = s / power_consumption(p, params);
      break;
    }
    case Objective::maximin_ee: {
      v = kRatioHi;
      for (int i = 0; i < M; ++i) {
        v = std::min(v, exact_secrecy_robust(R, r, i) /
                            per_link_power(p.p[static_cast<size_t>(i)], params));
      }
      break;
    }
    case Objective::qos_ratio: {
      v = kRatioHi;
      for (int i = 0; i < M; ++i) {
        double c = params.qos_at(i);
        if (c > 0.0) v = std::min(v, exact_secrecy_robust(R, r, i) / c);
      }
      break;
    }
  }
  return v;
}

struct RobustStep {
  PowerAllocation p;
  std::vector<double> r, R;
  double exact = 0.0;
  bool tr_active = false;
};

RobustStep robust_step(const NetworkInstance& inst, const ScenarioParams& params,
                       const PathFollowingOptions& opts, double r_cap,
                       double R_cap, const PowerAllocation& p,
                       const std::vector<double>& r,
                       const std::vector<double>& R, Objective obj, int outer) {
  const int M = inst.M;
  IterateState state = make_iterate_state(inst, p, r, R);
  SurrogateContext ctx =
      make_surrogate_context(inst, params, std::move(state), r_cap);
  Layout lay{M, true, true, needs_t(obj)};
  SubBuilder b(ctx, lay, opts, r_cap, R_cap, /*tr3_boxes=*/true);
  if (obj == Objective::qos_ratio) b.ratio_t_box();

  for (int i = 0; i < M; ++i) {
    b.add(eve_outage_row(ctx, lay, i), with_extra(all_p_vars(M), {lay.r_idx(i)}));
    b.add(user_rate_row(ctx, lay, i), with_extra(all_p_vars(M), {lay.R_idx(i)}));
  }
  add_tr1_rows(b, ctx);
  for (int i = 0; i < M; ++i) {
    const double c = params.qos_at(i);
    switch (obj) {
      case Objective::maximin_secrecy:
        b.add(robust_secrecy_row(ctx, lay, i, 0.0, 1.0),
              {lay.r_idx(i), lay.R_idx(i), lay.t_idx()});
        break;
      case Objective::see:
        if (c > 0.0) {
          b.add(robust_secrecy_row(ctx, lay, i, c, 0.0),
                {lay.r_idx(i), lay.R_idx(i)});
        }
        break;
      case Objective::maximin_ee:
        b.add(robust_see_link_row(ctx, lay, i),
              {i, lay.r_idx(i), lay.R_idx(i), lay.t_idx()});
        if (c > 0.0) {
          b.add(robust_secrecy_row(ctx, lay, i, c, 0.0),
                {lay.r_idx(i), lay.R_idx(i)});
        }
        break;
      case Objective::qos_ratio:
        if (c > 0.0) {
          b.add(robust_secrecy_row(ctx, lay, i, 0.0, 1.0, 1.0 / c),
                {lay.r_idx(i), lay.R_idx(i), lay.t_idx()});
        }
        break;
    }
  }
  b.prog.objective =
      needs_t(obj) ? t_objective(lay) : see_robust_objective(ctx, lay);

  std::vector<double> start = p.p;
  for (int i = 0; i < M; ++i) {
    // relative-only slack: an absolute offset would break the r/r_k trust
    // rows when the root sits near its floor
    double rs = r[static_cast<size_t>(i)] * (1.0 + kSeedSlack);
    start.push_back(std::min(rs, r_cap * (1.0 - 1e-9)));
  }
  for (int i = 0; i < M; ++i) {
    // R root is an upper bound for feasibility; seed slightly below it
    double Rs = R[static_cast<size_t>(i)] * (1.0 - kSeedSlack);
    start.push_back(
        std::max(Rs, b.prog.lower[static_cast<size_t>(lay.R_idx(i))] + 1e-15));
  }
  if (lay.has_t) seed_t(b.prog, lay.t_idx(), start);
  SubproblemSolution sol = solve(b.prog, start, opts.solver_tol);
  if (sol.status == SolveStatus::infeasible_start_unrecovered)
    solver_abort(outer, sol);

  RobustStep out;
  out.p.p.assign(sol.x.begin(), sol.x.begin() + M);
  for (int i = 0; i < M && !out.tr_active; ++i) {
    double Rk = ctx.state.R_k[static_cast<size_t>(i)];
    if (M >= 2 &&
        sol.x[static_cast<size_t>(lay.R_idx(i))] < 0.5 * Rk * (1.0 + 1e-6)) {
      out.tr_active = true;
    }
    if (M >= 2 && sol.x[static_cast<size_t>(i)] <
                      0.5 * ctx.state.p_k.p[static_cast<size_t>(i)] * (1.0 + 1e-6)) {
      out.tr_active = true;
    }
    for (int j = 0; j < M && !out.tr_active; ++j) {
      if (j == i) continue;
      double row2 = 2.5 - sol.x[static_cast<size_t>(lay.r_idx(i))] /
                              ctx.state.r_k[static_cast<size_t>(i)] -
                    sol.x[static_cast<size_t>(j)] /
                        ctx.state.p_k.p[static_cast<size_t>(j)];
      if (row2 < 1e-6) out.tr_active = true;
    }
  }
  out.r = eve_quantiles(inst, params, out.p.p, opts.bisection);
  out.R = robust_rates(inst, params, out.p.p, opts.bisection);
  out.exact = exact_robust(params, out.p, out.R, out.r, obj);
  return out;
}

void qos_feasibility_robust(const NetworkInstance& inst,
                            const ScenarioParams& params,
                            const PathFollowingOptions& opts, double r_cap,
                            double R_cap, PowerAllocation& p,
                            std::vector<double>& r, std::vector<double>& R) {
  double ratio = exact_robust(params, p, R, r, Objective::qos_ratio);
  if (ratio >= 1.0) return;
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    RobustStep step = robust_step(inst, params, opts, r_cap, R_cap, p, r, R,
                                  Objective::qos_ratio, outer);
    if (step.exact >= 1.0) {
      p = step.p;
      r = step.r;
      R = step.R;
      return;
    }
    if (rel_gain(ratio, step.exact) <= opts.eps_tol) break;
    p = step.p;
    r = step.r;
    R = step.R;
    ratio = step.exact;
  }
  throw std::runtime_error(
      "QoS targets unreachable under the robust outage constraints "
      "(feasibility ratio " +
      std::to_string(ratio) + " < 1)");
}

SolveReport run_robust(const NetworkInstance& inst, const ScenarioParams& params,
                       const PathFollowingOptions& opts, Objective obj) {
  check_instance(inst, params, CsiMode::robust);
  const double r_cap = r_box_cap(inst, params);
  const double R_cap = R_box_cap(inst, params);
  PowerAllocation p;
  p.p = default_start(params, inst.M, opts);
  std::vector<double> r = eve_quantiles(inst, params, p.p, opts.bisection);
  std::vector<double> R = robust_rates(inst, params, p.p, opts.bisection);
  if ((obj == Objective::see || obj == Objective::maximin_ee) &&
      any_positive_qos(params)) {
    qos_feasibility_robust(inst, params, opts, r_cap, R_cap, p, r, R);
  }

  SolveReport rep;
  double obj_val = exact_robust(params, p, R, r, obj);
  rep.trace.push_back(obj_val);
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    RobustStep step =
        robust_step(inst, params, opts, r_cap, R_cap, p, r, R, obj, outer);
    rep.iterations = outer;
    rep.trust_region_active = step.tr_active;
    if (step.exact < obj_val) {
      rep.status = PathStatus::converged;
      break;
    }
    p = step.p;
    r = step.r;
    R = step.R;
    rep.trace.push_back(step.exact);
    if (rel_gain(obj_val, step.exact) <= opts.eps_tol) {
      obj_val = step.exact;
      rep.status = PathStatus::converged;
      break;
    }
    obj_val = step.exact;
  }
  rep.final_p = p;
  rep.final_r = r;
  rep.final_R = R;
  rep.qos_slack = exact_secrecy_robust(R, r, 0) - params.qos_at(0);
  for (int i = 1; i < inst.M; ++i) {
    rep.qos_slack =
        std::min(rep.qos_slack, exact_secrecy_robust(R, r, i) - params.qos_at(i));
  }
  return rep;
}

}  // namespace

SolveReport maximin_secrecy_robust(const NetworkInstance& inst,
                                   const ScenarioParams& params,
                                   const PathFollowingOptions& opts) {
  return run_robust(inst, params, opts, Objective::maximin_secrecy);
}

SolveReport see_robust(const NetworkInstance& inst, const ScenarioParams& params,
                       const PathFollowingOptions& opts) {
  return run_robust(inst, params, opts, Objective::see);
}

SolveReport maximin_see_robust(const NetworkInstance& inst,
                               const ScenarioParams& params,
                               const PathFollowingOptions& opts) {
  return run_robust(inst, params, opts, Objective::maximin_ee);
}

}  // namespace secnet
