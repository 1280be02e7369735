#include "secnet/surrogates.hpp"

#include <cmath>
#include <stdexcept>

#include "secnet/bounds_toolbox.hpp"

namespace secnet {

namespace {

// interference + noise at user i: sum_{j != i} h_ji p_j + sigma_i^2
double user_interference(const NetworkInstance& inst, std::span<const double> p, int i) {
  const auto& h = inst.link_gains();
  const size_t ui = static_cast<size_t>(i);
  double v = inst.noise_user[ui];
  for (int j = 0; j < inst.M; ++j)
    if (j != i) v += h[static_cast<size_t>(j)][ui] * p[static_cast<size_t>(j)];
  return v;
}

double eve_interference(const NetworkInstance& inst, std::span<const double> p, int i) {
  double v = inst.noise_eve;
  for (int j = 0; j < inst.M; ++j)
    if (j != i) v += inst.eve_gains[static_cast<size_t>(j)] * p[static_cast<size_t>(j)];
  return v;
}

double pi_of(const ScenarioParams& params, std::span<const double> p) {
  double total = 0.0;
  for (double v : p) total += v;
  return params.zeta * total + params.Pc_per_tx * static_cast<double>(p.size());
}

}  // namespace

IterateState make_iterate_state(const NetworkInstance& inst,
                                const PowerAllocation& p, std::vector<double> r,
                                std::vector<double> R) {
  const size_t m = static_cast<size_t>(inst.M);
  if (p.p.size() != m) throw std::invalid_argument("make_iterate_state: p size mismatch");
  IterateState st;
  st.p_k = p;
  st.r_k = std::move(r);
  st.R_k = std::move(R);
  st.x_k.resize(m);
  st.xe_k.resize(m);
  const auto& h = inst.link_gains();
  for (int i = 0; i < inst.M; ++i) {
    const size_t ui = static_cast<size_t>(i);
    st.x_k[ui] = h[ui][ui] * p.p[ui] / user_interference(inst, p.p, i);
    st.xe_k[ui] = inst.eve_gains[ui] * p.p[ui] / eve_interference(inst, p.p, i);
  }
  if (!st.r_k.empty()) {
    if (st.r_k.size() != m) throw std::invalid_argument("make_iterate_state: r size mismatch");
    st.xij_k.assign(m, std::vector<double>(m, 0.0));
    st.yij_k.assign(m, std::vector<double>(m, 0.0));
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        double x = st.r_k[i] * inst.eve_gains[j] * p.p[j] / (inst.eve_gains[i] * p.p[i]);
        st.xij_k[i][j] = x;
        st.yij_k[i][j] = x / (1.0 + x);
      }
  }
  if (!st.R_k.empty() && st.R_k.size() != m)
    throw std::invalid_argument("make_iterate_state: R size mismatch");
  return st;
}

SurrogateContext make_surrogate_context(const NetworkInstance& inst,
                                        const ScenarioParams& params,
                                        IterateState state, double r_cap) {
  SurrogateContext ctx;
  ctx.inst = &inst;
  ctx.params = params;
  ctx.state = std::move(state);
  ctx.pi_k = pi_of(params, ctx.state.p_k.p);
  ctx.pi_link_k.resize(ctx.state.p_k.p.size());
  for (size_t i = 0; i < ctx.pi_link_k.size(); ++i)
    ctx.pi_link_k[i] = params.zeta * ctx.state.p_k.p[i] + params.Pc_per_tx;
  double xe_cap = 0.0;
  for (double he : inst.eve_gains)
    xe_cap = std::max(xe_cap, he * params.P_budget / inst.noise_eve);
  ctx.alpha_eve = alpha_for_cap(xe_cap);
  ctx.alpha_rate = alpha_for_cap(r_cap);
  ctx.r_cap = r_cap;
  return ctx;
}

double surrogate_f(const SurrogateContext& ctx, int i, std::span<const double> p,
                   std::span<double> grad_p) {
  const NetworkInstance& inst = *ctx.inst;
  const auto& h = inst.link_gains();
  const size_t ui = static_cast<size_t>(i);
  const double x = ctx.state.x_k[ui];
  const double w = x / (1.0 + x);
  const double Dk = user_interference(inst, ctx.state.p_k.p, i);
  const double I = user_interference(inst, p, i);
  const double pk_i = ctx.state.p_k.p[ui];
  double val = std::log1p(x) + w * (2.0 - pk_i / p[ui] - I / Dk);
  if (!grad_p.empty()) {
    for (int j = 0; j < inst.M; ++j) {
      const size_t uj = static_cast<size_t>(j);
      grad_p[uj] = (j == i) ? w * pk_i / (p[ui] * p[ui])
                            : -w * h[uj][ui] / Dk;
    }
  }
  return val;
}

double surrogate_g(const SurrogateContext& ctx, int i, std::span<const double> p,
                   std::span<double> grad_p) {
  const NetworkInstance& inst = *ctx.inst;
  const size_t ui = static_cast<size_t>(i);
  const double xe = ctx.state.xe_k[ui];
  const double c0 = 1.0 / (1.0 + xe);
  const double pk_i = ctx.state.p_k.p[ui];
  const double hie = inst.eve_gains[ui];
  const double De = eve_interference(inst, p, i);
  const double q = 0.5 * hie * (p[ui] * p[ui] / pk_i + pk_i);
  double val = std::log1p(xe) + c0 * (q / De - xe);
  if (!grad_p.empty()) {
    for (int j = 0; j < inst.M; ++j) {
      const size_t uj = static_cast<size_t>(j);
      grad_p[uj] = (j == i) ? c0 * hie * p[ui] / (pk_i * De)
                            : -c0 * q * inst.eve_gains[uj] / (De * De);
    }
  }
  return val;
}

namespace {

// Shared body of F_i^(kappa) with either the network or per-link power
// denominator. pi_val/pi_bar are pi(p)/pi(p_k) (or the pi_i versions);
// dpi_dj gives d pi / d p_j.
double F_body(const SurrogateContext& ctx, int i, std::span<const double> p,
              double pi_bar, double pi_val, bool link_denominator,
              std::span<double> grad_p) {
  const NetworkInstance& inst = *ctx.inst;
  const auto& h = inst.link_gains();
  const size_t ui = static_cast<size_t>(i);
  const double x = ctx.state.x_k[ui];
  const double l = std::log1p(x);
  const double w = x / (pi_bar * (1.0 + x));
  const double Dk = user_interference(inst, ctx.state.p_k.p, i);
  const double I = user_interference(inst, p, i);
  const double pk_i = ctx.state.p_k.p[ui];
  double val = 2.0 * l / pi_bar + w * (2.0 - pk_i / p[ui] - I / Dk) -
               l * pi_val / (pi_bar * pi_bar);
  if (!grad_p.empty()) {
    const double dpi = ctx.params.zeta;  // d pi / d p_j for every j in scope
    for (int j = 0; j < inst.M; ++j) {
      const size_t uj = static_cast<size_t>(j);
      double g = (j == i) ? w * pk_i / (p[ui] * p[ui]) : -w * h[uj][ui] / Dk;
      if (!link_denominator || j == i) g -= l * dpi / (pi_bar * pi_bar);
      grad_p[uj] = g;
    }
  }
  return val;
}

double G_body(const SurrogateContext& ctx, int i, std::span<const double> p,
              double pi_bar, double pi_val, bool link_denominator,
              std::span<double> grad_p) {
  const NetworkInstance& inst = *ctx.inst;
  const size_t ui = static_cast<size_t>(i);
  const double xe = ctx.state.xe_k[ui];
  const double alpha = ctx.alpha_eve;
  const double l = alpha - std::log1p(xe);
  const double c0 = 1.0 / ((1.0 + xe) * pi_bar);
  const double pk_i = ctx.state.p_k.p[ui];
  const double hie = inst.eve_gains[ui];
  const double De = eve_interference(inst, p, i);
  const double q = 0.5 * hie * (p[ui] * p[ui] / pk_i + pk_i);
  double val = 2.0 * l / pi_bar + c0 * xe - c0 * q / De -
               l * pi_val / (pi_bar * pi_bar) - alpha / pi_val;
  if (!grad_p.empty()) {
    const double dpi = ctx.params.zeta;
    for (int j = 0; j < inst.M; ++j) {
      const size_t uj = static_cast<size_t>(j);
      double g = (j == i) ? -c0 * hie * p[ui] / (pk_i * De)
                          : c0 * q * inst.eve_gains[uj] / (De * De);
      if (!link_denominator || j == i)
        g += -l * dpi / (pi_bar * pi_bar) + alpha * dpi / (pi_val * pi_val);
      grad_p[uj] = g;
    }
  }
  return val;
}

}  // namespace

double surrogate_F_ee(const SurrogateContext& ctx, int i, std::span<const double> p,
                      std::span<double> grad_p) {
  return F_body(ctx, i, p, ctx.pi_k, pi_of(ctx.params, p), false, grad_p);
}

double surrogate_G_ee(const SurrogateContext& ctx, int i, std::span<const double> p,
                      std::span<double> grad_p) {
  return G_body(ctx, i, p, ctx.pi_k, pi_of(ctx.params, p), false, grad_p);
}

double surrogate_F_link(const SurrogateContext& ctx, int i, std::span<const double> p,
                        std::span<double> grad_p) {
  const size_t ui = static_cast<size_t>(i);
  double pi_val = ctx.params.zeta * p[ui] + ctx.params.Pc_per_tx;
  return F_body(ctx, i, p, ctx.pi_link_k[ui], pi_val, true, grad_p);
}

double surrogate_G_link(const SurrogateContext& ctx, int i, std::span<const double> p,
                        std::span<double> grad_p) {
  const size_t ui = static_cast<size_t>(i);
  double pi_val = ctx.params.zeta * p[ui] + ctx.params.Pc_per_tx;
  return G_body(ctx, i, p, ctx.pi_link_k[ui], pi_val, true, grad_p);
}

double surrogate_a(const SurrogateContext& ctx, int i, double r_i, double* d_r) {
  const double rk = ctx.state.r_k[static_cast<size_t>(i)];
  if (d_r) *d_r = 1.0 / (rk + 1.0);
  return std::log1p(rk) - rk / (rk + 1.0) + r_i / (rk + 1.0);
}

namespace {

double a_over_pi_body(const SurrogateContext& ctx, int i, double r_i,
                      double pi_bar, double pi_val, double* d_r,
                      double* d_pi_scaled) {
  const double rk = ctx.state.r_k[static_cast<size_t>(i)];
  const double alpha = ctx.alpha_rate;
  const double l = alpha - std::log1p(rk);
  double val = 2.0 * l / pi_bar + rk / (pi_bar * (1.0 + rk)) -
               r_i / (pi_bar * (1.0 + rk)) - l * pi_val / (pi_bar * pi_bar) -
               alpha / pi_val;
  if (d_r) *d_r = -1.0 / (pi_bar * (1.0 + rk));
  // derivative w.r.t. pi_val; caller scales by d pi / d p
  if (d_pi_scaled) *d_pi_scaled = -l / (pi_bar * pi_bar) + alpha / (pi_val * pi_val);
  return val;
}

}  // namespace

double surrogate_a_over_pi(const SurrogateContext& ctx, int i, double r_i,
                           std::span<const double> p, double* d_r,
                           std::span<double> grad_p) {
  double d_pi = 0.0;
  double val = a_over_pi_body(ctx, i, r_i, ctx.pi_k, pi_of(ctx.params, p), d_r, &d_pi);
  if (!grad_p.empty())
    for (size_t j = 0; j < grad_p.size(); ++j) grad_p[j] = d_pi * ctx.params.zeta;
  return val;
}

double surrogate_a_over_pi_link(const SurrogateContext& ctx, int i, double r_i,
                                double p_i, double* d_r, double* d_pi) {
  const size_t ui = static_cast<size_t>(i);
  double pi_val = ctx.params.zeta * p_i + ctx.params.Pc_per_tx;
  double d_pival = 0.0;
  double val = a_over_pi_body(ctx, i, r_i, ctx.pi_link_k[ui], pi_val, d_r, &d_pival);
  if (d_pi) *d_pi = d_pival * ctx.params.zeta;
  return val;
}

double surrogate_lambda(const SurrogateContext& ctx, int i, int j, double r_i,
                        double p_j, double p_i, double* d_r, double* d_pj,
                        double* d_pi) {
  const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
  const double x = ctx.state.xij_k[ui][uj];
  const double y = ctx.state.yij_k[ui][uj];
  const double rk = ctx.state.r_k[ui];
  const double pk_i = ctx.state.p_k.p[ui], pk_j = ctx.state.p_k.p[uj];
  double val = std::log1p(x) + y * (2.0 - rk * pk_j / (r_i * p_j) - p_i / pk_i);
  if (d_r) *d_r = y * rk * pk_j / (r_i * r_i * p_j);
  if (d_pj) *d_pj = y * rk * pk_j / (r_i * p_j * p_j);
  if (d_pi) *d_pi = -y / pk_i;
  return val;
}

TrustRegionRows trust_region_tr1(const SurrogateContext& ctx, int i, int j,
                                 double r_i, double p_j, double p_i) {
  const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
  return {surrogate_lambda(ctx, i, j, r_i, p_j, p_i),
          2.5 - r_i / ctx.state.r_k[ui] - p_j / ctx.state.p_k.p[uj]};
}

double surrogate_Lambda(const SurrogateContext& ctx, int i, int j, double r_i,
                        double p_j, double p_i, double* d_r, double* d_pj,
                        double* d_pi) {
  const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
  const double x = ctx.state.xij_k[ui][uj];
  const double y = ctx.state.yij_k[ui][uj];
  const double rk = ctx.state.r_k[ui];
  const double pk_i = ctx.state.p_k.p[ui], pk_j = ctx.state.p_k.p[uj];
  const double L0 = std::log1p(x);
  const double a = std::sqrt(2.0) / std::sqrt(pk_i);
  const double b = std::sqrt(pk_i) * rk * pk_j / std::sqrt(2.0);
  const double S = a * p_i + b / (r_i * p_j);
  double val = (L0 + 2.0 * y) * p_i - 0.5 * y * S * S -
               0.5 * y * pk_i * (r_i / rk + p_j / pk_j - 2.5);
  if (d_pi) *d_pi = (L0 + 2.0 * y) - y * S * a;
  if (d_r) *d_r = y * S * b / (r_i * r_i * p_j) - 0.5 * y * pk_i / rk;
  if (d_pj) *d_pj = y * S * b / (r_i * p_j * p_j) - 0.5 * y * pk_i / pk_j;
  return val;
}

double surrogate_A(const SurrogateContext& ctx, int i, double R_i, double* d_R) {
  const double Rk = ctx.state.R_k[static_cast<size_t>(i)];
  if (d_R) *d_R = Rk * Rk / ((Rk + 1.0) * R_i * R_i);
  return std::log1p(Rk) + Rk / (Rk + 1.0) - Rk * Rk / ((Rk + 1.0) * R_i);
}

namespace {

double A_over_pi_body(const SurrogateContext& ctx, int i, double R_i,
                      double pi_bar, double pi_val, double* d_R,
                      double* d_pi_scaled) {
  const double Rk = ctx.state.R_k[static_cast<size_t>(i)];
  const double l = std::log1p(Rk);
  const double w = Rk / (pi_bar * (1.0 + Rk));
  double val = 2.0 * l / pi_bar + w * (1.0 - Rk / R_i) -
               l * pi_val / (pi_bar * pi_bar);
  if (d_R) *d_R = w * Rk / (R_i * R_i);
  if (d_pi_scaled) *d_pi_scaled = -l / (pi_bar * pi_bar);
  return val;
}

}  // namespace

double surrogate_A_over_pi(const SurrogateContext& ctx, int i, double R_i,
                           std::span<const double> p, double* d_R,
                           std::span<double> grad_p) {
  double d_pi = 0.0;
  double val = A_over_pi_body(ctx, i, R_i, ctx.pi_k, pi_of(ctx.params, p), d_R, &d_pi);
  if (!grad_p.empty())
    for (size_t j = 0; j < grad_p.size(); ++j) grad_p[j] = d_pi * ctx.params.zeta;
  return val;
}

double surrogate_A_over_pi_link(const SurrogateContext& ctx, int i, double R_i,
                                double p_i, double* d_R, double* d_pi) {
  const size_t ui = static_cast<size_t>(i);
  double pi_val = ctx.params.zeta * p_i + ctx.params.Pc_per_tx;
  double d_pival = 0.0;
  double val = A_over_pi_body(ctx, i, R_i, ctx.pi_link_k[ui], pi_val, d_R, &d_pival);
  if (d_pi) *d_pi = d_pival * ctx.params.zeta;
  return val;
}

double surrogate_Upsilon(const SurrogateContext& ctx, int i, int j, double R_i,
                         double p_j, double* d_R, double* d_pj) {
  const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
  const double Rk = ctx.state.R_k[ui];
  const double pk_j = ctx.state.p_k.p[uj];
  double val = 0.5 * (R_i + p_j) * (R_i + p_j) - Rk * R_i + 0.5 * Rk * Rk -
               pk_j * p_j + 0.5 * pk_j * pk_j;
  if (d_R) *d_R = (R_i + p_j) - Rk;
  if (d_pj) *d_pj = (R_i + p_j) - pk_j;
  return val;
}

TrustRegionRows trust_region_tr3(const SurrogateContext& ctx, int i, int j,
                                 double R_i, double p_j) {
  const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
  return {2.0 * R_i - ctx.state.R_k[ui], 2.0 * p_j - ctx.state.p_k.p[uj]};
}

double surrogate_Upsilon_scaled(const SurrogateContext& ctx, int i, int j,
                                double R_i, double p_j, double* d_R,
                                double* d_pj) {
  const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
  const double c = ctx.state.p_k.p[uj] / ctx.state.R_k[ui];
  if (d_R) *d_R = c * R_i;
  if (d_pj) *d_pj = p_j / c;
  return 0.5 * (c * R_i * R_i + p_j * p_j / c);
}

namespace {

double phi_body(const SurrogateContext& ctx, int i, int j, double R_i,
                double p_j, double p_i, double* d_R, double* d_pj, double* d_pi,
                bool scaled) {
  const NetworkInstance& inst = *ctx.inst;
  const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
  const auto& h = inst.link_gains();
  const double h_ji = h[uj][ui];
  const double h_ii = h[ui][ui];
  const double Rk = ctx.state.R_k[ui];
  const double pk_i = ctx.state.p_k.p[ui], pk_j = ctx.state.p_k.p[uj];
  const double rho = Rk * pk_j / pk_i;
  const double C = 1.0 / (h_ii / h_ji + rho);
  const double L = std::log1p(h_ji * rho / h_ii);
  double dU_R = 0.0, dU_pj = 0.0;
  double U = scaled ? surrogate_Upsilon_scaled(ctx, i, j, R_i, p_j, &dU_R, &dU_pj)
                    : surrogate_Upsilon(ctx, i, j, R_i, p_j, &dU_R, &dU_pj);
  double val = p_i * L + C * (U - rho * p_i);
  if (d_R) *d_R = C * dU_R;
  if (d_pj) *d_pj = C * dU_pj;
  if (d_pi) *d_pi = L - C * rho;
  return val;
}

}  // namespace

double surrogate_Phi(const SurrogateContext& ctx, int i, int j, double R_i,
                     double p_j, double p_i, double* d_R, double* d_pj,
                     double* d_pi) {
  return phi_body(ctx, i, j, R_i, p_j, p_i, d_R, d_pj, d_pi, false);
}

double surrogate_Phi_scaled(const SurrogateContext& ctx, int i, int j,
                            double R_i, double p_j, double p_i, double* d_R,
                            double* d_pj, double* d_pi) {
  return phi_body(ctx, i, j, R_i, p_j, p_i, d_R, d_pj, d_pi, true);
}

}  // namespace secnet
