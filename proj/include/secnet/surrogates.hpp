#pragma once

#include <span>
#include <vector>

#include "secnet/network_model.hpp"

// Per-iteration surrogate functions: concave lower bounds of maximized terms
// and convex upper bounds of subtracted terms, each tight at the current
// iterate. Every evaluation optionally fills analytic gradients; gradient
// pointers may be null when only the value is needed.

namespace secnet {

/// Snapshot of one outer iterate with the cached SINR-type quantities every
/// surrogate expands around.
struct IterateState {
  PowerAllocation p_k;
  std::vector<double> r_k;  // eve-rate variables (partial/robust)
  std::vector<double> R_k;  // user-rate variables (robust)
  std::vector<double> x_k;  // user SINRs at p_k
  std::vector<double> xe_k; // eve SINRs at p_k (perfect CSI forms)
  std::vector<std::vector<double>> xij_k, yij_k;
};

/// Immutable expansion context: instance + params + iterate, the cached
/// power-consumption values, and the alpha constants for the -ln(1+x)/t
/// bounds (widened from the fixed 1+ln 2 whenever the reachable x exceeds
/// the validity cap).
struct SurrogateContext {
  const NetworkInstance* inst = nullptr;
  ScenarioParams params;
  IterateState state;
  double pi_k = 0.0;                // pi(p_k)
  std::vector<double> pi_link_k;    // pi_i(p_k_i)
  double alpha_eve = 0.0;           // for G_ee (x = eve SINR)
  double alpha_rate = 0.0;          // for a~ (x = r_i), needs the r box cap
  double r_cap = 0.0;
};

IterateState make_iterate_state(const NetworkInstance& inst,
                                const PowerAllocation& p,
                                std::vector<double> r = {},
                                std::vector<double> R = {});

/// r_cap is the box upper bound imposed on the r variables (0 when the
/// scenario has none); it fixes alpha_rate's validity region.
SurrogateContext make_surrogate_context(const NetworkInstance& inst,
                                        const ScenarioParams& params,
                                        IterateState state, double r_cap = 0.0);

// -- perfect-CSI secrecy surrogates ------------------------------------------

/// Concave lower bound of f_i(p), tight at p_k.
double surrogate_f(const SurrogateContext& ctx, int i, std::span<const double> p,
                   std::span<double> grad_p = {});

/// Convex upper bound of g_i(p), tight at p_k.
double surrogate_g(const SurrogateContext& ctx, int i, std::span<const double> p,
                   std::span<double> grad_p = {});

// -- energy-efficiency surrogates (network and per-link denominators) --------

double surrogate_F_ee(const SurrogateContext& ctx, int i, std::span<const double> p,
                      std::span<double> grad_p = {});
double surrogate_G_ee(const SurrogateContext& ctx, int i, std::span<const double> p,
                      std::span<double> grad_p = {});
double surrogate_F_link(const SurrogateContext& ctx, int i, std::span<const double> p,
                        std::span<double> grad_p = {});
double surrogate_G_link(const SurrogateContext& ctx, int i, std::span<const double> p,
                        std::span<double> grad_p = {});

// -- outage-rate surrogates (partial/robust) ---------------------------------

/// Affine upper bound of ln(1 + r_i), tight at r_k_i.
double surrogate_a(const SurrogateContext& ctx, int i, double r_i,
                   double* d_r = nullptr);

/// Concave lower bound of -ln(1 + r_i)/pi(p), tight at (r_k_i, p_k).
double surrogate_a_over_pi(const SurrogateContext& ctx, int i, double r_i,
                           std::span<const double> p, double* d_r = nullptr,
                           std::span<double> grad_p = {});
double surrogate_a_over_pi_link(const SurrogateContext& ctx, int i, double r_i,
                                double p_i, double* d_r = nullptr,
                                double* d_pi = nullptr);

/// Concave lower bound of ln(1 + r_i hbar_je p_j / (hbar_ie p_i)).
double surrogate_lambda(const SurrogateContext& ctx, int i, int j, double r_i,
                        double p_j, double p_i, double* d_r = nullptr,
                        double* d_pj = nullptr, double* d_pi = nullptr);

/// Trust-region rows for the Lambda bound: (lambda_ij, 2.5 - r/r_k - p_j/p_jk).
struct TrustRegionRows {
  double first;
  double second;
};
TrustRegionRows trust_region_tr1(const SurrogateContext& ctx, int i, int j,
                                 double r_i, double p_j, double p_i);

/// Concave lower bound of p_i ln(1 + r_i hbar_je p_j / (hbar_ie p_i)) on the
/// tr1 region, tight at the anchor.
double surrogate_Lambda(const SurrogateContext& ctx, int i, int j, double r_i,
                        double p_j, double p_i, double* d_r = nullptr,
                        double* d_pj = nullptr, double* d_pi = nullptr);

/// Concave lower bound of ln(1 + R_i), tight at R_k_i.
double surrogate_A(const SurrogateContext& ctx, int i, double R_i,
                   double* d_R = nullptr);

/// Concave lower bound of ln(1 + R_i)/pi(p), tight at the anchor.
double surrogate_A_over_pi(const SurrogateContext& ctx, int i, double R_i,
                           std::span<const double> p, double* d_R = nullptr,
                           std::span<double> grad_p = {});
double surrogate_A_over_pi_link(const SurrogateContext& ctx, int i, double R_i,
                                double p_i, double* d_R = nullptr,
                                double* d_pi = nullptr);

/// Convex upper bound of R_i p_j on the tr3 region, tight at the anchor.
double surrogate_Upsilon(const SurrogateContext& ctx, int i, int j, double R_i,
                         double p_j, double* d_R = nullptr, double* d_pj = nullptr);

/// Trust-region rows (tr3): (2 R_i - R_k_i, 2 p_j - p_k_j).
TrustRegionRows trust_region_tr3(const SurrogateContext& ctx, int i, int j,
                                 double R_i, double p_j);

/// Convex upper bound of p_i ln(1 + hbar_ji R_i p_j / (hbar_ii p_i)) on tr3.
double surrogate_Phi(const SurrogateContext& ctx, int i, int j, double R_i,
                     double p_j, double p_i, double* d_R = nullptr,
                     double* d_pj = nullptr, double* d_pi = nullptr);

/// Anchor-scaled variant of surrogate_Upsilon:
/// R p <= 0.5 (c R^2 + p^2 / c) with c = p_k_j / R_k_i. Same anchor
/// tightness and global validity, but the curvature matches the typical
/// R << p scale, so the robust subproblems take much longer steps.
double surrogate_Upsilon_scaled(const SurrogateContext& ctx, int i, int j,
                                double R_i, double p_j, double* d_R = nullptr,
                                double* d_pj = nullptr);

/// surrogate_Phi built on the scaled Upsilon bound (used by the robust
/// subproblems for the same conditioning reason).
double surrogate_Phi_scaled(const SurrogateContext& ctx, int i, int j,
                            double R_i, double p_j, double p_i,
                            double* d_R = nullptr, double* d_pj = nullptr,
                            double* d_pi = nullptr);

}  // namespace secnet
