#pragma once

#include <cstdint>

// Lower/upper bounding inequalities used to build the per-iteration
// surrogates. Each function returns the bounding value; the bound direction
// and anchor tightness are the tested contracts. All inputs must be strictly
// positive unless noted.

namespace secnet {

/// Expansion point of a two-variable bound.
struct Anchor2 {
  double xbar;
  double ybar;
};

/// Expansion point of a three-variable bound.
struct Anchor3 {
  double xbar;
  double ybar;
  double tbar;
};

/// ln(1 + 1/t) - 1/(t+1); always >= 0 for t > 0.
double lemma1_gap(double t);

/// First-order lower bound of the convex ln(1 + 1/(x y)) at anchor (xbar, ybar):
/// ln(1 + 1/(xb yb)) + [(1/(xb yb)) / (1 + 1/(xb yb))] (2 - x/xb - y/yb).
double log_recip_lower(double x, double y, const Anchor2& a);

/// First-order lower bound of ln(1 + 1/(x y)) / t at anchor (xbar, ybar, tbar).
double log_recip_over_t_lower(double x, double y, double t, const Anchor3& a);

/// Lower bound of -ln(1+x)/t valid for 0 <= x <= x_cap whenever
/// alpha >= ln(1 + x_cap) + 0.5; tight at (xbar, tbar).
double neg_log_over_t_lower(double x, double t, double xbar, double tbar,
                            double alpha);

/// Checks alpha against the validity condition for neg_log_over_t_lower;
/// throws when alpha < ln(1 + x_cap) + 0.5.
void require_alpha_valid(double alpha, double x_cap);

/// Default alpha policy: max(1 + ln 2, ln(1 + x_cap) + 0.5).
double alpha_for_cap(double x_cap);

/// Convex upper bound of ln(1 + x/y) at anchor:
/// ln(1 + xb/yb) + [1/(1 + xb/yb)] (0.5 (x^2/xb + xb)/y - xb/yb).
double log_ratio_upper(double x, double y, double xbar, double ybar);

/// 0.5 (x^2/xbar + xbar) >= x, equality iff x == xbar.
double half_square_upper(double x, double xbar);

/// Midpoint-convexity probe of f(x,y,t) = ln(1 + 1/(x y)) / t over random
/// positive pairs; returns the worst midpoint violation
/// max f((u+v)/2) - (f(u)+f(v))/2, which must be <= 1e-10.
double convexity_probe(int samples, std::uint64_t seed);

}  // namespace secnet
