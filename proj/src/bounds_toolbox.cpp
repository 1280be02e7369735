#include "secnet/bounds_toolbox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "secnet/network_model.hpp"

namespace secnet {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

}  // namespace

double lemma1_gap(double t) {
  require_positive(t, "t");
  return std::log1p(1.0 / t) - 1.0 / (t + 1.0);
}

double log_recip_lower(double x, double y, const Anchor2& a) {
  require_positive(x, "x");
  require_positive(y, "y");
  require_positive(a.xbar, "xbar");
  require_positive(a.ybar, "ybar");
  double q = 1.0 / (a.xbar * a.ybar);
  return std::log1p(q) + (q / (1.0 + q)) * (2.0 - x / a.xbar - y / a.ybar);
}

double log_recip_over_t_lower(double x, double y, double t, const Anchor3& a) {
  require_positive(x, "x");
  require_positive(y, "y");
  require_positive(t, "t");
  require_positive(a.xbar, "xbar");
  require_positive(a.ybar, "ybar");
  require_positive(a.tbar, "tbar");
  double q = 1.0 / (a.xbar * a.ybar);
  double l = std::log1p(q);
  return 2.0 * l / a.tbar +
         (q / (a.tbar * (1.0 + q))) * (2.0 - x / a.xbar - y / a.ybar) -
         (l / (a.tbar * a.tbar)) * t;
}

double neg_log_over_t_lower(double x, double t, double xbar, double tbar,
                            double alpha) {
  if (x < 0.0) throw std::invalid_argument("x must be nonnegative");
  require_positive(t, "t");
  if (xbar < 0.0) throw std::invalid_argument("xbar must be nonnegative");
  require_positive(tbar, "tbar");
  double l = alpha - std::log1p(xbar);
  return 2.0 * l / tbar + xbar / (tbar * (1.0 + xbar)) -
         x / (tbar * (1.0 + xbar)) - l * t / (tbar * tbar) - alpha / t;
}

void require_alpha_valid(double alpha, double x_cap) {
  if (alpha < std::log1p(x_cap) + 0.5)
    throw std::invalid_argument("alpha below ln(1+x_cap)+0.5 validity condition");
}

double alpha_for_cap(double x_cap) {
  return std::max(1.0 + std::log(2.0), std::log1p(x_cap) + 0.5);
}

double log_ratio_upper(double x, double y, double xbar, double ybar) {
  require_positive(x, "x");
  require_positive(y, "y");
  require_positive(xbar, "xbar");
  require_positive(ybar, "ybar");
  double ratio = xbar / ybar;
  return std::log1p(ratio) +
         (0.5 * (x * x / xbar + xbar) / y - ratio) / (1.0 + ratio);
}

double half_square_upper(double x, double xbar) {
  require_positive(x, "x");
  require_positive(xbar, "xbar");
  return 0.5 * (x * x / xbar + xbar);
}

double convexity_probe(int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  ExpSampler rng(seed);
  auto draw = [&rng]() {
    // log-uniform over [1e-4, 1e4] driven by the sampler's uniform source
    double u = 1.0 - std::exp(-rng.next());
    return std::pow(10.0, -4.0 + 8.0 * u);
  };
  auto f = [](double x, double y, double t) {
    return std::log1p(1.0 / (x * y)) / t;
  };
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    double ux = draw(), uy = draw(), ut = draw();
    double vx = draw(), vy = draw(), vt = draw();
    double mid = f(0.5 * (ux + vx), 0.5 * (uy + vy), 0.5 * (ut + vt));
    double avg = 0.5 * (f(ux, uy, ut) + f(vx, vy, vt));
    worst = std::max(worst, mid - avg);
  }
  return worst;
}

}  // namespace secnet
