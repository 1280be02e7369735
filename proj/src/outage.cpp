#include "secnet/outage.hpp"

#include <cmath>
#include <stdexcept>

#include "secnet/network_model.hpp"

namespace secnet {

void validate(const ExponentialMix& mix) {
  if (mix.powers.empty() || mix.powers.size() != mix.means.size())
    throw std::invalid_argument("ExponentialMix: need n >= 1 matching powers/means");
  for (double p : mix.powers)
    if (!(p > 0.0)) throw std::invalid_argument("ExponentialMix: powers must be positive");
  for (double l : mix.means)
    if (!(l > 0.0)) throw std::invalid_argument("ExponentialMix: means must be positive");
  if (!(mix.sigma2 > 0.0)) throw std::invalid_argument("ExponentialMix: sigma2 must be positive");
}

double prob_sinr_below(const ExponentialMix& mix, double r) {
  validate(mix);
  if (r < 0.0) throw std::invalid_argument("prob_sinr_below: r must be nonnegative");
  double s1 = mix.powers[0] * mix.means[0];
  // complementary probability via log-sum for accuracy at large r
  double log_comp = -r * mix.sigma2 / s1;
  for (size_t i = 1; i < mix.powers.size(); ++i)
    log_comp -= std::log1p(r * mix.powers[i] * mix.means[i] / s1);
  return -std::expm1(log_comp);
}

double prob_dominated(const ExponentialMix& mix) {
  validate(mix);
  double s1 = mix.powers[0] * mix.means[0];
  double log_comp = 0.0;
  for (size_t i = 1; i < mix.powers.size(); ++i)
    log_comp -= std::log1p(mix.powers[i] * mix.means[i] / s1);
  return -std::expm1(log_comp);
}

double prob_exceed_offset(const ExponentialMix& mix, double c) {
  validate(mix);
  if (c < 0.0) throw std::invalid_argument("prob_exceed_offset: c must be nonnegative");
  double s1 = mix.powers[0] * mix.means[0];
  double log_p = -c / s1;
  for (size_t i = 1; i < mix.powers.size(); ++i)
    log_p -= std::log1p(mix.powers[i] * mix.means[i] / s1);
  return std::exp(log_p);
}

double prob_sinr_above(const ExponentialMix& mix, double gamma) {
  validate(mix);
  if (gamma < 0.0) throw std::invalid_argument("prob_sinr_above: gamma must be nonnegative");
  double s1 = mix.powers[0] * mix.means[0];
  double log_p = -gamma * mix.sigma2 / s1;
  for (size_t i = 1; i < mix.powers.size(); ++i)
    log_p -= std::log1p(gamma * mix.powers[i] * mix.means[i] / s1);
  return std::exp(log_p);
}

double mc_prob_sinr_below(const ExponentialMix& mix, double r, std::int64_t draws,
                          std::uint64_t seed) {
  validate(mix);
  if (draws < 1) throw std::invalid_argument("mc_prob_sinr_below: draws must be >= 1");
  ExpSampler rng(seed);
  std::int64_t hits = 0;
  const size_t n = mix.powers.size();
  for (std::int64_t d = 0; d < draws; ++d) {
    double signal = mix.powers[0] * mix.means[0] * rng.next();
    double denom = mix.sigma2;
    for (size_t i = 1; i < n; ++i)
      denom += mix.powers[i] * mix.means[i] * rng.next();
    if (signal / denom < r) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

double bisect(const std::function<double(double)>& fn, double lo, double hi,
              const BisectionSettings& settings, BracketSide side) {
  if (!(settings.eps_b > 0.0)) throw std::invalid_argument("bisect: eps_b must be positive");
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw std::runtime_error("bisect: invalid bracket (need fn(lo) <= 0 <= fn(hi))");
  if (side == BracketSide::above && fhi <= settings.eps_b) return hi;
  if (side == BracketSide::below && flo >= -settings.eps_b) return lo;
  const int max_iter = 500;
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fmid = fn(mid);
    if (side == BracketSide::above) {
      if (fmid >= 0.0 && fmid <= settings.eps_b) return mid;
    } else {
      if (fmid <= 0.0 && fmid >= -settings.eps_b) return mid;
    }
    if (fmid < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  throw std::runtime_error("bisect: residual band not reached within iteration cap");
}

namespace {

double grow_bracket(const std::function<double(double)>& fn, double seed_hi,
                    int max_doublings) {
  double hi = seed_hi;
  for (int d = 0; d <= max_doublings; ++d) {
    if (fn(hi) >= 0.0) return hi;
    hi *= 2.0;
  }
  throw std::runtime_error("bracket doubling cap reached without sign change");
}

}  // namespace

double solve_eve_quantile(double p_i, const std::vector<double>& eve_means,
                          const std::vector<double>& other_powers, double sigma_e2,
                          double eps_ev, const BisectionSettings& settings) {
  if (!(eps_ev > 0.0 && eps_ev < 1.0))
    throw std::invalid_argument("solve_eve_quantile: eps_ev must be in (0,1)");
  if (eve_means.size() != other_powers.size() + 1)
    throw std::invalid_argument("solve_eve_quantile: means/powers size mismatch");
  const double own = p_i * eve_means[0];
  auto psi = [&](double r) {
    double v = std::log1p(-eps_ev) + r * sigma_e2 / own;
    for (size_t k = 0; k < other_powers.size(); ++k)
      v += std::log1p(r * other_powers[k] * eve_means[k + 1] / own);
    return v;
  };
  double hi = grow_bracket(psi, eve_means[0] * p_i / sigma_e2, settings.max_doublings);
  return bisect(psi, 0.0, hi, settings, BracketSide::above);
}

double solve_robust_rate(double p_i, const std::vector<double>& mean_gains_row,
                         const std::vector<double>& powers, double sigma_i2,
                         double eps_c, double delta,
                         const BisectionSettings& settings) {
  if (!(eps_c > 0.0 && eps_c < 1.0))
    throw std::invalid_argument("solve_robust_rate: eps_c must be in (0,1)");
  if (!(delta > 0.0)) throw std::invalid_argument("solve_robust_rate: delta must be positive");
  if (mean_gains_row.size() != powers.size() + 1)
    throw std::invalid_argument("solve_robust_rate: means/powers size mismatch");
  const double own = mean_gains_row[0] * p_i;
  double interference = sigma_i2;
  for (size_t k = 0; k < powers.size(); ++k)
    interference += mean_gains_row[k + 1] * powers[k];
  auto zeta_fn = [&](double R) {
    double v = delta * std::log1p(-eps_c) - 1.0 + R * interference / own;
    for (size_t k = 0; k < powers.size(); ++k)
      v += delta * std::log1p(R * mean_gains_row[k + 1] * powers[k] / own);
    return v;
  };
  double hi = grow_bracket(zeta_fn, 2.0 * own / interference, settings.max_doublings);
  return bisect(zeta_fn, 0.0, hi, settings, BracketSide::below);
}

}  // namespace secnet
