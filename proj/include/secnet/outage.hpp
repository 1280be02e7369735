#pragma once

#include <cstdint>
#include <functional>
#include <vector>

// Closed-form SINR outage probabilities for exponential fading, the quantile
// root equations they induce, bracketing + bisection, and a Monte Carlo
// oracle used to verify the closed forms.

namespace secnet {

/// SINR mix p_1 z_1 / (sum_{i>=2} p_i z_i + sigma2) where z_i are independent
/// exponential variates with means lambda-bar_i.
struct ExponentialMix {
  std::vector<double> powers;
  std::vector<double> means;
  double sigma2 = 1.0;
};

struct BisectionSettings {
  double eps_b = 1e-9;     // residual tolerance on the function value
  int max_doublings = 64;  // bracket growth cap
};

/// Which side of the root the accepted residual lies on:
/// above -> value in [0, eps_b], below -> value in [-eps_b, 0].
enum class BracketSide { above, below };

void validate(const ExponentialMix& mix);

/// Prob(SINR < r) = 1 - e^{-r sigma2/(p1 l1)} prod_{i>=2} p1 l1/(p1 l1 + r p_i l_i).
double prob_sinr_below(const ExponentialMix& mix, double r);

/// Prob(p1 z1 <= sum_{i>=2} p_i z_i)
double prob_dominated(const ExponentialMix& mix);

/// Prob(p1 z1 > c + sum_{i>=2} p_i z_i)
double prob_exceed_offset(const ExponentialMix& mix, double c);

/// Prob(SINR > gamma); complements prob_sinr_below exactly.
double prob_sinr_above(const ExponentialMix& mix, double gamma);

/// Empirical frequency of {SINR < r}; deterministic per seed.
double mc_prob_sinr_below(const ExponentialMix& mix, double r, std::int64_t draws,
                          std::uint64_t seed);

/// Bisection for a nondecreasing fn with fn(lo) <= 0 <= fn(hi). Returns a
/// point whose residual lies on the requested side of zero within eps_b.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              const BisectionSettings& settings, BracketSide side);

/// The eavesdropper epsilon-quantile rate r_i: unique positive root of
///   ln(1-eps_ev) + r sigma_e2/(p_i h_ie) + sum_j ln(1 + r h_je p_j/(h_ie p_i)) = 0.
/// eve_means[0] is the own-link mean h_ie; other_powers[k] pairs with
/// eve_means[k+1] for the interfering transmitters.
double solve_eve_quantile(double p_i, const std::vector<double>& eve_means,
                          const std::vector<double>& other_powers, double sigma_e2,
                          double eps_ev, const BisectionSettings& settings);

/// The robust user rate R_i: unique positive root of
///   delta ln(1-eps_c) - 1 + R (sigma2 + sum_j hbar_ji p_j)/(hbar_ii p_i)
///     + delta sum_j ln(1 + hbar_ji R p_j/(hbar_ii p_i)) = 0.
/// mean_gains_row[0] is the own-link mean hbar_ii; powers[k] pairs with
/// mean_gains_row[k+1].
double solve_robust_rate(double p_i, const std::vector<double>& mean_gains_row,
                         const std::vector<double>& powers, double sigma_i2,
                         double eps_c, double delta,
                         const BisectionSettings& settings);

}  // namespace secnet
