#pragma once

#include <cstdint>
#include <vector>

// Data model for an M-link interference network with one eavesdropper,
// plus exact (non-surrogate) evaluation of throughput, wiretap throughput,
// secrecy and energy-efficiency objectives. All rates are in nats; powers
// in mW. Types are immutable after construction and operations are pure.

namespace secnet {

enum class CsiMode { perfect, partial, robust };

/// Channel power gains (or their means) and noise variances for one draw.
/// gains[j][i] is the gain from transmitter j to user i. In robust mode the
/// direct-link matrix lives in mean_gains and gains is empty; eve_gains holds
/// exact gains (perfect) or means (partial/robust).
struct NetworkInstance {
  int M = 0;
  CsiMode mode = CsiMode::perfect;
  std::vector<std::vector<double>> gains;
  std::vector<double> eve_gains;
  std::vector<std::vector<double>> mean_gains;
  std::vector<double> noise_user;
  double noise_eve = 1.0;

  /// Direct-link matrix in effect: gains for perfect/partial, means for robust.
  const std::vector<std::vector<double>>& link_gains() const {
    return mode == CsiMode::robust ? mean_gains : gains;
  }
};

struct PowerAllocation {
  std::vector<double> p;
};

/// Scenario-level parameters shared by all solvers. qos entries are in nats.
struct ScenarioParams {
  CsiMode csi_mode = CsiMode::perfect;
  double P_budget = 20.0;  // per-transmitter power cap P_i, mW
  double zeta = 2.5;       // amplifier loss factor (1/drain efficiency)
  double Pc_per_tx = 5.0;  // circuit power P_c^i, mW
  std::vector<double> qos; // c_i per link, nats (empty = all zero)
  double eps_ev = 0.1;
  double eps_c = 0.1;
  double delta = 0.1;

  double qos_at(int i) const {
    return qos.empty() ? 0.0 : qos[static_cast<size_t>(i)];
  }
};

void validate(const NetworkInstance& inst);
void validate(const ScenarioParams& params);
void validate_allocation(const PowerAllocation& p, const ScenarioParams& params);

/// Deterministic unit-mean exponential channel draws for a fixed
/// (M, seed, mode). Rejects M < 1.
NetworkInstance generate_instance(int M, std::uint64_t seed, CsiMode mode);

/// ln(1 + h_ii p_i / (sum_{j != i} h_ji p_j + sigma_i^2))
double throughput(const NetworkInstance& inst, const PowerAllocation& p, int i);

/// ln(1 + h_ie p_i / (sum_{j != i} h_je p_j + sigma_e^2)); perfect CSI only.
double wiretap_throughput(const NetworkInstance& inst, const PowerAllocation& p, int i);

/// f_i - g_i; clamped at zero when clamp is set (reporting convention).
double secrecy_throughput(const NetworkInstance& inst, const PowerAllocation& p,
                          int i, bool clamp = false);

/// pi(p) = zeta * sum_i p_i + sum_i Pc^i
double power_consumption(const PowerAllocation& p, const ScenarioParams& params);

/// pi_i(p_i) = zeta * p_i + Pc^i
double per_link_power(double p_i, const ScenarioParams& params);

/// Network SEE: sum_i (f_i - g_i) / pi(p); perfect CSI only.
double see_objective(const NetworkInstance& inst, const PowerAllocation& p,
                     const ScenarioParams& params);

/// Per-link EE: (f_i - g_i) / pi_i(p_i); perfect CSI only.
double per_link_ee(const NetworkInstance& inst, const PowerAllocation& p, int i,
                   const ScenarioParams& params);

/// Stable seed derivation for parallel trials.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index);

/// Deterministic unit-mean exponential sampler (inverse CDF over a
/// splitmix-style 64-bit state), identical output on every platform.
class ExpSampler {
 public:
  explicit ExpSampler(std::uint64_t seed) : state_(seed) {}
  double next();

 private:
  std::uint64_t state_;
};

}  // namespace secnet
