#include "secnet/network_model.hpp"

#include <cmath>
#include <stdexcept>

namespace secnet {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double ExpSampler::next() {
  std::uint64_t bits = splitmix64(state_);
  // uniform in (0, 1]: 53 mantissa bits, shifted away from 0
  double u = (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  return -std::log(u);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(s);
  s ^= index * 0xc2b2ae3d27d4eb4fULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ c;
}

void validate(const NetworkInstance& inst) {
  if (inst.M < 1) throw std::invalid_argument("NetworkInstance: M must be >= 1");
  const size_t m = static_cast<size_t>(inst.M);
  const auto& direct = inst.link_gains();
  if (direct.size() != m) throw std::invalid_argument("NetworkInstance: gain matrix size mismatch");
  for (const auto& row : direct) {
    if (row.size() != m) throw std::invalid_argument("NetworkInstance: gain row size mismatch");
    for (double h : row)
      if (!(h > 0.0)) throw std::invalid_argument("NetworkInstance: gains must be positive");
  }
  if (inst.eve_gains.size() != m) throw std::invalid_argument("NetworkInstance: eve_gains size mismatch");
  for (double h : inst.eve_gains)
    if (!(h > 0.0)) throw std::invalid_argument("NetworkInstance: eve gains must be positive");
  if (inst.noise_user.size() != m) throw std::invalid_argument("NetworkInstance: noise_user size mismatch");
  for (double s : inst.noise_user)
    if (!(s > 0.0)) throw std::invalid_argument("NetworkInstance: noise powers must be positive");
  if (!(inst.noise_eve > 0.0)) throw std::invalid_argument("NetworkInstance: noise_eve must be positive");
}

void validate(const ScenarioParams& params) {
  if (!(params.P_budget > 0.0)) throw std::invalid_argument("ScenarioParams: P_budget must be positive");
  if (!(params.zeta > 0.0)) throw std::invalid_argument("ScenarioParams: zeta must be positive");
  if (!(params.Pc_per_tx > 0.0)) throw std::invalid_argument("ScenarioParams: Pc_per_tx must be positive");
  for (double c : params.qos)
    if (c < 0.0) throw std::invalid_argument("ScenarioParams: qos must be nonnegative");
  if (!(params.eps_ev > 0.0 && params.eps_ev < 1.0))
    throw std::invalid_argument("ScenarioParams: eps_ev must be in (0,1)");
  if (!(params.eps_c > 0.0 && params.eps_c < 1.0))
    throw std::invalid_argument("ScenarioParams: eps_c must be in (0,1)");
  if (!(params.delta > 0.0)) throw std::invalid_argument("ScenarioParams: delta must be positive");
}

void validate_allocation(const PowerAllocation& p, const ScenarioParams& params) {
  for (double v : p.p)
    if (!(v > 0.0 && v <= params.P_budget))
      throw std::invalid_argument("PowerAllocation: need 0 < p_i <= P_i");
}

NetworkInstance generate_instance(int M, std::uint64_t seed, CsiMode mode) {
  if (M < 1) throw std::invalid_argument("generate_instance: M must be >= 1");
  NetworkInstance inst;
  inst.M = M;
  inst.mode = mode;
  const size_t m = static_cast<size_t>(M);
  ExpSampler rng(derive_seed(seed, static_cast<std::uint64_t>(mode), 0));

  std::vector<std::vector<double>> direct(m, std::vector<double>(m));
  for (auto& row : direct)
    for (auto& h : row) h = rng.next();
  inst.eve_gains.resize(m);
  for (auto& h : inst.eve_gains) h = rng.next();

  if (mode == CsiMode::robust)
    inst.mean_gains = std::move(direct);
  else
    inst.gains = std::move(direct);

  inst.noise_user.assign(m, 1.0);
  inst.noise_eve = 1.0;
  return inst;
}

double throughput(const NetworkInstance& inst, const PowerAllocation& p, int i) {
  const auto& h = inst.link_gains();
  const size_t ui = static_cast<size_t>(i);
  double interference = inst.noise_user[ui];
  for (int j = 0; j < inst.M; ++j)
    if (j != i) interference += h[static_cast<size_t>(j)][ui] * p.p[static_cast<size_t>(j)];
  return std::log1p(h[ui][ui] * p.p[ui] / interference);
}

double wiretap_throughput(const NetworkInstance& inst, const PowerAllocation& p, int i) {
  if (inst.mode != CsiMode::perfect)
    throw std::invalid_argument("wiretap_throughput: requires a perfect-CSI instance");
  const size_t ui = static_cast<size_t>(i);
  double interference = inst.noise_eve;
  for (int j = 0; j < inst.M; ++j)
    if (j != i) interference += inst.eve_gains[static_cast<size_t>(j)] * p.p[static_cast<size_t>(j)];
  return std::log1p(inst.eve_gains[ui] * p.p[ui] / interference);
}

double secrecy_throughput(const NetworkInstance& inst, const PowerAllocation& p,
                          int i, bool clamp) {
  double s = throughput(inst, p, i) - wiretap_throughput(inst, p, i);
  return clamp ? std::max(s, 0.0) : s;
}

double power_consumption(const PowerAllocation& p, const ScenarioParams& params) {
  double total = 0.0;
  for (double v : p.p) total += v;
  return params.zeta * total + params.Pc_per_tx * static_cast<double>(p.p.size());
}

double per_link_power(double p_i, const ScenarioParams& params) {
  return params.zeta * p_i + params.Pc_per_tx;
}

double see_objective(const NetworkInstance& inst, const PowerAllocation& p,
                     const ScenarioParams& params) {
  double sum = 0.0;
  for (int i = 0; i < inst.M; ++i) sum += secrecy_throughput(inst, p, i);
  return sum / power_consumption(p, params);
}

double per_link_ee(const NetworkInstance& inst, const PowerAllocation& p, int i,
                   const ScenarioParams& params) {
  return secrecy_throughput(inst, p, i) /
         per_link_power(p.p[static_cast<size_t>(i)], params);
}

}  // namespace secnet
