#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "secnet/path_following.hpp"

using namespace secnet;
using namespace secnet::testutil;

namespace {

NetworkInstance single_link(double h_dir, double h_eve, CsiMode mode) {
  NetworkInstance inst;
  inst.M = 1;
  inst.mode = mode;
  if (mode == CsiMode::robust)
    inst.mean_gains = {{h_dir}};
  else
    inst.gains = {{h_dir}};
  inst.eve_gains = {h_eve};
  inst.noise_user = {1.0};
  inst.noise_eve = 1.0;
  return inst;
}

ScenarioParams params_for(CsiMode mode) {
  ScenarioParams sp;
  sp.csi_mode = mode;
  return sp;
}

// relative match against a refined grid optimum; absolute floor guards the
// near-zero objectives
bool matches_grid(double solver_obj, double grid_obj, double rel = 1e-3) {
  return std::abs(solver_obj - grid_obj) <=
         rel * std::max({std::abs(grid_obj), std::abs(solver_obj), 1e-2});
}

}  // namespace

TEST_SUITE("path_following") {

TEST_CASE("M=1 perfect: favorable link saturates the budget") {
  NetworkInstance inst = single_link(2.0, 0.3, CsiMode::perfect);
  ScenarioParams sp = params_for(CsiMode::perfect);
  SolveReport rep = maximin_secrecy_perfect(inst, sp, {});
  CHECK(rep.status == PathStatus::converged);
  CHECK(trace_nondecreasing(rep.trace));
  CHECK(rep.final_p.p[0] == doctest::Approx(sp.P_budget).epsilon(1e-4));

  GridResult grid = grid_oracle(inst, sp, Objective::maximin_secrecy, 10000, 200);
  CHECK(matches_grid(rep.trace.back(), grid.best));
}

TEST_CASE("M=1 perfect: eavesdropper-dominated link shuts down") {
  NetworkInstance inst = single_link(0.3, 2.0, CsiMode::perfect);
  ScenarioParams sp = params_for(CsiMode::perfect);
  SolveReport rep = maximin_secrecy_perfect(inst, sp, {});
  CHECK(rep.status == PathStatus::converged);
  CHECK(rep.final_p.p[0] < 1e-3);  // objective decreasing in p, heads to floor
  GridResult grid = grid_oracle(inst, sp, Objective::maximin_secrecy, 10000, 200);
  CHECK(matches_grid(rep.trace.back(), grid.best));
}

TEST_CASE("M=2 perfect maximin: quick convergence, monotone trace") {
  NetworkInstance inst = generate_instance(2, 3, CsiMode::perfect);
  ScenarioParams sp = params_for(CsiMode::perfect);
  SolveReport rep = maximin_secrecy_perfect(inst, sp, {});
  CHECK(rep.status == PathStatus::converged);
  CHECK(rep.iterations <= 50);
  CHECK(trace_nondecreasing(rep.trace));
}

TEST_CASE("perfect QoS initializer") {
  NetworkInstance inst = generate_instance(2, 3, CsiMode::perfect);
  ScenarioParams sp = params_for(CsiMode::perfect);

  SUBCASE("zero targets accept any feasible point") {
    PowerAllocation p0 = init_perfect_qos(inst, sp, {});
    for (double p : p0.p) {
      CHECK(p > 0.0);
      CHECK(p <= sp.P_budget);
    }
  }
  SUBCASE("small targets produce a point meeting them") {
    double cap = maximin_secrecy_perfect(inst, sp, {}).trace.back();
    REQUIRE(cap > 1e-3);  // seed chosen so a positive target is feasible
    double c = 0.3 * cap;
    sp.qos = {c, c};
    PowerAllocation p0 = init_perfect_qos(inst, sp, {});
    for (int i = 0; i < 2; ++i)
      CHECK(secrecy_throughput(inst, p0, i) >= c - 1e-8);
  }
  SUBCASE("unreachable targets are rejected") {
    sp.qos = {100.0, 100.0};
    CHECK_THROWS(init_perfect_qos(inst, sp, {}));
  }
}

TEST_CASE("M=1 perfect SEE matches the 1-D grid") {
  NetworkInstance inst = single_link(1.5, 0.2, CsiMode::perfect);
  ScenarioParams sp = params_for(CsiMode::perfect);
  PowerAllocation p0 = init_perfect_qos(inst, sp, {});
  SolveReport rep = see_perfect(inst, sp, p0);
  CHECK(rep.status == PathStatus::converged);
  CHECK(trace_nondecreasing(rep.trace));
  GridResult grid = grid_oracle(inst, sp, Objective::see, 10000, 200);
  CHECK(matches_grid(rep.trace.back(), grid.best));
}

TEST_CASE("raising the QoS floor weakly lowers the SEE optimum") {
  NetworkInstance inst = generate_instance(2, 3, CsiMode::perfect);
  ScenarioParams sp = params_for(CsiMode::perfect);
  // scale the targets off the maximin optimum so every sweep point is feasible
  double cap = std::max(0.0, maximin_secrecy_perfect(inst, sp, {}).trace.back());
  REQUIRE(cap > 1e-3);
  double prev = 1e9;
  for (double frac : {0.0, 0.2, 0.4, 0.7}) {
    double c = frac * cap;
    sp.qos = {c, c};
    PowerAllocation p0 = init_perfect_qos(inst, sp, {});
    SolveReport rep = see_perfect(inst, sp, p0);
    CHECK(rep.trace.back() <= prev + 1e-6);
    if (c > 0.0) CHECK(rep.qos_slack >= -1e-8);  // c=0 rows are vacuous
    prev = rep.trace.back();
  }
}

TEST_CASE("M=2 perfect maximin-EE keeps every iterate QoS feasible") {
  NetworkInstance inst = generate_instance(2, 3, CsiMode::perfect);
  ScenarioParams sp = params_for(CsiMode::perfect);
  double cap = std::max(0.0, maximin_secrecy_perfect(inst, sp, {}).trace.back());
  REQUIRE(cap > 1e-3);
  double c = 0.3 * cap;
  sp.qos = {c, c};
  PowerAllocation p0 = init_perfect_qos(inst, sp, {});
  SolveReport rep = maximin_ee_perfect(inst, sp, p0);
  CHECK(rep.status == PathStatus::converged);
  CHECK(trace_nondecreasing(rep.trace));
  CHECK(rep.qos_slack >= -1e-8);
}

TEST_CASE("M=1 partial matches the grid; outage residual convention holds") {
  NetworkInstance inst = single_link(1.5, 0.4, CsiMode::partial);
  ScenarioParams sp = params_for(CsiMode::partial);
  SolveReport rep = maximin_secrecy_partial(inst, sp);
  CHECK(rep.status == PathStatus::converged);
  CHECK(trace_nondecreasing(rep.trace));
  GridResult grid = grid_oracle(inst, sp, Objective::maximin_secrecy, 10000, 200);
  CHECK(matches_grid(rep.trace.back(), grid.best));

  // single link: r = -p hbar ln(1-eps) / sigma_e^2 exactly
  double expect_r = -rep.final_p.p[0] * 0.4 * std::log(0.9);
  CHECK(rep.final_r[0] == doctest::Approx(expect_r).epsilon(1e-6));

  // the tightened r satisfies its root equation with residual in [0, eps_b]
  double resid = std::log(0.9) + rep.final_r[0] * 1.0 / (rep.final_p.p[0] * 0.4);
  CHECK(resid >= -1e-12);
  CHECK(resid <= 1e-9 + 1e-12);
}

TEST_CASE("partial: tighter eavesdropper outage gives higher secrecy") {
  NetworkInstance inst = generate_instance(2, 11, CsiMode::partial);
  ScenarioParams strict = params_for(CsiMode::partial);
  strict.eps_ev = 0.1;
  ScenarioParams loose = strict;
  loose.eps_ev = 0.6;
  SolveReport a = maximin_secrecy_partial(inst, strict);
  SolveReport b = maximin_secrecy_partial(inst, loose);
  CHECK(b.trace.back() <= a.trace.back() + 1e-6);
}

TEST_CASE("M=1 partial SEE / maximin-SEE match the grid") {
  NetworkInstance inst = single_link(1.2, 0.5, CsiMode::partial);
  ScenarioParams sp = params_for(CsiMode::partial);
  GridResult grid = grid_oracle(inst, sp, Objective::see, 10000, 200);
  SolveReport rep = see_partial(inst, sp);
  CHECK(rep.status == PathStatus::converged);
  CHECK(trace_nondecreasing(rep.trace));
  CHECK(matches_grid(rep.trace.back(), grid.best));

  SolveReport mrep = maximin_see_partial(inst, sp);
  GridResult mgrid = grid_oracle(inst, sp, Objective::maximin_see, 10000, 200);
  CHECK(matches_grid(mrep.trace.back(), mgrid.best));
}

TEST_CASE("partial SEE: QoS respected along the sweep, EE trend downward") {
  NetworkInstance inst = generate_instance(2, 13, CsiMode::partial);
  ScenarioParams sp = params_for(CsiMode::partial);
  double cap = std::max(0.0, maximin_secrecy_partial(inst, sp).trace.back());
  double prev = 1e9;
  for (double frac : {0.0, 0.25, 0.5}) {
    double c = frac * cap;
    sp.qos = {c, c};
    SolveReport rep = see_partial(inst, sp);
    CHECK(trace_nondecreasing(rep.trace));
    if (c > 0.0) CHECK(rep.qos_slack >= -1e-8);
    CHECK(rep.trace.back() <= prev + 1e-6);
    prev = rep.trace.back();
  }
}

TEST_CASE("M=1 robust matches the grid; user-rate residual convention holds") {
  NetworkInstance inst = single_link(1.8, 0.4, CsiMode::robust);
  ScenarioParams sp = params_for(CsiMode::robust);
  SolveReport rep = maximin_secrecy_robust(inst, sp);
  CHECK(rep.status == PathStatus::converged);
  CHECK(trace_nondecreasing(rep.trace));
  GridResult grid = grid_oracle(inst, sp, Objective::maximin_secrecy, 10000, 200);
  CHECK(matches_grid(rep.trace.back(), grid.best));

  // zeta(R) = delta ln(1-eps_c) - 1 + R sigma^2/(hbar p); residual in [-eps_b, 0]
  double resid = sp.delta * std::log(1.0 - sp.eps_c) - 1.0 +
                 rep.final_R[0] / (1.8 * rep.final_p.p[0]);
  CHECK(resid <= 1e-12);
  CHECK(resid >= -1e-9 - 1e-12);
}

TEST_CASE("robust user rates approach the nominal SINR as delta shrinks") {
  NetworkInstance inst = generate_instance(2, 17, CsiMode::robust);
  ScenarioParams sp = params_for(CsiMode::robust);
  double prev_gap = 1e9;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    sp.delta = delta;
    SolveReport rep = maximin_secrecy_robust(inst, sp);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
      double denom = inst.noise_user[static_cast<size_t>(i)];
      for (int j = 0; j < 2; ++j)
        if (j != i)
          denom += inst.mean_gains[static_cast<size_t>(j)][static_cast<size_t>(i)] *
                   rep.final_p.p[static_cast<size_t>(j)];
      double nominal =
          inst.mean_gains[static_cast<size_t>(i)][static_cast<size_t>(i)] *
          rep.final_p.p[static_cast<size_t>(i)] / denom;
      worst = std::max(worst,
                       std::abs(rep.final_R[static_cast<size_t>(i)] - nominal) /
                           nominal);
    }
    CHECK(worst < prev_gap + 1e-9);
    prev_gap = worst;
  }
  CHECK(prev_gap < 5e-3);
}

TEST_CASE("M=1 robust SEE / maximin-SEE match the grid and keep QoS") {
  NetworkInstance inst = single_link(1.6, 0.3, CsiMode::robust);
  ScenarioParams sp = params_for(CsiMode::robust);
  SolveReport rep = see_robust(inst, sp);
  CHECK(trace_nondecreasing(rep.trace));
  GridResult grid = grid_oracle(inst, sp, Objective::see, 10000, 200);
  CHECK(matches_grid(rep.trace.back(), grid.best));

  SolveReport mrep = maximin_see_robust(inst, sp);
  GridResult mgrid = grid_oracle(inst, sp, Objective::maximin_see, 10000, 200);
  CHECK(matches_grid(mrep.trace.back(), mgrid.best));

  SUBCASE("surrogate QoS implies the exact one at the returned point") {
    sp.qos = {0.05};
    SolveReport q = see_robust(inst, sp);
    CHECK(q.qos_slack >= -1e-8);
    std::vector<double> sec = exact_secrecy_all(inst, sp, q.final_p.p);
    CHECK(sec[0] >= 0.05 - 1e-8);
  }
}

TEST_CASE("final allocations respect the power box everywhere") {
  for (CsiMode mode : {CsiMode::perfect, CsiMode::partial, CsiMode::robust}) {
    NetworkInstance inst = generate_instance(2, 23, mode);
    ScenarioParams sp = params_for(mode);
    SolveReport rep = mode == CsiMode::perfect
                          ? maximin_secrecy_perfect(inst, sp, {})
                          : mode == CsiMode::partial
                                ? maximin_secrecy_partial(inst, sp)
                                : maximin_secrecy_robust(inst, sp);
    for (double p : rep.final_p.p) {
      CHECK(p > 0.0);
      CHECK(p <= sp.P_budget + 1e-9);
    }
  }
}

}  // TEST_SUITE
