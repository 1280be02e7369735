#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "secnet/outage.hpp"
#include "secnet/surrogates.hpp"

using namespace secnet;

namespace {

// A context anchored at a seeded M=2 iterate; rate variables only when the
// scenario uses them.
SurrogateContext seeded_context(CsiMode mode, std::uint64_t seed,
                                const std::vector<double>& p_k,
                                std::vector<double> r = {},
                                std::vector<double> R = {},
                                double r_cap = 0.0) {
  static std::vector<NetworkInstance> keep;  // contexts hold a pointer
  keep.push_back(generate_instance(static_cast<int>(p_k.size()), seed, mode));
  ScenarioParams params;
  params.csi_mode = mode;
  IterateState st = make_iterate_state(keep.back(), PowerAllocation{p_k},
                                       std::move(r), std::move(R));
  return make_surrogate_context(keep.back(), params, std::move(st), r_cap);
}

std::mt19937_64 g_rng(123);

double uni(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g_rng);
}

}  // namespace

TEST_SUITE("surrogates") {

TEST_CASE("perfect-CSI secrecy surrogates: anchor tightness and direction") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SurrogateContext ctx =
        seeded_context(CsiMode::perfect, seed, {uni(1.0, 18.0), uni(1.0, 18.0)});
    const NetworkInstance& inst = *ctx.inst;
    std::vector<double> pk = ctx.state.p_k.p;
    for (int i = 0; i < 2; ++i) {
      CHECK(surrogate_f(ctx, i, pk) ==
            doctest::Approx(throughput(inst, ctx.state.p_k, i)).epsilon(1e-10));
      CHECK(surrogate_g(ctx, i, pk) ==
            doctest::Approx(wiretap_throughput(inst, ctx.state.p_k, i))
                .epsilon(1e-10));
    }
    for (int draw = 0; draw < 500; ++draw) {
      std::vector<double> p{uni(0.05, 20.0), uni(0.05, 20.0)};
      PowerAllocation pa{p};
      for (int i = 0; i < 2; ++i) {
        CHECK(surrogate_f(ctx, i, p) <= throughput(inst, pa, i) + 1e-10);
        CHECK(surrogate_g(ctx, i, p) >= wiretap_throughput(inst, pa, i) - 1e-10);
      }
    }
  }
}

TEST_CASE("M=1 surrogate_f reduces to ln(1+x) + x/(1+x) (1 - pk/p)") {
  SurrogateContext ctx = seeded_context(CsiMode::perfect, 5, {4.0});
  double x = ctx.state.x_k[0];
  for (double p : {1.0, 2.0, 4.0, 9.0, 17.0}) {
    double expect = std::log1p(x) + x / (1.0 + x) * (1.0 - 4.0 / p);
    std::vector<double> pv{p};
    CHECK(surrogate_f(ctx, 0, pv) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("energy-efficiency surrogates bound the exact ratios") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SurrogateContext ctx =
        seeded_context(CsiMode::perfect, seed, {uni(1.0, 15.0), uni(1.0, 15.0)});
    const NetworkInstance& inst = *ctx.inst;
    std::vector<double> pk = ctx.state.p_k.p;
    for (int i = 0; i < 2; ++i) {
      double fi = throughput(inst, ctx.state.p_k, i);
      CHECK(surrogate_F_ee(ctx, i, pk) ==
            doctest::Approx(fi / ctx.pi_k).epsilon(1e-9));
      CHECK(surrogate_F_link(ctx, i, pk) ==
            doctest::Approx(fi / ctx.pi_link_k[static_cast<size_t>(i)])
                .epsilon(1e-9));
    }
    for (int draw = 0; draw < 300; ++draw) {
      std::vector<double> p{uni(0.05, 20.0), uni(0.05, 20.0)};
      PowerAllocation pa{p};
      double pi_p = power_consumption(pa, ctx.params);
      for (int i = 0; i < 2; ++i) {
        double fi = throughput(inst, pa, i);
        double gi = wiretap_throughput(inst, pa, i);
        CHECK(surrogate_F_ee(ctx, i, p) <= fi / pi_p + 1e-10);
        CHECK(surrogate_F_ee(ctx, i, p) + surrogate_G_ee(ctx, i, p) <=
              (fi - gi) / pi_p + 1e-10);
        double pi_i = per_link_power(p[static_cast<size_t>(i)], ctx.params);
        CHECK(surrogate_F_link(ctx, i, p) <= fi / pi_i + 1e-10);
        CHECK(surrogate_F_link(ctx, i, p) + surrogate_G_link(ctx, i, p) <=
              (fi - gi) / pi_i + 1e-10);
      }
    }
  }
}

TEST_CASE("outage-rate surrogate hand values") {
  SurrogateContext ctx =
      seeded_context(CsiMode::robust, 2, {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, 50.0);
  SUBCASE("affine bound of ln(1+r) at r_k=1") {
    CHECK(surrogate_a(ctx, 0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(surrogate_a(ctx, 0, 2.0) ==
          doctest::Approx(std::log(2.0) + 0.5).epsilon(1e-12));
    CHECK(surrogate_a(ctx, 0, 2.0) >= std::log(3.0));
  }
  SUBCASE("concave bound of ln(1+R) at R_k=1") {
    CHECK(surrogate_A(ctx, 0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(surrogate_A(ctx, 0, 2.0) ==
          doctest::Approx(std::log(2.0) + 0.5 - 0.25).epsilon(1e-12));
    CHECK(surrogate_A(ctx, 0, 2.0) <= std::log(3.0));
  }
  SUBCASE("bilinear upper bound at (R_k, p_k) = (1, 1)") {
    CHECK(surrogate_Upsilon(ctx, 0, 1, 1.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(surrogate_Upsilon(ctx, 0, 1, 2.0, 1.0) ==
          doctest::Approx(2.5).epsilon(1e-12));
    CHECK(surrogate_Upsilon_scaled(ctx, 0, 1, 1.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rate-variable bounds hold over random sweeps") {
  std::vector<double> pk{uni(2.0, 15.0), uni(2.0, 15.0)};
  std::vector<double> rk{uni(0.1, 3.0), uni(0.1, 3.0)};
  std::vector<double> Rk{uni(0.1, 3.0), uni(0.1, 3.0)};
  SurrogateContext ctx = seeded_context(CsiMode::robust, 9, pk, rk, Rk, 100.0);
  for (int draw = 0; draw < 20000; ++draw) {
    double r = uni(1e-3, 50.0);
    double R = uni(1e-3, 50.0);
    CHECK(surrogate_a(ctx, 0, r) >= std::log1p(r) - 1e-10);
    CHECK(surrogate_A(ctx, 1, R) <= std::log1p(R) + 1e-10);
  }
  SUBCASE("Upsilon variants dominate the product on their regions") {
    for (int draw = 0; draw < 20000; ++draw) {
      double R = uni(Rk[0] / 2.0, 40.0);  // tr3: 2R >= R_k
      double p = uni(pk[1] / 2.0, 20.0);  // tr3: 2p >= p_k
      CHECK(surrogate_Upsilon(ctx, 0, 1, R, p) >= R * p - 1e-9);
      CHECK(surrogate_Upsilon_scaled(ctx, 0, 1, R, p) >= R * p - 1e-9);
    }
  }
}

TEST_CASE("trust-region rows at the anchor") {
  std::vector<double> pk{3.0, 7.0};
  std::vector<double> rk{0.8, 1.7};
  std::vector<double> Rk{0.5, 1.1};
  SurrogateContext ctx = seeded_context(CsiMode::robust, 4, pk, rk, Rk, 100.0);
  TrustRegionRows tr1 = trust_region_tr1(ctx, 0, 1, rk[0], pk[1], pk[0]);
  CHECK(tr1.first ==
        doctest::Approx(std::log1p(ctx.state.xij_k[0][1])).epsilon(1e-9));
  CHECK(tr1.first >= 0.0);
  CHECK(tr1.second == doctest::Approx(0.5).epsilon(1e-12));

  TrustRegionRows tr3 = trust_region_tr3(ctx, 0, 1, Rk[0], pk[1]);
  CHECK(tr3.first == doctest::Approx(Rk[0]).epsilon(1e-12));
  CHECK(tr3.second == doctest::Approx(pk[1]).epsilon(1e-12));
}

TEST_CASE("Lambda/Phi bound the weighted logs on their trust regions") {
  std::vector<double> pk{4.0, 6.0};
  std::vector<double> rk{0.6, 1.2};
  std::vector<double> Rk{0.4, 0.9};
  SurrogateContext ctx = seeded_context(CsiMode::robust, 6, pk, rk, Rk, 100.0);
  const NetworkInstance& inst = *ctx.inst;
  double he0 = inst.eve_gains[0], he1 = inst.eve_gains[1];
  double h00 = inst.mean_gains[0][0], h10 = inst.mean_gains[1][0];

  // anchor tightness
  double lam0 = surrogate_Lambda(ctx, 0, 1, rk[0], pk[1], pk[0]);
  CHECK(lam0 ==
        doctest::Approx(pk[0] * std::log1p(rk[0] * he1 * pk[1] / (he0 * pk[0])))
            .epsilon(1e-9));
  double phi0 = surrogate_Phi(ctx, 0, 1, Rk[0], pk[1], pk[0]);
  CHECK(phi0 ==
        doctest::Approx(pk[0] * std::log1p(h10 * Rk[0] * pk[1] / (h00 * pk[0])))
            .epsilon(1e-9));
  CHECK(surrogate_Phi_scaled(ctx, 0, 1, Rk[0], pk[1], pk[0]) ==
        doctest::Approx(phi0).epsilon(1e-9));

  int lam_checked = 0;
  for (int draw = 0; draw < 400000 && lam_checked < 10000; ++draw) {
    double r = uni(0.05, 2.4 * rk[0]), pj = uni(0.5, 2.4 * pk[1]),
           pi = uni(0.5, 20.0);
    TrustRegionRows rows = trust_region_tr1(ctx, 0, 1, r, pj, pi);
    if (rows.first < 0.0 || rows.second < 0.0) continue;
    ++lam_checked;
    double exact = pi * std::log1p(r * he1 * pj / (he0 * pi));
    CHECK(surrogate_Lambda(ctx, 0, 1, r, pj, pi) <= exact + 1e-9);
  }
  CHECK(lam_checked == 10000);

  for (int draw = 0; draw < 10000; ++draw) {
    double R = uni(Rk[0] / 2.0, 5.0), pj = uni(pk[1] / 2.0, 20.0);
    double pi = uni(0.5, 20.0);
    double exact = pi * std::log1p(h10 * R * pj / (h00 * pi));
    CHECK(surrogate_Phi(ctx, 0, 1, R, pj, pi) >= exact - 1e-9);
    CHECK(surrogate_Phi_scaled(ctx, 0, 1, R, pj, pi) >= exact - 1e-9);
  }
}

TEST_CASE("anchor tightness across 100 seeded instances") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::vector<double> pk{uni(0.5, 19.0), uni(0.5, 19.0)};
    std::vector<double> rk{uni(0.05, 4.0), uni(0.05, 4.0)};
    std::vector<double> Rk{uni(0.05, 4.0), uni(0.05, 4.0)};
    SurrogateContext ctx = seeded_context(CsiMode::robust, seed, pk, rk, Rk, 100.0);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(surrogate_a(ctx, i, rk[static_cast<size_t>(i)]) -
                     std::log1p(rk[static_cast<size_t>(i)])) <= 1e-9);
      CHECK(std::abs(surrogate_A(ctx, i, Rk[static_cast<size_t>(i)]) -
                     std::log1p(Rk[static_cast<size_t>(i)])) <= 1e-9);
      int j = 1 - i;
      CHECK(std::abs(surrogate_Upsilon(ctx, i, j, Rk[static_cast<size_t>(i)],
                                       pk[static_cast<size_t>(j)]) -
                     Rk[static_cast<size_t>(i)] * pk[static_cast<size_t>(j)]) <=
            1e-9);
    }
  }
}

TEST_CASE("gradients match central finite differences") {
  using testutil::gradient_check;
  std::vector<double> pk{3.0, 11.0};
  std::vector<double> rk{0.7, 1.9};
  std::vector<double> Rk{0.3, 1.4};
  SurrogateContext pctx = seeded_context(CsiMode::perfect, 21, pk);
  SurrogateContext rctx = seeded_context(CsiMode::robust, 21, pk, rk, Rk, 100.0);

  const double tol = 1e-6;
  for (int i = 0; i < 2; ++i) {
    CHECK(gradient_check(
              [&](std::span<const double> p, std::span<double> g) {
                return surrogate_f(pctx, i, p, g);
              },
              2, 100, 1000 + static_cast<std::uint64_t>(i)) <= tol);
    CHECK(gradient_check(
              [&](std::span<const double> p, std::span<double> g) {
                return surrogate_g(pctx, i, p, g);
              },
              2, 100, 2000 + static_cast<std::uint64_t>(i)) <= tol);
    CHECK(gradient_check(
              [&](std::span<const double> p, std::span<double> g) {
                return surrogate_F_ee(pctx, i, p, g);
              },
              2, 100, 3000 + static_cast<std::uint64_t>(i)) <= tol);
    CHECK(gradient_check(
              [&](std::span<const double> p, std::span<double> g) {
                return surrogate_G_ee(pctx, i, p, g);
              },
              2, 100, 4000 + static_cast<std::uint64_t>(i)) <= tol);
    CHECK(gradient_check(
              [&](std::span<const double> x, std::span<double> g) {
                // x = (r_i, p_0, p_1)
                double dr = 0.0;
                std::array<double, 2> gp{0.0, 0.0};
                double v = surrogate_a_over_pi(rctx, i, x[0],
                                               x.subspan(1), &dr, gp);
                g[0] = dr;
                g[1] = gp[0];
                g[2] = gp[1];
                return v;
              },
              3, 100, 5000 + static_cast<std::uint64_t>(i)) <= tol);
    int j = 1 - i;
    CHECK(gradient_check(
              [&](std::span<const double> x, std::span<double> g) {
                double dr = 0.0, dpj = 0.0, dpi = 0.0;
                double v = surrogate_Lambda(rctx, i, j, x[0], x[1], x[2],
                                            &dr, &dpj, &dpi);
                g[0] = dr;
                g[1] = dpj;
                g[2] = dpi;
                return v;
              },
              3, 100, 6000 + static_cast<std::uint64_t>(i)) <= tol);
    CHECK(gradient_check(
              [&](std::span<const double> x, std::span<double> g) {
                double dR = 0.0, dpj = 0.0, dpi = 0.0;
                double v = surrogate_Phi_scaled(rctx, i, j, x[0], x[1], x[2],
                                                &dR, &dpj, &dpi);
                g[0] = dR;
                g[1] = dpj;
                g[2] = dpi;
                return v;
              },
              3, 100, 7000 + static_cast<std::uint64_t>(i)) <= tol);
    CHECK(gradient_check(
              [&](std::span<const double> x, std::span<double> g) {
                double dR = 0.0, dpj = 0.0;
                double v = surrogate_Upsilon_scaled(rctx, i, j, x[0], x[1],
                                                    &dR, &dpj);
                g[0] = dR;
                g[1] = dpj;
                return v;
              },
              2, 100, 8000 + static_cast<std::uint64_t>(i)) <= tol);
  }
}

TEST_CASE("cached iterate state is reproducible") {
  NetworkInstance inst = generate_instance(3, 31, CsiMode::perfect);
  PowerAllocation p{{2.0, 5.0, 9.0}};
  IterateState a = make_iterate_state(inst, p);
  IterateState b = make_iterate_state(inst, p);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.x_k[static_cast<size_t>(i)] ==
          doctest::Approx(b.x_k[static_cast<size_t>(i)]).epsilon(1e-12));
    CHECK(a.x_k[static_cast<size_t>(i)] > 0.0);
    // definition check: x_i = h_ii p_i / (sum_j h_ji p_j + sigma_i^2)
    double denom = inst.noise_user[static_cast<size_t>(i)];
    for (int j = 0; j < 3; ++j)
      if (j != i)
        denom += inst.gains[static_cast<size_t>(j)][static_cast<size_t>(i)] *
                 p.p[static_cast<size_t>(j)];
    double x = inst.gains[static_cast<size_t>(i)][static_cast<size_t>(i)] *
               p.p[static_cast<size_t>(i)] / denom;
    CHECK(a.x_k[static_cast<size_t>(i)] == doctest::Approx(x).epsilon(1e-12));
  }
}

}  // TEST_SUITE
