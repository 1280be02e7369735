#include <cmath>
#include <random>

#include "doctest.h"
#include "secnet/bounds_toolbox.hpp"

using namespace secnet;

namespace {

// Log-uniform sampler used by all the bound-direction sweeps.
struct LogU {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> u;
  LogU(std::uint64_t seed, double lo, double hi)
      : rng(seed), u(std::log(lo), std::log(hi)) {}
  double operator()() { return std::exp(u(rng)); }
};

constexpr int kSweep = 100000;

}  // namespace

TEST_SUITE("bounds_toolbox") {

TEST_CASE("lemma1_gap hand value and limits") {
  CHECK(lemma1_gap(1.0) == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));
  CHECK(lemma1_gap(1e9) < 1e-9);
  CHECK_THROWS(lemma1_gap(0.0));
  CHECK_THROWS(lemma1_gap(-1.0));

  LogU t(1, 1e-6, 1e6);
  for (int k = 0; k < kSweep; ++k) CHECK(lemma1_gap(t()) >= 0.0);
}

TEST_CASE("log_recip_lower: tight at anchor, below elsewhere") {
  Anchor2 a{1.0, 1.0};
  CHECK(log_recip_lower(1.0, 1.0, a) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // hand value at (2, 1): ln2 + 0.5 (2 - 2 - 1) = ln2 - 0.5
  CHECK(log_recip_lower(2.0, 1.0, a) ==
        doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));
  CHECK(log_recip_lower(2.0, 1.0, a) <= std::log(1.5));

  LogU s(2, 1e-4, 1e4);
  double worst = 0.0;
  for (int k = 0; k < kSweep; ++k) {
    double x = s(), y = s();
    Anchor2 anc{s(), s()};
    double gap = log_recip_lower(x, y, anc) - std::log1p(1.0 / (x * y));
    worst = std::max(worst, gap);
    double tight = log_recip_lower(anc.xbar, anc.ybar, anc) -
                   std::log1p(1.0 / (anc.xbar * anc.ybar));
    CHECK(std::abs(tight) <= 1e-12 * std::max(1.0, std::log1p(1.0 / (anc.xbar * anc.ybar))));
  }
  CHECK(worst <= 1e-12);
  CHECK_THROWS(log_recip_lower(-1.0, 1.0, a));
}

TEST_CASE("log_recip_over_t_lower: anchor equality and hand value") {
  Anchor3 a{1.0, 1.0, 1.0};
  CHECK(log_recip_over_t_lower(1.0, 1.0, 1.0, a) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // (x,y,t)=(1,1,2): 2 ln2 - 2 ln2 + 0 = 0, true value ln2/2
  CHECK(log_recip_over_t_lower(1.0, 1.0, 2.0, a) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(0.0 <= std::log(2.0) / 2.0);

  LogU s(3, 1e-4, 1e4);
  double worst = 0.0;
  for (int k = 0; k < kSweep; ++k) {
    double x = s(), y = s(), t = s();
    Anchor3 anc{s(), s(), s()};
    double gap = log_recip_over_t_lower(x, y, t, anc) -
                 std::log1p(1.0 / (x * y)) / t;
    worst = std::max(worst, gap);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("neg_log_over_t_lower: alpha policy and bound direction") {
  CHECK(alpha_for_cap(1.0) == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-12));
  // large caps widen alpha past the fixed 1 + ln 2 default
  CHECK(alpha_for_cap(100.0) ==
        doctest::Approx(std::log(101.0) + 0.5).epsilon(1e-12));
  CHECK_NOTHROW(require_alpha_valid(alpha_for_cap(50.0), 50.0));
  CHECK_THROWS(require_alpha_valid(1.0 + std::log(2.0), 50.0));

  // anchor tightness
  double alpha = alpha_for_cap(10.0);
  CHECK(neg_log_over_t_lower(3.0, 2.0, 3.0, 2.0, alpha) ==
        doctest::Approx(-std::log(4.0) / 2.0).epsilon(1e-12));
  // zero case from the defining display
  CHECK(neg_log_over_t_lower(0.0, 1.0, 0.0, 1.0, 1.0 + std::log(2.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(0.0, 10.0);
  LogU ts(5, 1e-2, 1e2);
  double worst = 0.0;
  for (int k = 0; k < kSweep; ++k) {
    double x = ux(rng), xb = ux(rng) + 1e-6, t = ts(), tb = ts();
    double gap = neg_log_over_t_lower(x, t, xb, tb, alpha) + std::log1p(x) / t;
    worst = std::max(worst, gap);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("log_ratio_upper: tight at anchor, above elsewhere") {
  CHECK(log_ratio_upper(1.0, 1.0, 1.0, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // hand value: ln2 + 0.5 (2.5 - 1) = ln2 + 0.75 >= ln3
  CHECK(log_ratio_upper(2.0, 1.0, 1.0, 1.0) ==
        doctest::Approx(std::log(2.0) + 0.75).epsilon(1e-12));
  CHECK(log_ratio_upper(2.0, 1.0, 1.0, 1.0) >= std::log(3.0));

  LogU s(6, 1e-4, 1e4);
  double worst = 0.0;
  for (int k = 0; k < kSweep; ++k) {
    double x = s(), y = s(), xb = s(), yb = s();
    double gap = std::log1p(x / y) - log_ratio_upper(x, y, xb, yb);
    worst = std::max(worst, gap);
  }
  CHECK(worst <= 1e-12);
  CHECK_THROWS(log_ratio_upper(1.0, 0.0, 1.0, 1.0));
}

TEST_CASE("half_square_upper dominates the identity") {
  CHECK(half_square_upper(3.0, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(half_square_upper(2.0, 1.0) == doctest::Approx(2.5).epsilon(1e-12));
  LogU s(7, 1e-4, 1e4);
  for (int k = 0; k < kSweep; ++k) {
    double x = s(), xb = s();
    CHECK(half_square_upper(x, xb) >= x - 1e-12 * std::max(1.0, x));
  }
}

TEST_CASE("midpoint convexity probe stays at numerical zero") {
  CHECK(convexity_probe(100000, 11) <= 1e-10);
  // same contract under a different seed
  CHECK(convexity_probe(20000, 99) <= 1e-10);
}

}  // TEST_SUITE
