/*
   Copyright 2026 The pkpz authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pkpz/limits.hpp"
#include "pkpz/specfun.hpp"

using namespace pkpz::limits;
using pkpz::specfun::CirclePoint;
using pkpz::specfun::dist_circle;
using pkpz::specfun::gauss_density;
using pkpz::specfun::wrapped_gaussian;

namespace {

constexpr double kPi = std::numbers::pi;
const double kPhi10 = 1.0 / std::sqrt(2.0 * kPi);

// Direct truncated root sum, no chain factorization.
cplx s_r_oracle_m1(double a, double b, cplx w, double r, int K) {
  cplx sum{0.0, 0.0};
  const cplx base = -std::log(w) / r;
  for (int k = -K; k <= K; ++k) {
    const cplx xi = base + cplx{0.0, 2.0 * kPi * k / r};
    sum += std::exp(a * xi * xi - b * xi);
  }
  return std::numbers::sqrt2 * sum / r;
}

// Conditioned orthant times wrapped-sum oracle for the two-level circle
// combination: phi_{a2}(c2) INT_0^r phi^{(r)}_{a1}(y) phi^{(r)}_{a2-a1}(b2-y)
// * P(N(mu, s^2) >= c1 + dist_r(y, b1)) dy.
double circle_combination_oracle(double a1, double a2, double b1, double b2, double c1,
                                 double c2, double r) {
  const double mu_frac = a1 / a2;
  const double sigma = std::sqrt(a1 * (a2 - a1) / a2);
  const int n = 4000;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = r * (j + 0.5) / n;
    const double dens = wrapped_gaussian(CirclePoint(y, r), a1, 1e-13) *
                        wrapped_gaussian(CirclePoint(b2 - y, r), a2 - a1, 1e-13);
    const double threshold = c1 + dist_circle(CirclePoint(y, r), CirclePoint(b1, r));
    const double tail = 0.5 * std::erfc((threshold - mu_frac * c2) / (sigma * std::numbers::sqrt2));
    acc += dens * tail;
  }
  return gauss_density(c2, a2) * acc * r / n;
}

}  // namespace

TEST_CASE("vertical-line kernel: one-point closed form and symmetry") {
  const std::vector<double> a{1.0}, b{0.0};
  const QuadValue v = s_inf_quadrature(a, b);
  CHECK(v.value == doctest::Approx(kPhi10).epsilon(1e-10));
  CHECK(v.imag_residual < 1e-10);

  const std::vector<double> bp{0.7}, bm{-0.7};
  CHECK(s_inf_quadrature(a, bp).value ==
        doctest::Approx(s_inf_quadrature(a, bm).value).epsilon(1e-12));
  CHECK(s_inf_quadrature(a, bp).value ==
        doctest::Approx(gauss_density(0.7 / std::numbers::sqrt2, 1.0)).epsilon(1e-10));
}

TEST_CASE("vertical-line kernel equals the conditioned-orthant form") {
  // two points
  {
    const std::vector<double> a{0.5, 1.0}, b{0.0, 0.0};
    const double quad = s_inf_quadrature(a, b).value;
    const double prob = s_inf_probabilistic(a, b);
    CHECK(quad == doctest::Approx(0.5 * kPhi10).epsilon(1e-7));
    CHECK(quad == doctest::Approx(prob).epsilon(1e-7));
  }
  // randomized instances through three points
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ub(-1.2, 1.2);
  for (int trial = 0; trial < 4; ++trial) {
    const std::vector<double> a{0.35, 0.8, 1.3};
    const std::vector<double> b{ub(rng), ub(rng), ub(rng)};
    const double quad = s_inf_quadrature(a, b).value;
    const double prob = s_inf_probabilistic(a, b);
    CHECK(std::abs(quad - prob) < 1e-6);
  }
}

TEST_CASE("vertical-line kernel: abscissa invariance") {
  const std::vector<double> a{0.5, 1.0}, b{0.3, -0.2};
  const double base = s_inf_quadrature(a, b).value;
  LineSpec moved;
  moved.abscissas = {1.9, 0.6};
  CHECK(std::abs(s_inf_quadrature(a, b, moved).value - base) < 1e-9);

  LineSpec bad;
  bad.abscissas = {0.5, 1.0};
  CHECK_THROWS_AS(s_inf_quadrature(a, b, bad), std::domain_error);
}

TEST_CASE("root sum: direct oracle, conjugation, root-set invariance") {
  const std::vector<double> a{1.0}, b{0.0};
  const std::vector<cplx> w{cplx{std::exp(-1.0), 0.0}};
  const SrResult got = s_r_sum(a, b, w, 1.0, 50);
  const cplx want = s_r_oracle_m1(1.0, 0.0, w[0], 1.0, 50);
  CHECK(std::abs(got.value - want) < 1e-12 * std::abs(want));

  const std::vector<double> b2{0.4};
  const std::vector<cplx> wc{std::polar(0.3, 0.8)};
  const std::vector<cplx> wcc{std::conj(wc[0])};
  const SrResult s1 = s_r_sum(a, b2, wc, 1.3);
  const SrResult s2 = s_r_sum(a, b2, wcc, 1.3);
  CHECK(std::abs(std::conj(s1.value) - s2.value) < 1e-12 * std::abs(s1.value));

  // Same root set whether the angle is theta or theta + 2 pi.
  const std::vector<cplx> wa{std::polar(0.4, 0.5)};
  const std::vector<cplx> wb{std::polar(0.4, 0.5 + 2.0 * kPi)};
  const SrResult ra = s_r_sum(a, b2, wa, 1.0);
  const SrResult rb = s_r_sum(a, b2, wb, 1.0);
  CHECK(std::abs(ra.value - rb.value) <= 1e-12 * std::abs(ra.value) + 1e-15);
}

TEST_CASE("root sum degenerates to the line integral for large r") {
  const std::vector<double> a{1.0}, b{0.3};
  const double r = 40.0;
  const std::vector<cplx> w{cplx{std::exp(-r * 1.0), 0.0}};  // line at Re(xi) = 1
  const SrResult sr = s_r_sum(a, b, w, r);
  const double sinf = s_inf_quadrature(a, b).value;
  CHECK(std::abs(sr.value.real() - sinf) < 1e-3);
}

TEST_CASE("circle combination: wrapped-kernel identities at one point") {
  // equals phi_a(c) * phi_a^(r)(b)
  {
    const std::vector<double> a{1.0}, b{0.3}, c{0.2}, radii{0.5};
    const QuadValue got = critical_limit_integral(a, b, c, 1.0, radii, 64);
    const double want =
        gauss_density(0.2, 1.0) * wrapped_gaussian(CirclePoint(0.3, 1.0), 1.0, 1e-13);
    CHECK(std::abs(got.value - want) < 1e-8);
    CHECK(got.imag_residual < 1e-8);
  }
  // radius independence of the contour
  {
    const std::vector<double> a{1.0}, b{0.3}, c{0.2};
    const std::vector<double> r1{0.3}, r2{0.7};
    const double v1 = critical_limit_integral(a, b, c, 1.0, r1, 64).value;
    const double v2 = critical_limit_integral(a, b, c, 1.0, r2, 64).value;
    CHECK(std::abs(v1 - v2) < 1e-10);
  }
  // large r: wrapped kernel unwraps
  {
    const std::vector<double> a{1.0}, b{0.3}, c{0.2}, radii{0.5};
    const double got = critical_limit_integral(a, b, c, 30.0, radii, 64).value;
    CHECK(got == doctest::Approx(gauss_density(0.2, 1.0) * gauss_density(0.3, 1.0)).epsilon(1e-9));
  }
  // symmetric point
  {
    const std::vector<double> a{0.8}, b{0.0}, c{0.0}, radii{0.5};
    const double got = critical_limit_integral(a, b, c, 1.2, radii, 64).value;
    const double want =
        gauss_density(0.0, 0.8) * wrapped_gaussian(CirclePoint(0.0, 1.2), 0.8, 1e-13);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("circle combination at two points matches the orthant-times-wrapped oracle") {
  const std::vector<double> a{0.5, 1.0}, b{0.25, 0.1}, c{0.15, -0.2};
  const double r = 1.0;
  const std::vector<double> radii{std::exp(-r * 1.0), std::exp(-r * 0.75)};
  const double got = critical_limit_integral(a, b, c, r, radii, 64).value;
  const double want = circle_combination_oracle(0.5, 1.0, 0.25, 0.1, 0.15, -0.2, r);
  CHECK(std::abs(got - want) < 1e-6);
}

TEST_CASE("finite-r box identity") {
  // one point: both sides collapse to the endpoint density
  {
    const std::vector<double> a{1.0}, b{0.5};
    const BridgeIdentityValue v = finite_r_bridge_identity(a, b, 1.0);
    const double want = gauss_density(0.5 / std::numbers::sqrt2, 1.0);
    CHECK(v.lhs == doctest::Approx(want).epsilon(1e-8));
    CHECK(v.rhs == doctest::Approx(want).epsilon(1e-10));
  }
  // two points
  {
    const std::vector<double> a{0.5, 1.0}, b{0.1, 0.2};
    const BridgeIdentityValue v = finite_r_bridge_identity(a, b, 1.0);
    CHECK(std::abs(v.lhs - v.rhs) < 1e-6);
  }
  // r -> infinity recovers the unrestricted kernel
  {
    const std::vector<double> a{0.5, 1.0}, b{0.1, 0.2};
    const BridgeIdentityValue v = finite_r_bridge_identity(a, b, 50.0);
    const double sinf = s_inf_quadrature(a, b).value;
    CHECK(std::abs(v.lhs - sinf) < 1e-6);
  }
}

TEST_CASE("limit law: closed symmetric values") {
  // single constraint at the bridge midpoint
  const std::vector<double> x{0.0}, t{0.5}, h{0.0};
  CHECK(limit_conditional_cdf(3, x, t, h) == doctest::Approx(0.5).epsilon(1e-8));
  // two independent bridges: quarter-plane wedge
  CHECK(limit_conditional_cdf(1, x, t, h) == doctest::Approx(0.25).epsilon(1e-6));
  // empty constraint list
  CHECK(limit_conditional_cdf(1, {}, {}, {}) == 1.0);
}

TEST_CASE("limit law: circle case interpolates the other two") {
  const std::vector<double> x{0.3}, t{0.5}, h{0.1};
  const double case1 = limit_conditional_cdf(1, x, t, h);
  const double case3 = limit_conditional_cdf(3, x, t, h);

  const double wide = limit_conditional_cdf(2, x, t, h, 25.0);
  CHECK(std::abs(wide - case1) < 2e-3);

  // The small-r side converges at rate O(r): the circle distance term has
  // mean ~ r/4, so the deficit is ~ 0.19 r (cross-checked by Monte Carlo).
  const double n1 = limit_conditional_cdf(2, x, t, h, 0.05);
  const double n2 = limit_conditional_cdf(2, x, t, h, 0.02);
  CHECK(std::abs(n1 - case3) < 0.25 * 0.05 + 2e-3);
  CHECK(std::abs(n2 - case3) < 0.25 * 0.02 + 2e-3);
  CHECK(std::abs(n2 - case3) < std::abs(n1 - case3));
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(s_inf_quadrature(std::vector<double>{1.0, 0.5}, std::vector<double>{0.0, 0.0}),
                  std::domain_error);
  CHECK_THROWS_AS(s_r_sum(std::vector<double>{1.0}, std::vector<double>{0.0},
                          std::vector<cplx>{cplx{0.0, 0.0}}, 1.0),
                  std::domain_error);
  const std::vector<double> a{0.5, 1.0}, bad_radii{0.7, 0.3};
  CHECK_THROWS_AS(
      critical_limit_integral(a, std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 0.0},
                              1.0, bad_radii, 32),
      std::domain_error);
  CHECK_THROWS_AS(limit_conditional_cdf(4, {}, {}, {}), std::domain_error);
  CHECK_THROWS_AS(
      limit_conditional_cdf(1, std::vector<double>{0.0}, std::vector<double>{1.5},
                            std::vector<double>{0.0}),
      std::domain_error);
}
