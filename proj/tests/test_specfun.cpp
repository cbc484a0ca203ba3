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

#include "pkpz/specfun.hpp"

using namespace pkpz::specfun;
using std::complex;

namespace {

// Brute-force series oracle, plain summation.
cplx polylog_oracle(double s, cplx z, long terms) {
  cplx sum{0.0, 0.0};
  cplx zn = z;
  for (long n = 1; n <= terms; ++n) {
    sum += zn * std::pow(static_cast<double>(n), -s);
    zn *= z;
  }
  return sum;
}

// Truncated double-series oracle for B.
cplx bfun_oracle(cplx z, cplx zp, long cap) {
  cplx sum{0.0, 0.0};
  for (long k = 1; k <= cap; ++k) {
    const cplx zk = std::pow(z, static_cast<double>(k));
    if (std::abs(zk) < 1e-25) break;
    for (long kp = 1; kp <= cap; ++kp) {
      const cplx t = zk * std::pow(zp, static_cast<double>(kp)) /
                     (static_cast<double>(k + kp) * std::sqrt(static_cast<double>(k * kp)));
      sum += t;
      if (std::abs(t) < 1e-26) break;
    }
  }
  return sum / (4.0 * std::numbers::pi);
}

// Refined-grid quadrature oracle for h on the truncated interval
// [Re(w) - 40, Re(w)]: composite Simpson, step independent of the
// implementation's panel scheme.
cplx h_oracle(cplx w, cplx z) {
  const double x0 = w.real();
  const double lo = x0 - 40.0;
  const long n = 80'000;  // even
  const double dx = (x0 - lo) / static_cast<double>(n);
  auto f = [&](double x) {
    const cplx y{x, w.imag()};
    return polylog(0.5, z * std::exp(0.5 * (w * w - y * y)), 1e-14);
  };
  cplx sum = f(lo) + f(x0);
  for (long i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + dx * static_cast<double>(i));
  return -(sum * dx / 3.0) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("polylog: trivial and frozen values") {
  CHECK(polylog(1.5, {0.0, 0.0}) == cplx{0.0, 0.0});
  // Frozen from 30-digit evaluation of the series.
  CHECK(std::abs(polylog(1.5, {0.5, 0.0}, 1e-14) - cplx{0.62483702081991385363, 0.0}) < 1e-13);
  CHECK(std::abs(polylog(0.5, {0.3, 0.2}, 1e-14) -
                 cplx{0.32057406472326686011, 0.31723884755275877946}) < 1e-13);
  CHECK(std::abs(polylog(2.5, {-0.7, 0.0}, 1e-14) - cplx{-0.62997723051344045315, 0.0}) < 1e-13);
}

TEST_CASE("polylog: matches long direct summation") {
  const cplx got = polylog(1.5, {0.5, 0.0}, 1e-14);
  const cplx want = polylog_oracle(1.5, {0.5, 0.0}, 1'000'000);
  CHECK(std::abs(got - want) < 1e-13);
}

TEST_CASE("polylog: domain and order validation") {
  CHECK_THROWS_AS(polylog(1.5, {1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(polylog(1.5, {0.8, 0.8}), std::domain_error);
  CHECK_THROWS_AS(polylog(1.0, {0.5, 0.0}), std::domain_error);
}

TEST_CASE("polylog: |Li_s(z)| <= 2|z| on the half disk") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> rad(0.0, 0.5), ang(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const double r = rad(rng), th = ang(rng);
    const cplx z = std::polar(r, th);
    for (double s : {0.5, 1.5, 2.5}) {
      CHECK(std::abs(polylog(s, z, 1e-12)) <= 2.0 * std::abs(z) + 1e-12);
    }
  }
}

TEST_CASE("a1/a2/bfun: zeros and frozen value") {
  CHECK(a1({0.0, 0.0}) == cplx{0.0, 0.0});
  CHECK(a2({0.0, 0.0}) == cplx{0.0, 0.0});
  CHECK(bfun({0.0, 0.0}, {0.4, 0.1}) == cplx{0.0, 0.0});
  CHECK(std::abs(a1({0.4, 0.0}, 1e-14) - cplx{-0.18886413036505694245, 0.0}) < 1e-13);
  CHECK(std::abs(bfun({0.3, 0.0}, {0.2, 0.0}, 1e-14) - cplx{0.0031125154657752553792, 0.0}) <
        1e-12);
}

TEST_CASE("bfun: matches truncated double-sum oracle") {
  const cplx got = bfun({0.3, 0.0}, {0.2, 0.0}, 1e-14);
  CHECK(std::abs(got - bfun_oracle({0.3, 0.0}, {0.2, 0.0}, 10'000)) < 1e-12);
  const cplx zc{0.2, -0.35}, zpc{-0.1, 0.3};
  CHECK(std::abs(bfun(zc, zpc, 1e-13) - bfun_oracle(zc, zpc, 10'000)) < 1e-11);
}

TEST_CASE("a-bounds and b-bound on the half disk") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> rad(0.0, 0.5), ang(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 60; ++i) {
    const cplx z = std::polar(rad(rng), ang(rng));
    const cplx zp = std::polar(rad(rng), ang(rng));
    CHECK(std::abs(a1(z)) <= std::abs(z) + 1e-12);
    CHECK(std::abs(a2(z)) <= std::abs(z) + 1e-12);
    CHECK(std::abs(bfun(z, zp)) <= std::abs(z) * std::abs(zp) + 1e-12);
  }
}

TEST_CASE("h_left: trivial, frozen, oracle") {
  CHECK(h_left({-1.0, 0.0}, {0.0, 0.0}) == cplx{0.0, 0.0});
  const cplx got = h_left({-1.0, -0.5}, {0.25, 0.0}, 1e-12);
  CHECK(std::abs(got - cplx{-0.068816192565464206547, 0.018778959739871291559}) < 1e-10);
  CHECK(std::abs(got - h_oracle({-1.0, -0.5}, {0.25, 0.0})) < 1e-10);
  const cplx got2 = h_left({-1.0, 0.0}, {0.3, 0.0}, 1e-12);
  CHECK(std::abs(got2 - cplx{-0.09021188558079053351, 0.0}) < 1e-11);
  const cplx got3 = h_left({-2.0, 1.0}, {0.1, 0.2}, 1e-12);
  CHECK(std::abs(got3 - cplx{-0.00069692912317000889105, -0.036605282859314504003}) < 1e-11);
}

TEST_CASE("h: domain errors") {
  CHECK_THROWS_AS(h_left({0.5, 0.0}, {0.3, 0.0}), std::domain_error);
  CHECK_THROWS_AS(h_left({0.0, 1.0}, {0.3, 0.0}), std::domain_error);
  CHECK_THROWS_AS(h_right({-0.5, 0.0}, {0.3, 0.0}), std::domain_error);
  CHECK_THROWS_AS(h_left({-1.0, 0.0}, {1.2, 0.0}), std::domain_error);
  CHECK_THROWS_AS(h_any({0.0, 2.0}, {0.3, 0.0}), std::domain_error);
}

TEST_CASE("h bound |h(w,z)| <= |z| for |z| <= 1/2") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> rad(0.0, 0.5), ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> re(-4.0, -0.2), im(-3.0, 3.0);
  for (int i = 0; i < 40; ++i) {
    const cplx z = std::polar(rad(rng), ang(rng));
    const cplx w{re(rng), im(rng)};
    CHECK(std::abs(h_left(w, z, 1e-11)) <= std::abs(z) + 1e-9);
  }
}

TEST_CASE("h_right equals h_left at the mirrored point, bitwise") {
  const cplx w{0.5, -0.3}, z{0.4, 0.0};
  const cplx a = h_right(w, z);
  const cplx b = h_left(-w, z);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
  CHECK(h_right({2.0, 1.0}, {0.0, 0.0}) == cplx{0.0, 0.0});
  CHECK(h_right({1.0, 0.0}, {0.3, 0.0}) == h_left({-1.0, 0.0}, {0.3, 0.0}));
}

TEST_CASE("wrapped_gaussian: normalization, degeneration, direct sum") {
  // Trapezoid of the wrapped density over one fundamental domain.
  const double rho = 2.0;
  const int n = 4000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i)
    integral += wrapped_gaussian(CirclePoint(rho * (i + 0.5) / n, rho), 1.0, 1e-13);
  integral *= rho / n;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));

  CHECK(wrapped_gaussian(CirclePoint(0.0, 100.0), 1.0, 1e-13) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));

  double brute = 0.0;
  for (int k = -200; k <= 200; ++k) brute += gauss_density(0.3 + 1.5 * k, 0.7);
  CHECK(wrapped_gaussian(CirclePoint(0.3, 1.5), 0.7, 1e-13) ==
        doctest::Approx(brute).epsilon(1e-12));
  // Frozen from 30-digit evaluation.
  CHECK(wrapped_gaussian(CirclePoint(0.3, 1.5), 0.7, 1e-13) ==
        doctest::Approx(0.6675535792424667434).epsilon(1e-12));

  CHECK_THROWS_AS(wrapped_gaussian(CirclePoint(0.0, 1.0), 0.0), std::domain_error);
}

TEST_CASE("dist_circle: examples and range property") {
  CHECK(dist_circle(CirclePoint(0.0, 1.0), CirclePoint(0.0, 1.0)) == 0.0);
  CHECK(dist_circle(CirclePoint(0.9, 1.0), CirclePoint(0.1, 1.0)) ==
        doctest::Approx(0.2).epsilon(1e-14));
  CHECK_THROWS_AS(dist_circle(CirclePoint(0.0, 1.0), CirclePoint(0.0, 2.0)), std::domain_error);

  std::mt19937 rng(55);
  std::uniform_real_distribution<double> uni(-50.0, 50.0);
  const double rho = 1.7;
  for (int i = 0; i < 10'000; ++i) {
    const CirclePoint x(uni(rng), rho), y(uni(rng), rho);
    const double d = dist_circle(x, y);
    CHECK(d >= 0.0);
    CHECK(d <= rho / 2.0 + 1e-12);
    CHECK(d == doctest::Approx(dist_circle(y, x)).epsilon(1e-14));
  }
  // Triangle inequality on a sample.
  for (int i = 0; i < 1000; ++i) {
    const CirclePoint x(uni(rng), rho), y(uni(rng), rho), z(uni(rng), rho);
    CHECK(dist_circle(x, z) <= dist_circle(x, y) + dist_circle(y, z) + 1e-12);
  }
}

TEST_CASE("CirclePoint: canonicalization and equality slack") {
  const CirclePoint a(2.5, 1.0);
  CHECK(a.representative() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(CirclePoint(0.3, 1.5) == CirclePoint(0.3 + 3.0, 1.5));
  CHECK(CirclePoint(0.0, 1.0) == CirclePoint(1.0 - 1e-15, 1.0));
  CHECK_FALSE(CirclePoint(0.2, 1.0) == CirclePoint(0.4, 1.0));
}

TEST_CASE("c_of_rho: limit, direct sum, dual form") {
  CHECK(c_of_rho(50.0, 1e-15) == doctest::Approx(1.0).epsilon(1e-15));

  double direct = 0.0;
  for (int k = -100; k <= 100; ++k) direct += std::exp(-0.5 * k * k);
  CHECK(c_of_rho(1.0, 1e-14) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(c_of_rho(1.0, 1e-14) == doctest::Approx(2.5066282880429055448).epsilon(1e-13));

  for (double rho : {0.5, 1.0, 2.0, 5.0})
    CHECK(std::abs(c_of_rho(rho, 1e-14) - c_of_rho_dual(rho, 1e-14)) < 1e-12);

  // Agreement across the working range.
  for (double rho = 0.3; rho <= 50.0; rho *= 1.9)
    CHECK(std::abs(c_of_rho(rho, 1e-14) - c_of_rho_dual(rho, 1e-14)) < 1e-12);

  CHECK_THROWS_AS(c_of_rho(0.0), std::domain_error);
  CHECK_THROWS_AS(c_of_rho(-1.0), std::domain_error);
}

TEST_CASE("determinism: repeated evaluation is bit-identical") {
  const cplx z{0.31, -0.17};
  const cplx p1 = polylog(1.5, z, 1e-12);
  const cplx p2 = polylog(1.5, z, 1e-12);
  CHECK(p1.real() == p2.real());
  CHECK(p1.imag() == p2.imag());
  const cplx h1 = h_left({-1.2, 0.7}, z, 1e-11);
  const cplx h2 = h_left({-1.2, 0.7}, z, 1e-11);
  CHECK(h1.real() == h2.real());
  CHECK(h1.imag() == h2.imag());
}
