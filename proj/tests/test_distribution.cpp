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
#include <numbers>
#include <vector>

#include "pkpz/distribution.hpp"
#include "pkpz/limits.hpp"

using namespace pkpz::dist;

namespace {

constexpr double kPi = std::numbers::pi;

EvaluationPoint one_point(double gamma, double tau, double beta, double p) {
  EvaluationPoint pt;
  pt.gamma = {gamma};
  pt.tau = {tau};
  pt.beta = {beta};
  pt.p = p;
  return pt;
}

EvaluationPoint two_point(double g1, double t1, double b1, double g2, double t2, double b2,
                          double p) {
  EvaluationPoint pt;
  pt.gamma = {g1, g2};
  pt.tau = {t1, t2};
  pt.beta = {b1, b2};
  pt.p = p;
  return pt;
}

}  // namespace

TEST_CASE("one-point cdf: saturation at large beta") {
  const EvalResult r = joint_cdf(one_point(0.0, 1.0, 50.0, 1.0), ContourSpec::geometric(1),
                                 TruncationSpec{8, 2, -1});
  CHECK(std::abs(r.value - 1.0) < 1e-6);
  CHECK(r.imag_residual < 1e-10);
}

TEST_CASE("one-point upper tail against the asymptotic formula") {
  // 1 - F(beta) ~ (1/(16 pi beta^{3/2})) e^{-(4/3) beta^{3/2}} at beta = 3.
  const double beta = 3.0;
  const EvalResult r = joint_cdf(one_point(0.0, 1.0, beta, 1.0), ContourSpec::geometric(1),
                                 TruncationSpec{8, 2, -1});
  const double tail = 1.0 - r.value;
  const double predicted =
      std::exp(-4.0 / 3.0 * std::pow(beta, 1.5)) / (16.0 * kPi * std::pow(beta, 1.5));
  CHECK(std::abs(tail - predicted) < 0.25 * predicted);
}

TEST_CASE("density matches a centered finite difference of the cdf") {
  const ContourSpec contour = ContourSpec::geometric(1);
  const TruncationSpec trunc{8, 2, -1};
  const double step = 1e-3;
  const EvalResult up = joint_cdf(one_point(0.0, 1.0, 1.0 + step, 1.0), contour, trunc);
  const EvalResult dn = joint_cdf(one_point(0.0, 1.0, 1.0 - step, 1.0), contour, trunc);
  const double fd = (up.value - dn.value) / (2.0 * step);
  const EvalResult density = cdf_derivative(one_point(0.0, 1.0, 1.0, 1.0), contour, trunc);
  CHECK(std::abs(density.value - fd) < 1e-4 * std::abs(fd));
}

TEST_CASE("density positivity and tail asymptotics") {
  const ContourSpec contour = ContourSpec::geometric(1);
  const TruncationSpec trunc{8, 2, -1};
  const EvaluationPoint base = one_point(0.0, 1.0, 0.0, 1.0);
  const std::vector<double> betas{-1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  const auto curve = cdf_curve(base, betas, contour, trunc, CdfVariant::AllBelow, true);
  for (const EvalResult& r : curve) CHECK(r.value >= -1e-10);

  // f(ell) ~ (1/(8 pi ell)) e^{-(4/3) ell^{3/2}} at ell = 3 (period 1 sits in
  // the wide-period regime there).
  const EvalResult fr = cdf_derivative(one_point(0.0, 1.0, 3.0, 1.0), contour, trunc);
  const double predicted = std::exp(-4.0 / 3.0 * std::pow(3.0, 1.5)) / (8.0 * kPi * 3.0);
  CHECK(std::abs(fr.value - predicted) < 0.30 * predicted);
}

TEST_CASE("curve sweep agrees with pointwise evaluation") {
  const ContourSpec contour = ContourSpec::geometric(1);
  const TruncationSpec trunc{8, 2, -1};
  const EvaluationPoint base = one_point(0.3, 0.8, 0.0, 1.2);
  const std::vector<double> betas{-0.5, 0.7, 1.9};
  const auto curve = cdf_curve(base, betas, contour, trunc);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    EvaluationPoint pt = base;
    pt.beta = {betas[i]};
    const EvalResult direct = joint_cdf(pt, contour, trunc);
    CHECK(std::abs(curve[i].value - direct.value) < 1e-12);
  }
}

TEST_CASE("scaling identity across periods") {
  const ContourSpec contour = ContourSpec::geometric(1);
  const TruncationSpec trunc{8, 2, -1};
  const double gamma = 0.2, tau = 1.0, beta = 0.8;
  const double ref = joint_cdf(one_point(gamma, tau, beta, 1.0), contour, trunc).value;
  for (double p : {0.5, 2.0}) {
    const double v = joint_cdf(one_point(p * gamma, std::pow(p, 1.5) * tau,
                                         std::sqrt(p) * beta, p),
                               contour, trunc)
                         .value;
    CHECK(std::abs(v - ref) < 1e-6);
  }
}

TEST_CASE("cdf monotone in beta") {
  const ContourSpec contour = ContourSpec::geometric(1);
  const TruncationSpec trunc{8, 2, -1};
  const EvaluationPoint base = one_point(0.0, 1.0, 0.0, 1.0);
  std::vector<double> betas;
  for (double b = -2.0; b <= 2.01; b += 0.25) betas.push_back(b);
  const auto curve = cdf_curve(base, betas, contour, trunc);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double slack = curve[i].quad_proxy + curve[i - 1].quad_proxy + 1e-12;
    CHECK(curve[i].value >= curve[i - 1].value - slack);
  }
}

TEST_CASE("two-point cdf: marginal consistency and orientation identity") {
  const ContourSpec contour = ContourSpec::geometric(2, 32);
  const TruncationSpec trunc{5, 1, -1};
  const EvaluationPoint pt2 = two_point(0.1, 0.6, 0.4, 0.0, 1.0, 50.0, 1.0);

  // beta_2 -> +inf removes the second point.
  const double joint = joint_cdf(pt2, contour, trunc).value;
  const double marginal = joint_cdf(one_point(0.1, 0.6, 0.4, 1.0),
                                    ContourSpec::geometric(1, 32), trunc)
                              .value;
  CHECK(std::abs(joint - marginal) < 1e-5);

  // P(H1 >= b1, H2 <= b2) + P(H1 <= b1, H2 <= b2) = P(H2 <= b2).
  const EvaluationPoint ptm = two_point(0.1, 0.6, 0.4, 0.0, 1.0, 0.9, 1.0);
  const double below = joint_cdf(ptm, contour, trunc).value;
  const double above = joint_cdf(ptm, contour, trunc, CdfVariant::UpperTail).value;
  const double single = joint_cdf(one_point(0.0, 1.0, 0.9, 1.0),
                                  ContourSpec::geometric(1, 32), trunc)
                            .value;
  CHECK(std::abs(below + above - single) < 2e-5);
}

TEST_CASE("two-point cdf monotone in each beta") {
  const ContourSpec contour = ContourSpec::geometric(2, 32);
  const TruncationSpec trunc{5, 1, -1};
  double prev = -1.0;
  for (double b1 : {-0.5, 0.2, 1.0}) {
    const EvaluationPoint pt = two_point(0.0, 0.5, b1, 0.0, 1.0, 0.8, 1.0);
    const EvalResult r = joint_cdf(pt, contour, trunc);
    CHECK(r.value >= prev - (r.quad_proxy + r.trunc_proxy + 1e-9));
    prev = r.value;
  }
}

TEST_CASE("node doubling stays within the reported proxy") {
  const TruncationSpec trunc{8, 2, -1};
  const EvaluationPoint pt = one_point(0.0, 1.0, 0.5, 1.0);
  const EvalResult at32 = joint_cdf(pt, ContourSpec::geometric(1, 32), trunc);
  const EvalResult at64 = joint_cdf(pt, ContourSpec::geometric(1, 64), trunc);
  CHECK(std::abs(at64.value - at32.value) <= at32.quad_proxy + 1e-12);
  CHECK(at64.imag_residual <= at64.quad_proxy + at64.trunc_proxy + 1e-10);

  // Where the proxy is above the rounding floor, doubling the nodes
  // improves it by far more than a factor of two.
  const EvaluationPoint hard = one_point(0.0, 1.0, -1.0, 1.0);
  const TruncationSpec th{10, 2, -1};
  const EvalResult c16 = joint_cdf(hard, ContourSpec::raw({0.75}, 16), th);
  const EvalResult c32 = joint_cdf(hard, ContourSpec::raw({0.75}, 32), th);
  if (c16.quad_proxy > 1e-12) CHECK(c32.quad_proxy <= 0.5 * c16.quad_proxy);
}

TEST_CASE("near-equal times vary continuously") {
  // Equal times are outside the formula's domain; approaching them with
  // ordered levels must produce a stable limit.
  const TruncationSpec trunc{4, 1, -1};
  double prev_gap = 1e9;
  double prev_val = -1.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const EvaluationPoint pt = two_point(0.0, 0.7, 0.3, 0.0, 0.7 + eps, 0.9, 1.0);
    const double v = joint_cdf(pt, ContourSpec::geometric(2, 32), trunc).value;
    if (prev_val >= 0.0) {
      const double gap = std::abs(v - prev_val);
      CHECK(gap < prev_gap + 1e-12);
      prev_gap = gap;
    }
    prev_val = v;
  }
}

TEST_CASE("integrals with a zero order component vanish") {
  const ContourSpec contour = ContourSpec::geometric(2, 64);
  const TruncationSpec trunc{5, 2, -1};
  const EvaluationPoint pt = two_point(0.0, 0.5, 0.6, 0.1, 1.0, 1.1, 1.0);
  CHECK(vanishing_residual(pt, contour, trunc, {0, 1}) <= 1e-8);
  CHECK(vanishing_residual(pt, contour, trunc, {1, 0}) <= 1e-8);
  const EvaluationPoint pt1 = one_point(0.0, 1.0, 0.7, 1.0);
  CHECK(vanishing_residual(pt1, ContourSpec::geometric(1, 64), trunc, {0}) <= 1e-10);
  CHECK_THROWS_AS(vanishing_residual(pt, contour, trunc, {1, 1}), std::domain_error);
}

TEST_CASE("conditional ratio: degenerate one-point query returns one") {
  ConditionalQuery q;
  q.ell = 4.0;
  q.p = 2.0;
  const ConditionalResult r = conditional_probability(q, 16, TruncationSpec{4, 2, 3});
  CHECK(r.ratio == doctest::Approx(1.0));
}

TEST_CASE("conditional ratio: almost-sure constraint") {
  // The constraint level must keep beta_1 = t_1 ell + h_1 ell^{1/4}
  // nonnegative for the contour sums to stay conditioned; within that range
  // the ratio reaches 1 to far better than 1e-4.
  ConditionalQuery q;
  q.x = {0.0};
  q.t = {0.5};
  q.h = {-4.0};
  q.ell = 25.0;
  q.p = 2.0;
  const ConditionalResult r = conditional_probability(q, 16, TruncationSpec{4, 2, 3});
  CHECK(std::abs(r.ratio - 1.0) < 1e-4);
  CHECK(r.quad_proxy < 1e-3);
}

TEST_CASE("conditional ratio: catastrophic constraint levels are flagged") {
  // At h_1 = -20 the level-one weights grow like e^{+70} per root while the
  // answer is e^{-11}; no double-precision quadrature survives that
  // cancellation, and the proxies must say so.
  ConditionalQuery q;
  q.x = {0.0};
  q.t = {0.5};
  q.h = {-20.0};
  q.ell = 4.0;
  q.p = 2.0;
  try {
    const ConditionalResult r = conditional_probability(q, 16, TruncationSpec{4, 2, 3});
    CHECK(r.quad_proxy > 1.0);
  } catch (const NumericalQualityError&) {
    CHECK(true);
  }
}

TEST_CASE("conditional ratio approaches the wide-period limit law") {
  ConditionalQuery q;
  q.x = {0.0};
  q.t = {0.5};
  q.h = {0.0};
  q.ell = 4.0;
  q.p = 2.0;
  const ConditionalResult r = conditional_probability(q, 24, TruncationSpec{5, 2, 3});
  const double limit = pkpz::limits::limit_conditional_cdf(1, q.x, q.t, q.h);
  CHECK(limit == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(std::abs(r.ratio - limit) < 0.06);
  // The hatted order-one term dominates the others.
  CHECK(std::abs(r.numerator.hat_leading) > 5.0 * std::abs(r.numerator.leading));
  CHECK(std::abs(r.numerator.hat_leading) > 5.0 * std::abs(r.numerator.higher));
  CHECK(std::abs(r.numerator.hat_leading) > 5.0 * std::abs(r.numerator.hat_higher));
}

TEST_CASE("scaled hatted term against the limit kernels") {
  // Convergence toward the limit kernels requires ell p to be large; the
  // parameters here are the largest each regime admits before
  // e^{(4/3) ell^{3/2}} leaves double range. The deficit scale is
  // e^{-ell p/2} plus an ell^{-3/4} correction.
  TruncationSpec trunc{5, 2, 3};
  // wide-period regime: -> phi_1(0)^2 = 1/(2 pi)
  {
    ConditionalQuery q;
    q.ell = 4.0;
    q.p = 2.0;
    const ScaledTermResult r = scaled_leading_term(q, 1, 24, trunc);
    CHECK(std::abs(r.value - 1.0 / (2.0 * kPi)) < 0.10 / (2.0 * kPi));
  }
  // critical regime at rtilde = 1: -> one-point circle combination
  {
    ConditionalQuery q;
    q.ell = 25.0;
    q.p = std::pow(25.0, -0.25);
    const ScaledTermResult r = scaled_leading_term(q, 2, 24, trunc);
    const std::vector<double> a{1.0}, zero{0.0};
    const std::vector<double> radii{std::exp(-1.0)};
    const double want =
        pkpz::limits::critical_limit_integral(a, zero, zero, 1.0, radii, 64).value;
    CHECK(std::abs(r.value - want) < 0.10 * std::abs(want));
  }
  // narrow-period regime: -> phi_2(0), deficit shrinking in the level
  {
    const double want = 1.0 / std::sqrt(4.0 * kPi);
    double prev = 1e9;
    for (auto [ell, p] : {std::pair{16.0, 0.35}, {28.0, 0.30}}) {
      ConditionalQuery q;
      q.ell = ell;
      q.p = p;
      const ScaledTermResult r = scaled_leading_term(q, 3, 24, trunc);
      const double dev = std::abs(r.value - want);
      CHECK(dev < prev);
      prev = dev;
    }
    CHECK(prev < 0.30 * want);
  }
}

TEST_CASE("validation and quality errors") {
  CHECK_THROWS_AS(joint_cdf(one_point(0.0, 1.0, 0.5, 1.0), ContourSpec::geometric(1, 15)),
                  std::domain_error);
  CHECK_THROWS_AS(joint_cdf(one_point(0.0, 1.0, 0.5, -1.0), ContourSpec::geometric(1)),
                  std::domain_error);
  CHECK_THROWS_AS(joint_cdf(two_point(0.0, 1.0, 0.0, 0.0, 0.5, 0.0, 1.0),
                            ContourSpec::geometric(2)),
                  std::domain_error);
  ConditionalQuery q;
  q.x = {0.0};
  q.t = {1.5};
  q.h = {0.0};
  q.ell = 4.0;
  q.p = 1.0;
  CHECK_THROWS_AS(conditional_probability(q), std::domain_error);
  ConditionalQuery huge;
  huge.ell = 1e6;
  CHECK_THROWS_AS(conditional_probability(huge), std::range_error);
}
