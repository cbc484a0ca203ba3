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

// Limiting conditional laws. The multi-time kernels are
//
//   S_inf(a,b) = (-1)^{m-1} sqrt(2)/(2 pi i)^m INT ... INT
//                prod_{i=2}^m 1/(xi_i - xi_{i-1})
//                prod_i e^{da_i xi_i^2 - db_i xi_i} dxi,
//
// over vertical lines Re(xi_1) > ... > Re(xi_m), and its root-sum analogue
//
//   S_r(a,b;w) = (-1)^{m-1} sqrt(2)/r^m SUM over roots of e^{-r xi_i} = w_i,
//
// together with the probabilistic forms (conditioned Brownian orthant and
// box probabilities) they equal, and the circle-bridge combination obtained
// by integrating S_r products over nested w-circles.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pkpz/specfun.hpp"

namespace pkpz::limits {

using cplx = std::complex<double>;

struct LineSpec {
  std::vector<double> abscissas;  // Re(xi_i), strictly decreasing; empty -> 1 + (m-i)/2
  int nodes_per_line = 400;
  double half_height = 0.0;  // 0 -> 8 / sqrt(min da_i)
};

struct QuadValue {
  double value = 0.0;
  double imag_residual = 0.0;
};

// Vertical-line quadrature of S_inf. a strictly increasing positive.
QuadValue s_inf_quadrature(std::span<const double> a, std::span<const double> b,
                           const LineSpec& lines = {}, double tol = specfun::kDefaultTol);

// Conditioned-orthant form: P(B(a_i) >= b_i/sqrt2, i<m | B(a_m)=b_m/sqrt2)
// times phi_{a_m}(b_m/sqrt2), by iterated quadrature over bridge
// increments. Supports m <= 4.
double s_inf_probabilistic(std::span<const double> a, std::span<const double> b,
                           double tol = specfun::kDefaultTol);

struct SrResult {
  cplx value{0.0, 0.0};
  double trunc_proxy = 0.0;  // magnitude of the outermost root shell
};

// Root sum S_r(a, b; w) truncated at root index |k| <= cutoff
// (cutoff <= 0 selects it from the Gaussian decay of the summand).
SrResult s_r_sum(std::span<const double> a, std::span<const double> b,
                 std::span<const cplx> w, double r, int cutoff = 0);

// m-fold circle quadrature of
//   S_r(a, c-b; w) S_r(a, c+b; w) prod_{i=2}^m (1 - w_{i-1}/w_i)
// with measure dw_i/(2 pi i w_i) over |w_i| = wradii_i.
QuadValue critical_limit_integral(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> c, double r,
                                  std::span<const double> wradii, int nodes = 64,
                                  int cutoff = 0);

struct BridgeIdentityValue {
  double lhs = 0.0;  // vertical-line quadrature with box kernel (1 - e^{r dxi})/dxi
  double rhs = 0.0;  // Gaussian box probability times endpoint density
};

// Both sides of the finite-r identity
//   LHS = P(sqrt2 B(a_i) - b_i in [0, r), i < m | sqrt2 B(a_m) = b_m)
//         * phi_{a_m}(b_m/sqrt2) = RHS.
BridgeIdentityValue finite_r_bridge_identity(std::span<const double> a,
                                             std::span<const double> b, double r,
                                             const LineSpec& lines = {},
                                             double tol = specfun::kDefaultTol);

// Conditional limit law of the pinched-up field at the query points:
// case 1: P(AND B2br(t_i) - |B1br(t_i) - x_i| >= h_i)
// case 2: same with the circle bridge distance at circumference r,
//         evaluated as the ratio of critical_limit_integral to its
//         one-point value
// case 3: P(AND Bbr(t_i) >= h_i)
// Quadrature path for up to three constraint times; larger queries are
// delegated to the Monte Carlo estimator with a fixed internal seed.
double limit_conditional_cdf(int case_id, std::span<const double> x,
                             std::span<const double> t, std::span<const double> h,
                             double r = 1.0);

}  // namespace pkpz::limits
