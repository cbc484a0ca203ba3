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

// User-facing exact quantities of the periodic height field at the
// relaxation scale. The joint distribution is an m-fold contour integral
//
//   (1/(2 pi i)^m) OINT ... OINT C(z) D(z) prod dz_i/z_i
//
// over origin-centered circles, evaluated by the equispaced trapezoid rule
// in the angles (spectrally accurate for analytic periodic integrands).
// Two orientations are supported: the plain CDF P(AND H <= beta_i) with
// decreasing radii |z_1| > ... > |z_m|, and the upper-tail form
// P(AND_{i<m} H >= beta_i, H_m <= beta_m) with increasing radii and sign
// (-1)^{m-1}. The beta_m-derivative, the conditional probability ratio and
// its four contour-term components, and the scaled leading term of the
// pinned asymptotics build on the same machinery.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "pkpz/fredholm.hpp"

namespace pkpz::dist {

using cplx = std::complex<double>;
using fredholm::TruncationSpec;

// Raised when a result fails its own numerical-quality contract (value
// outside [0,1] beyond the error proxy, or an ill-conditioned ratio).
struct NumericalQualityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvaluationPoint {
  std::vector<double> gamma, tau, beta;
  double p = 1.0;

  int m() const { return static_cast<int>(tau.size()); }
  void validate() const;
};

struct ContourSpec {
  std::vector<double> radii;  // strictly increasing, each in (0,1)
  int nodes_per_circle = 64;

  // Geometric family 0.05 * 2^i for plain CDFs (supports m <= 4).
  static ContourSpec geometric(int m, int nodes = 64);
  // Scaled family |z_i| = e^{-ell p/2 - r rho_i}, r = p ell^{1/4}, with
  // rho_i = rho1 - delta (i-1) > 0.
  static ContourSpec scaled(double ell, double p, int m, double rho1 = 1.0,
                            double delta = 0.25, int nodes = 64);
  static ContourSpec raw(std::vector<double> radii, int nodes = 64);

  void validate(int m) const;
};

enum class CdfVariant { AllBelow, UpperTail };

struct EvalResult {
  double value = 0.0;
  double imag_residual = 0.0;
  double quad_proxy = 0.0;   // change under node halving
  double trunc_proxy = 0.0;  // integrated magnitude of the outermost order ring
  long nodes = 0;            // node tuples at the fine level
  long terms = 0;            // series terms summed at the fine level
};

// Joint distribution value at the evaluation point.
EvalResult joint_cdf(const EvaluationPoint& pt, const ContourSpec& contour,
                     const TruncationSpec& trunc = {}, CdfVariant variant = CdfVariant::AllBelow);

// d/d beta_m of the upper-tail form; for m = 1 this is the one-point
// density. Cross-checkable against a centered finite difference of
// joint_cdf.
EvalResult cdf_derivative(const EvaluationPoint& pt, const ContourSpec& contour,
                          const TruncationSpec& trunc = {});

// One-point CDF (or density) swept over a beta grid with shared root and
// boundary-layer caches. Requires m == 1.
std::vector<EvalResult> cdf_curve(const EvaluationPoint& base, std::span<const double> betas,
                                  const ContourSpec& contour, const TruncationSpec& trunc = {},
                                  CdfVariant variant = CdfVariant::AllBelow,
                                  bool derivative = false);

// Residual of the two contour integrals that vanish identically when some
// order component is zero; returns the larger magnitude.
double vanishing_residual(const EvaluationPoint& pt, const ContourSpec& contour,
                          const TruncationSpec& trunc, const std::vector<int>& order);

// Conditional query: constraint points (x_i, t_i, h_i), i < m, against the
// conditioning event at (0, 1) with level ell; period p.
struct ConditionalQuery {
  std::vector<double> x, t, h;
  double ell = 1.0;
  double p = 1.0;

  int m() const { return static_cast<int>(t.size()) + 1; }
  void validate() const;
};

// The four contour terms of one derivative decomposition: the order-one
// plain and hatted terms and their higher-order remainders.
struct TermBreakdown {
  double leading = 0.0;       // order-(1,...,1) term with the A1 weight
  double higher = 0.0;        // higher-order remainder with the A1 weight
  double hat_leading = 0.0;   // order-(1,...,1) hatted term
  double hat_higher = 0.0;    // higher-order hatted remainder
  double imag_residual = 0.0;
  double quad_proxy = 0.0;
  double trunc_proxy = 0.0;

  double sum() const { return leading + higher + hat_leading + hat_higher; }
};

struct ConditionalResult {
  double ratio = 0.0;
  TermBreakdown numerator, denominator;
  double quad_proxy = 0.0;  // combined first-order proxy on the ratio
};

ConditionalResult conditional_probability(const ConditionalQuery& q, int nodes = 32,
                                          const TruncationSpec& trunc = TruncationSpec{6, 2, 3});

// The hatted order-one term rescaled for direct comparison with the limit
// kernels: (4 ell / sqrt(p)) e^{(4/3) ell^{3/2}} for the large and critical
// period regimes (case 1, 2), 2^{3/2} ell^{5/4} sqrt(p) e^{(4/3) ell^{3/2}}
// for the small period regime (case 3).
struct ScaledTermResult {
  double value = 0.0;
  double imag_residual = 0.0;
  double quad_proxy = 0.0;
};

ScaledTermResult scaled_leading_term(const ConditionalQuery& q, int case_id, int nodes = 32,
                                     const TruncationSpec& trunc = TruncationSpec{6, 2, 3});

}  // namespace pkpz::dist
