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

// Complex special functions used by the determinant-series machinery:
//
//   Li_s(z)      = SUM_{n>=1} z^n / n^s            (half-integer s, |z| < 1)
//   A1(z)        = -Li_{3/2}(z) / sqrt(2 pi)
//   A2(z)        = -Li_{5/2}(z) / sqrt(2 pi)
//   B(z,z')      = (1/4pi) SUM_{k,k'>=1} z^k z'^k' / ((k+k') sqrt(k k'))
//   h(w,z)       = -(1/sqrt(2 pi)) INT_{-inf}^{w} Li_{1/2}(z e^{(w^2-y^2)/2}) dy
//                  taken along the horizontal path at height Im(w), Re(w) < 0;
//                  extended to Re(w) > 0 by the symmetry h(-w,z) = h(w,z)
//   phi_t(x)     = centered Gaussian density of variance t
//   phi_t^rho    = wrapped Gaussian on the circle R/(rho Z)
//   c(rho)       = SUM_k e^{-rho^2 k^2/2} = (sqrt(2 pi)/rho) SUM_k e^{-2 pi^2 k^2/rho^2}
//
// All series and quadratures are deterministic functions of (input, tol).

#pragma once

#include <complex>
#include <stdexcept>

namespace pkpz::specfun {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;

// A point strictly inside the unit disk. Construction validates |value| < 1.
class ComplexDisk {
  cplx value_;

 public:
  explicit ComplexDisk(cplx value) : value_(value) {
    if (!(std::abs(value) < 1.0))
      throw std::domain_error("ComplexDisk: |z| must be < 1");
  }
  cplx value() const { return value_; }
};

// A point of the circle I_rho = R/(rho Z), stored by its canonical
// representative in [0, rho). Two points whose representatives differ by a
// multiple of rho compare equal (absolute slack 1e-14 * rho).
class CirclePoint {
  double rep_;
  double period_;

 public:
  CirclePoint(double x, double period);
  double representative() const { return rep_; }
  double period() const { return period_; }

  friend bool operator==(const CirclePoint& a, const CirclePoint& b);
};

// Polylogarithm of order s in {1/2, 3/2, 5/2} by direct power series with
// compensated summation. Throws std::domain_error for |z| >= 1 or an
// unsupported order, std::runtime_error if tol is unreachable within the
// term cap (1e7 terms).
cplx polylog(double s, cplx z, double tol = kDefaultTol);

cplx a1(cplx z, double tol = kDefaultTol);
cplx a2(cplx z, double tol = kDefaultTol);

// Double series B(z,z'); requires |z|, |z'| < 1.
cplx bfun(cplx z, cplx zp, double tol = kDefaultTol);

// Boundary-layer integral h(w,z) for Re(w) < 0, composite Gauss-Legendre
// panels of width 1 along the horizontal path ending at w.
cplx h_left(cplx w, cplx z, double tol = kDefaultTol);

// h for Re(w) > 0 via the symmetry h(w,z) = h_left(-w,z).
cplx h_right(cplx w, cplx z, double tol = kDefaultTol);

// Dispatch on the sign of Re(w). Re(w) == 0 is a domain error.
cplx h_any(cplx w, cplx z, double tol = kDefaultTol);

// phi_t(x), t > 0.
double gauss_density(double x, double t);

// Wrapped Gaussian heat kernel phi_t^(rho)({x}).
double wrapped_gaussian(const CirclePoint& x, double t, double tol = kDefaultTol);
double wrapped_gaussian(double x, double period, double t, double tol = kDefaultTol);

// Arc distance on I_rho: min_k |x - y + k rho|, in [0, rho/2].
double dist_circle(const CirclePoint& x, const CirclePoint& y);

// Theta sum c(rho) and its Poisson-summation dual form.
double c_of_rho(double rho, double tol = kDefaultTol);
double c_of_rho_dual(double rho, double tol = kDefaultTol);

}  // namespace pkpz::specfun
