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

#include "pkpz/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pkpz::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);
constexpr long kTermCap = 10'000'000;

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kGlOrder = 16;
constexpr double kGlNode[kGlOrder] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGlWeight[kGlOrder] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

// Kahan-compensated complex accumulator.
struct CompensatedSum {
  cplx sum{0.0, 0.0};
  cplx c{0.0, 0.0};
  void add(cplx term) {
    const cplx y = term - c;
    const cplx t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

void require_disk(cplx z, const char* who) {
  if (!(std::abs(z) < 1.0)) throw std::domain_error(std::string(who) + ": |z| must be < 1");
}

}  // namespace

CirclePoint::CirclePoint(double x, double period) : period_(period) {
  if (!(period > 0.0)) throw std::domain_error("CirclePoint: period must be positive");
  rep_ = std::fmod(x, period);
  if (rep_ < 0.0) rep_ += period;
  if (rep_ >= period) rep_ = 0.0;  // fmod rounding at the seam
}

bool operator==(const CirclePoint& a, const CirclePoint& b) {
  if (a.period_ != b.period_) return false;
  const double d = std::abs(a.rep_ - b.rep_);
  const double slack = 1e-14 * a.period_;
  return d <= slack || std::abs(d - a.period_) <= slack;
}

cplx polylog(double s, cplx z, double tol) {
  if (s != 0.5 && s != 1.5 && s != 2.5)
    throw std::domain_error("polylog: order must be one of 1/2, 3/2, 5/2");
  require_disk(z, "polylog");
  if (z == cplx{0.0, 0.0}) return {0.0, 0.0};

  const double r = std::abs(z);
  // Tail after N terms is bounded by r^{N+1} / (1 - r); stop once the
  // current term is below tol * (1 - r).
  const double cutoff = tol * (1.0 - r);
  CompensatedSum acc;
  cplx zn = z;
  for (long n = 1; n <= kTermCap; ++n) {
    const cplx term = zn * std::pow(static_cast<double>(n), -s);
    acc.add(term);
    if (std::abs(zn) <= cutoff) return acc.sum;
    zn *= z;
  }
  throw std::runtime_error("polylog: term cap reached before tolerance");
}

cplx a1(cplx z, double tol) { return -polylog(1.5, z, tol) / kSqrt2Pi; }

cplx a2(cplx z, double tol) { return -polylog(2.5, z, tol) / kSqrt2Pi; }

cplx bfun(cplx z, cplx zp, double tol) {
  require_disk(z, "bfun");
  require_disk(zp, "bfun");
  if (z == cplx{0.0, 0.0} || zp == cplx{0.0, 0.0}) return {0.0, 0.0};

  const double r = std::max(std::abs(z), std::abs(zp));
  // |tail| <= (1/4pi) * 2 r^{K+1} / (1-r)^2 once both indices run past K.
  const double safe = tol * 2.0 * kPi * (1.0 - r) * (1.0 - r);
  long cap = static_cast<long>(std::ceil(std::log(std::max(safe, 1e-300)) / std::log(r))) + 1;
  cap = std::clamp(cap, 4L, 40'000L);

  CompensatedSum acc;
  cplx zk = z;
  for (long k = 1; k <= cap; ++k) {
    cplx zpk = zp;
    const double sk = std::sqrt(static_cast<double>(k));
    for (long kp = 1; kp <= cap; ++kp) {
      acc.add(zk * zpk / (static_cast<double>(k + kp) * sk * std::sqrt(static_cast<double>(kp))));
      zpk *= zp;
    }
    zk *= z;
  }
  return acc.sum / (4.0 * kPi);
}

cplx h_left(cplx w, cplx z, double tol) {
  if (!(w.real() < 0.0)) throw std::domain_error("h_left: Re(w) must be < 0");
  require_disk(z, "h_left");
  if (z == cplx{0.0, 0.0}) return {0.0, 0.0};

  // Along the path y = x + i Im(w), x <= Re(w), the series argument has
  // modulus |z| e^{(Re(w)^2 - x^2)/2} <= |z|, so Li_{1/2} always converges.
  // The integrand decays super-Gaussianly to the left; panels of width 1.
  const double x0 = w.real();
  const double absz = std::abs(z);
  const cplx w2 = w * w;
  const double im = w.imag();
  const double leaf_tol = std::max(tol * 1e-3, 1e-15);

  CompensatedSum acc;
  const int panel_cap = 200;
  for (int j = 0; j < panel_cap; ++j) {
    const double right = x0 - static_cast<double>(j);
    const double left = right - 1.0;
    cplx panel{0.0, 0.0};
    for (int q = 0; q < kGlOrder; ++q) {
      const double x = 0.5 * (left + right) + 0.5 * kGlNode[q];
      const cplx y{x, im};
      panel += kGlWeight[q] * polylog(0.5, z * std::exp(0.5 * (w2 - y * y)), leaf_tol);
    }
    acc.add(0.5 * panel);
    // Remaining tail: |Li_{1/2}| <= 2|z| e^{(x0^2-x^2)/2} and for x <= left
    // a Gaussian tail bound gives INT <= 2|z| e^{(x0^2-left^2)/2} / |left|.
    const double tail =
        2.0 * absz * std::exp(0.5 * (x0 * x0 - left * left)) / std::max(1.0, -left);
    if (tail < 0.5 * tol * kSqrt2Pi) return -acc.sum / kSqrt2Pi;
  }
  throw std::runtime_error("h_left: panel cap reached before tolerance");
}

cplx h_right(cplx w, cplx z, double tol) {
  if (!(w.real() > 0.0)) throw std::domain_error("h_right: Re(w) must be > 0");
  return h_left(-w, z, tol);
}

cplx h_any(cplx w, cplx z, double tol) {
  if (w.real() < 0.0) return h_left(w, z, tol);
  if (w.real() > 0.0) return h_left(-w, z, tol);
  throw std::domain_error("h_any: Re(w) must be nonzero");
}

double gauss_density(double x, double t) {
  if (!(t > 0.0)) throw std::domain_error("gauss_density: variance must be positive");
  return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

double wrapped_gaussian(const CirclePoint& x, double t, double tol) {
  if (!(t > 0.0)) throw std::domain_error("wrapped_gaussian: t must be positive");
  const double rho = x.period();
  const double rep = x.representative();
  // Terms vanish once |rep + k rho| > sqrt(2 t log(1/eps)); symmetric window.
  const double reach = std::sqrt(2.0 * t * std::log(1.0 / std::max(tol * 1e-2, 1e-300)));
  const long K = static_cast<long>(std::ceil((reach + rho) / rho)) + 1;
  double sum = 0.0;
  for (long k = -K; k <= K; ++k) sum += gauss_density(rep + static_cast<double>(k) * rho, t);
  return sum;
}

double wrapped_gaussian(double x, double period, double t, double tol) {
  return wrapped_gaussian(CirclePoint(x, period), t, tol);
}

double dist_circle(const CirclePoint& x, const CirclePoint& y) {
  if (x.period() != y.period())
    throw std::domain_error("dist_circle: mismatched periods");
  const double rho = x.period();
  double d = std::abs(x.representative() - y.representative());
  return std::min(d, rho - d);
}

double c_of_rho(double rho, double tol) {
  if (!(rho > 0.0)) throw std::domain_error("c_of_rho: rho must be positive");
  const long K =
      static_cast<long>(std::ceil(std::sqrt(2.0 * std::log(4.0 / tol)) / rho)) + 1;
  double sum = 1.0;
  for (long k = 1; k <= K; ++k)
    sum += 2.0 * std::exp(-0.5 * rho * rho * static_cast<double>(k) * static_cast<double>(k));
  return sum;
}

double c_of_rho_dual(double rho, double tol) {
  if (!(rho > 0.0)) throw std::domain_error("c_of_rho_dual: rho must be positive");
  const double a = 2.0 * kPi * kPi / (rho * rho);
  const long K = static_cast<long>(std::ceil(std::sqrt(std::log(4.0 / tol) / a))) + 1;
  double sum = 1.0;
  for (long k = 1; k <= K; ++k)
    sum += 2.0 * std::exp(-a * static_cast<double>(k) * static_cast<double>(k));
  return sum * kSqrt2Pi / rho;
}

}  // namespace pkpz::specfun
