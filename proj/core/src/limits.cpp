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

#include "pkpz/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pkpz/montecarlo.hpp"

namespace pkpz::limits {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_increasing_positive(std::span<const double> a, const char* who) {
  if (a.empty()) throw std::invalid_argument(std::string(who) + ": empty time vector");
  double prev = 0.0;
  for (double v : a) {
    if (!(v > prev)) throw std::domain_error(std::string(who) + ": need 0 < a_1 < ... < a_m");
    prev = v;
  }
}

double min_increment(std::span<const double> a) {
  double prev = 0.0, best = a[0];
  for (double v : a) {
    best = std::min(best, v - prev);
    prev = v;
  }
  return best;
}

std::vector<double> default_abscissas(std::size_t m) {
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i)
    d[i] = 1.0 + 0.5 * static_cast<double>(m - 1 - i);
  return d;
}

// Chain reduction of the separable multi-line sum: v_i(k) =
// g_i(xi_i(k)) * SUM_j v_{i-1}(j) * coupling(xi_i(k), xi_{i-1}(j)).
// The couplings only involve adjacent lines, so the full tensor sum
// factorizes exactly into m-1 matrix-vector products.
template <typename Coupling>
cplx line_chain(std::span<const double> a, std::span<const double> b,
                const std::vector<double>& d, int nodes, double half_height,
                Coupling coupling) {
  const std::size_t m = a.size();
  const double hstep = 2.0 * half_height / static_cast<double>(nodes - 1);

  std::vector<cplx> xi_prev(static_cast<std::size_t>(nodes)), xi_cur(static_cast<std::size_t>(nodes));
  std::vector<cplx> v(static_cast<std::size_t>(nodes)), w(static_cast<std::size_t>(nodes));

  for (std::size_t i = 0; i < m; ++i) {
    const double da = i == 0 ? a[0] : a[i] - a[i - 1];
    const double db = i == 0 ? b[0] : b[i] - b[i - 1];
    for (int j = 0; j < nodes; ++j) {
      const cplx xi{d[i], -half_height + hstep * j};
      xi_cur[static_cast<std::size_t>(j)] = xi;
      const double trap = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
      const cplx g = std::exp(da * xi * xi - db * xi) * (trap * hstep / (2.0 * kPi));
      if (i == 0) {
        w[static_cast<std::size_t>(j)] = g;
      } else {
        cplx acc{0.0, 0.0};
        for (int q = 0; q < nodes; ++q)
          acc += v[static_cast<std::size_t>(q)] *
                 coupling(xi, xi_prev[static_cast<std::size_t>(q)]);
        w[static_cast<std::size_t>(j)] = g * acc;
      }
    }
    std::swap(v, w);
    std::swap(xi_prev, xi_cur);
  }

  cplx total{0.0, 0.0};
  for (const cplx& t : v) total += t;
  return total;
}

const double kSqrt2 = std::numbers::sqrt2;

// Iterated quadrature over bridge increments:
//   psi_1(s) = phi_{da_1}(s),
//   psi_i(s) = INT_{lo_{i-1}}^{hi_{i-1}} psi_{i-1}(y) phi_{da_i}(s - y) dy,
// returning psi_m(end). Bounds may be +inf (hi < lo disables nothing; pass
// hi = +inf for orthants).
double gaussian_chain(std::span<const double> a, std::span<const double> lo,
                      std::span<const double> hi, double end) {
  const std::size_t m = a.size();
  if (m == 1) return specfun::gauss_density(end, a[0]);

  // Composite Gauss-Legendre panels per constrained coordinate.
  static constexpr int kGl = 16;
  static constexpr double kGlNode[kGl] = {
      -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
      -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
      -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
      0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
      0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
      0.9894009349916499};
  static constexpr double kGlWeight[kGl] = {
      0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
      0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
      0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
      0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
      0.0271524594117541};

  const double reach = 9.0 * std::sqrt(a.back()) + std::abs(end);
  std::vector<double> nodes, weights, psi;
  std::vector<double> nodes_next, weights_next, psi_next;

  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double da = i == 0 ? a[0] : a[i] - a[i - 1];
    const double lower = lo[i];
    const double upper = std::min(hi[i], lower + reach + 9.0 * std::sqrt(a[i]));
    if (!(upper > lower)) return 0.0;
    const double width = std::min(0.5 * std::sqrt(min_increment(a)), 0.5);
    const int panels = std::max(8, static_cast<int>(std::ceil((upper - lower) / width)));
    nodes_next.clear();
    weights_next.clear();
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double pl = lower + (upper - lower) * pnl / panels;
      const double pr = lower + (upper - lower) * (pnl + 1) / panels;
      for (int q = 0; q < kGl; ++q) {
        nodes_next.push_back(0.5 * (pl + pr) + 0.5 * (pr - pl) * kGlNode[q]);
        weights_next.push_back(0.5 * (pr - pl) * kGlWeight[q]);
      }
    }
    psi_next.resize(nodes_next.size());
    for (std::size_t j = 0; j < nodes_next.size(); ++j) {
      const double s = nodes_next[j];
      if (i == 0) {
        psi_next[j] = specfun::gauss_density(s, da);
      } else {
        double acc = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q)
          acc += psi[q] * weights[q] * specfun::gauss_density(s - nodes[q], da);
        psi_next[j] = acc;
      }
    }
    nodes = nodes_next;
    weights = weights_next;
    psi = psi_next;
  }

  const double da_last = a[m - 1] - a[m - 2];
  double acc = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q)
    acc += psi[q] * weights[q] * specfun::gauss_density(end - nodes[q], da_last);
  return acc;
}

}  // namespace

QuadValue s_inf_quadrature(std::span<const double> a, std::span<const double> b,
                           const LineSpec& lines, double /*tol*/) {
  validate_increasing_positive(a, "s_inf_quadrature");
  if (b.size() != a.size()) throw std::invalid_argument("s_inf_quadrature: length mismatch");
  const std::size_t m = a.size();

  std::vector<double> d = lines.abscissas.empty() ? default_abscissas(m) : lines.abscissas;
  if (d.size() != m) throw std::invalid_argument("s_inf_quadrature: abscissa count");
  for (std::size_t i = 1; i < m; ++i)
    if (!(d[i] < d[i - 1]))
      throw std::domain_error("s_inf_quadrature: abscissas must decrease strictly");

  const double half = lines.half_height > 0.0
                          ? lines.half_height
                          : 8.0 / std::sqrt(min_increment(a));
  const cplx total = line_chain(a, b, d, lines.nodes_per_line, half,
                                [](cplx xi, cplx xp) { return 1.0 / (xi - xp); });
  const double sign = m % 2 == 1 ? 1.0 : -1.0;
  const cplx value = sign * kSqrt2 * total;
  return {value.real(), std::abs(value.imag())};
}

double s_inf_probabilistic(std::span<const double> a, std::span<const double> b,
                           double /*tol*/) {
  validate_increasing_positive(a, "s_inf_probabilistic");
  if (b.size() != a.size()) throw std::invalid_argument("s_inf_probabilistic: length mismatch");
  const std::size_t m = a.size();
  if (m > 4) throw std::domain_error("s_inf_probabilistic: supports m <= 4");
  if (m == 1) return specfun::gauss_density(b[0] / kSqrt2, a[0]);

  std::vector<double> lo(m - 1), hi(m - 1, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < m; ++i) lo[i] = b[i] / kSqrt2;
  return gaussian_chain(a, lo, hi, b[m - 1] / kSqrt2);
}

SrResult s_r_sum(std::span<const double> a, std::span<const double> b,
                 std::span<const cplx> w, double r, int cutoff) {
  validate_increasing_positive(a, "s_r_sum");
  if (b.size() != a.size() || w.size() != a.size())
    throw std::invalid_argument("s_r_sum: length mismatch");
  if (!(r > 0.0)) throw std::domain_error("s_r_sum: r must be positive");
  const std::size_t m = a.size();
  double prev_mod = 0.0;
  for (const cplx& wi : w) {
    const double mod = std::abs(wi);
    if (!(mod > prev_mod))
      throw std::domain_error("s_r_sum: need strictly increasing |w_i| > 0");
    prev_mod = mod;
  }

  if (cutoff <= 0) {
    const double da = min_increment(a);
    cutoff = static_cast<int>(std::ceil(r / (2.0 * kPi) *
                                        std::sqrt(std::log(1e16) / da))) + 2;
  }

  auto eval = [&](int K) {
    const int count = 2 * K + 1;
    std::vector<cplx> xi_prev(count), xi_cur(count), v(count), wv(count);
    for (std::size_t i = 0; i < m; ++i) {
      const double da = i == 0 ? a[0] : a[i] - a[i - 1];
      const double db = i == 0 ? b[0] : b[i] - b[i - 1];
      const cplx base = -std::log(w[i]) / r;
      for (int k = -K; k <= K; ++k) {
        const std::size_t j = static_cast<std::size_t>(k + K);
        const cplx xi = base + cplx{0.0, 2.0 * kPi * k / r};
        xi_cur[j] = xi;
        const cplx g = std::exp(da * xi * xi - db * xi);
        if (i == 0) {
          wv[j] = g;
        } else {
          cplx acc{0.0, 0.0};
          for (int q = 0; q < count; ++q) {
            const cplx diff = xi - xi_prev[static_cast<std::size_t>(q)];
            if (std::abs(diff) < 1e-12)
              throw std::domain_error("s_r_sum: coincident roots across adjacent levels");
            acc += v[static_cast<std::size_t>(q)] / diff;
          }
          wv[j] = g * acc;
        }
      }
      std::swap(v, wv);
      std::swap(xi_prev, xi_cur);
    }
    cplx total{0.0, 0.0};
    for (const cplx& t : v) total += t;
    const double sign = m % 2 == 1 ? 1.0 : -1.0;
    return sign * kSqrt2 * std::pow(r, -static_cast<double>(m)) * total;
  };

  SrResult res;
  res.value = eval(cutoff);
  const cplx inner = cutoff >= 1 ? eval(cutoff - 1) : cplx{0.0, 0.0};
  res.trunc_proxy = std::abs(res.value - inner);
  return res;
}

QuadValue critical_limit_integral(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> c, double r,
                                  std::span<const double> wradii, int nodes, int cutoff) {
  validate_increasing_positive(a, "critical_limit_integral");
  const std::size_t m = a.size();
  if (b.size() != m || c.size() != m || wradii.size() != m)
    throw std::invalid_argument("critical_limit_integral: length mismatch");
  if (m > 3) throw std::domain_error("critical_limit_integral: supports m <= 3");
  double prev = 0.0;
  for (double rad : wradii) {
    if (!(rad > prev) || !(rad < 1.0))
      throw std::domain_error("critical_limit_integral: radii must increase in (0,1)");
    prev = rad;
  }

  std::vector<double> bminus(m), bplus(m);
  for (std::size_t i = 0; i < m; ++i) {
    bminus[i] = c[i] - b[i];
    bplus[i] = c[i] + b[i];
  }

  // The integrand concentrates in an angular window of width ~r (the root
  // sums decay like e^{-da (theta/r)^2}), so the grid must resolve 1/r.
  if (r < 1.0) {
    const int needed = static_cast<int>(std::ceil(40.0 / r / 2.0)) * 2;
    nodes = std::max(nodes, needed);
  }

  long tuples = 1;
  for (std::size_t i = 0; i < m; ++i) tuples *= nodes;

  cplx total{0.0, 0.0};
  std::vector<cplx> w(m);
  for (long idx = 0; idx < tuples; ++idx) {
    long rest = idx;
    for (std::size_t i = 0; i < m; ++i) {
      const int j = static_cast<int>(rest % nodes);
      rest /= nodes;
      const double theta = 2.0 * kPi * (j + 0.5) / nodes - kPi;
      w[i] = std::polar(wradii[i], theta);
    }
    cplx fac{1.0, 0.0};
    for (std::size_t i = 1; i < m; ++i) fac *= 1.0 - w[i - 1] / w[i];
    total += s_r_sum(a, bminus, w, r, cutoff).value *
             s_r_sum(a, bplus, w, r, cutoff).value * fac;
  }
  const cplx value = total / static_cast<double>(tuples);
  return {value.real(), std::abs(value.imag())};
}

BridgeIdentityValue finite_r_bridge_identity(std::span<const double> a,
                                             std::span<const double> b, double r,
                                             const LineSpec& lines, double /*tol*/) {
  validate_increasing_positive(a, "finite_r_bridge_identity");
  if (b.size() != a.size())
    throw std::invalid_argument("finite_r_bridge_identity: length mismatch");
  if (!(r > 0.0)) throw std::domain_error("finite_r_bridge_identity: r must be positive");
  const std::size_t m = a.size();
  if (m > 3) throw std::domain_error("finite_r_bridge_identity: supports m <= 3");

  std::vector<double> d = lines.abscissas.empty() ? default_abscissas(m) : lines.abscissas;
  const double half = lines.half_height > 0.0
                          ? lines.half_height
                          : 8.0 / std::sqrt(min_increment(a));
  const cplx total = line_chain(a, b, d, lines.nodes_per_line, half,
                                [r](cplx xi, cplx xp) -> cplx {
                                  const cplx dx = xi - xp;
                                  if (std::abs(dx) < 1e-10) {
                                    // (1 - e^{r s})/s -> -r - r^2 s/2 + ...
                                    return -r - 0.5 * r * r * dx;
                                  }
                                  return (1.0 - std::exp(r * dx)) / dx;
                                });
  const double sign = m % 2 == 1 ? 1.0 : -1.0;
  BridgeIdentityValue out;
  out.lhs = (sign * kSqrt2 * total).real();

  if (m == 1) {
    out.rhs = specfun::gauss_density(b[0] / kSqrt2, a[0]);
  } else {
    std::vector<double> lo(m - 1), hi(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      lo[i] = b[i] / kSqrt2;
      hi[i] = (b[i] + r) / kSqrt2;
    }
    out.rhs = gaussian_chain(a, lo, hi, b[m - 1] / kSqrt2);
  }
  return out;
}

double limit_conditional_cdf(int case_id, std::span<const double> x,
                             std::span<const double> t, std::span<const double> h,
                             double r) {
  if (case_id < 1 || case_id > 3)
    throw std::domain_error("limit_conditional_cdf: case must be 1, 2, or 3");
  const std::size_t mm1 = t.size();
  if (h.size() != mm1 || (case_id != 3 && x.size() != mm1))
    throw std::invalid_argument("limit_conditional_cdf: length mismatch");
  if (mm1 == 0) return 1.0;
  {
    double prev = 0.0;
    for (double ti : t) {
      if (!(ti > prev) || !(ti < 1.0))
        throw std::domain_error("limit_conditional_cdf: times must increase in (0,1)");
      prev = ti;
    }
  }

  if (mm1 > 3) {
    // Quadrature is dimension-cursed here; fall back to the Monte Carlo
    // estimator with a fixed internal seed.
    return mc::estimate_limit_probability(case_id, x, t, h, r, 200'000,
                                          mc::RandomStream{0x5eed5eedULL, 1})
        .value;
  }

  std::vector<double> tfull(t.begin(), t.end());
  tfull.push_back(1.0);

  switch (case_id) {
    case 1: {
      std::vector<double> bm(mm1 + 1, 0.0), bp(mm1 + 1, 0.0);
      for (std::size_t i = 0; i < mm1; ++i) {
        bm[i] = h[i] - x[i];
        bp[i] = h[i] + x[i];
      }
      const double denom = specfun::gauss_density(0.0, 1.0);
      return s_inf_probabilistic(tfull, bm) * s_inf_probabilistic(tfull, bp) /
             (denom * denom);
    }
    case 2: {
      std::vector<double> xfull(x.begin(), x.end()), hfull(h.begin(), h.end());
      xfull.push_back(0.0);
      hfull.push_back(0.0);
      std::vector<double> radii(mm1 + 1);
      for (std::size_t i = 0; i <= mm1; ++i)
        radii[i] = std::exp(-r * (1.0 - 0.25 * static_cast<double>(i)));
      const double joint =
          critical_limit_integral(tfull, xfull, hfull, r, radii, 64).value;
      const std::vector<double> one{1.0}, zero{0.0};
      const std::vector<double> radius1{radii[0]};
      const double point =
          critical_limit_integral(one, zero, zero, r, radius1, 64).value;
      return joint / point;
    }
    default: {
      if (mm1 == 0) return 1.0;
      std::vector<double> lo(h.begin(), h.end());
      std::vector<double> hi(mm1, std::numeric_limits<double>::infinity());
      const double constrained = gaussian_chain(tfull, lo, hi, 0.0);
      return constrained / specfun::gauss_density(0.0, 1.0);
    }
  }
}

}  // namespace pkpz::limits
