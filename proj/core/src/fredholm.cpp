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

#include "pkpz/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <sstream>

#include "pkpz/parallel.hpp"

namespace pkpz::fredholm {

namespace {

constexpr double kExpOverflow = 700.0;

cplx checked_exp(cplx exponent, const char* who) {
  if (exponent.real() > kExpOverflow) {
    std::ostringstream os;
    os << who << ": exponent overflow, |Re| = " << exponent.real();
    throw std::range_error(os.str());
  }
  return std::exp(exponent);
}

// prod_{i<j} (w_j - w_i)
cplx delta_product(std::span<const cplx> w) {
  cplx prod{1.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) prod *= w[j] - w[i];
  return prod;
}

// prod_{i,j} (w_i - w'_j)
cplx delta_product(std::span<const cplx> w, std::span<const cplx> wp) {
  cplx prod{1.0, 0.0};
  for (const cplx& a : w)
    for (const cplx& b : wp) prod *= a - b;
  return prod;
}

cplx cauchy_det_guarded(std::span<const cplx> x, std::span<const cplx> y) {
  const std::size_t a = x.size();
  double scale = 0.0;
  for (const cplx& v : x) scale = std::max(scale, std::abs(v));
  for (const cplx& v : y) scale = std::max(scale, std::abs(v));

  cplx num{1.0, 0.0};
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = i + 1; j < a; ++j) num *= (x[j] - x[i]) * (y[j] - y[i]);

  cplx den{1.0, 0.0};
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < a; ++j) {
      const cplx d = x[i] + y[j];
      if (std::abs(d) < 1e-13 * scale) {
        std::ostringstream os;
        os << "cauchy_det: near-singular denominator x[" << i << "] + y[" << j << "]";
        throw SingularCauchyError(os.str());
      }
      den *= d;
    }
  }
  return num / den;
}

std::vector<int> order_counts(const RootSelection& u) {
  std::vector<int> n(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) n[i] = static_cast<int>(u[i].size());
  return n;
}

void require_matching_selection(const RootSelection& u, const RootSelection& uhat) {
  if (u.size() != uhat.size())
    throw std::invalid_argument("root selections: level count mismatch");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i].size() != uhat[i].size())
      throw std::invalid_argument("root selections: per-level multiplicity mismatch");
}

double delta_at(const std::vector<double>& v, std::size_t i) {
  return i == 0 ? v[0] : v[i] - v[i - 1];
}

// Exponent of E^{i,+-}(s).
cplx e_exponent(const KernelParams& params, std::size_t i, cplx s, int sign) {
  const double p = params.p;
  const double c3 = delta_at(params.tau, i) / (3.0 * p * std::sqrt(p));
  const double c2 = delta_at(params.gamma, i) / (2.0 * p);
  const double c1 = delta_at(params.beta, i) / std::sqrt(p);
  const cplx s2 = s * s;
  return -c3 * s2 * s + static_cast<double>(sign) * c2 * s2 + c1 * s;
}

// All combinations of size s from {0..count-1}, lexicographic, flattened.
std::vector<int> build_combinations(int count, int s) {
  std::vector<int> flat;
  if (s == 0) return flat;  // one empty combination, stored implicitly
  std::vector<int> idx(static_cast<std::size_t>(s));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    flat.insert(flat.end(), idx.begin(), idx.end());
    int j = s - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == count - s + j) --j;
    if (j < 0) break;
    ++idx[static_cast<std::size_t>(j)];
    for (int q = j + 1; q < s; ++q)
      idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return flat;
}

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

RootVector enumerate_roots(cplx z, int cutoff) {
  if (cutoff < 0) throw std::domain_error("enumerate_roots: cutoff must be >= 0");
  const double r = std::abs(z);
  if (!(r > 0.0) || !(r < 1.0))
    throw std::domain_error("enumerate_roots: need 0 < |z| < 1");

  RootVector rv;
  rv.base = z;
  rv.cutoff = cutoff;
  rv.roots.reserve(static_cast<std::size_t>(2 * cutoff + 1));
  const cplx base = -2.0 * std::log(z);  // principal log; Re > 0
  for (int k = -cutoff; k <= cutoff; ++k) {
    cplx u = -std::sqrt(base + cplx{0.0, 4.0 * std::numbers::pi * k});
    rv.roots.push_back(u);
    const cplx residual = std::exp(-0.5 * u * u) - z;
    if (std::abs(residual) > 1e-12 * r)
      throw std::runtime_error("enumerate_roots: residual check failed");
  }
  return rv;
}

cplx cauchy_det(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("cauchy_det: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[i] == x[j] || y[i] == y[j]) return {0.0, 0.0};
  return cauchy_det_guarded(x, y);
}

void KernelParams::validate() const {
  const std::size_t m = z.size();
  if (m == 0) throw std::invalid_argument("KernelParams: empty configuration");
  if (gamma.size() != m || tau.size() != m || beta.size() != m)
    throw std::invalid_argument("KernelParams: vector length mismatch");
  if (!(p > 0.0)) throw std::domain_error("KernelParams: period must be positive");
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::abs(z[i]);
    if (!(r > 0.0) || !(r < 1.0))
      throw std::domain_error("KernelParams: contour points must satisfy 0 < |z| < 1");
    if (!(tau[i] > 0.0)) throw std::domain_error("KernelParams: times must be positive");
  }
  for (std::size_t i = 1; i < m; ++i)
    if (!(tau[i] > tau[i - 1]))
      throw std::domain_error("KernelParams: times must be strictly increasing");
  if (m >= 2) {
    const bool incr = std::abs(z[1]) > std::abs(z[0]);
    for (std::size_t i = 1; i < m; ++i) {
      const double lo = std::abs(z[i - 1]), hi = std::abs(z[i]);
      if (incr ? !(hi > lo) : !(hi < lo))
        throw std::domain_error("KernelParams: contour moduli must be strictly monotone");
    }
  }
}

int OrderVector::total() const {
  int t = 0;
  for (int v : n) t += v;
  return t;
}

void OrderVector::validate(int m, int min_allowed) const {
  if (static_cast<int>(n.size()) != m)
    throw std::invalid_argument("OrderVector: length mismatch");
  for (int v : n)
    if (v < min_allowed) throw std::domain_error("OrderVector: component below allowed range");
}

cplx factor_E(const KernelParams& params, const RootSelection& u, const RootSelection& uhat) {
  params.validate();
  require_matching_selection(u, uhat);
  cplx expo{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (const cplx& s : u[i]) expo += e_exponent(params, i, s, +1);
    for (const cplx& s : uhat[i]) expo += e_exponent(params, i, s, -1);
  }
  return checked_exp(expo, "factor_E");
}

cplx factor_H(const KernelParams& params, const RootSelection& u, const RootSelection& uhat,
              double tol) {
  params.validate();
  require_matching_selection(u, uhat);
  const int m = params.m();
  cplx expo{0.0, 0.0};
  auto combo = [&](int level, cplx x) {
    cplx e = 2.0 * specfun::h_left(x, params.z[static_cast<std::size_t>(level)], tol);
    if (level + 1 < m) e -= specfun::h_left(x, params.z[static_cast<std::size_t>(level + 1)], tol);
    if (level - 1 >= 0) e -= specfun::h_left(x, params.z[static_cast<std::size_t>(level - 1)], tol);
    return e;
  };
  for (int i = 0; i < m; ++i) {
    for (const cplx& x : u[static_cast<std::size_t>(i)]) expo += combo(i, x);
    for (const cplx& x : uhat[static_cast<std::size_t>(i)]) expo += combo(i, x);
  }
  return checked_exp(expo, "factor_H");
}

namespace {

cplx chain_product(const RootSelection& u, const RootSelection& uhat) {
  const int m = static_cast<int>(u.size());
  cplx chain{1.0, 0.0};
  std::vector<cplx> x, y;
  for (int i = 0; i <= m; ++i) {
    x.clear();
    y.clear();
    if (i >= 1) {
      const auto& ui = u[static_cast<std::size_t>(i - 1)];
      const auto& vi = uhat[static_cast<std::size_t>(i - 1)];
      x.insert(x.end(), ui.begin(), ui.end());
      y.insert(y.end(), vi.begin(), vi.end());
    }
    if (i < m) {
      for (const cplx& w : uhat[static_cast<std::size_t>(i)]) x.push_back(-w);
      for (const cplx& w : u[static_cast<std::size_t>(i)]) y.push_back(-w);
    }
    chain *= cauchy_det(x, y);
    if (chain == cplx{0.0, 0.0}) return chain;
  }
  return chain;
}

}  // namespace

cplx factor_R(const RootSelection& u, const RootSelection& uhat) {
  require_matching_selection(u, uhat);
  cplx recip{1.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u[i].size(); ++j) recip /= u[i][j] * uhat[i][j];
  return recip * chain_product(u, uhat);
}

cplx factor_Rhat(const RootSelection& u, const RootSelection& uhat) {
  require_matching_selection(u, uhat);
  cplx tail{0.0, 0.0};
  if (!u.empty()) {
    const auto& um = u.back();
    const auto& vm = uhat.back();
    for (std::size_t j = 0; j < um.size(); ++j) tail += um[j] + vm[j];
  }
  return factor_R(u, uhat) * tail;
}

SeriesEvaluator::SeriesEvaluator(KernelParams params, int root_cutoff, double tol)
    : params_(std::move(params)), root_cutoff_(root_cutoff) {
  params_.validate();
  if (root_cutoff < 0) throw std::domain_error("SeriesEvaluator: root cutoff must be >= 0");
  const int m = params_.m();
  const int count = root_count();
  const double p = params_.p;
  levels_.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Level& lv = levels_[static_cast<std::size_t>(i)];
    const RootVector rv = enumerate_roots(params_.z[static_cast<std::size_t>(i)], root_cutoff_);
    lv.roots = rv.roots;
    lv.hcomb.resize(static_cast<std::size_t>(count));
    lv.epoly_plus.resize(static_cast<std::size_t>(count));
    lv.epoly_minus.resize(static_cast<std::size_t>(count));
    lv.slope.resize(static_cast<std::size_t>(count));
    lv.wplus.resize(static_cast<std::size_t>(count));
    lv.wminus.resize(static_cast<std::size_t>(count));
    lv.inv.resize(static_cast<std::size_t>(count));
    const double c3 = delta_at(params_.tau, static_cast<std::size_t>(i)) / (3.0 * p * std::sqrt(p));
    const double c2 = delta_at(params_.gamma, static_cast<std::size_t>(i)) / (2.0 * p);
    for (int j = 0; j < count; ++j) {
      const cplx u = lv.roots[static_cast<std::size_t>(j)];
      cplx hc = 2.0 * specfun::h_left(u, params_.z[static_cast<std::size_t>(i)], tol);
      if (i + 1 < m) hc -= specfun::h_left(u, params_.z[static_cast<std::size_t>(i + 1)], tol);
      if (i - 1 >= 0) hc -= specfun::h_left(u, params_.z[static_cast<std::size_t>(i - 1)], tol);
      const cplx u2 = u * u;
      lv.hcomb[static_cast<std::size_t>(j)] = hc;
      lv.epoly_plus[static_cast<std::size_t>(j)] = -c3 * u2 * u + c2 * u2;
      lv.epoly_minus[static_cast<std::size_t>(j)] = -c3 * u2 * u - c2 * u2;
      lv.slope[static_cast<std::size_t>(j)] = u / std::sqrt(p);
      lv.inv[static_cast<std::size_t>(j)] = 1.0 / u;
    }
  }
  set_beta(params_.beta);
}

void SeriesEvaluator::set_beta(std::span<const double> beta) {
  const int m = params_.m();
  if (static_cast<int>(beta.size()) != m)
    throw std::invalid_argument("set_beta: length mismatch");
  if (&params_.beta[0] != &beta[0])
    params_.beta.assign(beta.begin(), beta.end());
  const int count = root_count();
  for (int i = 0; i < m; ++i) {
    Level& lv = levels_[static_cast<std::size_t>(i)];
    const double db = delta_at(params_.beta, static_cast<std::size_t>(i));
    for (int j = 0; j < count; ++j) {
      const std::size_t q = static_cast<std::size_t>(j);
      lv.wplus[q] = lv.hcomb[q] + lv.epoly_plus[q] + db * lv.slope[q];
      lv.wminus[q] = lv.hcomb[q] + lv.epoly_minus[q] + db * lv.slope[q];
    }
  }
}

cplx SeriesEvaluator::transition_weight(std::span<const int> n, bool conditional_convention) const {
  const int m = params_.m();
  cplx w{1.0, 0.0};
  for (int i = 1; i < m; ++i) {
    const cplx zp = params_.z[static_cast<std::size_t>(i - 1)];
    const cplx zc = params_.z[static_cast<std::size_t>(i)];
    const cplx f1 = 1.0 - zp / zc;
    const cplx f2 = 1.0 - zc / zp;
    const int e1 = n[static_cast<std::size_t>(i)];
    const int e2 = n[static_cast<std::size_t>(i - 1)] - (conditional_convention ? 1 : 0);
    for (int q = 0; q < e1; ++q) w *= f1;
    for (int q = 0; q < e2; ++q) w *= f2;
    for (int q = 0; q > e2; --q) w /= f2;
  }
  return w;
}

namespace {
constexpr int kMaxLevels = 8;
constexpr int kMaxPerLevel = 8;
}  // namespace

cplx SeriesEvaluator::term(std::span<const int> n, SeriesKind kind,
                           std::span<const int> combo_ids) const {
  const int m = params_.m();
  cplx expo{0.0, 0.0};
  cplx pref{1.0, 0.0};

  // Selected root indices per level and side, resolved from combination ids.
  // sel[2*i] is the plus side of level i, sel[2*i + 1] the hatted side.
  int sel[2 * kMaxLevels][kMaxPerLevel];
  for (int i = 0; i < m; ++i) {
    const int ni = n[static_cast<std::size_t>(i)];
    const Level& lv = levels_[static_cast<std::size_t>(i)];
    for (int side = 0; side < 2; ++side) {
      if (ni == 0) continue;
      const int cid = combo_ids[static_cast<std::size_t>(2 * i + side)];
      const int* combo = combos_[static_cast<std::size_t>(ni)].data() +
                         static_cast<std::ptrdiff_t>(cid) * ni;
      for (int q = 0; q < ni; ++q) {
        const int rj = combo[q];
        sel[2 * i + side][q] = rj;
        expo += side == 0 ? lv.wplus[static_cast<std::size_t>(rj)]
                          : lv.wminus[static_cast<std::size_t>(rj)];
        pref *= lv.inv[static_cast<std::size_t>(rj)];
      }
    }
  }

  // Cauchy determinant chain over adjacent levels.
  cplx chain{1.0, 0.0};
  cplx x[2 * kMaxPerLevel], y[2 * kMaxPerLevel];
  for (int i = 0; i <= m; ++i) {
    int a = 0;
    if (i >= 1) {
      const Level& lv = levels_[static_cast<std::size_t>(i - 1)];
      const int ni = n[static_cast<std::size_t>(i - 1)];
      for (int q = 0; q < ni; ++q, ++a) {
        x[a] = lv.roots[static_cast<std::size_t>(sel[2 * (i - 1)][q])];
        y[a] = lv.roots[static_cast<std::size_t>(sel[2 * (i - 1) + 1][q])];
      }
    }
    if (i < m) {
      const Level& lv = levels_[static_cast<std::size_t>(i)];
      const int ni = n[static_cast<std::size_t>(i)];
      for (int q = 0; q < ni; ++q, ++a) {
        x[a] = -lv.roots[static_cast<std::size_t>(sel[2 * i + 1][q])];
        y[a] = -lv.roots[static_cast<std::size_t>(sel[2 * i][q])];
      }
    }
    if (a > 0)
      chain *= cauchy_det_guarded(std::span<const cplx>(x, static_cast<std::size_t>(a)),
                                  std::span<const cplx>(y, static_cast<std::size_t>(a)));
  }

  cplx extra{1.0, 0.0};
  if (kind == SeriesKind::DHat) {
    extra = {0.0, 0.0};
    const Level& lv = levels_[static_cast<std::size_t>(m - 1)];
    const int nm = n[static_cast<std::size_t>(m - 1)];
    for (int q = 0; q < nm; ++q)
      extra += lv.roots[static_cast<std::size_t>(sel[2 * (m - 1)][q])] +
               lv.roots[static_cast<std::size_t>(sel[2 * (m - 1) + 1][q])];
  }

  return checked_exp(expo, "series term") * pref * chain * extra;
}

cplx SeriesEvaluator::shell(std::span<const int> n, SeriesKind kind) const {
  const int m = params_.m();
  if (static_cast<int>(n.size()) != m)
    throw std::invalid_argument("shell: order vector length mismatch");

  if (m > kMaxLevels) throw std::domain_error("shell: too many levels");
  int max_n = 0;
  for (int v : n) {
    if (v < 0) throw std::domain_error("shell: negative order");
    max_n = std::max(max_n, v);
  }
  const int count = root_count();
  if (max_n > count || max_n > kMaxPerLevel)
    throw std::domain_error("shell: order exceeds supported range");

  // Combination tables shared across levels; grown on demand.
  auto* self = const_cast<SeriesEvaluator*>(this);
  while (static_cast<int>(self->combos_.size()) <= max_n) {
    const int s = static_cast<int>(self->combos_.size());
    self->combos_.push_back(build_combinations(count, s));
  }

  // Mixed-radix index space over per-level/per-side combination choices.
  std::vector<std::int64_t> radix(static_cast<std::size_t>(2 * m));
  std::int64_t total = 1;
  for (int i = 0; i < m; ++i) {
    const std::int64_t c = binom(count, n[static_cast<std::size_t>(i)]);
    radix[static_cast<std::size_t>(2 * i)] = c;
    radix[static_cast<std::size_t>(2 * i + 1)] = c;
    total *= c * c;
  }

  return parallel::sum<cplx>(total, [&](std::int64_t linear) {
    thread_local std::vector<int> ids;
    ids.assign(static_cast<std::size_t>(2 * m), 0);
    std::int64_t rest = linear;
    for (int q = 2 * m - 1; q >= 0; --q) {
      const std::int64_t r = radix[static_cast<std::size_t>(q)];
      ids[static_cast<std::size_t>(q)] = static_cast<int>(rest % r);
      rest /= r;
    }
    return term(n, kind, ids);
  });
}

namespace {

// Order vectors with lo <= n_i <= hi and sum <= cap, sorted by (sum, lex).
std::vector<std::vector<int>> enumerate_orders(int m, int lo, int hi, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(m), lo);
  for (;;) {
    int total = 0;
    for (int v : cur) total += v;
    if (total <= cap) out.push_back(cur);
    int i = m - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == hi) {
      cur[static_cast<std::size_t>(i)] = lo;
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int sa = 0, sb = 0;
    for (int v : a) sa += v;
    for (int v : b) sb += v;
    return sa < sb;
  });
  return out;
}

}  // namespace

cplx order_term(const KernelParams& params, const std::vector<int>& n, int root_cutoff,
                SeriesKind kind, double tol) {
  SeriesEvaluator ev(params, root_cutoff, tol);
  double fact_sq = 1.0;
  for (int v : n)
    for (int q = 2; q <= v; ++q) fact_sq *= static_cast<double>(q) * static_cast<double>(q);
  return ev.shell(n, kind) * ev.transition_weight(n, false) * fact_sq;
}

SeriesResult series_D(const KernelParams& params, const TruncationSpec& trunc, SeriesKind kind,
                      bool include_zero_orders, double tol) {
  SeriesEvaluator ev(params, trunc.root_cutoff, tol);
  const int m = params.m();
  const int lo = include_zero_orders ? 0 : 1;
  const int cap = trunc.max_total_order >= 0 ? trunc.max_total_order : m * trunc.max_order;
  const auto orders = enumerate_orders(m, lo, trunc.max_order, cap);

  SeriesResult res;
  int frontier = -1;
  double frontier_mag = 0.0;
  for (const auto& n : orders) {
    const cplx contrib = ev.shell(n, kind) * ev.transition_weight(n, false);
    res.value += contrib;
    ++res.shells;
    std::int64_t t = 1;
    for (int v : n) {
      const std::int64_t c = binom(ev.root_count(), v);
      t *= c * c;
    }
    res.terms += t;
    int total = 0;
    for (int v : n) total += v;
    if (total > frontier) {
      frontier = total;
      frontier_mag = 0.0;
    }
    if (total == frontier) frontier_mag += std::abs(contrib);
  }
  res.last_shell_mag = frontier_mag;
  return res;
}

namespace {

// Two-branch cubic-exponent weight of the alternate form.
cplx f_exponent(const KernelParams& params, std::size_t i, cplx w) {
  return w.real() < 0.0 ? e_exponent(params, i, w, +1) : e_exponent(params, i, -w, -1);
}

}  // namespace

SeriesResult series_D_alt(const KernelParams& params, const TruncationSpec& trunc, double tol) {
  params.validate();
  const int m = params.m();
  const int K = trunc.root_cutoff;
  const int count = 2 * K + 1;

  // Left roots and their negations (the right root set).
  std::vector<std::vector<cplx>> lroots(static_cast<std::size_t>(m));
  std::vector<std::vector<cplx>> rroots(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    lroots[static_cast<std::size_t>(i)] =
        enumerate_roots(params.z[static_cast<std::size_t>(i)], K).roots;
    auto& rr = rroots[static_cast<std::size_t>(i)];
    rr.resize(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j)
      rr[static_cast<std::size_t>(j)] = -lroots[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  // log fhat_i(w) = log(1/w) semantics folded as product later; store
  // exponent part and 1/w separately to avoid branch cuts of log.
  auto fhat = [&](std::size_t i, cplx w) {
    return checked_exp(f_exponent(params, i, w) +
                           2.0 * specfun::h_any(w, params.z[i], tol),
                       "series_D_alt") /
           w;
  };
  std::vector<std::vector<cplx>> fhat_l(static_cast<std::size_t>(m)),
      fhat_r(static_cast<std::size_t>(m));
  // Cross-level boundary factors e^{-h(w, z_neighbor)} need h at both
  // neighbor arguments; cache h(w, z_j) for |i - j| <= 1.
  std::vector<std::vector<cplx>> h_l_prev(static_cast<std::size_t>(m)),
      h_l_next(static_cast<std::size_t>(m)), h_r_prev(static_cast<std::size_t>(m)),
      h_r_next(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& fl = fhat_l[static_cast<std::size_t>(i)];
    auto& fr = fhat_r[static_cast<std::size_t>(i)];
    fl.resize(static_cast<std::size_t>(count));
    fr.resize(static_cast<std::size_t>(count));
    h_l_prev[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(count), {0, 0});
    h_l_next[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(count), {0, 0});
    h_r_prev[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(count), {0, 0});
    h_r_next[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(count), {0, 0});
    for (int j = 0; j < count; ++j) {
      const cplx ul = lroots[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const cplx vr = rroots[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      fl[static_cast<std::size_t>(j)] = fhat(static_cast<std::size_t>(i), ul);
      fr[static_cast<std::size_t>(j)] = fhat(static_cast<std::size_t>(i), vr);
      if (i - 1 >= 0) {
        h_l_prev[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            specfun::h_any(ul, params.z[static_cast<std::size_t>(i - 1)], tol);
        h_r_prev[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            specfun::h_any(vr, params.z[static_cast<std::size_t>(i - 1)], tol);
      }
      if (i + 1 < m) {
        h_l_next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            specfun::h_any(ul, params.z[static_cast<std::size_t>(i + 1)], tol);
        h_r_next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            specfun::h_any(vr, params.z[static_cast<std::size_t>(i + 1)], tol);
      }
    }
  }

  const int cap = trunc.max_total_order >= 0 ? trunc.max_total_order : m * trunc.max_order;
  const auto orders = enumerate_orders(m, 0, trunc.max_order, cap);

  // Combination tables.
  std::vector<std::vector<int>> combos;
  for (int s = 0; s <= trunc.max_order; ++s) combos.push_back(build_combinations(count, s));

  SeriesResult res;
  int frontier = -1;
  double frontier_mag = 0.0;
  for (const auto& n : orders) {
    // Transition weights of the CDF convention.
    cplx tw{1.0, 0.0};
    for (int i = 1; i < m; ++i) {
      const cplx zp = params.z[static_cast<std::size_t>(i - 1)];
      const cplx zc = params.z[static_cast<std::size_t>(i)];
      for (int q = 0; q < n[static_cast<std::size_t>(i)]; ++q) tw *= 1.0 - zp / zc;
      for (int q = 0; q < n[static_cast<std::size_t>(i - 1)]; ++q) tw *= 1.0 - zc / zp;
    }

    std::vector<std::int64_t> radix(static_cast<std::size_t>(2 * m));
    std::int64_t total = 1;
    for (int i = 0; i < m; ++i) {
      const std::int64_t c = binom(count, n[static_cast<std::size_t>(i)]);
      radix[static_cast<std::size_t>(2 * i)] = c;
      radix[static_cast<std::size_t>(2 * i + 1)] = c;
      total *= c * c;
    }

    const cplx inner = parallel::sum<cplx>(total, [&](std::int64_t linear) {
      std::vector<int> ids(static_cast<std::size_t>(2 * m));
      std::int64_t rest = linear;
      for (int q = 2 * m - 1; q >= 0; --q) {
        const std::int64_t r = radix[static_cast<std::size_t>(q)];
        ids[static_cast<std::size_t>(q)] = static_cast<int>(rest % r);
        rest /= r;
      }
      // Resolve selections: U from the left set, V from the right set.
      std::vector<std::vector<cplx>> U(static_cast<std::size_t>(m)),
          V(static_cast<std::size_t>(m));
      std::vector<std::vector<int>> Uid(static_cast<std::size_t>(m)),
          Vid(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        const int ni = n[static_cast<std::size_t>(i)];
        const int* cu = ni ? combos[static_cast<std::size_t>(ni)].data() +
                                 static_cast<std::ptrdiff_t>(ids[static_cast<std::size_t>(2 * i)]) * ni
                           : nullptr;
        const int* cv = ni ? combos[static_cast<std::size_t>(ni)].data() +
                                 static_cast<std::ptrdiff_t>(ids[static_cast<std::size_t>(2 * i + 1)]) * ni
                           : nullptr;
        for (int q = 0; q < ni; ++q) {
          U[static_cast<std::size_t>(i)].push_back(
              lroots[static_cast<std::size_t>(i)][static_cast<std::size_t>(cu[q])]);
          V[static_cast<std::size_t>(i)].push_back(
              rroots[static_cast<std::size_t>(i)][static_cast<std::size_t>(cv[q])]);
          Uid[static_cast<std::size_t>(i)].push_back(cu[q]);
          Vid[static_cast<std::size_t>(i)].push_back(cv[q]);
        }
      }

      cplx val{1.0, 0.0};
      for (int i = 0; i < m; ++i) {
        const auto& Ui = U[static_cast<std::size_t>(i)];
        const auto& Vi = V[static_cast<std::size_t>(i)];
        const cplx du = delta_product(Ui);
        const cplx dv = delta_product(Vi);
        const cplx duv = delta_product(Ui, Vi);
        val *= du * du * dv * dv / (duv * duv);
        for (int q = 0; q < n[static_cast<std::size_t>(i)]; ++q) {
          val *= fhat_l[static_cast<std::size_t>(i)]
                       [static_cast<std::size_t>(Uid[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)])];
          val *= fhat_r[static_cast<std::size_t>(i)]
                       [static_cast<std::size_t>(Vid[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)])];
        }
      }
      for (int i = 1; i < m; ++i) {
        const auto& Ui = U[static_cast<std::size_t>(i)];
        const auto& Vi = V[static_cast<std::size_t>(i)];
        const auto& Up = U[static_cast<std::size_t>(i - 1)];
        const auto& Vp = V[static_cast<std::size_t>(i - 1)];
        val *= delta_product(Ui, Vp) * delta_product(Vi, Up) /
               (delta_product(Ui, Up) * delta_product(Vi, Vp));
        cplx hexpo{0.0, 0.0};
        for (std::size_t q = 0; q < Vi.size(); ++q) {
          hexpo -= h_r_prev[static_cast<std::size_t>(i)][static_cast<std::size_t>(
              Vid[static_cast<std::size_t>(i)][q])];
          hexpo -= h_l_prev[static_cast<std::size_t>(i)][static_cast<std::size_t>(
              Uid[static_cast<std::size_t>(i)][q])];
        }
        for (std::size_t q = 0; q < Vp.size(); ++q) {
          hexpo -= h_r_next[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(
              Vid[static_cast<std::size_t>(i - 1)][q])];
          hexpo -= h_l_next[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(
              Uid[static_cast<std::size_t>(i - 1)][q])];
        }
        val *= checked_exp(hexpo, "series_D_alt cross term");
      }
      return val;
    });

    const cplx contrib = tw * inner;
    res.value += contrib;
    ++res.shells;
    res.terms += total;
    int tot = 0;
    for (int v : n) tot += v;
    if (tot > frontier) {
      frontier = tot;
      frontier_mag = 0.0;
    }
    if (tot == frontier) frontier_mag += std::abs(contrib);
  }
  res.last_shell_mag = frontier_mag;
  return res;
}

cplx prefactor_C(const KernelParams& params, CVariant variant, double tol) {
  params.validate();
  const int m = params.m();
  const double sp = std::sqrt(params.p);
  const double sp3 = params.p * sp;

  cplx expo{0.0, 0.0};
  for (int i = 0; i < m; ++i) {
    const cplx zi = params.z[static_cast<std::size_t>(i)];
    const cplx zn = i + 1 < m ? params.z[static_cast<std::size_t>(i + 1)] : cplx{0.0, 0.0};
    const double bi = params.beta[static_cast<std::size_t>(i)];
    const double ti = params.tau[static_cast<std::size_t>(i)];
    expo += (bi / sp) * (specfun::a1(zi, tol) - specfun::a1(zn, tol));
    expo += (ti / sp3) * (specfun::a2(zi, tol) - specfun::a2(zn, tol));
    expo += 2.0 * specfun::bfun(zi, zi, tol) - 2.0 * specfun::bfun(zn, zi, tol);
  }
  cplx value = checked_exp(expo, "prefactor_C");

  if (variant == CVariant::C) {
    for (int i = 0; i + 1 < m; ++i) {
      const cplx zi = params.z[static_cast<std::size_t>(i)];
      const cplx zn = params.z[static_cast<std::size_t>(i + 1)];
      const cplx d = zi - zn;
      if (std::abs(d) < 1e-290) throw std::domain_error("prefactor_C: coincident contour points");
      value *= zi / d;
    }
  }
  return value;
}

}  // namespace pkpz::fredholm
