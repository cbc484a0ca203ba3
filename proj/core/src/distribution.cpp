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

#include "pkpz/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pkpz/parallel.hpp"

namespace pkpz::dist {

namespace {

constexpr double kPi = std::numbers::pi;

using fredholm::KernelParams;
using fredholm::SeriesEvaluator;
using fredholm::SeriesKind;

void require_even_nodes(int nodes) {
  if (nodes < 16 || nodes % 2 != 0)
    throw std::domain_error("contour nodes per circle must be even and >= 16");
}

// Order vectors n in {lo..N}^m with |n| <= cap, increasing |n|.
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

int order_total(const std::vector<int>& n) {
  int t = 0;
  for (int v : n) t += v;
  return t;
}

// Accumulators for the deterministic grid reduction.
struct Accum1 {
  cplx val{0.0, 0.0};
  cplx frontier{0.0, 0.0};  // signed frontier-ring contribution
  long terms = 0;
  Accum1& operator+=(const Accum1& o) {
    val += o.val;
    frontier += o.frontier;
    terms += o.terms;
    return *this;
  }
};

struct Accum4 {
  cplx v[4]{};
  cplx frontier{0.0, 0.0};
  Accum4& operator+=(const Accum4& o) {
    for (int i = 0; i < 4; ++i) v[i] += o.v[i];
    frontier += o.frontier;
    return *this;
  }
};

struct GridSpec {
  std::vector<double> radii;  // per z index, in formula order
  int nodes = 64;
};

// Mean over the theta grid of a per-node functional. A fresh kernel
// evaluator is built per node tuple; workers run the inner series
// sequentially, so the reduction stays deterministic.
template <typename Accum, typename NodeFn>
Accum grid_mean(const EvaluationPoint& pt, const GridSpec& grid, int root_cutoff, double tol,
                NodeFn&& node_fn) {
  const int m = pt.m();
  long tuples = 1;
  for (int i = 0; i < m; ++i) tuples *= grid.nodes;

  Accum total = parallel::sum<Accum>(tuples, [&](std::int64_t idx) {
    KernelParams params;
    params.gamma = pt.gamma;
    params.tau = pt.tau;
    params.beta = pt.beta;
    params.p = pt.p;
    params.z.resize(static_cast<std::size_t>(m));
    long rest = idx;
    for (int i = 0; i < m; ++i) {
      const int j = static_cast<int>(rest % grid.nodes);
      rest /= grid.nodes;
      const double theta = 2.0 * kPi * (j + 0.5) / grid.nodes - kPi;
      params.z[static_cast<std::size_t>(i)] =
          std::polar(grid.radii[static_cast<std::size_t>(i)], theta);
    }
    SeriesEvaluator ev(params, root_cutoff, tol);
    return node_fn(ev);
  });

  const double inv = 1.0 / static_cast<double>(tuples);
  if constexpr (std::is_same_v<Accum, Accum1>) {
    total.val *= inv;
    total.frontier *= inv;
  } else {
    for (int i = 0; i < 4; ++i) total.v[i] *= inv;
    total.frontier *= inv;
  }
  return total;
}

std::vector<double> variant_radii(const ContourSpec& contour, CdfVariant variant) {
  std::vector<double> r = contour.radii;
  if (variant == CdfVariant::AllBelow) std::reverse(r.begin(), r.end());
  return r;
}

double sign_for(int m, CdfVariant variant) {
  if (variant == CdfVariant::AllBelow) return 1.0;
  return m % 2 == 1 ? 1.0 : -1.0;
}

void quality_range_check(double value, double slack, const char* who) {
  if (value < -slack || value > 1.0 + slack)
    throw NumericalQualityError(std::string(who) + ": value outside [0,1] beyond error proxy");
}

// Series sum with order bookkeeping at one node.
Accum1 cdf_node_sum(SeriesEvaluator& ev, const std::vector<std::vector<int>>& orders,
                    SeriesKind kind, bool multiply_a1_prefactor, double tol) {
  const KernelParams& params = ev.params();
  const int m = params.m();
  Accum1 acc;
  int frontier = -1;
  cplx frontier_sum{0.0, 0.0};
  for (const auto& n : orders) {
    const cplx tw = ev.transition_weight(n, false);
    const cplx contrib = tw * ev.shell(n, kind);
    acc.val += contrib;
    std::int64_t cnt = 1;
    for (int v : n) {
      std::int64_t c = 1;
      for (int q = 0; q < v; ++q) c = c * (ev.root_count() - q) / (q + 1);
      cnt *= c * c;
    }
    acc.terms += cnt;
    const int tot = order_total(n);
    if (tot > frontier) {
      frontier = tot;
      frontier_sum = {0.0, 0.0};
    }
    if (tot == frontier) frontier_sum += contrib;
  }

  cplx pref = fredholm::prefactor_C(params, fredholm::CVariant::C, tol);
  if (multiply_a1_prefactor)
    pref *= specfun::a1(params.z[static_cast<std::size_t>(m - 1)], tol);
  acc.val *= pref;
  acc.frontier = frontier_sum * pref;
  return acc;
}

struct PassResult {
  cplx value{0.0, 0.0};
  cplx frontier{0.0, 0.0};
  long terms = 0;
};

PassResult cdf_pass(const EvaluationPoint& pt, const std::vector<double>& radii, int nodes,
                    const TruncationSpec& trunc, bool derivative, double tol) {
  const int m = pt.m();
  const int cap = trunc.max_total_order >= 0 ? trunc.max_total_order : m * trunc.max_order;
  const auto orders = enumerate_orders(m, derivative ? 1 : 0, trunc.max_order, cap);

  GridSpec grid{radii, nodes};
  const Accum1 res = grid_mean<Accum1>(pt, grid, trunc.root_cutoff, tol, [&](SeriesEvaluator& ev) {
    if (!derivative) return cdf_node_sum(ev, orders, SeriesKind::D, false, tol);
    Accum1 a = cdf_node_sum(ev, orders, SeriesKind::D, true, tol);
    const Accum1 b = cdf_node_sum(ev, orders, SeriesKind::DHat, false, tol);
    a += b;
    return a;
  });
  return {res.val, res.frontier, res.terms};
}

}  // namespace

void EvaluationPoint::validate() const {
  const std::size_t m = tau.size();
  if (m == 0 || gamma.size() != m || beta.size() != m)
    throw std::invalid_argument("EvaluationPoint: vector length mismatch");
  if (!(p > 0.0)) throw std::domain_error("EvaluationPoint: period must be positive");
  double prev = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(gamma[i]) || !std::isfinite(beta[i]) || !std::isfinite(tau[i]))
      throw std::domain_error("EvaluationPoint: parameters must be finite");
    if (!(tau[i] > prev))
      throw std::domain_error("EvaluationPoint: times must be strictly increasing and positive");
    prev = tau[i];
  }
}

ContourSpec ContourSpec::geometric(int m, int nodes) {
  if (m < 1 || m > 4)
    throw std::domain_error("ContourSpec::geometric: supports 1 <= m <= 4");
  ContourSpec spec;
  spec.nodes_per_circle = nodes;
  for (int i = 1; i <= m; ++i) spec.radii.push_back(0.05 * std::pow(2.0, i));
  return spec;
}

ContourSpec ContourSpec::scaled(double ell, double p, int m, double rho1, double delta,
                                int nodes) {
  if (!(ell > 0.0) || !(p > 0.0))
    throw std::domain_error("ContourSpec::scaled: need positive ell and p");
  ContourSpec spec;
  spec.nodes_per_circle = nodes;
  const double r = p * std::pow(ell, 0.25);
  for (int i = 0; i < m; ++i) {
    const double rho = rho1 - delta * i;
    if (!(rho > 0.0)) throw std::domain_error("ContourSpec::scaled: rho must stay positive");
    spec.radii.push_back(std::exp(-0.5 * ell * p - r * rho));
  }
  return spec;
}

ContourSpec ContourSpec::raw(std::vector<double> radii, int nodes) {
  ContourSpec spec;
  spec.radii = std::move(radii);
  spec.nodes_per_circle = nodes;
  return spec;
}

void ContourSpec::validate(int m) const {
  require_even_nodes(nodes_per_circle);
  if (static_cast<int>(radii.size()) != m)
    throw std::invalid_argument("ContourSpec: radius count mismatch");
  double prev = 0.0;
  for (double r : radii) {
    if (!(r > prev) || !(r < 1.0))
      throw std::domain_error("ContourSpec: radii must increase strictly within (0,1)");
    prev = r;
  }
}

EvalResult joint_cdf(const EvaluationPoint& pt, const ContourSpec& contour,
                     const TruncationSpec& trunc, CdfVariant variant) {
  pt.validate();
  const int m = pt.m();
  contour.validate(m);
  const double tol = specfun::kDefaultTol;
  const std::vector<double> radii = variant_radii(contour, variant);
  const double sign = sign_for(m, variant);

  const PassResult fine = cdf_pass(pt, radii, contour.nodes_per_circle, trunc, false, tol);
  const PassResult coarse = cdf_pass(pt, radii, contour.nodes_per_circle / 2, trunc, false, tol);

  EvalResult res;
  res.value = sign * fine.value.real();
  res.imag_residual = std::abs(fine.value.imag());
  res.quad_proxy = std::abs(fine.value - coarse.value);
  res.trunc_proxy = std::abs(fine.frontier);
  long tuples = 1;
  for (int i = 0; i < m; ++i) tuples *= contour.nodes_per_circle;
  res.nodes = tuples;
  res.terms = fine.terms;
  quality_range_check(res.value, res.quad_proxy + res.trunc_proxy + 1e-9, "joint_cdf");
  return res;
}

EvalResult cdf_derivative(const EvaluationPoint& pt, const ContourSpec& contour,
                          const TruncationSpec& trunc) {
  pt.validate();
  const int m = pt.m();
  contour.validate(m);
  const double tol = specfun::kDefaultTol;
  const std::vector<double> radii = variant_radii(contour, CdfVariant::UpperTail);
  const double scale = sign_for(m, CdfVariant::UpperTail) / std::sqrt(pt.p);

  const PassResult fine = cdf_pass(pt, radii, contour.nodes_per_circle, trunc, true, tol);
  const PassResult coarse = cdf_pass(pt, radii, contour.nodes_per_circle / 2, trunc, true, tol);

  EvalResult res;
  res.value = scale * fine.value.real();
  res.imag_residual = std::abs(scale) * std::abs(fine.value.imag());
  res.quad_proxy = std::abs(scale) * std::abs(fine.value - coarse.value);
  res.trunc_proxy = std::abs(scale) * std::abs(fine.frontier);
  long tuples = 1;
  for (int i = 0; i < m; ++i) tuples *= contour.nodes_per_circle;
  res.nodes = tuples;
  res.terms = fine.terms;
  return res;
}

std::vector<EvalResult> cdf_curve(const EvaluationPoint& base, std::span<const double> betas,
                                  const ContourSpec& contour, const TruncationSpec& trunc,
                                  CdfVariant variant, bool derivative) {
  EvaluationPoint pt = base;
  pt.validate();
  if (pt.m() != 1) throw std::invalid_argument("cdf_curve: requires m == 1");
  contour.validate(1);
  const double tol = specfun::kDefaultTol;
  const double radius = contour.radii[0];
  const double inv_sqrt_p = 1.0 / std::sqrt(pt.p);

  const int cap = trunc.max_total_order >= 0 ? trunc.max_total_order : trunc.max_order;
  const auto orders = enumerate_orders(1, derivative ? 1 : 0, trunc.max_order, cap);

  struct CurveAccum {
    std::vector<cplx> vals;
    std::vector<cplx> frontier;
    CurveAccum& operator+=(const CurveAccum& o) {
      if (vals.empty()) {
        vals = o.vals;
        frontier = o.frontier;
        return *this;
      }
      if (!o.vals.empty()) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
          vals[i] += o.vals[i];
          frontier[i] += o.frontier[i];
        }
      }
      return *this;
    }
  };

  auto run_pass = [&](int nodes) {
    CurveAccum total = parallel::sum<CurveAccum>(nodes, [&](std::int64_t j) {
      const double theta = 2.0 * kPi * (static_cast<double>(j) + 0.5) / nodes - kPi;
      KernelParams params;
      params.gamma = pt.gamma;
      params.tau = pt.tau;
      params.beta = {0.0};
      params.p = pt.p;
      params.z = {std::polar(radius, theta)};
      SeriesEvaluator ev(params, trunc.root_cutoff, tol);
      const cplx a1v = specfun::a1(params.z[0], tol);
      const cplx a2v = specfun::a2(params.z[0], tol);
      const cplx bv = specfun::bfun(params.z[0], params.z[0], tol);

      CurveAccum acc;
      acc.vals.resize(betas.size());
      acc.frontier.assign(betas.size(), cplx{0.0, 0.0});
      std::vector<double> bvec(1);
      for (std::size_t q = 0; q < betas.size(); ++q) {
        bvec[0] = betas[q];
        ev.set_beta(bvec);
        const cplx cpref =
            std::exp(betas[q] * inv_sqrt_p * a1v +
                     pt.tau[0] / (pt.p * std::sqrt(pt.p)) * a2v + 2.0 * bv);
        cplx dsum{0.0, 0.0}, dhat{0.0, 0.0};
        cplx frontier_sum{0.0, 0.0};
        int frontier = -1;
        for (const auto& n : orders) {
          const cplx sh = ev.shell(n, SeriesKind::D);
          dsum += sh;
          if (derivative) dhat += ev.shell(n, SeriesKind::DHat);
          if (n[0] > frontier) {
            frontier = n[0];
            frontier_sum = {0.0, 0.0};
          }
          if (n[0] == frontier) frontier_sum += sh;
        }
        acc.vals[q] = derivative ? cpref * (a1v * dsum + dhat) : cpref * dsum;
        acc.frontier[q] = frontier_sum * cpref;
      }
      return acc;
    });
    for (std::size_t q = 0; q < total.vals.size(); ++q) {
      total.vals[q] /= static_cast<double>(nodes);
      total.frontier[q] /= static_cast<double>(nodes);
    }
    return total;
  };

  const CurveAccum fine = run_pass(contour.nodes_per_circle);
  const CurveAccum coarse = run_pass(contour.nodes_per_circle / 2);

  std::vector<EvalResult> out(betas.size());
  const double scale = derivative ? inv_sqrt_p : 1.0;
  for (std::size_t q = 0; q < betas.size(); ++q) {
    EvalResult r;
    r.value = scale * fine.vals[q].real();
    r.imag_residual = scale * std::abs(fine.vals[q].imag());
    r.quad_proxy = scale * std::abs(fine.vals[q] - coarse.vals[q]);
    r.trunc_proxy = scale * std::abs(fine.frontier[q]);
    r.nodes = contour.nodes_per_circle;
    if (!derivative)
      quality_range_check(r.value, r.quad_proxy + r.trunc_proxy + 1e-9, "cdf_curve");
    out[q] = r;
  }
  (void)variant;  // m == 1: both orientations coincide
  return out;
}

double vanishing_residual(const EvaluationPoint& pt, const ContourSpec& contour,
                          const TruncationSpec& trunc, const std::vector<int>& order) {
  pt.validate();
  const int m = pt.m();
  contour.validate(m);
  if (static_cast<int>(order.size()) != m)
    throw std::invalid_argument("vanishing_residual: order length mismatch");
  bool has_zero = false;
  for (int v : order) {
    if (v < 0) throw std::domain_error("vanishing_residual: negative order");
    has_zero = has_zero || v == 0;
  }
  if (!has_zero)
    throw std::domain_error("vanishing_residual: some order component must be zero");

  const double tol = specfun::kDefaultTol;
  const std::vector<double> radii = variant_radii(contour, CdfVariant::UpperTail);
  GridSpec grid{radii, contour.nodes_per_circle};

  const Accum4 res =
      grid_mean<Accum4>(pt, grid, trunc.root_cutoff, tol, [&](SeriesEvaluator& ev) {
        const KernelParams& params = ev.params();
        const cplx tw = ev.transition_weight(order, false);
        const cplx c = fredholm::prefactor_C(params, fredholm::CVariant::C, tol);
        const cplx a1v = specfun::a1(params.z[static_cast<std::size_t>(m - 1)], tol);
        Accum4 acc;
        acc.v[0] = a1v * c * tw * ev.shell(order, SeriesKind::D);
        acc.v[1] = c * tw * ev.shell(order, SeriesKind::DHat);
        return acc;
      });
  return std::max(std::abs(res.v[0]), std::abs(res.v[1]));
}

void ConditionalQuery::validate() const {
  if (x.size() != t.size() || h.size() != t.size())
    throw std::invalid_argument("ConditionalQuery: vector length mismatch");
  if (!(ell > 0.0) || !(p > 0.0))
    throw std::domain_error("ConditionalQuery: need positive level and period");
  double prev = 0.0;
  for (double ti : t) {
    if (!(ti > prev) || !(ti < 1.0))
      throw std::domain_error("ConditionalQuery: times must increase strictly in (0,1)");
    prev = ti;
  }
  if (std::pow(ell, 1.5) * 4.0 / 3.0 > 600.0)
    throw std::range_error("ConditionalQuery: level too large for double-precision scaling");
}

namespace {

EvaluationPoint conditional_point(const ConditionalQuery& q) {
  const int m = q.m();
  EvaluationPoint pt;
  pt.p = q.p;
  const double l14 = std::pow(q.ell, 0.25);
  pt.gamma.resize(static_cast<std::size_t>(m));
  pt.tau.resize(static_cast<std::size_t>(m));
  pt.beta.resize(static_cast<std::size_t>(m));
  for (int i = 0; i + 1 < m; ++i) {
    pt.gamma[static_cast<std::size_t>(i)] = q.x[static_cast<std::size_t>(i)] / l14;
    pt.tau[static_cast<std::size_t>(i)] = q.t[static_cast<std::size_t>(i)];
    pt.beta[static_cast<std::size_t>(i)] =
        q.t[static_cast<std::size_t>(i)] * q.ell + q.h[static_cast<std::size_t>(i)] * l14;
  }
  pt.gamma[static_cast<std::size_t>(m - 1)] = 0.0;
  pt.tau[static_cast<std::size_t>(m - 1)] = 1.0;
  pt.beta[static_cast<std::size_t>(m - 1)] = q.ell;
  return pt;
}

// The four contour terms at given nodes: leading/higher x plain/hatted.
Accum4 term_pass(const EvaluationPoint& pt, const ConditionalQuery& q, int nodes,
                 const TruncationSpec& trunc, double tol) {
  const int m = pt.m();
  // nodes may be the internal half grid of a proxy pass; only radii are
  // validated here.
  const ContourSpec contour = ContourSpec::scaled(q.ell, q.p, m, 1.0, 0.25, nodes);
  const int cap = trunc.max_total_order >= 0 ? trunc.max_total_order : m * trunc.max_order;
  const auto orders = enumerate_orders(m, 1, trunc.max_order, cap);

  GridSpec grid{contour.radii, nodes};
  Accum4 res = grid_mean<Accum4>(pt, grid, trunc.root_cutoff, tol, [&](SeriesEvaluator& ev) {
    const KernelParams& params = ev.params();
    const cplx cb = fredholm::prefactor_C(params, fredholm::CVariant::CBullet, tol);
    const cplx a1v = specfun::a1(params.z[static_cast<std::size_t>(m - 1)], tol);
    Accum4 acc;
    int frontier = -1;
    cplx frontier_sum{0.0, 0.0};
    for (const auto& n : orders) {
      const cplx tw = ev.transition_weight(n, true);
      const cplx plain = tw * ev.shell(n, SeriesKind::D);
      const cplx hat = tw * ev.shell(n, SeriesKind::DHat);
      const bool is_ones = order_total(n) == m;
      acc.v[is_ones ? 0 : 1] += a1v * cb * plain;
      acc.v[is_ones ? 2 : 3] += cb * hat;
      const int tot = order_total(n);
      if (tot > frontier) {
        frontier = tot;
        frontier_sum = {0.0, 0.0};
      }
      if (tot == frontier) frontier_sum += cb * (a1v * plain + hat);
    }
    acc.frontier = frontier_sum;
    return acc;
  });

  const double sign = m % 2 == 1 ? 1.0 : -1.0;
  for (int i = 0; i < 4; ++i) res.v[i] *= sign;
  return res;
}

TermBreakdown breakdown_from(const Accum4& fine, const Accum4& coarse) {
  TermBreakdown b;
  b.leading = fine.v[0].real();
  b.higher = fine.v[1].real();
  b.hat_leading = fine.v[2].real();
  b.hat_higher = fine.v[3].real();
  double imag = 0.0, proxy = 0.0;
  for (int i = 0; i < 4; ++i) {
    imag = std::max(imag, std::abs(fine.v[i].imag()));
    proxy = std::max(proxy, std::abs(fine.v[i] - coarse.v[i]));
  }
  b.imag_residual = imag;
  b.quad_proxy = proxy;
  b.trunc_proxy = std::abs(fine.frontier);
  return b;
}

TermBreakdown evaluate_terms(const ConditionalQuery& q, int nodes, const TruncationSpec& trunc) {
  const double tol = specfun::kDefaultTol;
  const EvaluationPoint pt = conditional_point(q);
  const Accum4 fine = term_pass(pt, q, nodes, trunc, tol);
  const Accum4 coarse = term_pass(pt, q, nodes / 2, trunc, tol);
  return breakdown_from(fine, coarse);
}

}  // namespace

ConditionalResult conditional_probability(const ConditionalQuery& q, int nodes,
                                          const TruncationSpec& trunc) {
  q.validate();
  require_even_nodes(nodes);

  ConditionalResult out;
  out.numerator = evaluate_terms(q, nodes, trunc);

  ConditionalQuery point;
  point.ell = q.ell;
  point.p = q.p;
  out.denominator = evaluate_terms(point, nodes, trunc);

  const double den = out.denominator.sum();
  const double den_err = out.denominator.quad_proxy + out.denominator.trunc_proxy;
  if (std::abs(den) < 100.0 * den_err)
    throw NumericalQualityError("conditional_probability: ill-conditioned denominator");

  out.ratio = out.numerator.sum() / den;
  const double num_err = out.numerator.quad_proxy + out.numerator.trunc_proxy;
  out.quad_proxy =
      std::abs(out.ratio) * (num_err / std::max(std::abs(out.numerator.sum()), 1e-300) +
                             den_err / std::abs(den));
  quality_range_check(out.ratio, out.quad_proxy + 1e-9, "conditional_probability");
  return out;
}

ScaledTermResult scaled_leading_term(const ConditionalQuery& q, int case_id, int nodes,
                                     const TruncationSpec& trunc) {
  q.validate();
  require_even_nodes(nodes);
  if (case_id < 1 || case_id > 3)
    throw std::domain_error("scaled_leading_term: case must be 1, 2, or 3");

  const double tol = specfun::kDefaultTol;
  const EvaluationPoint pt = conditional_point(q);
  const Accum4 fine = term_pass(pt, q, nodes, trunc, tol);
  const Accum4 coarse = term_pass(pt, q, nodes / 2, trunc, tol);

  const double growth = std::exp(4.0 / 3.0 * std::pow(q.ell, 1.5));
  const double factor = case_id == 3
                            ? 2.0 * std::numbers::sqrt2 * std::pow(q.ell, 1.25) * std::sqrt(q.p)
                            : 4.0 * q.ell / std::sqrt(q.p);

  ScaledTermResult res;
  res.value = factor * growth * fine.v[2].real();
  res.imag_residual = factor * growth * std::abs(fine.v[2].imag());
  res.quad_proxy = factor * growth * std::abs(fine.v[2] - coarse.v[2]);
  return res;
}

}  // namespace pkpz::dist
