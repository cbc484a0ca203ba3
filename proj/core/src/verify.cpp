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

#include "pkpz/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "pkpz/distribution.hpp"
#include "pkpz/limits.hpp"
#include "pkpz/montecarlo.hpp"
#include "pkpz/records.hpp"
#include "pkpz/tasep.hpp"

namespace pkpz::verify {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)) {}

  template <typename Fn>
  void check(const std::string& check_name, double required, Fn&& measure) {
    CheckResult r;
    r.suite = name_;
    r.name = check_name;
    r.required = required;
    const auto start = Clock::now();
    r.measured = measure();
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    r.pass = r.measured <= required;
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::string name_;
  std::vector<CheckResult> results_;
};

// ---------------------------------------------------------------- identities

// Conditioned-orthant times wrapped-density oracle for the two-level circle
// combination (independent of the root-sum path).
double circle_combination_oracle(double a1, double a2, double b1, double b2, double c1,
                                 double c2, double r) {
  using specfun::CirclePoint;
  const double mu_frac = a1 / a2;
  const double sigma = std::sqrt(a1 * (a2 - a1) / a2);
  const int n = 4000;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = r * (j + 0.5) / n;
    const double dens = specfun::wrapped_gaussian(CirclePoint(y, r), a1, 1e-13) *
                        specfun::wrapped_gaussian(CirclePoint(b2 - y, r), a2 - a1, 1e-13);
    const double threshold =
        c1 + specfun::dist_circle(CirclePoint(y, r), CirclePoint(b1, r));
    const double tail =
        0.5 * std::erfc((threshold - mu_frac * c2) / (sigma * std::numbers::sqrt2));
    acc += dens * tail;
  }
  return specfun::gauss_density(c2, a2) * acc * r / n;
}

std::vector<CheckResult> run_identity_suite() {
  Suite s("identities");

  s.check("line-kernel equals bridge probability, two points", 1e-6, [] {
    const std::vector<double> a{0.5, 1.0}, b{0.3, -0.2};
    return std::abs(limits::s_inf_quadrature(a, b).value - limits::s_inf_probabilistic(a, b));
  });
  s.check("line-kernel equals bridge probability, three points", 1e-6, [] {
    const std::vector<double> a{0.35, 0.8, 1.3}, b{-0.4, 0.25, 0.6};
    return std::abs(limits::s_inf_quadrature(a, b).value - limits::s_inf_probabilistic(a, b));
  });
  s.check("circle combination equals wrapped product, one point", 1e-8, [] {
    const std::vector<double> a{1.0}, b{0.3}, c{0.2}, radii{0.5};
    const double got = limits::critical_limit_integral(a, b, c, 1.0, radii, 64).value;
    const double want = specfun::gauss_density(0.2, 1.0) *
                        specfun::wrapped_gaussian(specfun::CirclePoint(0.3, 1.0), 1.0, 1e-13);
    return std::abs(got - want);
  });
  s.check("circle combination equals orthant-wrapped oracle, two points", 1e-6, [] {
    const std::vector<double> a{0.5, 1.0}, b{0.25, 0.1}, c{0.15, -0.2};
    const double r = 1.0;
    const std::vector<double> radii{std::exp(-r), std::exp(-0.75 * r)};
    const double got = limits::critical_limit_integral(a, b, c, r, radii, 64).value;
    return std::abs(got - circle_combination_oracle(0.5, 1.0, 0.25, 0.1, 0.15, -0.2, r));
  });
  s.check("finite-r box identity, one point", 1e-6, [] {
    const std::vector<double> a{1.0}, b{0.5};
    const limits::BridgeIdentityValue v = limits::finite_r_bridge_identity(a, b, 1.0);
    return std::abs(v.lhs - v.rhs);
  });
  s.check("finite-r box identity, two points", 1e-6, [] {
    const std::vector<double> a{0.5, 1.0}, b{0.1, 0.2};
    const limits::BridgeIdentityValue v = limits::finite_r_bridge_identity(a, b, 1.0);
    return std::abs(v.lhs - v.rhs);
  });
  s.check("theta-sum dual forms", 1e-12, [] {
    double worst = 0.0;
    for (double rho : {0.5, 1.0, 2.0, 5.0})
      worst = std::max(worst,
                       std::abs(specfun::c_of_rho(rho, 1e-14) - specfun::c_of_rho_dual(rho, 1e-14)));
    return worst;
  });
  s.check("event union identity, 1e6 samples", 0.0, [] {
    return static_cast<double>(mc::event_identity_check(1'000'000, 1.0, {2026, 0}));
  });
  return s.take();
}

// --------------------------------------------------------------- equivalence

std::vector<CheckResult> run_equivalence_suite() {
  Suite s("equivalence");

  s.check("alternate series form, one level", 1e-9, [] {
    fredholm::KernelParams params;
    params.gamma = {0.1};
    params.tau = {1.0};
    params.beta = {1.2};
    params.p = 1.0;
    params.z = {std::polar(0.12, 0.7)};
    const fredholm::TruncationSpec trunc{3, 2, -1};
    const auto a = fredholm::series_D(params, trunc, fredholm::SeriesKind::D, true);
    const auto b = fredholm::series_D_alt(params, trunc);
    return std::abs(a.value - b.value) / std::abs(a.value);
  });
  s.check("alternate series form, two levels to order (2,2)", 1e-9, [] {
    fredholm::KernelParams params;
    params.gamma = {0.1, 0.0};
    params.tau = {0.5, 1.0};
    params.beta = {1.1, 2.0};
    params.p = 1.3;
    params.z = {std::polar(0.07, 0.2), std::polar(0.18, -0.4)};
    const fredholm::TruncationSpec trunc{3, 2, -1};
    const auto a = fredholm::series_D(params, trunc, fredholm::SeriesKind::D, true);
    const auto b = fredholm::series_D_alt(params, trunc);
    return std::abs(a.value - b.value) / std::abs(a.value);
  });
  s.check("zero-order contour integrals vanish, order (0,1)", 1e-8, [] {
    dist::EvaluationPoint pt;
    pt.gamma = {0.0, 0.1};
    pt.tau = {0.5, 1.0};
    pt.beta = {0.6, 1.1};
    pt.p = 1.0;
    return dist::vanishing_residual(pt, dist::ContourSpec::geometric(2, 64),
                                    fredholm::TruncationSpec{5, 2, -1}, {0, 1});
  });
  s.check("zero-order contour integrals vanish, order (1,0)", 1e-8, [] {
    dist::EvaluationPoint pt;
    pt.gamma = {0.0, 0.1};
    pt.tau = {0.5, 1.0};
    pt.beta = {0.6, 1.1};
    pt.p = 1.0;
    return dist::vanishing_residual(pt, dist::ContourSpec::geometric(2, 64),
                                    fredholm::TruncationSpec{5, 2, -1}, {1, 0});
  });
  return s.take();
}

// ----------------------------------------------------------------------- tail

std::vector<CheckResult> run_tail_suite() {
  Suite s("tail");

  s.check("upper-tail probability at beta = 3 (relative)", 0.25, [] {
    dist::EvaluationPoint pt;
    pt.gamma = {0.0};
    pt.tau = {1.0};
    pt.beta = {3.0};
    pt.p = 1.0;
    const double F =
        dist::joint_cdf(pt, dist::ContourSpec::geometric(1), fredholm::TruncationSpec{8, 2, -1})
            .value;
    const double predicted =
        std::exp(-4.0 / 3.0 * std::pow(3.0, 1.5)) / (16.0 * kPi * std::pow(3.0, 1.5));
    return std::abs((1.0 - F) - predicted) / predicted;
  });
  s.check("density at level 3 (relative)", 0.30, [] {
    dist::EvaluationPoint pt;
    pt.gamma = {0.0};
    pt.tau = {1.0};
    pt.beta = {3.0};
    pt.p = 1.0;
    const double f = dist::cdf_derivative(pt, dist::ContourSpec::geometric(1),
                                          fredholm::TruncationSpec{8, 2, -1})
                         .value;
    const double predicted = std::exp(-4.0 / 3.0 * std::pow(3.0, 1.5)) / (8.0 * kPi * 3.0);
    return std::abs(f - predicted) / predicted;
  });
  return s.take();
}

// --------------------------------------------------------------- scaled-limit

std::vector<CheckResult> run_scaled_limit_suite() {
  Suite s("scaled-limit");
  const fredholm::TruncationSpec trunc{5, 2, 3};

  s.check("wide period at level 4 (relative)", 0.10, [&] {
    dist::ConditionalQuery q;
    q.ell = 4.0;
    q.p = 2.0;
    const double got = dist::scaled_leading_term(q, 1, 32, trunc).value;
    const double want = 1.0 / (2.0 * kPi);
    return std::abs(got - want) / want;
  });
  // The narrow and critical checks at the prescribed levels sit outside the
  // asymptotic regime (the correction scale is e^{-lp/2} with lp = 1.2 and
  // 2.83 there); they are kept as stated and fail honestly. The trend
  // checks after them demonstrate convergence at the largest levels that
  // double precision admits (e^{(4/3) l^{3/2}} must stay representable).
  s.check("narrow period at level 6 (relative)", 0.15, [&] {
    dist::ConditionalQuery q;
    q.ell = 6.0;
    q.p = 0.2;
    const double got = dist::scaled_leading_term(q, 3, 32, trunc).value;
    const double want = 1.0 / std::sqrt(4.0 * kPi);
    return std::abs(got - want) / want;
  });
  s.check("critical period at level 4 (relative)", 0.10, [&] {
    dist::ConditionalQuery q;
    q.ell = 4.0;
    q.p = std::pow(4.0, -0.25);  // rtilde = 1
    const double got = dist::scaled_leading_term(q, 2, 32, trunc).value;
    const std::vector<double> a{1.0}, zero{0.0}, radii{std::exp(-1.0)};
    const double want = limits::critical_limit_integral(a, zero, zero, 1.0, radii, 64).value;
    return std::abs(got - want) / std::abs(want);
  });
  s.check("supplementary: critical period at level 25 (relative)", 0.10, [&] {
    dist::ConditionalQuery q;
    q.ell = 25.0;
    q.p = std::pow(25.0, -0.25);  // rtilde = 1
    const double got = dist::scaled_leading_term(q, 2, 32, trunc).value;
    const std::vector<double> a{1.0}, zero{0.0}, radii{std::exp(-1.0)};
    const double want = limits::critical_limit_integral(a, zero, zero, 1.0, radii, 64).value;
    return std::abs(got - want) / std::abs(want);
  });
  s.check("supplementary: narrow period at level 28 (relative)", 0.30, [&] {
    dist::ConditionalQuery q;
    q.ell = 28.0;
    q.p = 0.3;
    const double got = dist::scaled_leading_term(q, 3, 32, trunc).value;
    const double want = 1.0 / std::sqrt(4.0 * kPi);
    return std::abs(got - want) / want;
  });
  s.check("supplementary: narrow-period deficit shrinks with the level", 0.0, [&] {
    const double want = 1.0 / std::sqrt(4.0 * kPi);
    double prev = 1e9;
    int violations = 0;
    for (auto [ell, p] : {std::pair{9.0, 0.35}, {16.0, 0.35}, {28.0, 0.30}}) {
      dist::ConditionalQuery q;
      q.ell = ell;
      q.p = p;
      const double dev = std::abs(dist::scaled_leading_term(q, 3, 32, trunc).value - want);
      if (dev >= prev) ++violations;
      prev = dev;
    }
    return static_cast<double>(violations);
  });
  return s.take();
}

// ---------------------------------------------------------------- conditional

std::vector<CheckResult> run_conditional_suite() {
  Suite s("conditional");

  s.check("limit law quadrature vs Monte Carlo (units of SE, req < 3)", 3.0, [] {
    const std::vector<double> x{0.0}, t{0.5}, h{0.0};
    const double quad = limits::limit_conditional_cdf(1, x, t, h);
    const mc::Estimate est = mc::estimate_limit_probability(1, x, t, h, 1.0, 100'000, {17, 0});
    return std::abs(est.value - quad) / est.std_error;
  });
  s.check("exact conditional ratio vs wide-period limit law (absolute)", 0.05, [] {
    dist::ConditionalQuery q;
    q.x = {0.0};
    q.t = {0.5};
    q.h = {0.0};
    q.ell = 4.0;
    q.p = 2.0;
    const dist::ConditionalResult r =
        dist::conditional_probability(q, 32, fredholm::TruncationSpec{5, 2, 3});
    const double limit = limits::limit_conditional_cdf(1, q.x, q.t, q.h);
    return std::abs(r.ratio - limit);
  });
  return s.take();
}

// ----------------------------------------------------------------- structural

std::vector<CheckResult> run_structural_suite() {
  Suite s("structural");
  const fredholm::TruncationSpec trunc{8, 2, -1};

  s.check("one-point cdf monotone in beta (violations beyond proxy)", 0.0, [&] {
    dist::EvaluationPoint base;
    base.gamma = {0.0};
    base.tau = {1.0};
    base.beta = {0.0};
    base.p = 1.0;
    std::vector<double> betas;
    for (double b = -2.5; b <= 2.51; b += 0.25) betas.push_back(b);
    const auto curve = dist::cdf_curve(base, betas, dist::ContourSpec::geometric(1), trunc);
    int violations = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i].value <
          curve[i - 1].value - (curve[i].quad_proxy + curve[i - 1].quad_proxy + 1e-12))
        ++violations;
    return static_cast<double>(violations);
  });
  s.check("two-point cdf monotone in each beta (violations beyond proxy)", 0.0, [] {
    const fredholm::TruncationSpec t2{5, 1, -1};
    const dist::ContourSpec contour = dist::ContourSpec::geometric(2, 32);
    int violations = 0;
    double prev = -1.0;
    for (double b1 : {-0.6, 0.0, 0.6, 1.2}) {
      dist::EvaluationPoint pt;
      pt.gamma = {0.0, 0.0};
      pt.tau = {0.5, 1.0};
      pt.beta = {b1, 0.8};
      pt.p = 1.0;
      const dist::EvalResult r = dist::joint_cdf(pt, contour, t2);
      if (r.value < prev - (r.quad_proxy + r.trunc_proxy + 1e-9)) ++violations;
      prev = r.value;
    }
    return static_cast<double>(violations);
  });
  s.check("marginal consistency, two points to one", 1e-5, [] {
    const fredholm::TruncationSpec t2{5, 1, -1};
    dist::EvaluationPoint pt2;
    pt2.gamma = {0.1, 0.0};
    pt2.tau = {0.6, 1.0};
    pt2.beta = {0.4, 50.0};
    pt2.p = 1.0;
    const double joint = dist::joint_cdf(pt2, dist::ContourSpec::geometric(2, 32), t2).value;
    dist::EvaluationPoint pt1;
    pt1.gamma = {0.1};
    pt1.tau = {0.6};
    pt1.beta = {0.4};
    pt1.p = 1.0;
    const double marginal =
        dist::joint_cdf(pt1, dist::ContourSpec::geometric(1, 32), t2).value;
    return std::abs(joint - marginal);
  });
  s.check("period scaling identity", 1e-6, [&] {
    const double gamma = 0.2, tau = 1.0, beta = 0.8;
    dist::EvaluationPoint ref;
    ref.gamma = {gamma};
    ref.tau = {tau};
    ref.beta = {beta};
    ref.p = 1.0;
    const double base =
        dist::joint_cdf(ref, dist::ContourSpec::geometric(1), trunc).value;
    double worst = 0.0;
    for (double p : {0.5, 1.0, 2.0}) {
      dist::EvaluationPoint pt;
      pt.gamma = {p * gamma};
      pt.tau = {std::pow(p, 1.5) * tau};
      pt.beta = {std::sqrt(p) * beta};
      pt.p = p;
      worst = std::max(
          worst, std::abs(dist::joint_cdf(pt, dist::ContourSpec::geometric(1), trunc).value - base));
    }
    return worst;
  });
  return s.take();
}

// ---------------------------------------------------------------------- tasep

std::vector<CheckResult> run_tasep_suite() {
  Suite s("tasep");

  s.check("one-point empirical cdf vs exact curve (KS distance)", 0.08, [] {
    const int a = 16;
    const long runs = 10'000;
    const std::vector<tasep::ScaledPoint> pts{{0.0, 1.0}};
    const auto samples = tasep::sample_scaled_observables(pts, a, runs, {90210, 0});
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& r : samples) v.push_back(r[0]);
    std::sort(v.begin(), v.end());

    // Exact one-point curve on a dense grid, linearly interpolated.
    dist::EvaluationPoint base;
    base.gamma = {0.0};
    base.tau = {1.0};
    base.beta = {0.0};
    base.p = 1.0;
    const double lo = v.front() - 0.3, hi = v.back() + 0.3;
    const int grid_n = 161;
    std::vector<double> grid(grid_n);
    for (int i = 0; i < grid_n; ++i) grid[i] = lo + (hi - lo) * i / (grid_n - 1);
    const auto curve = dist::cdf_curve(base, grid, dist::ContourSpec::geometric(1),
                                       fredholm::TruncationSpec{8, 2, -1});
    auto exact_cdf = [&](double x) {
      const double pos = (x - lo) / (hi - lo) * (grid_n - 1);
      const int j = std::clamp(static_cast<int>(pos), 0, grid_n - 2);
      const double w = pos - j;
      return (1.0 - w) * curve[static_cast<std::size_t>(j)].value +
             w * curve[static_cast<std::size_t>(j + 1)].value;
    };

    double ks = 0.0;
    std::size_t i = 0;
    while (i < v.size()) {
      std::size_t j = i;
      while (j < v.size() && v[j] == v[i]) ++j;
      const double F = exact_cdf(v[i]);
      ks = std::max(ks, std::abs(F - static_cast<double>(i) / v.size()));
      ks = std::max(ks, std::abs(F - static_cast<double>(j) / v.size()));
      i = j;
    }
    return ks;
  });
  s.check("hydrodynamic height rate (absolute deviation from 1)", 0.1, [] {
    const int a = 16;
    const double T = std::pow(2.0 * a, 1.5);
    const int runs = 1000;
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) {
      tasep::RingState st = tasep::init_step(a);
      mc::CounterRng rng(1234, static_cast<std::uint64_t>(i));
      tasep::evolve(st, 2.0 * T, rng);
      sum += static_cast<double>(tasep::height(st, 0)) / T;
    }
    return std::abs(sum / runs - 1.0);
  });
  return s.take();
}

// ------------------------------------------------------------ reproducibility

std::vector<CheckResult> run_reproducibility_suite() {
  Suite s("reproducibility");

  s.check("stochastic records are byte-identical under the same seed", 0.0, [] {
    auto make_record = [] {
      const std::vector<double> x{0.0}, t{0.5}, h{0.0};
      const mc::Estimate e = mc::estimate_limit_probability(1, x, t, h, 1.0, 20'000, {5150, 3});
      records::ResultRecord r;
      r.command = "mc";
      r.inputs = {{"case", "1"}, {"t", "0.5"}, {"h", "0"}, {"paths", "20000"}};
      r.value = e.value;
      r.std_error = e.std_error;
      r.seed = e.seed;
      return r;
    };
    const records::ResultRecord a = make_record();
    const records::ResultRecord b = make_record();
    const std::vector<records::ResultRecord> va{a}, vb{b};
    return records::to_csv(va) == records::to_csv(vb) ? 0.0 : 1.0;
  });
  s.check("ring-simulation observables identical under the same seed", 0.0, [] {
    const std::vector<tasep::ScaledPoint> pts{{0.0, 0.5}, {0.0, 1.0}};
    const auto s1 = tasep::sample_scaled_observables(pts, 8, 500, {808, 0});
    const auto s2 = tasep::sample_scaled_observables(pts, 8, 500, {808, 0});
    double diff = 0.0;
    for (std::size_t i = 0; i < s1.size(); ++i)
      for (std::size_t j = 0; j < s1[i].size(); ++j)
        diff += s1[i][j] == s2[i][j] ? 0.0 : 1.0;
    return diff;
  });
  return s.take();
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"identities", "equivalence",  "tail",  "scaled-limit",
          "conditional", "structural", "tasep", "reproducibility"};
}

std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "identities") return run_identity_suite();
  if (name == "equivalence") return run_equivalence_suite();
  if (name == "tail") return run_tail_suite();
  if (name == "scaled-limit") return run_scaled_limit_suite();
  if (name == "conditional") return run_conditional_suite();
  if (name == "structural") return run_structural_suite();
  if (name == "tasep") return run_tasep_suite();
  if (name == "reproducibility") return run_reproducibility_suite();
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const std::string& suite : suite_names()) {
      auto part = run_suite(suite);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown verification suite: " + name);
}

}  // namespace pkpz::verify
