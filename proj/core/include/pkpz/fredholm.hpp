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

// Building blocks of the determinant series D(z).
//
// For |z| < 1 the root set L_z = { w : e^{-w^2/2} = z, Re(w) < 0 } is
// parameterized by u(k) = -sqrt(-2 Log z + 4 pi i k), k in Z, principal
// branch negated so that Re(u) < 0. The series is
//
//   D(z) = SUM_n (1/(n!)^2) D_n(z),      n = (n_1,...,n_m) >= 0,
//
// where D_n couples n_i root pairs drawn from L_{z_i} through the factors
// H_n (boundary-layer exponentials), R_n (a chain of Cauchy determinants)
// and E_n (cubic-exponent weights), cf. the formulas assembled in
// distribution.hpp. The hatted variant Rhat_n = R_n * SUM_j (u_j^(m) +
// uhat_j^(m)) feeds the derivative formula.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pkpz/specfun.hpp"

namespace pkpz::fredholm {

using cplx = std::complex<double>;

// Finite slice of L_z: roots u(k), |k| <= cutoff, each satisfying
// |e^{-u^2/2} - z| <= 1e-12 |z| and Re(u) < 0.
struct RootVector {
  cplx base;
  int cutoff = 0;
  std::vector<cplx> roots;  // index k + cutoff

  cplx root(int k) const { return roots[static_cast<std::size_t>(k + cutoff)]; }
};

RootVector enumerate_roots(cplx z, int cutoff);

// Cauchy determinant det(1/(x_i + y_j)) by the product formula
//   prod_{i<j} (x_j-x_i)(y_j-y_i) / prod_{i,j} (x_i+y_j).
// Exactly 0 when X or Y repeats an entry; throws SingularCauchyError when a
// denominator |x_i + y_j| falls below 1e-13 * scale.
cplx cauchy_det(std::span<const cplx> x, std::span<const cplx> y);

struct SingularCauchyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters of one z-configuration: m space/time/level triples, the period
// p, and the m contour points. Moduli must be pairwise distinct and
// strictly monotone (increasing for the upper-tail orientation, decreasing
// for the plain-CDF orientation).
struct KernelParams {
  std::vector<double> gamma, tau, beta;
  double p = 1.0;
  std::vector<cplx> z;

  int m() const { return static_cast<int>(z.size()); }
  void validate() const;
};

// Root selections, one list per level (level i draws from L_{z_i}).
using RootSelection = std::vector<std::vector<cplx>>;

struct OrderVector {
  std::vector<int> n;
  int total() const;
  void validate(int m, int min_allowed) const;
};

// E_n(U, Uhat) = prod_i prod_j E^{i,+}(u_j) E^{i,-}(uhat_j) with
// E^{i,+-}(s) = exp(-dtau_i s^3/(3 p^{3/2}) +- dgamma_i s^2/(2p)
//               + dbeta_i s / p^{1/2}),
// differences taken against index i-1 with the zero convention at i = 0.
// Accumulated in log space, exponentiated once; throws std::range_error on
// overflow, reporting the offending exponent magnitude.
cplx factor_E(const KernelParams& params, const RootSelection& u, const RootSelection& uhat);

// H_n(U, Uhat) = prod over selected roots x at level i of
// exp(2 h_i(x) - h_{i+1}(x) - h_{i-1}(x)), h_i(w) = h(w, z_i), h_0 = h_{m+1} = 0.
cplx factor_H(const KernelParams& params, const RootSelection& u, const RootSelection& uhat,
              double tol = specfun::kDefaultTol);

// R_n / Rhat_n: reciprocal-root factors times the Cauchy determinant chain
//   prod_{i=0}^{m} Cd(U^(i), -Uhat^(i+1); Uhat^(i), -U^(i+1)).
cplx factor_R(const RootSelection& u, const RootSelection& uhat);
cplx factor_Rhat(const RootSelection& u, const RootSelection& uhat);

enum class SeriesKind { D, DHat };

// Truncation: root index cutoff K (2K+1 roots per level) and the order cap
// N on each n_i. max_total_order additionally caps |n| = sum n_i (-1 means
// m * N, i.e. no extra cap).
struct TruncationSpec {
  int root_cutoff = 12;
  int max_order = 3;
  int max_total_order = -1;
};

struct SeriesResult {
  cplx value{0.0, 0.0};
  double last_shell_mag = 0.0;  // sum of |contribution| over the outermost |n| ring
  long shells = 0;
  long terms = 0;
};

// Per-z-configuration evaluator. Caches roots, boundary-layer combinations
// and exponent polynomials per level, then evaluates order shells by
// enumerating unordered root subsets (ordered tuples with a repeated root
// contribute zero, and the summand is symmetric per level, so the subset
// sum absorbs the 1/(n!)^2 exactly).
class SeriesEvaluator {
 public:
  SeriesEvaluator(KernelParams params, int root_cutoff, double tol = specfun::kDefaultTol);

  int m() const { return params_.m(); }
  int root_count() const { return 2 * root_cutoff_ + 1; }
  const KernelParams& params() const { return params_; }

  // (1/(n!)^2) * Dbullet_n-type inner sum (no transition-weight prefactor).
  cplx shell(std::span<const int> n, SeriesKind kind) const;

  // Transition weights: the CDF-series prefactor
  //   prod_{i=2}^m (1 - z_{i-1}/z_i)^{n_i} (1 - z_i/z_{i-1})^{n_{i-1}}
  // and, with conditional_convention, the T_n variant whose second exponent
  // is n_{i-1} - 1.
  cplx transition_weight(std::span<const int> n, bool conditional_convention) const;

  // Replace the level values beta and refresh the per-root exponents. The
  // boundary-layer integrals do not depend on beta, so sweeps over beta
  // reuse the expensive caches.
  void set_beta(std::span<const double> beta);

 private:
  struct Level {
    std::vector<cplx> roots;
    std::vector<cplx> hcomb;        // boundary-layer combination per root
    std::vector<cplx> epoly_plus;   // beta-independent exponent part, + branch
    std::vector<cplx> epoly_minus;  // beta-independent exponent part, - branch
    std::vector<cplx> slope;        // u / sqrt(p)
    std::vector<cplx> wplus;        // hcomb + full E^{i,+} exponent
    std::vector<cplx> wminus;       // hcomb + full E^{i,-} exponent
    std::vector<cplx> inv;          // 1/u
  };

  cplx term(std::span<const int> n, SeriesKind kind, std::span<const int> combo_ids) const;

  KernelParams params_;
  int root_cutoff_;
  std::vector<Level> levels_;
  std::vector<std::vector<int>> combos_;  // combos_[s]: size-s index combos, flattened
};

// Raw shell value D_n(z) (or Dhat_n) including the CDF transition weights,
// i.e. the paper-normalized quantity before division by (n!)^2.
cplx order_term(const KernelParams& params, const std::vector<int>& n, int root_cutoff,
                SeriesKind kind, double tol = specfun::kDefaultTol);

// SUM_n (1/(n!)^2) * transition * shell over n in {lo..N}^m, |n| <= cap,
// lo = 0 with include_zero_orders (full CDF series) and 1 otherwise
// (derivative series).
SeriesResult series_D(const KernelParams& params, const TruncationSpec& trunc, SeriesKind kind,
                      bool include_zero_orders, double tol = specfun::kDefaultTol);

// Independent implementation of the same series from the alternate product
// form over left and right root sets (R_z = -L_z), with
//   fhat_i(w) = (1/w) f_i(w) e^{2 h(w, z_i)}
// and Delta-product couplings. Exists as an equivalence oracle.
SeriesResult series_D_alt(const KernelParams& params, const TruncationSpec& trunc,
                          double tol = specfun::kDefaultTol);

enum class CVariant { C, CBullet };

// C(z) as in the contour-integral formula, or its regularized variant
// Cbullet(z) = C(z) prod (z_i - z_{i+1})/z_i. Computed in log space.
cplx prefactor_C(const KernelParams& params, CVariant variant,
                 double tol = specfun::kDefaultTol);

}  // namespace pkpz::fredholm
