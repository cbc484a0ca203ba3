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
#include <numeric>
#include <vector>

#include "pkpz/tasep.hpp"

using namespace pkpz::tasep;
using pkpz::mc::CounterRng;

namespace {

long particle_count(const RingState& st) {
  long n = 0;
  for (auto v : st.occ) n += v;
  return n;
}

// Height increments must match the occupation at every site.
bool slopes_consistent(const RingState& st) {
  for (long n = 2 - st.a; n <= st.a; ++n) {
    const long slope = height(st, n) - height(st, n - 1);
    if (slope != 1 - 2 * static_cast<long>(st.occ[static_cast<std::size_t>(st.site_index(n))]))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("step initial condition") {
  const RingState st = init_step(2);
  // sites -1, 0, 1, 2
  CHECK(st.occ[st.site_index(-1)] == 1);
  CHECK(st.occ[st.site_index(0)] == 1);
  CHECK(st.occ[st.site_index(1)] == 0);
  CHECK(st.occ[st.site_index(2)] == 0);
  CHECK(height(st, -1) == 1);
  CHECK(height(st, 0) == 0);
  CHECK(height(st, 1) == 1);
  CHECK(height(st, 2) == 2);
  // periodic extension
  CHECK(height(st, 3) == height(st, -1));
  CHECK(height(st, -4) == height(st, 0));
  CHECK(particle_count(st) == 2);
  CHECK(slopes_consistent(st));
  CHECK_THROWS_AS(init_step(0), std::domain_error);
}

TEST_CASE("single free particle jumps at Poisson rate") {
  const int runs = 10'000;
  const double horizon = 5.0;
  double total_jumps = 0.0, total_sq = 0.0;
  for (int i = 0; i < runs; ++i) {
    RingState st;
    st.a = 4;
    st.occ.assign(8, 0);
    st.jump_counts.assign(8, 0);
    st.occ[0] = 1;
    CounterRng rng(5150, static_cast<std::uint64_t>(i));
    evolve(st, horizon, rng);
    const double jumps =
        static_cast<double>(std::accumulate(st.jump_counts.begin(), st.jump_counts.end(), 0L));
    total_jumps += jumps;
    total_sq += jumps * jumps;
  }
  const double mean = total_jumps / runs;
  const double se = std::sqrt((total_sq / runs - mean * mean) / runs);
  CHECK(std::abs(mean - horizon) < 3.0 * se);
}

TEST_CASE("fully packed ring never moves") {
  RingState st;
  st.a = 3;
  st.occ.assign(6, 1);
  st.jump_counts.assign(6, 0);
  CounterRng rng(1, 1);
  evolve(st, 50.0, rng);
  CHECK(std::accumulate(st.jump_counts.begin(), st.jump_counts.end(), 0L) == 0);
  CHECK(particle_count(st) == 6);
}

TEST_CASE("conservation, slope consistency, periodicity along a trajectory") {
  RingState st = init_step(8);
  CounterRng rng(777, 0);
  for (int leg = 1; leg <= 6; ++leg) {
    evolve(st, 4.0 * leg, rng);
    CHECK(particle_count(st) == 8);
    CHECK(slopes_consistent(st));
    CHECK(height(st, 3 + 16) == height(st, 3));
    CHECK(height(st, -5 - 32) == height(st, -5));
  }
}

TEST_CASE("evolve rejects a rewound horizon") {
  RingState st = init_step(4);
  CounterRng rng(2, 2);
  evolve(st, 1.0, rng);
  CHECK_THROWS_AS(evolve(st, 0.5, rng), std::domain_error);
}

TEST_CASE("hydrodynamic height rate at the origin") {
  // At density 1/2 the bond current is 1/4, so h(0, 2T)/T -> 1.
  const int a = 16;
  const double T = std::pow(2.0 * a, 1.5);
  const int runs = 1000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < runs; ++i) {
    RingState st = init_step(a);
    CounterRng rng(31337, static_cast<std::uint64_t>(i));
    evolve(st, 2.0 * T, rng);
    const double v = static_cast<double>(height(st, 0)) / T;
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / runs;
  const double se = std::sqrt(std::max(sumsq / runs - mean * mean, 0.0) / runs);
  CHECK(std::abs(mean - 1.0) < std::max(0.1, 3.0 * se));
}

TEST_CASE("scaled observables: reproducibility and distribution sanity") {
  const std::vector<ScaledPoint> pts{{0.0, 1.0}};
  const auto s1 = sample_scaled_observables(pts, 8, 200, {42, 0});
  const auto s2 = sample_scaled_observables(pts, 8, 200, {42, 0});
  CHECK(s1.size() == 200);
  for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i][0] == s2[i][0]);

  // Two independent seeds: same distribution (two-sample KS, loose gate).
  const auto sa = sample_scaled_observables(pts, 8, 2000, {1, 0});
  const auto sb = sample_scaled_observables(pts, 8, 2000, {2, 0});
  std::vector<double> va, vb;
  for (const auto& r : sa) va.push_back(r[0]);
  for (const auto& r : sb) vb.push_back(r[0]);
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  // Two-sample KS with ties: compare the empirical CDFs after consuming
  // every copy of each distinct value (heights live on a lattice).
  double ks = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < va.size() || ib < vb.size()) {
    double v;
    if (ia >= va.size())
      v = vb[ib];
    else if (ib >= vb.size())
      v = va[ia];
    else
      v = std::min(va[ia], vb[ib]);
    while (ia < va.size() && va[ia] <= v) ++ia;
    while (ib < vb.size() && vb[ib] <= v) ++ib;
    ks = std::max(ks, std::abs(static_cast<double>(ia) / va.size() -
                               static_cast<double>(ib) / vb.size()));
  }
  // KS p = 0.001 two-sample threshold ~ 1.95 sqrt(2/n).
  CHECK(ks < 1.95 * std::sqrt(2.0 / 2000.0));
}

TEST_CASE("empirical scaled cdf: limits and monotonicity") {
  const std::vector<ScaledPoint> pts{{0.0, 1.0}};
  const EmpiricalCdf sure = empirical_scaled_cdf(pts, std::vector<double>{10.0}, 8, 1000, {9, 0});
  CHECK(sure.value == doctest::Approx(1.0));

  double prev = -1.0;
  for (double beta : {-1.0, 0.0, 1.0}) {
    const EmpiricalCdf e = empirical_scaled_cdf(pts, std::vector<double>{beta}, 8, 1000, {9, 0});
    CHECK(e.value >= prev - 3.0 * e.std_error);
    prev = e.value;
  }

  CHECK_THROWS_AS(empirical_scaled_cdf(pts, std::vector<double>{0.0}, 4, 1000, {9, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(empirical_scaled_cdf(pts, std::vector<double>{0.0}, 8, 100, {9, 0}),
                  std::domain_error);
}
