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

// Continuous-time TASEP on the ring {-a+1, ..., a} of size 2a with the
// periodic step initial condition h(n, 0) = |n|. Each particle jumps one
// site rightward at rate 1 when the target is empty; a jump across bond
// (n, n+1) raises the height at n by 2. The relaxation-scale observable is
//
//   htilde_T(gamma, tau) = (h(gamma T^{2/3}, 2 tau T) - tau T) / (-T^{1/3}),
//   T = (2a)^{3/2}.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pkpz/montecarlo.hpp"

namespace pkpz::tasep {

struct RingState {
  int a = 0;                       // sites -a+1 .. a
  std::vector<std::uint8_t> occ;   // occupation, index n + a - 1
  std::vector<long> jump_counts;   // executed jumps across bond (n, n+1)
  double time = 0.0;

  int size() const { return 2 * a; }
  int site_index(long n) const;    // reduce mod 2a into the fundamental domain
};

RingState init_step(int a);

// Exact event-driven evolution to the given horizon. Exponential clocks are
// memoryless, so re-entering evolve() at any state is distribution-exact.
void evolve(RingState& state, double horizon, mc::CounterRng& rng);

// h(n, t) = h(n, 0) + 2 * jumps across bond (n, n+1); n arbitrary integer.
long height(const RingState& state, long n);

struct ScaledPoint {
  double gamma = 0.0;
  double tau = 1.0;
};

// htilde_T observables of independent runs; result[run][point]. Points must
// carry strictly positive tau. Runs use streams stream_id + run.
std::vector<std::vector<double>> sample_scaled_observables(std::span<const ScaledPoint> points,
                                                           int a, long n_runs,
                                                           mc::RandomStream stream);

struct EmpiricalCdf {
  double value = 0.0;
  double std_error = 0.0;
  long n_runs = 0;
};

// Fraction of runs with htilde_T(gamma_i, tau_i) <= beta_i for all i.
EmpiricalCdf empirical_scaled_cdf(std::span<const ScaledPoint> points,
                                  std::span<const double> beta, int a, long n_runs,
                                  mc::RandomStream stream);

}  // namespace pkpz::tasep
