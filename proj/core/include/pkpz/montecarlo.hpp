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

// Stochastic oracles: a counter-based generator (Philox4x32-10) keyed by
// (seed, stream, draw index), exact Brownian bridge samplers on the line and
// on the circle I_rho, Monte Carlo estimators of the three limit-field
// probabilities, and the per-sample event-union identity check.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pkpz/specfun.hpp"

namespace pkpz::mc {

struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Philox4x32-10 counter-based generator. Identical (seed, stream_id, draw
// index) always produce identical output; distinct stream ids give
// independent sequences without coordination.
class CounterRng {
 public:
  explicit CounterRng(RandomStream stream) : CounterRng(stream.seed, stream.stream_id) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint32_t next_u32();
  double uniform();  // in (0, 1)
  double normal();   // standard normal via Box-Muller, pairwise draws
  double exponential();

 private:
  void refill();
  std::uint32_t key_[2];
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint32_t buf_[4];
  int pos_ = 4;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Brownian bridge on [0,1] pinned to 0 at both ends, sampled exactly by
// sequential conditional Gaussians on the given time grid in (0,1).
struct BridgePath {
  std::vector<double> times;
  std::vector<double> values;
};

BridgePath sample_bridge(std::span<const double> times, RandomStream stream);

// Brownian bridge on I_rho pinned to {0}: the endpoint winding class k is
// drawn with probability phi_1(k rho)/phi_1^(rho)({0}), then a line bridge
// from 0 to k rho is sampled and projected to the circle.
struct CircleBridgePath {
  std::vector<double> times;
  std::vector<specfun::CirclePoint> values;
  long winding = 0;
};

CircleBridgePath sample_circle_bridge(std::span<const double> times, double rho,
                                      RandomStream stream);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of P(AND_i field(t_i, x_i) >= h_i) for the three
// limit fields: 1 uses B2br(t) - |B1br(t) - x|, 2 uses
// B2br(t) - dist_rho(B1br_rho(t), {x}), 3 uses Bbr(t) alone.
Estimate estimate_limit_probability(int case_id, std::span<const double> x,
                                    std::span<const double> t, std::span<const double> h,
                                    double rho, long n_paths, RandomStream stream);

// One pair of the event identity
//   UNION_k {X - Y >= -rho k, X + Y in [rho k, rho(k+1))}
//     = {X >= dist_rho({Y}, {0})};
// returns true when both sides agree.
bool event_identity_pair(double x, double y, double rho);

// Per-sample check of the identity over standard normal pairs; returns the
// number of disagreements.
long event_identity_check(long n_samples, double rho, RandomStream stream);

}  // namespace pkpz::mc
