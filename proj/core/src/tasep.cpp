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

#include "pkpz/tasep.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "pkpz/parallel.hpp"

namespace pkpz::tasep {

int RingState::site_index(long n) const {
  const long period = 2L * a;
  long r = (n - (1L - a)) % period;
  if (r < 0) r += period;
  return static_cast<int>(r);
}

RingState init_step(int a) {
  if (a < 1) throw std::domain_error("init_step: need a >= 1");
  RingState st;
  st.a = a;
  st.occ.assign(static_cast<std::size_t>(2 * a), 0);
  st.jump_counts.assign(static_cast<std::size_t>(2 * a), 0);
  // Particles fill sites -a+1 .. 0, holes 1 .. a.
  for (long n = 1 - a; n <= 0; ++n) st.occ[static_cast<std::size_t>(st.site_index(n))] = 1;
  return st;
}

namespace {

struct Attempt {
  double time;
  int particle;
  bool operator>(const Attempt& other) const {
    return time != other.time ? time > other.time : particle > other.particle;
  }
};

}  // namespace

void evolve(RingState& state, double horizon, mc::CounterRng& rng) {
  if (horizon < state.time) throw std::domain_error("evolve: horizon precedes state time");
  const int n_sites = state.size();

  // Current particle positions as site indices.
  std::vector<int> pos;
  pos.reserve(static_cast<std::size_t>(n_sites));
  for (int s = 0; s < n_sites; ++s)
    if (state.occ[static_cast<std::size_t>(s)]) pos.push_back(s);

  std::priority_queue<Attempt, std::vector<Attempt>, std::greater<Attempt>> queue;
  for (std::size_t i = 0; i < pos.size(); ++i)
    queue.push({state.time + rng.exponential(), static_cast<int>(i)});

  while (!queue.empty() && queue.top().time <= horizon) {
    const Attempt ev = queue.top();
    queue.pop();
    const int from = pos[static_cast<std::size_t>(ev.particle)];
    const int to = from + 1 == n_sites ? 0 : from + 1;
    if (!state.occ[static_cast<std::size_t>(to)]) {
      state.occ[static_cast<std::size_t>(from)] = 0;
      state.occ[static_cast<std::size_t>(to)] = 1;
      pos[static_cast<std::size_t>(ev.particle)] = to;
      ++state.jump_counts[static_cast<std::size_t>(from)];
    }
    queue.push({ev.time + rng.exponential(), ev.particle});
  }
  state.time = horizon;
}

long height(const RingState& state, long n) {
  const long period = 2L * state.a;
  long n0 = (n - (1L - state.a)) % period;
  if (n0 < 0) n0 += period;
  n0 += 1L - state.a;  // fundamental representative in [-a+1, a]
  return std::labs(n0) + 2L * state.jump_counts[static_cast<std::size_t>(state.site_index(n0))];
}

std::vector<std::vector<double>> sample_scaled_observables(std::span<const ScaledPoint> points,
                                                           int a, long n_runs,
                                                           mc::RandomStream stream) {
  if (a < 1) throw std::domain_error("sample_scaled_observables: need a >= 1");
  if (points.empty()) throw std::invalid_argument("sample_scaled_observables: no points");
  for (const ScaledPoint& pt : points)
    if (!(pt.tau > 0.0)) throw std::domain_error("sample_scaled_observables: tau must be positive");

  const double T = std::pow(2.0 * a, 1.5);
  const double T23 = std::pow(T, 2.0 / 3.0);
  const double T13 = std::cbrt(T);

  // Observation order by time.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    return points[lhs].tau < points[rhs].tau;
  });

  std::vector<std::vector<double>> out(static_cast<std::size_t>(n_runs),
                                       std::vector<double>(points.size()));
  parallel::sum<double>(n_runs, [&](std::int64_t run) {
    mc::CounterRng rng(stream.seed, stream.stream_id + static_cast<std::uint64_t>(run));
    RingState st = init_step(a);
    for (std::size_t q : order) {
      const double tau = points[q].tau;
      evolve(st, 2.0 * tau * T, rng);
      const long site = std::lround(points[q].gamma * T23);
      const double h = static_cast<double>(height(st, site));
      out[static_cast<std::size_t>(run)][q] = (h - tau * T) / (-T13);
    }
    return 0.0;
  });
  return out;
}

EmpiricalCdf empirical_scaled_cdf(std::span<const ScaledPoint> points,
                                  std::span<const double> beta, int a, long n_runs,
                                  mc::RandomStream stream) {
  if (beta.size() != points.size())
    throw std::invalid_argument("empirical_scaled_cdf: length mismatch");
  if (a < 8) throw std::domain_error("empirical_scaled_cdf: need a >= 8");
  if (n_runs < 1000) throw std::domain_error("empirical_scaled_cdf: need >= 1000 runs");

  const auto samples = sample_scaled_observables(points, a, n_runs, stream);
  double hits = 0.0;
  for (const auto& run : samples) {
    bool all = true;
    for (std::size_t i = 0; i < beta.size(); ++i)
      if (run[i] > beta[i]) {
        all = false;
        break;
      }
    if (all) hits += 1.0;
  }
  EmpiricalCdf res;
  res.n_runs = n_runs;
  res.value = hits / static_cast<double>(n_runs);
  res.std_error =
      std::sqrt(std::max(res.value * (1.0 - res.value), 1e-300) / static_cast<double>(n_runs));
  return res;
}

}  // namespace pkpz::tasep
