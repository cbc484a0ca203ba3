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

#include <benchmark/benchmark.h>

#include <cmath>

#include "pkpz/montecarlo.hpp"
#include "pkpz/tasep.hpp"

static void RingTrajectory(benchmark::State& state) {
  const int a = static_cast<int>(state.range(0));
  const double T = std::pow(2.0 * a, 1.5);
  std::uint64_t run = 0;
  for (auto _ : state) {
    pkpz::tasep::RingState st = pkpz::tasep::init_step(a);
    pkpz::mc::CounterRng rng(7, run++);
    pkpz::tasep::evolve(st, 2.0 * T, rng);
    benchmark::DoNotOptimize(pkpz::tasep::height(st, 0));
  }
  state.SetComplexityN(a);
}
BENCHMARK(RingTrajectory)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void BridgeSampling(benchmark::State& state) {
  const std::vector<double> times{0.25, 0.5, 0.75};
  std::uint64_t run = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkpz::mc::sample_bridge(times, {11, run++}));
  }
}
BENCHMARK(BridgeSampling);

static void CircleBridgeSampling(benchmark::State& state) {
  const std::vector<double> times{0.25, 0.5, 0.75};
  std::uint64_t run = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkpz::mc::sample_circle_bridge(times, 1.0, {12, run++}));
  }
}
BENCHMARK(CircleBridgeSampling);
