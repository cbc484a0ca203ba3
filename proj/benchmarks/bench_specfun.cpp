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

#include <complex>

#include "pkpz/specfun.hpp"

using namespace pkpz::specfun;

static void PolylogHalf(benchmark::State& state) {
  const cplx z = std::polar(0.1 * state.range(0), 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polylog(0.5, z, 1e-12));
  }
}
BENCHMARK(PolylogHalf)->DenseRange(1, 8, 1);

static void BoundaryLayerIntegral(benchmark::State& state) {
  const cplx w{-1.5, 0.8};
  const cplx z = std::polar(0.1 * state.range(0), -0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_left(w, z, 1e-10));
  }
}
BENCHMARK(BoundaryLayerIntegral)->DenseRange(1, 4, 1);

static void WrappedGaussian(benchmark::State& state) {
  const double rho = 0.1 * state.range(0);
  const CirclePoint x(0.3, rho);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wrapped_gaussian(x, 1.0, 1e-12));
  }
}
BENCHMARK(WrappedGaussian)->Arg(2)->Arg(10)->Arg(50);

static void DoubleSeries(benchmark::State& state) {
  const cplx z = std::polar(0.05 * state.range(0), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bfun(z, z, 1e-12));
  }
}
BENCHMARK(DoubleSeries)->DenseRange(1, 8, 2);
