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

#include "pkpz/fredholm.hpp"

using namespace pkpz::fredholm;

namespace {

KernelParams one_level() {
  KernelParams params;
  params.gamma = {0.0};
  params.tau = {1.0};
  params.beta = {3.0};
  params.p = 1.0;
  params.z = {std::polar(0.1, 0.4)};
  return params;
}

}  // namespace

static void EvaluatorSetup(benchmark::State& state) {
  const KernelParams params = one_level();
  for (auto _ : state) {
    SeriesEvaluator ev(params, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(ev.root_count());
  }
}
BENCHMARK(EvaluatorSetup)->Arg(4)->Arg(8)->Arg(12);

static void OrderShell(benchmark::State& state) {
  const KernelParams params = one_level();
  SeriesEvaluator ev(params, 8);
  const std::vector<int> n{static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.shell(n, SeriesKind::D));
  }
}
BENCHMARK(OrderShell)->DenseRange(1, 3, 1);

static void RootEnumeration(benchmark::State& state) {
  const std::complex<double> z = std::polar(0.2, 1.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_roots(z, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(RootEnumeration)->Arg(8)->Arg(16)->Arg(32);

static void CauchyChain(benchmark::State& state) {
  const RootVector rv = enumerate_roots(std::polar(0.15, 0.7), 4);
  RootSelection u{{rv.root(0), rv.root(1)}}, v{{rv.root(-1), rv.root(2)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(factor_R(u, v));
  }
}
BENCHMARK(CauchyChain);
