// Copyright 2026 The qmono Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qmono/diffcheck.hpp"
#include "qmono/monotones.hpp"
#include "qmono/sampling.hpp"
#include "qmono/weakmeas.hpp"

namespace {

using namespace qmono;

void BM_WalkMonteCarlo(benchmark::State& state) {
  const SystemShape shape({2});
  Rng rng(1);
  const DensityMatrix rho = sample::ginibre_mixed(shape, rng);
  const TwoOutcomeMeasurement meas = sample::measurement(shape, 0, rng);
  WalkConfig wc;
  wc.step = 0.1;
  wc.cutoff = 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_walk_counts(rho, meas, wc, state.range(0), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WalkMonteCarlo)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_WalkExactDp(benchmark::State& state) {
  const SystemShape shape({static_cast<int>(state.range(0))});
  Rng rng(2);
  const DensityMatrix rho = sample::ginibre_mixed(shape, rng);
  const TwoOutcomeMeasurement meas = sample::measurement(shape, 0, rng);
  WalkConfig wc;
  wc.step = 0.1;
  wc.cutoff = 4.0;
  for (auto _ : state) benchmark::DoNotOptimize(exact_walk_probabilities(rho, meas, wc));
}
BENCHMARK(BM_WalkExactDp)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ThreeQubitInvariants(benchmark::State& state) {
  Rng rng(3);
  const PureState psi = sample::haar_pure(SystemShape::qubits(3), rng);
  for (auto _ : state) benchmark::DoNotOptimize(three_qubit_invariants(psi));
}
BENCHMARK(BM_ThreeQubitInvariants);

void BM_CheckPhi(benchmark::State& state) {
  const MonotoneDescriptor phi = *find_monotone("phi_ABC");
  CheckConfig cc;
  cc.n_states = 10;
  cc.n_directions = 5;
  cc.seed = 4;
  for (auto _ : state) benchmark::DoNotOptimize(run_check(phi, cc));
}
BENCHMARK(BM_CheckPhi)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
