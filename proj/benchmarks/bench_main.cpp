/*
Copyright 2026 The dipsad Authors. All rights reserved.

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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dipsad/audio_io.hpp"
#include "dipsad/combo_features.hpp"
#include "dipsad/demo.hpp"
#include "dipsad/dip.hpp"
#include "dipsad/dip_cluster.hpp"
#include "dipsad/gmm.hpp"

namespace {

std::vector<double> bimodal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = g(rng) + (i % 3 == 0 ? 4.0 : 0.0);
  return x;
}

void BM_ComputeDip(benchmark::State& state) {
  auto x = bimodal(static_cast<std::size_t>(state.range(0)), 1);
  std::sort(x.begin(), x.end());
  for (auto _ : state) benchmark::DoNotOptimize(dipsad::compute_dip(x).dip);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeDip)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

// Uncached table construction, single thread.
void BM_NullTable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    dipsad::NullDistribution table(n, 200, 7, 1);
    benchmark::DoNotOptimize(table.p_value(0.01));
  }
}
BENCHMARK(BM_NullTable)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_FeatureExtraction(benchmark::State& state) {
  dipsad::DemoOptions opt;
  opt.seconds = 10.0;
  const auto utt = dipsad::make_demo_utterance(opt);
  const dipsad::FrameSequence frames = dipsad::frame_signal(utt.audio);
  for (auto _ : state) benchmark::DoNotOptimize(dipsad::extract_raw_features(frames).rows.data());
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * frames.size()));
}
BENCHMARK(BM_FeatureExtraction)->Unit(benchmark::kMillisecond);

void BM_Resample16k(benchmark::State& state) {
  dipsad::AudioBuffer in;
  in.sample_rate = 16000;
  in.samples.resize(160000);
  for (std::size_t i = 0; i < in.samples.size(); ++i) in.samples[i] = std::sin(0.05 * static_cast<double>(i));
  for (auto _ : state) benchmark::DoNotOptimize(dipsad::resample_to_8k(in).samples.data());
}
BENCHMARK(BM_Resample16k)->Unit(benchmark::kMillisecond);

// Null tables are cached after the first iteration, so this measures the
// recursion itself.
void BM_FindModes(benchmark::State& state) {
  const auto s = dipsad::SortedSample::from_unsorted(bimodal(static_cast<std::size_t>(state.range(0)), 2));
  dipsad::ModeOptions opt;
  opt.bootstrap = 200;
  for (auto _ : state) benchmark::DoNotOptimize(dipsad::find_modes(s, opt).intervals.size());
}
BENCHMARK(BM_FindModes)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_FitEm(benchmark::State& state) {
  const auto x = bimodal(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(dipsad::fit_em(x).loglik);
}
BENCHMARK(BM_FitEm)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
