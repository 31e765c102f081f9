// Copyright 2026 The serkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Serial reference kernels against their OpenMP counterparts. Thread count
// follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "serkit/audio.hpp"
#include "serkit/functionals.hpp"
#include "serkit/lld.hpp"
#include "serkit/rng.hpp"

namespace {

using namespace serkit;

AudioClip noise_clip(int rate, double seconds) {
  Rng rng(1);
  AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (double& v : clip.samples) v = rng.uniform(-0.5, 0.5);
  return clip;
}

std::vector<ConditionedClip> conditioned_batch(std::size_t n) {
  std::vector<ConditionedClip> clips;
  Rng rng(2);
  for (std::size_t i = 0; i < n; ++i) {
    ConditionedClip c;
    c.samples.resize(kConditionedSamples);
    const double hz = 100.0 + 50.0 * static_cast<double>(i);
    for (std::size_t t = 0; t < c.samples.size(); ++t) {
      c.samples[t] = 0.3 * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(t) / kPipelineRate) +
                     0.05 * rng.normal();
    }
    clips.push_back(std::move(c));
  }
  return clips;
}

void BM_ResampleSerial(benchmark::State& state) {
  const auto clip = noise_clip(44100, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(reference::resample(clip, kPipelineRate));
}

void BM_ResampleParallel(benchmark::State& state) {
  const auto clip = noise_clip(44100, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(resample(clip, kPipelineRate));
}

void BM_LldBatchSerial(benchmark::State& state) {
  const auto clips = conditioned_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::extract_llds_batch(clips, 32));
}

void BM_LldBatchParallel(benchmark::State& state) {
  const auto clips = conditioned_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_llds_batch(clips, 32));
}

std::vector<LldMatrix> lld_batch(std::size_t n) { return reference::extract_llds_batch(conditioned_batch(n), 32); }

void BM_FunctionalsSerial(benchmark::State& state) {
  const auto llds = lld_batch(static_cast<std::size_t>(state.range(0)));
  const auto set = builtin_set("large");
  for (auto _ : state) benchmark::DoNotOptimize(reference::apply_functionals_batch(llds, set));
}

void BM_FunctionalsParallel(benchmark::State& state) {
  const auto llds = lld_batch(static_cast<std::size_t>(state.range(0)));
  const auto set = builtin_set("large");
  for (auto _ : state) benchmark::DoNotOptimize(apply_functionals_batch(llds, set));
}

}  // namespace

BENCHMARK(BM_ResampleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResampleParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LldBatchSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LldBatchParallel)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FunctionalsSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FunctionalsParallel)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
