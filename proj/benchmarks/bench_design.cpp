// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "ucabank/ucabank.hpp"

namespace {

using namespace ucabank;

void BM_DesignFilter(benchmark::State& state) {
    const auto geom = make_uca(static_cast<std::size_t>(state.range(0)), 0.01);
    const auto pattern = supercardioid_preset();
    for (auto _ : state) {
        benchmark::DoNotOptimize(design_filter(geom, pattern, 0.3, 2000.0));
    }
}
BENCHMARK(BM_DesignFilter)->Arg(5)->Arg(9)->Arg(16);

void BM_BuildFilterbank(benchmark::State& state) {
    const auto geom = make_uca(5, 0.005);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_filterbank(geom, supercardioid_preset(), 9, StftConfig{}));
    }
}
BENCHMARK(BM_BuildFilterbank)->Unit(benchmark::kMillisecond);

MultiSignal noise_channels(std::size_t channels, std::size_t samples) {
    MultiSignal x(channels, std::vector<double>(samples));
    std::uint64_t s = 88172645463325252ULL;
    for (auto& ch : x) {
        for (auto& v : ch) {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            v = static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
        }
    }
    return x;
}

void BM_Stft(benchmark::State& state) {
    const auto x = noise_channels(5, 32000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stft(x, StftConfig{}));
    }
}
BENCHMARK(BM_Stft)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
    const auto geom = make_uca(5, 0.005);
    const auto bank = build_filterbank(geom, supercardioid_preset(), 9, StftConfig{});
    const auto x = noise_channels(5, 32000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_features(x, bank, kDefaultCompression));
    }
}
BENCHMARK(BM_ExtractFeatures)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
