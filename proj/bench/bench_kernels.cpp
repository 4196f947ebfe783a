// Copyright 2026 The stvqc Authors
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

// Serial reference vs OpenMP kernels. Range argument = qubit count.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "stvqc/kernels.hpp"
#include "stvqc/sim.hpp"

using namespace stvqc;

namespace {

std::vector<cplx> plus_state(uint32_t n) {
    const size_t dim = size_t{1} << n;
    return std::vector<cplx>(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim))});
}

const Mat2 kRy = gate_matrix(GateKind::RY, 0.3);

template <void (*Kernel)(std::span<cplx>, uint32_t, const Mat2 &)>
void BM_1q(benchmark::State &st) {
    const auto n = static_cast<uint32_t>(st.range(0));
    auto amps = plus_state(n);
    uint32_t t = 0;
    for (auto _ : st) {
        Kernel(amps, t, kRy);
        t = (t + 1) % n;
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(amps.size()));
}

template <void (*Kernel)(std::span<cplx>, uint32_t, uint32_t, const Mat2 &)>
void BM_c1q(benchmark::State &st) {
    const auto n = static_cast<uint32_t>(st.range(0));
    auto amps = plus_state(n);
    uint32_t t = 0;
    for (auto _ : st) {
        Kernel(amps, t, (t + 1) % n, kRy);
        t = (t + 1) % n;
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(amps.size()));
}

template <void (*Kernel)(std::span<cplx>, uint32_t, uint32_t)>
void BM_cx(benchmark::State &st) {
    const auto n = static_cast<uint32_t>(st.range(0));
    auto amps = plus_state(n);
    uint32_t t = 0;
    for (auto _ : st) {
        Kernel(amps, t, (t + 1) % n);
        t = (t + 1) % n;
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(amps.size()));
}

template <double (*Kernel)(std::span<const cplx>, uint32_t)>
void BM_expz(benchmark::State &st) {
    const auto n = static_cast<uint32_t>(st.range(0));
    const auto amps = plus_state(n);
    uint32_t t = 0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(Kernel(amps, t));
        t = (t + 1) % n;
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(amps.size()));
}

}  // namespace

#define STVQC_PAIR(bm, fn)                                                       \
    BENCHMARK_TEMPLATE(bm, kernels::serial::fn)->DenseRange(10, 20, 2);        \
    BENCHMARK_TEMPLATE(bm, kernels::omp::fn)->DenseRange(10, 20, 2)

STVQC_PAIR(BM_1q, apply_1q);
STVQC_PAIR(BM_c1q, apply_controlled_1q);
STVQC_PAIR(BM_cx, apply_cx);
STVQC_PAIR(BM_cx, apply_swap);
STVQC_PAIR(BM_expz, expectation_z);

BENCHMARK_MAIN();
