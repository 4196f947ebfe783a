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

#include "stvqc/kernels.hpp"

#include <algorithm>
#include <utility>

namespace stvqc::kernels {

namespace {

// Inserts a zero bit at position `bit` of `i`.
inline uint64_t insert_zero(uint64_t i, uint32_t bit) {
    const uint64_t low = i & ((uint64_t{1} << bit) - 1);
    return ((i >> bit) << (bit + 1)) | low;
}

inline uint64_t insert_two_zeros(uint64_t i, uint32_t a, uint32_t b) {
    const uint32_t lo = std::min(a, b);
    const uint32_t hi = std::max(a, b);
    return insert_zero(insert_zero(i, lo), hi);
}

inline void rotate_pair(cplx *amps, uint64_t i0, uint64_t i1, const Mat2 &m) {
    const cplx a0 = amps[i0];
    const cplx a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
}

}  // namespace

namespace serial {

void apply_1q(std::span<cplx> amps, uint32_t target, const Mat2 &m) {
    const uint64_t half = amps.size() / 2;
    const uint64_t bit = uint64_t{1} << target;
    cplx *a = amps.data();
    for (uint64_t i = 0; i < half; ++i) {
        const uint64_t i0 = insert_zero(i, target);
        rotate_pair(a, i0, i0 | bit, m);
    }
}

void apply_controlled_1q(std::span<cplx> amps, uint32_t control, uint32_t target, const Mat2 &m) {
    const uint64_t quarter = amps.size() / 4;
    const uint64_t cbit = uint64_t{1} << control;
    const uint64_t tbit = uint64_t{1} << target;
    cplx *a = amps.data();
    for (uint64_t i = 0; i < quarter; ++i) {
        const uint64_t i0 = insert_two_zeros(i, control, target) | cbit;
        rotate_pair(a, i0, i0 | tbit, m);
    }
}

void apply_cx(std::span<cplx> amps, uint32_t control, uint32_t target) {
    const uint64_t quarter = amps.size() / 4;
    const uint64_t cbit = uint64_t{1} << control;
    const uint64_t tbit = uint64_t{1} << target;
    for (uint64_t i = 0; i < quarter; ++i) {
        const uint64_t i0 = insert_two_zeros(i, control, target) | cbit;
        std::swap(amps[i0], amps[i0 | tbit]);
    }
}

void apply_swap(std::span<cplx> amps, uint32_t a, uint32_t b) {
    const uint64_t quarter = amps.size() / 4;
    const uint64_t abit = uint64_t{1} << a;
    const uint64_t bbit = uint64_t{1} << b;
    for (uint64_t i = 0; i < quarter; ++i) {
        const uint64_t base = insert_two_zeros(i, a, b);
        std::swap(amps[base | abit], amps[base | bbit]);
    }
}

double expectation_z(std::span<const cplx> amps, uint32_t qubit) {
    const uint64_t bit = uint64_t{1} << qubit;
    double total = 0.0;
    for (uint64_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        total += (i & bit) ? -p : p;
    }
    return total;
}

}  // namespace serial

namespace omp {

void apply_1q(std::span<cplx> amps, uint32_t target, const Mat2 &m) {
    if (amps.size() < kParallelThreshold) {
        serial::apply_1q(amps, target, m);
        return;
    }
    const auto half = static_cast<int64_t>(amps.size() / 2);
    const uint64_t bit = uint64_t{1} << target;
    cplx *a = amps.data();
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < half; ++i) {
        const uint64_t i0 = insert_zero(static_cast<uint64_t>(i), target);
        rotate_pair(a, i0, i0 | bit, m);
    }
}

void apply_controlled_1q(std::span<cplx> amps, uint32_t control, uint32_t target, const Mat2 &m) {
    if (amps.size() < kParallelThreshold) {
        serial::apply_controlled_1q(amps, control, target, m);
        return;
    }
    const auto quarter = static_cast<int64_t>(amps.size() / 4);
    const uint64_t cbit = uint64_t{1} << control;
    const uint64_t tbit = uint64_t{1} << target;
    cplx *a = amps.data();
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < quarter; ++i) {
        const uint64_t i0 = insert_two_zeros(static_cast<uint64_t>(i), control, target) | cbit;
        rotate_pair(a, i0, i0 | tbit, m);
    }
}

void apply_cx(std::span<cplx> amps, uint32_t control, uint32_t target) {
    if (amps.size() < kParallelThreshold) {
        serial::apply_cx(amps, control, target);
        return;
    }
    const auto quarter = static_cast<int64_t>(amps.size() / 4);
    const uint64_t cbit = uint64_t{1} << control;
    const uint64_t tbit = uint64_t{1} << target;
    cplx *a = amps.data();
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < quarter; ++i) {
        const uint64_t i0 = insert_two_zeros(static_cast<uint64_t>(i), control, target) | cbit;
        std::swap(a[i0], a[i0 | tbit]);
    }
}

void apply_swap(std::span<cplx> amps, uint32_t a, uint32_t b) {
    if (amps.size() < kParallelThreshold) {
        serial::apply_swap(amps, a, b);
        return;
    }
    const auto quarter = static_cast<int64_t>(amps.size() / 4);
    const uint64_t abit = uint64_t{1} << a;
    const uint64_t bbit = uint64_t{1} << b;
    cplx *v = amps.data();
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < quarter; ++i) {
        const uint64_t base = insert_two_zeros(static_cast<uint64_t>(i), a, b);
        std::swap(v[base | abit], v[base | bbit]);
    }
}

double expectation_z(std::span<const cplx> amps, uint32_t qubit) {
    if (amps.size() < kParallelThreshold) {
        return serial::expectation_z(amps, qubit);
    }
    const uint64_t bit = uint64_t{1} << qubit;
    const auto n = static_cast<int64_t>(amps.size());
    const cplx *a = amps.data();
    double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (int64_t i = 0; i < n; ++i) {
        const double p = std::norm(a[i]);
        total += (static_cast<uint64_t>(i) & bit) ? -p : p;
    }
    return total;
}

}  // namespace omp

}  // namespace stvqc::kernels
