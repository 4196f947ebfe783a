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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>

namespace stvqc {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major [[m0, m1], [m2, m3]]

/// Amplitude-update kernels. Qubit q is bit q of the basis index.
///
/// `serial` is the reference implementation; `omp` splits the outer loop
/// across threads once the register is large enough to amortise the fork.
/// The amplitude kernels of both produce bit-identical output (each amplitude
/// pair is touched by exactly one iteration); threaded expectation_z may
/// differ in the last bits because of reduction order.
namespace kernels {

namespace serial {
void apply_1q(std::span<cplx> amps, uint32_t target, const Mat2 &m);
void apply_controlled_1q(std::span<cplx> amps, uint32_t control, uint32_t target, const Mat2 &m);
void apply_cx(std::span<cplx> amps, uint32_t control, uint32_t target);
void apply_swap(std::span<cplx> amps, uint32_t a, uint32_t b);
double expectation_z(std::span<const cplx> amps, uint32_t qubit);
}  // namespace serial

namespace omp {
void apply_1q(std::span<cplx> amps, uint32_t target, const Mat2 &m);
void apply_controlled_1q(std::span<cplx> amps, uint32_t control, uint32_t target, const Mat2 &m);
void apply_cx(std::span<cplx> amps, uint32_t control, uint32_t target);
void apply_swap(std::span<cplx> amps, uint32_t a, uint32_t b);
double expectation_z(std::span<const cplx> amps, uint32_t qubit);
}  // namespace omp

/// Registers with fewer amplitudes than this stay on one thread even in the
/// omp kernels.
inline constexpr uint64_t kParallelThreshold = uint64_t{1} << 12;

}  // namespace kernels
}  // namespace stvqc
