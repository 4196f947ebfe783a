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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "stvqc/circuit.hpp"
#include "stvqc/kernels.hpp"

namespace stvqc {

inline constexpr uint32_t kMaxSimQubits = 16;

/// Dense state vector. Qubit 0 is the least-significant bit of the basis index.
class StateVector {
   public:
    /// |0...0> on n qubits.
    explicit StateVector(uint32_t n_qubits);
    /// Takes ownership of explicit amplitudes; size must be a power of two.
    explicit StateVector(std::vector<cplx> amplitudes);

    uint32_t n_qubits() const { return n_; }
    size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> mutable_amplitudes() { return amps_; }
    const cplx &operator[](size_t i) const { return amps_[i]; }

    double norm() const;
    std::vector<double> probabilities() const;

    /// Applies a fixed 2x2 unitary / controlled unitary directly.
    void apply_matrix(uint32_t target, const Mat2 &m);
    void apply_controlled_matrix(uint32_t control, uint32_t target, const Mat2 &m);

   private:
    uint32_t n_;
    std::vector<cplx> amps_;
};

/// Unitary for a single-qubit kind (or the target block of a controlled kind)
/// at the given angle. Non-rotation kinds ignore the angle.
Mat2 gate_matrix(GateKind kind, double angle);

/// Applies `op` to `state`, resolving trainable angles from `params`.
void apply_gate(StateVector &state, const GateOp &op, std::span<const double> params);
/// As apply_gate but with the angle already resolved.
void apply_gate_angle(StateVector &state, const GateOp &op, double angle);

/// Runs every op of `circuit` on |0...0>.
StateVector run_circuit(const Circuit &circuit, std::span<const double> params);
/// Runs every op of `circuit` on a copy of `initial`.
StateVector run_circuit(const Circuit &circuit, std::span<const double> params, const StateVector &initial);
/// In-place variant used by hot loops.
void run_in_place(const Circuit &circuit, std::span<const double> params, StateVector &state, size_t first_op = 0);

/// <Z> on each listed qubit.
std::vector<double> expectation_z(const StateVector &state, std::span<const uint32_t> qubits);

/// Marginal distribution over `qubits` (listed order = bit order of the result index).
std::vector<double> marginal(std::span<const double> probs, std::span<const uint32_t> qubits);

/// Pauli-trajectory noise: after each gate a uniformly random non-identity
/// Pauli (product over touched qubits) is inserted with probability p1 / p2;
/// every measured bit is flipped with probability p_ro.
struct NoiseModel {
    double p1 = 0.0;
    double p2 = 0.0;
    double p_ro = 0.0;
    uint64_t seed = 0;

    void validate() const;
    bool noiseless() const { return p1 == 0.0 && p2 == 0.0 && p_ro == 0.0; }
};

/// Empirical distribution over 2^n basis states from `shots` trajectories,
/// one measurement per trajectory. Trajectory t uses an RNG seeded from
/// (noise.seed, t), so output does not depend on thread count.
std::vector<double> run_noisy(const Circuit &circuit, std::span<const double> params, const NoiseModel &noise,
                              uint64_t shots);
std::vector<double> run_noisy(const Circuit &circuit, std::span<const double> params, const NoiseModel &noise,
                              uint64_t shots, const StateVector &initial);

/// Mean absolute elementwise difference of two distributions.
double deviation(std::span<const double> ideal, std::span<const double> noisy);

/// Total-variation distance (half the L1 distance).
double total_variation(std::span<const double> a, std::span<const double> b);

}  // namespace stvqc
