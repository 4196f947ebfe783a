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

#include "stvqc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stvqc/common.hpp"

namespace stvqc {

namespace {

constexpr cplx kI{0.0, 1.0};

const Mat2 kPauliX{cplx{0}, cplx{1}, cplx{1}, cplx{0}};
const Mat2 kPauliY{cplx{0}, -kI, kI, cplx{0}};
const Mat2 kPauliZ{cplx{1}, cplx{0}, cplx{0}, cplx{-1}};

void check_qubit(const StateVector &s, uint32_t q) {
    if (q >= s.n_qubits()) {
        throw Error("qubit index " + std::to_string(q) + " out of range for " + std::to_string(s.n_qubits()) +
                    "-qubit state");
    }
}

GateKind base_rotation(GateKind k) {
    switch (k) {
        case GateKind::CRX:
            return GateKind::RX;
        case GateKind::CRY:
            return GateKind::RY;
        case GateKind::CRZ:
            return GateKind::RZ;
        default:
            return k;
    }
}

}  // namespace

StateVector::StateVector(uint32_t n_qubits) : n_(n_qubits) {
    if (n_qubits > kMaxSimQubits) {
        throw Error("state vector limited to " + std::to_string(kMaxSimQubits) + " qubits, asked for " +
                    std::to_string(n_qubits));
    }
    amps_.assign(size_t{1} << n_qubits, cplx{0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<cplx> amplitudes) : n_(0), amps_(std::move(amplitudes)) {
    if (amps_.empty() || (amps_.size() & (amps_.size() - 1)) != 0) {
        throw Error("state vector length must be a power of two");
    }
    n_ = ceil_log2(amps_.size());
    if (n_ > kMaxSimQubits) {
        throw Error("state vector limited to " + std::to_string(kMaxSimQubits) + " qubits");
    }
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amps_.size());
    for (size_t i = 0; i < amps_.size(); ++i) {
        p[i] = std::norm(amps_[i]);
    }
    return p;
}

void StateVector::apply_matrix(uint32_t target, const Mat2 &m) {
    check_qubit(*this, target);
    kernels::omp::apply_1q(amps_, target, m);
}

void StateVector::apply_controlled_matrix(uint32_t control, uint32_t target, const Mat2 &m) {
    check_qubit(*this, control);
    check_qubit(*this, target);
    if (control == target) {
        throw Error("controlled gate needs distinct control and target");
    }
    kernels::omp::apply_controlled_1q(amps_, control, target, m);
}

Mat2 gate_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    switch (base_rotation(kind)) {
        case GateKind::RX:
            return {cplx{c}, -kI * s, -kI * s, cplx{c}};
        case GateKind::RY:
            return {cplx{c}, cplx{-s}, cplx{s}, cplx{c}};
        case GateKind::RZ:
            return {std::polar(1.0, -angle / 2), cplx{0}, cplx{0}, std::polar(1.0, angle / 2)};
        case GateKind::X:
            return kPauliX;
        case GateKind::SX:
            return {cplx{0.5, 0.5}, cplx{0.5, -0.5}, cplx{0.5, -0.5}, cplx{0.5, 0.5}};
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            return {cplx{r}, cplx{r}, cplx{r}, cplx{-r}};
        }
        default:
            throw Error("no 2x2 matrix for gate " + std::string(gate_name(kind)));
    }
}

void apply_gate_angle(StateVector &state, const GateOp &op, double angle) {
    check_qubit(state, op.qubits[0]);
    auto amps = state.mutable_amplitudes();
    switch (op.kind) {
        case GateKind::CX:
            check_qubit(state, op.qubits[1]);
            if (op.qubits[0] == op.qubits[1]) {
                throw Error("cx needs distinct qubits");
            }
            kernels::omp::apply_cx(amps, op.qubits[0], op.qubits[1]);
            return;
        case GateKind::SWAP:
            check_qubit(state, op.qubits[1]);
            if (op.qubits[0] == op.qubits[1]) {
                throw Error("swap needs distinct qubits");
            }
            kernels::omp::apply_swap(amps, op.qubits[0], op.qubits[1]);
            return;
        case GateKind::CRX:
        case GateKind::CRY:
        case GateKind::CRZ:
            state.apply_controlled_matrix(op.qubits[0], op.qubits[1], gate_matrix(op.kind, angle));
            return;
        default:
            kernels::omp::apply_1q(amps, op.qubits[0], gate_matrix(op.kind, angle));
            return;
    }
}

void apply_gate(StateVector &state, const GateOp &op, std::span<const double> params) {
    const double angle = is_parameterized(op.kind) ? op.angle.value(params) : 0.0;
    apply_gate_angle(state, op, angle);
}

void run_in_place(const Circuit &circuit, std::span<const double> params, StateVector &state, size_t first_op) {
    if (circuit.n_qubits() > state.n_qubits()) {
        throw Error("circuit has " + std::to_string(circuit.n_qubits()) + " qubits but state has " +
                    std::to_string(state.n_qubits()));
    }
    const auto &ops = circuit.ops();
    for (size_t i = first_op; i < ops.size(); ++i) {
        apply_gate(state, ops[i], params);
    }
}

StateVector run_circuit(const Circuit &circuit, std::span<const double> params) {
    if (params.size() < circuit.n_params()) {
        throw Error("circuit needs " + std::to_string(circuit.n_params()) + " parameters, got " +
                    std::to_string(params.size()));
    }
    StateVector state(circuit.n_qubits());
    run_in_place(circuit, params, state);
    return state;
}

StateVector run_circuit(const Circuit &circuit, std::span<const double> params, const StateVector &initial) {
    if (params.size() < circuit.n_params()) {
        throw Error("circuit needs " + std::to_string(circuit.n_params()) + " parameters, got " +
                    std::to_string(params.size()));
    }
    StateVector state = initial;
    run_in_place(circuit, params, state);
    return state;
}

std::vector<double> expectation_z(const StateVector &state, std::span<const uint32_t> qubits) {
    std::vector<double> out;
    out.reserve(qubits.size());
    for (uint32_t q : qubits) {
        check_qubit(state, q);
        out.push_back(kernels::omp::expectation_z(state.amplitudes(), q));
    }
    return out;
}

std::vector<double> marginal(std::span<const double> probs, std::span<const uint32_t> qubits) {
    std::vector<double> out(size_t{1} << qubits.size(), 0.0);
    for (size_t i = 0; i < probs.size(); ++i) {
        size_t k = 0;
        for (size_t j = 0; j < qubits.size(); ++j) {
            if ((i >> qubits[j]) & 1U) {
                k |= size_t{1} << j;
            }
        }
        out[k] += probs[i];
    }
    return out;
}

void NoiseModel::validate() const {
    for (double p : {p1, p2, p_ro}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error("noise probabilities must lie in [0, 1]");
        }
    }
}

namespace {

struct ErrorEvent {
    size_t after_op;
    uint32_t paulis;  // 2 bits per touched qubit: 1 = X, 2 = Y, 3 = Z
};

void apply_pauli_code(StateVector &s, uint32_t qubit, uint32_t code) {
    switch (code) {
        case 1:
            s.apply_matrix(qubit, kPauliX);
            break;
        case 2:
            s.apply_matrix(qubit, kPauliY);
            break;
        case 3:
            s.apply_matrix(qubit, kPauliZ);
            break;
        default:
            break;
    }
}

size_t sample_index(std::span<const double> probs, double u) {
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            return i;
        }
    }
    // Round-off: fall back to the last index with nonzero weight.
    for (size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) {
            return i;
        }
    }
    return 0;
}

}  // namespace

std::vector<double> run_noisy(const Circuit &circuit, std::span<const double> params, const NoiseModel &noise,
                              uint64_t shots) {
    return run_noisy(circuit, params, noise, shots, StateVector(circuit.n_qubits()));
}

std::vector<double> run_noisy(const Circuit &circuit, std::span<const double> params, const NoiseModel &noise,
                              uint64_t shots, const StateVector &initial) {
    noise.validate();
    if (shots < 1) {
        throw Error("run_noisy needs at least one shot");
    }
    if (params.size() < circuit.n_params()) {
        throw Error("circuit needs " + std::to_string(circuit.n_params()) + " parameters");
    }
    const auto &ops = circuit.ops();
    const uint32_t n = initial.n_qubits();
    const size_t dim = initial.dim();

    // Ideal states after each op, so a trajectory can resume from its first
    // error. Capped to keep memory bounded for long circuits.
    constexpr size_t kCheckpointBudget = size_t{1} << 21;
    const size_t stride = std::max<size_t>(1, (ops.size() + 1) * dim / kCheckpointBudget + 1);
    std::vector<StateVector> checkpoints;  // checkpoints[k] = state after ops [0, k*stride)
    {
        StateVector s = initial;
        checkpoints.push_back(s);
        for (size_t i = 0; i < ops.size(); ++i) {
            apply_gate(s, ops[i], params);
            if ((i + 1) % stride == 0) {
                checkpoints.push_back(s);
            }
        }
        if (ops.size() % stride != 0) {
            checkpoints.push_back(s);
        }
    }
    const std::vector<double> ideal_probs = checkpoints.back().probabilities();

    std::vector<uint64_t> counts(dim, 0);
    const auto total = static_cast<int64_t>(shots);

#pragma omp parallel
    {
        std::vector<uint64_t> local(dim, 0);
        std::vector<ErrorEvent> events;
#pragma omp for schedule(dynamic, 64)
        for (int64_t t = 0; t < total; ++t) {
            Rng rng(stream_seed(noise.seed, static_cast<uint64_t>(t)));
            events.clear();
            if (noise.p1 > 0.0 || noise.p2 > 0.0) {
                for (size_t i = 0; i < ops.size(); ++i) {
                    const bool two = ops[i].arity() == 2;
                    const double p = two ? noise.p2 : noise.p1;
                    if (p > 0.0 && rng.bernoulli(p)) {
                        const auto code = static_cast<uint32_t>(two ? 1 + rng.below(15) : 1 + rng.below(3));
                        events.push_back({i, code});
                    }
                }
            }
            size_t outcome;
            if (events.empty()) {
                outcome = sample_index(ideal_probs, rng.uniform());
            } else {
                const size_t first = events.front().after_op;
                const size_t ck = first / stride;  // replay op `first` so its error lands
                StateVector s = checkpoints[ck];
                size_t next_event = 0;
                for (size_t i = ck * stride; i < ops.size(); ++i) {
                    apply_gate(s, ops[i], params);
                    while (next_event < events.size() && events[next_event].after_op == i) {
                        const uint32_t code = events[next_event].paulis;
                        const auto &op = ops[i];
                        if (op.arity() == 2) {
                            apply_pauli_code(s, op.qubits[0], code & 3U);
                            apply_pauli_code(s, op.qubits[1], code >> 2);
                        } else {
                            apply_pauli_code(s, op.qubits[0], code);
                        }
                        ++next_event;
                    }
                }
                const auto probs = s.probabilities();
                outcome = sample_index(probs, rng.uniform());
            }
            if (noise.p_ro > 0.0) {
                for (uint32_t q = 0; q < n; ++q) {
                    if (rng.bernoulli(noise.p_ro)) {
                        outcome ^= size_t{1} << q;
                    }
                }
            }
            ++local[outcome];
        }
#pragma omp critical
        for (size_t i = 0; i < dim; ++i) {
            counts[i] += local[i];
        }
    }

    std::vector<double> dist(dim);
    for (size_t i = 0; i < dim; ++i) {
        dist[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return dist;
}

double deviation(std::span<const double> ideal, std::span<const double> noisy) {
    if (ideal.size() != noisy.size()) {
        throw Error("deviation: distributions have different lengths (" + std::to_string(ideal.size()) + " vs " +
                    std::to_string(noisy.size()) + ")");
    }
    if (ideal.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (size_t i = 0; i < ideal.size(); ++i) {
        s += std::abs(ideal[i] - noisy[i]);
    }
    return s / static_cast<double>(ideal.size());
}

double total_variation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error("total_variation: length mismatch");
    }
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        s += std::abs(a[i] - b[i]);
    }
    return 0.5 * s;
}

}  // namespace stvqc
