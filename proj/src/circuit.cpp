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

#include "stvqc/circuit.hpp"

#include <algorithm>
#include <set>

#include "stvqc/common.hpp"

namespace stvqc {

namespace {
constexpr std::array<std::pair<GateKind, std::string_view>, 11> kNames{{
    {GateKind::RX, "rx"},
    {GateKind::RY, "ry"},
    {GateKind::RZ, "rz"},
    {GateKind::X, "x"},
    {GateKind::SX, "sx"},
    {GateKind::H, "h"},
    {GateKind::CX, "cx"},
    {GateKind::CRX, "crx"},
    {GateKind::CRY, "cry"},
    {GateKind::CRZ, "crz"},
    {GateKind::SWAP, "swap"},
}};
}  // namespace

std::string_view gate_name(GateKind kind) {
    for (const auto &[k, name] : kNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<GateKind> gate_from_name(std::string_view name) {
    for (const auto &[k, n] : kNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

double Angle::value(std::span<const double> params) const {
    if (!index) {
        return offset;
    }
    if (*index >= params.size()) {
        throw Error("unresolved parameter index " + std::to_string(*index) + " (have " +
                    std::to_string(params.size()) + " parameters)");
    }
    return scale * params[*index] + offset;
}

Circuit &Circuit::add(const GateOp &op) {
    const uint32_t q0 = op.qubits[0];
    const uint32_t q1 = op.qubits[1];
    if (q0 >= n_qubits_ || (op.arity() == 2 && q1 >= n_qubits_)) {
        throw Error("gate " + std::string(gate_name(op.kind)) + " references qubit outside a " +
                    std::to_string(n_qubits_) + "-qubit circuit");
    }
    if (op.arity() == 2 && q0 == q1) {
        throw Error("two-qubit gate " + std::string(gate_name(op.kind)) + " needs distinct qubits");
    }
    GateOp stored = op;
    if (op.arity() == 1) {
        stored.qubits[1] = q0;
    }
    if (op.angle.index && *op.angle.index >= n_params_) {
        n_params_ = *op.angle.index + 1;
    }
    ops_.push_back(stored);
    return *this;
}

void Circuit::append(const Circuit &other, std::span<const uint32_t> qubit_map, uint32_t param_offset) {
    if (qubit_map.size() < other.n_qubits()) {
        throw Error("qubit map shorter than appended circuit");
    }
    for (GateOp op : other.ops()) {
        op.qubits[0] = qubit_map[op.qubits[0]];
        op.qubits[1] = qubit_map[op.qubits[1]];
        if (op.angle.index) {
            op.angle.index = *op.angle.index + param_offset;
        }
        add(op);
    }
    n_params_ = std::max(n_params_, other.n_params() + param_offset);
}

void Circuit::append_fresh_params(const Circuit &other) {
    std::vector<uint32_t> identity(other.n_qubits());
    for (uint32_t q = 0; q < identity.size(); ++q) {
        identity[q] = q;
    }
    append(other, identity, n_params_);
}

void Circuit::validate() const {
    for (const auto &op : ops_) {
        if (op.qubits[0] >= n_qubits_ || op.qubits[1] >= n_qubits_) {
            throw Error("gate references qubit >= " + std::to_string(n_qubits_));
        }
        if (op.arity() == 2 && op.qubits[0] == op.qubits[1]) {
            throw Error("two-qubit gate with repeated qubit");
        }
        if (op.angle.index && *op.angle.index >= n_params_) {
            throw Error("parameter index " + std::to_string(*op.angle.index) + " outside [0, " +
                        std::to_string(n_params_) + ")");
        }
        if (op.angle.index && !is_parameterized(op.kind)) {
            throw Error("non-rotation gate " + std::string(gate_name(op.kind)) + " bound to a parameter");
        }
    }
}

uint32_t Circuit::referenced_params() const {
    std::set<uint32_t> seen;
    for (const auto &op : ops_) {
        if (op.angle.index) {
            seen.insert(*op.angle.index);
        }
    }
    return static_cast<uint32_t>(seen.size());
}

}  // namespace stvqc
