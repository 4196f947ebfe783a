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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stvqc {

enum class GateKind : uint8_t { RX, RY, RZ, X, SX, H, CX, CRX, CRY, CRZ, SWAP };

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);

constexpr bool is_two_qubit(GateKind k) {
    return k == GateKind::CX || k == GateKind::CRX || k == GateKind::CRY || k == GateKind::CRZ ||
           k == GateKind::SWAP;
}

constexpr bool is_parameterized(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::CRX ||
           k == GateKind::CRY || k == GateKind::CRZ;
}

constexpr bool is_controlled_rotation(GateKind k) {
    return k == GateKind::CRX || k == GateKind::CRY || k == GateKind::CRZ;
}

/// Rotation angle of a gate: `scale * params[index] + offset` when bound to a
/// trainable parameter, plain `offset` otherwise. The affine form lets basis
/// decomposition (e.g. CRZ(t) -> RZ(t/2) ...) keep gates trainable.
struct Angle {
    std::optional<uint32_t> index;
    double scale = 1.0;
    double offset = 0.0;

    static Angle fixed(double radians) { return Angle{std::nullopt, 1.0, radians}; }
    static Angle param(uint32_t index, double scale = 1.0, double offset = 0.0) {
        return Angle{index, scale, offset};
    }

    bool trainable() const { return index.has_value(); }
    double value(std::span<const double> params) const;
    Angle scaled(double factor) const { return Angle{index, scale * factor, offset * factor}; }
    Angle shifted(double delta) const { return Angle{index, scale, offset + delta}; }
    bool operator==(const Angle &) const = default;
};

/// One gate application. For controlled kinds qubits[0] is the control and
/// qubits[1] the target; for CX likewise. Single-qubit kinds use qubits[0].
struct GateOp {
    GateKind kind = GateKind::X;
    std::array<uint32_t, 2> qubits{0, 0};
    Angle angle{};

    static GateOp one(GateKind kind, uint32_t q, Angle a = {}) { return GateOp{kind, {q, q}, a}; }
    static GateOp two(GateKind kind, uint32_t q0, uint32_t q1, Angle a = {}) {
        return GateOp{kind, {q0, q1}, a};
    }

    size_t arity() const { return is_two_qubit(kind) ? 2 : 1; }
    bool operator==(const GateOp &) const = default;
};

/// Ordered gate list over `n_qubits`, with `n_params` trainable slots.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(uint32_t n_qubits, uint32_t n_params = 0) : n_qubits_(n_qubits), n_params_(n_params) {}

    uint32_t n_qubits() const { return n_qubits_; }
    uint32_t n_params() const { return n_params_; }
    const std::vector<GateOp> &ops() const { return ops_; }
    std::vector<GateOp> &mutable_ops() { return ops_; }
    size_t size() const { return ops_.size(); }
    bool empty() const { return ops_.empty(); }

    /// Appends after validating qubit indices and parameter slots; grows
    /// n_params if the op references a slot past the current count.
    Circuit &add(const GateOp &op);
    Circuit &add(GateKind kind, uint32_t q, Angle a = {}) { return add(GateOp::one(kind, q, a)); }
    Circuit &add(GateKind kind, uint32_t q0, uint32_t q1, Angle a = {}) {
        return add(GateOp::two(kind, q0, q1, a));
    }

    /// Allocates a fresh trainable slot and returns its index.
    uint32_t new_param() { return n_params_++; }
    void set_n_params(uint32_t n) { n_params_ = n; }
    void set_n_qubits(uint32_t n) { n_qubits_ = n; }

    /// Appends `other`, relabelling its qubit q as qubit_map[q] and shifting
    /// its parameter indices by `param_offset`.
    void append(const Circuit &other, std::span<const uint32_t> qubit_map, uint32_t param_offset = 0);
    /// Appends `other` on the same qubits with parameter indices offset by n_params().
    void append_fresh_params(const Circuit &other);

    /// Throws Error if any op is malformed (see GateOp invariants).
    void validate() const;
    /// Count of distinct parameter indices actually referenced.
    uint32_t referenced_params() const;

   private:
    uint32_t n_qubits_ = 0;
    uint32_t n_params_ = 0;
    std::vector<GateOp> ops_;
};

}  // namespace stvqc
