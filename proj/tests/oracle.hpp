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

// Independent reference for the tests: dense 2^n x 2^n unitaries built from
// textbook gate matrices by explicit index arithmetic. Shares nothing with
// the library's kernels except the Circuit data type.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "stvqc/circuit.hpp"
#include "stvqc/common.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct Dense {
    size_t dim = 0;
    std::vector<cplx> a;  // row-major

    explicit Dense(size_t d = 0) : dim(d), a(d * d) {}
    static Dense identity(size_t d) {
        Dense m(d);
        for (size_t i = 0; i < d; ++i) {
            m.at(i, i) = 1.0;
        }
        return m;
    }
    cplx &at(size_t r, size_t c) { return a[r * dim + c]; }
    const cplx &at(size_t r, size_t c) const { return a[r * dim + c]; }
};

inline Dense mul(const Dense &x, const Dense &y) {
    Dense z(x.dim);
    for (size_t i = 0; i < x.dim; ++i) {
        for (size_t k = 0; k < x.dim; ++k) {
            const cplx v = x.at(i, k);
            if (v == cplx{}) {
                continue;
            }
            for (size_t j = 0; j < x.dim; ++j) {
                z.at(i, j) += v * y.at(k, j);
            }
        }
    }
    return z;
}

/// [[g00, g01], [g10, g11]]
inline std::array<cplx, 4> textbook(stvqc::GateKind k, double t) {
    using stvqc::GateKind;
    const cplx I{0.0, 1.0};
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    switch (k) {
        case GateKind::RX:
        case GateKind::CRX:
            return {c, -I * s, -I * s, c};
        case GateKind::RY:
        case GateKind::CRY:
            return {c, -s, s, c};
        case GateKind::RZ:
        case GateKind::CRZ:
            return {std::exp(-I * (t / 2)), 0.0, 0.0, std::exp(I * (t / 2))};
        case GateKind::X:
        case GateKind::CX:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::SX:
            return {0.5 * (1.0 + I), 0.5 * (1.0 - I), 0.5 * (1.0 - I), 0.5 * (1.0 + I)};
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            return {r, r, r, -r};
        }
        case GateKind::SWAP:
            break;
    }
    return {1.0, 0.0, 0.0, 1.0};
}

/// Full matrix of one op on n qubits (qubit 0 = least-significant bit).
inline Dense op_matrix(const stvqc::GateOp &op, uint32_t n, std::span<const double> params) {
    using stvqc::GateKind;
    const size_t d = size_t{1} << n;
    Dense m(d);
    const double t = op.angle.value(params);
    const auto g = textbook(op.kind, t);
    const uint32_t q0 = op.qubits[0], q1 = op.qubits[1];
    for (size_t col = 0; col < d; ++col) {
        if (op.kind == GateKind::SWAP) {
            const size_t b0 = (col >> q0) & 1U, b1 = (col >> q1) & 1U;
            size_t row = col & ~((size_t{1} << q0) | (size_t{1} << q1));
            row |= (b1 << q0) | (b0 << q1);
            m.at(row, col) = 1.0;
            continue;
        }
        const bool two = stvqc::is_two_qubit(op.kind);
        const uint32_t tq = two ? q1 : q0;
        if (two && ((col >> q0) & 1U) == 0) {
            m.at(col, col) = 1.0;
            continue;
        }
        const size_t bit = (col >> tq) & 1U;
        for (size_t out = 0; out < 2; ++out) {
            const size_t row = (col & ~(size_t{1} << tq)) | (out << tq);
            m.at(row, col) += g[out * 2 + bit];
        }
    }
    return m;
}

inline Dense unitary(const stvqc::Circuit &c, std::span<const double> params) {
    Dense u = Dense::identity(size_t{1} << c.n_qubits());
    for (const auto &op : c.ops()) {
        u = mul(op_matrix(op, c.n_qubits(), params), u);
    }
    return u;
}

/// Column 0 of the unitary = the state prepared from |0...0>.
inline std::vector<cplx> state(const stvqc::Circuit &c, std::span<const double> params) {
    const auto u = unitary(c, params);
    std::vector<cplx> v(u.dim);
    for (size_t i = 0; i < u.dim; ++i) {
        v[i] = u.at(i, 0);
    }
    return v;
}

/// max |a - e^{i phi} b| after aligning phase on the largest entry of b.
inline double phase_distance(const Dense &a, const Dense &b) {
    size_t best = 0;
    for (size_t i = 0; i < b.a.size(); ++i) {
        if (std::abs(b.a[i]) > std::abs(b.a[best])) {
            best = i;
        }
    }
    const cplx ph = a.a[best] / b.a[best];
    const cplx unit = ph / std::abs(ph);
    double worst = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) {
        worst = std::max(worst, std::abs(a.a[i] - unit * b.a[i]));
    }
    return worst;
}

/// Random circuit over all gate kinds with fixed angles.
inline stvqc::Circuit random_circuit(stvqc::Rng &rng, uint32_t n, uint32_t n_ops, bool allow_two = true) {
    using stvqc::GateKind;
    stvqc::Circuit c(n);
    const GateKind one[] = {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::X, GateKind::SX, GateKind::H};
    const GateKind two[] = {GateKind::CX, GateKind::CRX, GateKind::CRY, GateKind::CRZ, GateKind::SWAP};
    for (uint32_t i = 0; i < n_ops; ++i) {
        const double theta = rng.uniform(-2 * stvqc::kPi, 2 * stvqc::kPi);
        if (allow_two && n >= 2 && rng.bernoulli(0.4)) {
            const auto a = static_cast<uint32_t>(rng.below(n));
            auto b = static_cast<uint32_t>(rng.below(n - 1));
            b += b >= a ? 1 : 0;
            c.add(two[rng.below(5)], a, b, stvqc::Angle::fixed(theta));
        } else {
            c.add(one[rng.below(6)], static_cast<uint32_t>(rng.below(n)), stvqc::Angle::fixed(theta));
        }
    }
    return c;
}

}  // namespace oracle
