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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "stvqc/qasm.hpp"
#include "stvqc/sim.hpp"

using namespace stvqc;

namespace {

StateVector random_state(Rng &rng, uint32_t n) {
    std::vector<cplx> a(size_t{1} << n);
    double norm = 0.0;
    for (auto &x : a) {
        x = {rng.normal(), rng.normal()};
        norm += std::norm(x);
    }
    for (auto &x : a) {
        x /= std::sqrt(norm);
    }
    return StateVector(std::move(a));
}

Mat2 random_unitary(Rng &rng) {
    // RZ(a) RY(b) RZ(c), which covers SU(2)
    const auto a = gate_matrix(GateKind::RZ, rng.uniform(0, 6.3));
    const auto b = gate_matrix(GateKind::RY, rng.uniform(0, 6.3));
    const auto c = gate_matrix(GateKind::RZ, rng.uniform(0, 6.3));
    auto mul = [](const Mat2 &x, const Mat2 &y) {
        return Mat2{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
                    x[2] * y[1] + x[3] * y[3]};
    };
    return mul(a, mul(b, c));
}

}  // namespace

TEST_SUITE("sim") {
    TEST_CASE("apply_gate basics") {
        StateVector s(1);
        apply_gate(s, GateOp::one(GateKind::RX, 0, Angle::fixed(0.0)), {});
        CHECK(std::abs(s[0] - cplx{1.0}) < 1e-15);

        StateVector t(2);
        apply_gate(t, GateOp::one(GateKind::X, 0), {});
        CHECK(std::abs(t[1]) == doctest::Approx(1.0));  // |01>: qubit 0 is the LSB
        CHECK(std::abs(t[2]) == doctest::Approx(0.0));

        StateVector r(1);
        apply_gate(r, GateOp::one(GateKind::RY, 0, Angle::fixed(kPi / 2)), {});
        CHECK(r[0].real() == doctest::Approx(std::cos(kPi / 4)).epsilon(1e-12));
        CHECK(r[1].real() == doctest::Approx(std::sin(kPi / 4)).epsilon(1e-12));
    }

    TEST_CASE("apply_gate errors") {
        StateVector s(2);
        CHECK_THROWS_AS(apply_gate(s, GateOp::one(GateKind::X, 2), {}), Error);
        CHECK_THROWS_AS(apply_gate(s, GateOp::one(GateKind::RX, 0, Angle::param(3)), std::vector<double>{0.1}),
                        Error);
    }

    TEST_CASE("run_circuit examples") {
        Circuit empty(1);
        const auto s0 = run_circuit(empty, {});
        CHECK(std::abs(s0[0] - cplx{1.0}) < 1e-15);

        Circuit bell(2);
        bell.add(GateKind::H, 0).add(GateKind::CX, 0, 1);
        const auto b = run_circuit(bell, {});
        CHECK(b[0].real() == doctest::Approx(1 / std::sqrt(2.0)));
        CHECK(b[3].real() == doctest::Approx(1 / std::sqrt(2.0)));
        CHECK(std::abs(b[1]) < 1e-15);
        CHECK(std::abs(b[2]) < 1e-15);
    }

    TEST_CASE("three-gate circuits match the dense 4x4 product") {
        Rng rng(11);
        for (int trial = 0; trial < 100; ++trial) {
            const auto c = oracle::random_circuit(rng, 2, 3);
            const auto want = oracle::state(c, {});
            const auto got = run_circuit(c, {});
            for (size_t i = 0; i < 4; ++i) {
                CHECK(std::abs(got[i] - want[i]) < 1e-12);
            }
        }
    }

    TEST_CASE("dense unitary oracle up to 3 qubits") {
        Rng rng(12);
        for (int trial = 0; trial < 60; ++trial) {
            const auto n = static_cast<uint32_t>(1 + rng.below(3));
            const auto c = oracle::random_circuit(rng, n, 12);
            const auto u = oracle::unitary(c, {});
            for (size_t col = 0; col < u.dim; ++col) {
                std::vector<cplx> basis(u.dim);
                basis[col] = 1.0;
                const auto got = run_circuit(c, {}, StateVector(basis));
                for (size_t row = 0; row < u.dim; ++row) {
                    REQUIRE(std::abs(got[row] - u.at(row, col)) < 1e-10);
                }
            }
        }
    }

    TEST_CASE("norm is preserved by every gate kind") {
        Rng rng(13);
        for (int k = 0; k <= static_cast<int>(GateKind::SWAP); ++k) {
            const auto kind = static_cast<GateKind>(k);
            for (int trial = 0; trial < 20; ++trial) {
                auto s = random_state(rng, 3);
                const auto op = is_two_qubit(kind)
                                    ? GateOp::two(kind, 0, 2, Angle::fixed(rng.uniform(-7, 7)))
                                    : GateOp::one(kind, 1, Angle::fixed(rng.uniform(-7, 7)));
                apply_gate(s, op, {});
                CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("serial and OpenMP kernels agree") {
        Rng rng(14);
        const uint32_t n = 14;  // above the parallel threshold
        const auto base = random_state(rng, n);
        for (int trial = 0; trial < 6; ++trial) {
            auto a = base, b = base;
            const auto m = random_unitary(rng);
            const auto t = static_cast<uint32_t>(rng.below(n));
            auto c = static_cast<uint32_t>(rng.below(n - 1));
            c += c >= t ? 1 : 0;
            kernels::serial::apply_1q(a.mutable_amplitudes(), t, m);
            kernels::omp::apply_1q(b.mutable_amplitudes(), t, m);
            kernels::serial::apply_controlled_1q(a.mutable_amplitudes(), c, t, m);
            kernels::omp::apply_controlled_1q(b.mutable_amplitudes(), c, t, m);
            kernels::serial::apply_cx(a.mutable_amplitudes(), t, c);
            kernels::omp::apply_cx(b.mutable_amplitudes(), t, c);
            kernels::serial::apply_swap(a.mutable_amplitudes(), t, c);
            kernels::omp::apply_swap(b.mutable_amplitudes(), t, c);
            for (size_t i = 0; i < a.dim(); ++i) {
                REQUIRE(a[i] == b[i]);
            }
            CHECK(kernels::serial::expectation_z(a.amplitudes(), t) ==
                  doctest::Approx(kernels::omp::expectation_z(b.amplitudes(), t)).epsilon(1e-12));
        }
    }

    TEST_CASE("expectation_z examples") {
        const uint32_t q0[] = {0};
        CHECK(expectation_z(StateVector(1), q0)[0] == doctest::Approx(1.0));
        const double r = 1 / std::sqrt(2.0);
        CHECK(expectation_z(StateVector(std::vector<cplx>{r, r}), q0)[0] == doctest::Approx(0.0));
        CHECK(expectation_z(StateVector(std::vector<cplx>{0.6, 0.8}), q0)[0] == doctest::Approx(-0.28));
        StateVector s(2);
        const uint32_t bad[] = {2};
        CHECK_THROWS_AS(expectation_z(s, bad), Error);
    }

    TEST_CASE("run_noisy zero-noise limit") {
        Rng rng(15);
        const auto c = oracle::random_circuit(rng, 3, 10);
        const auto ideal = run_circuit(c, {}).probabilities();
        const auto noisy = run_noisy(c, {}, NoiseModel{0, 0, 0, 5}, 100000);
        CHECK(total_variation(ideal, noisy) <= 0.01);
    }

    TEST_CASE("run_noisy readout flip of a flip") {
        Circuit c(1);
        c.add(GateKind::X, 0);
        const auto p = run_noisy(c, {}, NoiseModel{0, 0, 1.0, 1}, 500);
        CHECK(p[0] == doctest::Approx(1.0));
    }

    TEST_CASE("run_noisy two-qubit depolarizing on a Bell pair") {
        // 8 of the 15 Paulis flip the parity of the pair
        Circuit bell(2);
        bell.add(GateKind::H, 0).add(GateKind::CX, 0, 1);
        for (double p2 : {0.1, 0.3}) {
            const auto p = run_noisy(bell, {}, NoiseModel{0, p2, 0, 7}, 40000);
            CHECK(p[1] + p[2] == doctest::Approx(p2 * 8.0 / 15.0).epsilon(0.1));
        }
        const auto q = run_noisy(bell, {}, NoiseModel{0.3, 0, 0, 7}, 40000);
        // H error before CX: X or Y on qubit 0 keeps parity, Z does not matter
        CHECK(q[1] + q[2] == doctest::Approx(0.0));
    }

    TEST_CASE("run_noisy is deterministic for a seed") {
        Rng rng(16);
        const auto c = oracle::random_circuit(rng, 3, 15);
        const NoiseModel nm{0.02, 0.05, 0.03, 99};
        CHECK(run_noisy(c, {}, nm, 2000) == run_noisy(c, {}, nm, 2000));
    }

    TEST_CASE("deviation examples") {
        const std::vector<double> a{0.25, 0.75}, one{1, 0}, two{0, 1}, h{0.5, 0.5}, g{0.6, 0.4};
        CHECK(deviation(a, a) == 0.0);
        CHECK(deviation(one, two) == doctest::Approx(1.0));
        CHECK(deviation(h, g) == doctest::Approx(0.1));
        const std::vector<double> three{0.2, 0.3, 0.5};
        CHECK_THROWS_AS(deviation(a, three), Error);
    }

    TEST_CASE("deviation does not shrink as p2 grows") {
        Rng rng(17);
        std::vector<Circuit> circuits;
        for (int i = 0; i < 20; ++i) {
            circuits.push_back(oracle::random_circuit(rng, 3, 14));
        }
        double prev = -1.0;
        for (double p2 : {0.0, 0.05, 0.15, 0.3}) {
            double mean = 0.0;
            for (size_t i = 0; i < circuits.size(); ++i) {
                const auto ideal = run_circuit(circuits[i], {}).probabilities();
                mean += deviation(ideal, run_noisy(circuits[i], {}, NoiseModel{0, p2, 0, 100 + i}, 4000));
            }
            mean /= static_cast<double>(circuits.size());
            CHECK(mean >= prev);
            prev = mean;
        }
    }

    TEST_CASE("noise model validation") {
        Circuit c(1);
        CHECK_THROWS_AS(run_noisy(c, {}, NoiseModel{1.5, 0, 0, 0}, 10), Error);
        CHECK_THROWS_AS(run_noisy(c, {}, NoiseModel{0, 0, 0, 0}, 0), Error);
    }

    TEST_CASE("qasm round trip") {
        Rng rng(18);
        for (int trial = 0; trial < 20; ++trial) {
            auto c = oracle::random_circuit(rng, 4, 20);
            c.add(GateKind::RY, 1, Angle::param(c.new_param(), 0.5, 0.25));
            const auto back = from_qasm(to_qasm(c));
            REQUIRE(back.n_qubits() == c.n_qubits());
            std::vector<double> params(c.n_params(), 0.7);
            const auto a = run_circuit(c, params), b = run_circuit(back, params);
            for (size_t i = 0; i < a.dim(); ++i) {
                CHECK(std::abs(a[i] - b[i]) < 1e-12);
            }
        }
        CHECK_THROWS_AS(from_qasm("OPENQASM 2.0;\nqreg q[1];\nu3(0,0,0) q[0];\n"), Error);
    }

    TEST_CASE("distribution csv") {
        std::ostringstream out;
        const std::vector<double> p{0.5, 0.5};
        write_distribution_csv(out, p);
        CHECK(out.str().rfind("basis_index,probability\n", 0) == 0);
    }
}
