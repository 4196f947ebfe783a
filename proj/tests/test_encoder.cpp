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
#include <string>

#include "oracle.hpp"
#include "stvqc/encoder.hpp"
#include "stvqc/sim.hpp"

using namespace stvqc;

namespace {

std::vector<double> normalized(std::vector<double> v, size_t pad_to) {
    v.resize(pad_to, 0.0);
    double n = 0.0;
    for (double x : v) {
        n += x * x;
    }
    for (auto &x : v) {
        x /= std::sqrt(n);
    }
    return v;
}

std::vector<double> random_nonneg(Rng &rng, size_t n) {
    std::vector<double> v(n);
    for (auto &x : v) {
        x = rng.uniform();
    }
    return v;
}

}  // namespace

TEST_SUITE("encoder") {
    TEST_CASE("partition examples") {
        const auto a = partition_groups(4, 4, {2, 2, 2});
        CHECK(a.n_groups() == 4);
        CHECK(a.f.qubits() == 2);
        CHECK(a.total_qubits == 8);
        a.validate();

        const auto b = partition_groups(4, 4, {4, 4, 1});
        CHECK(b.n_groups() == 1);
        CHECK(b.total_qubits == 4);

        const auto c = partition_groups(4, 4, {1, 1, 1});
        CHECK(c.n_groups() == 16);
        CHECK(c.total_qubits == 16);
        for (const auto &s : c.spans) {
            CHECK(s.width == 1);
        }

        CHECK_THROWS_AS(partition_groups(4, 4, {5, 1, 1}), Error);
        CHECK_THROWS_AS(partition_groups(4, 4, {2, 2, 0}), Error);
    }

    TEST_CASE("group count formula, overlapping windows") {
        for (uint32_t W = 1; W <= 4; ++W) {
            for (uint32_t H = 1; H <= 4; ++H) {
                for (uint32_t S = 1; S <= 3; ++S) {
                    const GroupSpec f{W, H, S};
                    const auto l = partition_groups(4, 4, f);
                    CHECK(l.n_groups() == ((4 - W) / S + 1) * ((4 - H) / S + 1));
                    CHECK(l.n_groups() == f.group_count(4, 4));
                    for (const auto &cells : l.group_cells) {
                        CHECK(cells.size() == W * H);
                    }
                }
            }
        }
    }

    TEST_CASE("amplitude_prep examples") {
        const std::vector<double> v{0.6, 0.8};
        const auto c = amplitude_prep(v);
        CHECK(c.n_qubits() == 1);
        REQUIRE(c.size() == 1);
        CHECK(c.ops()[0].kind == GateKind::RY);
        CHECK(c.ops()[0].angle.offset == doctest::Approx(2 * std::atan2(0.8, 0.6)));
        const auto s = run_circuit(c, {});
        CHECK(s[0].real() == doctest::Approx(0.6));
        CHECK(s[1].real() == doctest::Approx(0.8));

        const std::vector<double> basis{1, 0, 0, 0};
        const auto sb = run_circuit(amplitude_prep(basis), {});
        CHECK(sb.n_qubits() == 2);
        CHECK(std::abs(sb[0] - cplx{1.0}) < 1e-12);

        const std::vector<double> flat{1, 1, 1, 1};
        const auto sf = run_circuit(amplitude_prep(flat), {});
        for (size_t i = 0; i < 4; ++i) {
            CHECK(sf[i].real() == doctest::Approx(0.5));
        }

        const std::vector<double> zero{0, 0, 0};
        CHECK_THROWS_AS(amplitude_prep(zero), Error);
    }

    TEST_CASE("amplitude_prep matches normalized input (dense oracle)") {
        Rng rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            const size_t n = 1 + rng.below(16);
            auto v = random_nonneg(rng, n);
            if (n > 1 && rng.bernoulli(0.3)) {
                v[rng.below(n)] = 0.0;  // sparse entries exercise pruning
            }
            const auto c = amplitude_prep(v);
            const auto want = normalized(v, size_t{1} << c.n_qubits());
            const auto got = oracle::state(c, {});
            for (size_t i = 0; i < want.size(); ++i) {
                REQUIRE(std::abs(got[i] - cplx{want[i]}) < 1e-10);
            }
            // only RY and CX, so amplitudes stay real
            for (const auto &op : c.ops()) {
                CHECK((op.kind == GateKind::RY || op.kind == GateKind::CX));
            }
        }
    }

    TEST_CASE("angle_encode schemes") {
        std::vector<double> v(16, 0.3);
        const auto s = AngleScheme::named("4x4_ryzxy");
        const auto c = angle_encode(v, s);
        CHECK(c.n_qubits() == 4);
        REQUIRE(c.size() == 16);
        const GateKind order[] = {GateKind::RY, GateKind::RZ, GateKind::RX, GateKind::RY};
        for (size_t j = 0; j < 16; ++j) {
            CHECK(c.ops()[j].kind == order[j / 4]);
            CHECK(c.ops()[j].qubits[0] == j % 4);
        }
        const auto c8 = angle_encode(v, AngleScheme::named("8x2_ryz"));
        CHECK(c8.n_qubits() == 8);
        for (size_t j = 0; j < 16; ++j) {
            CHECK(c8.ops()[j].kind == (j < 8 ? GateKind::RY : GateKind::RZ));
        }
        std::vector<double> too_many(17, 0.1);
        CHECK_THROWS_AS(angle_encode(too_many, s), Error);
        CHECK_THROWS_AS(AngleScheme::named("nope"), Error);

        AngleScheme one{"ry", 1, {GateKind::RY}};
        const std::vector<double> x{0.9};
        const auto st = run_circuit(angle_encode(x, one), {});
        CHECK(st[0].real() == doctest::Approx(std::cos(0.45)));
        CHECK(st[1].real() == doctest::Approx(std::sin(0.45)));
    }

    TEST_CASE("duplication examples") {
        const std::vector<double> data{0.6, 0.8};
        const uint32_t c2[] = {2};
        const auto e = build_st_encoder(data, 2, 1, {2, 1, 1}, c2, 16);
        CHECK(e.layout.total_qubits == 2);
        const auto s = run_circuit(e.circuit, {});
        CHECK(s[0].real() == doctest::Approx(0.36));
        CHECK(s[1].real() == doctest::Approx(0.48));
        CHECK(s[2].real() == doctest::Approx(0.48));
        CHECK(s[3].real() == doctest::Approx(0.64));

        const std::vector<double> ab{0.3, 0.7};
        const uint32_t c3[] = {3};
        const auto e3 = build_st_encoder(ab, 2, 1, {2, 1, 1}, c3, 16);
        const auto s3 = run_circuit(e3.circuit, {});
        const double b = 0.7 / std::hypot(0.3, 0.7);
        CHECK(std::abs(s3[7].real() - b * b * b) < 1e-10);
    }

    TEST_CASE("tensor power identity") {
        Rng rng(22);
        for (int trial = 0; trial < 100; ++trial) {
            const size_t len = size_t{2} << rng.below(2);  // 2 or 4 cells
            const auto raw = random_nonneg(rng, len);
            const auto v = normalized(raw, len);
            const uint32_t q = ceil_log2(len);
            for (uint32_t c : {2U, 3U}) {
                const uint32_t counts[] = {c};
                const auto e = build_st_encoder(raw, static_cast<uint32_t>(len), 1,
                                                {static_cast<uint32_t>(len), 1, 1}, counts, 16);
                REQUIRE(e.layout.total_qubits == c * q);
                const auto st = run_circuit(e.circuit, {});
                for (size_t i = 0; i < st.dim(); ++i) {
                    double want = 1.0;
                    for (uint32_t k = 0; k < c; ++k) {
                        want *= v[(i >> (k * q)) & (len - 1)];
                    }
                    REQUIRE(std::abs(st[i] - cplx{want}) < 1e-10);
                }
            }
        }
    }

    TEST_CASE("single group reproduces amplitude encoding") {
        Rng rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            const auto img = random_nonneg(rng, 16);
            const uint32_t ones[] = {1};
            const auto e = build_st_encoder(img, 4, 4, {4, 4, 1}, ones, 16);
            CHECK(e.layout.total_qubits == 4);
            const auto want = normalized(img, 16);
            const auto got = run_circuit(e.circuit, {});
            for (size_t i = 0; i < 16; ++i) {
                CHECK(std::abs(got[i] - cplx{want[i]}) < 1e-10);
            }
        }
    }

    TEST_CASE("c = 1 everywhere is a product of per-group states") {
        Rng rng(24);
        const auto img = random_nonneg(rng, 16);
        const std::vector<uint32_t> ones(4, 1);
        const auto e = build_st_encoder(img, 4, 4, {2, 2, 2}, ones, 16);
        const auto st = run_circuit(e.circuit, {});
        std::vector<std::vector<double>> groups;
        for (const auto &cells : e.layout.group_cells) {
            std::vector<double> g;
            for (uint32_t cell : cells) {
                g.push_back(img[cell]);
            }
            groups.push_back(normalized(g, 4));
        }
        for (size_t i = 0; i < st.dim(); ++i) {
            double want = 1.0;
            for (size_t g = 0; g < 4; ++g) {
                want *= groups[g][(i >> (2 * g)) & 3];
            }
            REQUIRE(std::abs(st[i] - cplx{want}) < 1e-10);
        }
    }

    TEST_CASE("one-cell groups are one RY each") {
        Rng rng(25);
        const auto img = random_nonneg(rng, 16);
        const std::vector<uint32_t> ones(16, 1);
        const auto e = build_st_encoder(img, 4, 4, {1, 1, 1}, ones, 16);
        CHECK(e.circuit.size() == 16);
        for (const auto &op : e.circuit.ops()) {
            CHECK(op.kind == GateKind::RY);
        }
        const uint32_t q[] = {5};
        const auto z = expectation_z(run_circuit(e.circuit, {}), q)[0];
        // <Z> = (1 - v^2) - v^2
        CHECK(z == doctest::Approx(1 - 2 * img[5] * img[5]).epsilon(1e-12));
    }

    TEST_CASE("encoded register is unit norm") {
        Rng rng(26);
        for (int trial = 0; trial < 30; ++trial) {
            const auto img = random_nonneg(rng, 16);
            const GroupSpec f{static_cast<uint32_t>(1 + rng.below(4)), static_cast<uint32_t>(1 + rng.below(4)), 2};
            auto layout = partition_groups(4, 4, f);
            if (layout.total_qubits > 12) {
                continue;
            }
            const auto c = encode_with_layout(img, layout);
            CHECK(run_circuit(c, {}).norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("qubit budget") {
        const std::vector<double> img(16, 0.5);
        const std::vector<uint32_t> twos(4, 2);
        try {
            build_st_encoder(img, 4, 4, {2, 2, 2}, twos, 12);
            FAIL("budget not enforced");
        } catch (const Error &e) {
            const std::string msg = e.what();
            CHECK(msg.find("16") != std::string::npos);
            CHECK(msg.find("12") != std::string::npos);
        }
        const auto ok = build_st_encoder(img, 4, 4, {2, 2, 2}, twos, 16);
        CHECK(ok.circuit.n_qubits() <= 16);
        const std::vector<uint32_t> bad(3, 1);
        CHECK_THROWS_AS(build_st_encoder(img, 4, 4, {2, 2, 2}, bad, 16), Error);
    }

    TEST_CASE("bloch encoder") {
        const auto layout = bloch_layout(2);
        CHECK(layout.total_qubits == 2);
        const auto st = run_circuit(encode_bloch_state(kPi / 2, 0.0, layout), {});
        for (size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(st[i]) == doctest::Approx(0.5));
        }
    }

    TEST_CASE("layout json") {
        const auto l = partition_groups(4, 4, {2, 2, 2});
        const auto j = layout_to_json(l);
        CHECK(j.dump().find("spans") != std::string::npos);
        CHECK(j.dump().find("groups") != std::string::npos);
    }
}
