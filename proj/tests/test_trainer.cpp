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

#include "stvqc/common.hpp"
#include "stvqc/trainer.hpp"

using namespace stvqc;

namespace {

/// Random small model: Bloch or 2x2-image encoder, tree or plain ansatz.
ModelSpec random_spec(Rng &rng) {
    ModelSpec s;
    if (rng.bernoulli(0.5)) {
        s.encoder = EncoderKind::Bloch;
        s.counts = {static_cast<uint32_t>(2 + rng.below(3))};
    } else {
        s.encoder = EncoderKind::Spatial;
        s.width = 2;
        s.height = 2;
        s.f = rng.bernoulli(0.5) ? GroupSpec{1, 2, 1} : GroupSpec{2, 1, 1};
        s.counts = {static_cast<uint32_t>(1 + rng.below(2)), static_cast<uint32_t>(1 + rng.below(2))};
    }
    s.entangler = rng.bernoulli(0.5) ? Entangler::Ring : Entangler::PathChain;
    if (rng.bernoulli(0.3)) {
        s.ansatz = AnsatzKind::Vqc;
        s.blocks = 1 + static_cast<uint32_t>(rng.below(2));
        s.min_qubits = 2;
        return s;
    }
    const auto layout = resolve_layout(s);
    s.R.repeats.resize(tree_levels(static_cast<uint32_t>(layout.spans.size())));
    for (auto &r : s.R.repeats) {
        r = static_cast<uint32_t>(rng.below(2));
    }
    s.R.repeats.back() = 1;
    return s;
}

std::vector<double> random_x(Rng &rng, const ModelSpec &s) {
    if (s.encoder == EncoderKind::Bloch) {
        return {rng.uniform(0, kPi), rng.uniform(0, 2 * kPi)};
    }
    std::vector<double> x(s.width * s.height);
    for (auto &v : x) {
        v = rng.uniform(0.05, 1.0);
    }
    return x;
}

Dataset small_bloch(const std::string &id, uint32_t n_train, uint32_t n_test, uint64_t seed = 0) {
    DatasetSpec ds;
    ds.id = id;
    ds.n_train = n_train;
    ds.n_test = n_test;
    ds.seed = seed;
    return to_dataset(gen_bloch(ds));
}

}  // namespace

TEST_SUITE("trainer") {
    TEST_CASE("shift rule on RY: <Z> = cos theta") {
        for (double theta : {0.0, kPi / 2, 1.1, -2.3}) {
            double g = 0.0;
            for (const auto &[s, c] : shift_rule(GateKind::RY)) {
                g += c * std::cos(theta + s);
            }
            CHECK(g == doctest::Approx(-std::sin(theta)).epsilon(1e-12));
        }
        CHECK(std::abs([] {
                  double g = 0.0;
                  for (const auto &[s, c] : shift_rule(GateKind::RY)) {
                      g += c * std::cos(kPi / 2 + s);
                  }
                  return g;
              }() + 1.0) < 1e-12);
        CHECK(shift_rule(GateKind::RX).size() == 2);
        CHECK(shift_rule(GateKind::CRZ).size() == 4);
        CHECK_THROWS_AS(shift_rule(GateKind::CX), Error);
    }

    TEST_CASE("four-term rule is exact for controlled rotations") {
        Rng rng(41);
        for (GateKind k : {GateKind::CRX, GateKind::CRY, GateKind::CRZ}) {
            for (int trial = 0; trial < 10; ++trial) {
                const double a = rng.uniform(0, 3), b = rng.uniform(0, 3), theta = rng.uniform(-3, 3);
                auto f = [&](double t) {
                    Circuit c(2);
                    c.add(GateKind::RY, 0, Angle::fixed(a)).add(GateKind::RX, 1, Angle::fixed(b));
                    c.add(GateKind::H, 1);
                    c.add(k, 0, 1, Angle::fixed(t));
                    c.add(GateKind::RY, 1, Angle::fixed(0.4));
                    const uint32_t q[] = {1};
                    return expectation_z(run_circuit(c, {}), q)[0];
                };
                double g = 0.0;
                for (const auto &[s, c] : shift_rule(k)) {
                    g += c * f(theta + s);
                }
                const double h = 1e-5;
                CHECK(g == doctest::Approx((f(theta + h) - f(theta - h)) / (2 * h)).epsilon(1e-7));
            }
        }
    }

    TEST_CASE("parameter shift matches finite differences on random models") {
        Rng rng(42);
        int models = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const auto spec = random_spec(rng);
            const Model model(spec);
            REQUIRE(model.n_qubits() <= 6);
            const auto params = init_params(model.n_params(), rng());
            std::vector<double> p(params);
            for (auto &v : p) {
                v *= 20.0;  // away from the flat start
            }
            std::vector<Example> batch;
            for (int i = 0; i < 3; ++i) {
                batch.push_back({random_x(rng, spec), static_cast<int>(rng.below(2))});
            }
            const auto lg = grad(model, p, batch);
            REQUIRE(lg.grad.size() == p.size());
            const double h = 1e-4;
            for (size_t j = 0; j < p.size(); ++j) {
                auto up = p, dn = p;
                up[j] += h;
                dn[j] -= h;
                const double fd = (grad(model, up, batch).loss - grad(model, dn, batch).loss) / (2 * h);
                REQUIRE(std::abs(lg.grad[j] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
            }
            ++models;
        }
        CHECK(models == 50);
    }

    TEST_CASE("expectation gradient matches finite differences") {
        Rng rng(43);
        for (int trial = 0; trial < 10; ++trial) {
            const auto spec = random_spec(rng);
            const Model model(spec);
            auto p = init_params(model.n_params(), rng());
            for (auto &v : p) {
                v *= 25.0;
            }
            const auto x = random_x(rng, spec);
            const auto st = model.encoded_state(x);
            const std::vector<double> w{0.7, -1.3};
            auto f = [&](const std::vector<double> &q) {
                const auto s = run_circuit(model.ansatz(), q, st);
                const auto z = expectation_z(s, model.readout());
                return w[0] * z[0] + w[1] * z[1];
            };
            const auto g = expectation_grad(model, p, st, w);
            for (size_t j = 0; j < p.size(); ++j) {
                auto up = p, dn = p;
                up[j] += 1e-4;
                dn[j] -= 1e-4;
                CHECK(g[j] == doctest::Approx((f(up) - f(dn)) / 2e-4).epsilon(1e-5));
            }
        }
    }

    TEST_CASE("forward") {
        ModelSpec s;
        s.counts = {2};
        s.R.repeats = {1, 2};
        const Model m(s);
        const std::vector<double> zeros(m.n_params(), 0.0);
        Rng rng(44);
        for (int i = 0; i < 10; ++i) {
            const auto x = random_x(rng, s);
            const auto p = forward(m, zeros, x);
            REQUIRE(p.size() == 2);
            CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(std::abs(p[0] - p[1]) < 0.2);
        }
        // scores are the two readout expectations
        const auto st = StateVector(std::vector<cplx>{0.6, 0.8, 0, 0});
        const auto sc = m.scores(st);
        CHECK(sc[0] == doctest::Approx(-0.28));
        CHECK(sc[1] == doctest::Approx(1.0));
        const std::vector<double> bad{0.1, 0.2, 0.3};
        CHECK_THROWS_AS(forward(m, zeros, bad), Error);
        const auto sm = softmax(std::vector<double>{1.0, 2.0, 3.0});
        CHECK(sm[0] + sm[1] + sm[2] == doctest::Approx(1.0));
        CHECK(argmax(sm) == 2);
    }

    TEST_CASE("zero epochs keep the initial model") {
        const auto data = small_bloch("N1", 64, 32);
        ModelSpec s;
        s.counts = {2};
        s.R.repeats = {1, 1};
        TrainConfig cfg;
        cfg.epochs = 0;
        const auto rep = train(Model(s), data, cfg);
        CHECK(rep.epoch_loss.empty());
        CHECK(rep.test_acc == rep.initial_test_acc);
        CHECK(rep.params == init_params(rep.n_params, cfg.seed));
    }

    TEST_CASE("training is deterministic and lowers the loss") {
        const auto data = small_bloch("N2", 256, 64, 3);
        ModelSpec s;
        s.counts = {2};
        s.R.repeats = {1, 2};
        TrainConfig cfg;
        cfg.epochs = 6;
        cfg.batch_size = 32;
        cfg.lr = 0.05;
        cfg.seed = 9;
        const Model m(s);
        const auto a = train(m, data, cfg);
        const auto b = train(m, data, cfg);
        CHECK(a.params == b.params);
        CHECK(a.epoch_loss == b.epoch_loss);
        CHECK(a.rng_state == b.rng_state);
        CHECK(a.to_json().dump() == b.to_json().dump());
        CHECK(a.epoch_loss.back() <= a.epoch_loss.front());
        for (double acc : a.epoch_train_acc) {
            CHECK((acc >= 0.0 && acc <= 1.0));
        }
        Dataset empty;
        CHECK_THROWS_AS(train(m, empty, cfg), Error);
    }

    TEST_CASE("noisy evaluation") {
        const auto data = small_bloch("N1", 256, 200, 4);
        ModelSpec s;
        s.counts = {2};
        s.R.repeats = {1, 2};
        TrainConfig cfg;
        cfg.epochs = 4;
        cfg.batch_size = 32;
        cfg.lr = 0.05;
        const Model m(s);
        const auto rep = train(m, data, cfg);
        const auto g = CouplingGraph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
        NoisyEval ne;
        ne.graph = &g;
        ne.noise = NoiseModel{0, 0, 0, 1};
        ne.shots = 8192;
        const auto ideal = evaluate(m, rep.params, data.test);
        CHECK_FALSE(ideal.noisy_accuracy.has_value());
        const auto zero = evaluate(m, rep.params, data.test, &ne);
        REQUIRE(zero.noisy_accuracy.has_value());
        CHECK(std::abs(*zero.noisy_accuracy - zero.accuracy) <= 0.02);
        CHECK(*zero.deviation < 0.02);

        // more two-qubit noise does not help on average
        double prev_dev = -1.0, first_acc = 0.0, last_acc = 0.0;
        for (double p2 : {0.0, 0.05, 0.3}) {
            double dev = 0.0, acc = 0.0;
            for (uint64_t seed = 0; seed < 5; ++seed) {
                ne.noise = NoiseModel{0, p2, 0, seed};
                ne.shots = 1024;
                const auto r = evaluate(m, rep.params, data.test, &ne);
                dev += *r.deviation / 5;
                acc += *r.noisy_accuracy / 5;
            }
            CHECK(dev >= prev_dev);
            prev_dev = dev;
            (p2 == 0.0 ? first_acc : last_acc) = acc;
        }
        CHECK(last_acc <= first_acc + 0.02);
    }

    TEST_CASE("spec and config json") {
        ModelSpec s;
        s.encoder = EncoderKind::Spatial;
        s.width = s.height = 4;
        s.f = {2, 2, 2};
        s.counts = {1, 2, 1, 1};
        s.R.repeats = {1, 0, 2};
        s.entangler = Entangler::PathChain;
        const auto back = ModelSpec::from_json(s.to_json());
        CHECK(back.to_json() == s.to_json());
        TrainConfig c;
        c.epochs = 7;
        c.lr = 0.01;
        CHECK(TrainConfig::from_json(c.to_json()).to_json() == c.to_json());
        TrainReport r;
        r.params = {0.1};
        const auto ck = checkpoint_json(s, r, c);
        for (const char *k : {"model", "params", "config", "rng_state"}) {
            CHECK(ck.contains(k));
        }
        CHECK_THROWS(ModelSpec::from_json(nlohmann::json{{"encoder", "nope"}}));
    }

    TEST_CASE("default mapping") {
        const auto g = CouplingGraph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
        const auto m4 = default_mapping(g, 4);
        CHECK(m4.size() == 4);
        for (size_t i = 0; i + 1 < m4.size(); ++i) {
            CHECK(g.adjacent(m4[i], m4[i + 1]));
        }
        CHECK(default_mapping(g, 5).size() == 5);
        CHECK_THROWS_AS(default_mapping(g, 6), Error);
    }
}
