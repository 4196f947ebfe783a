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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stvqc/search.hpp"

using namespace stvqc;

namespace {

CouplingGraph lima() { return CouplingGraph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}); }

ModelSpec image_base() {
    ModelSpec b;
    b.encoder = EncoderKind::Spatial;
    b.width = 4;
    b.height = 4;
    return b;
}

/// sum_t gamma^(T-t) log pi(a_t) over active steps, straight from step_probs.
double weighted_log_prob(const Controller &c, std::span<const uint32_t> choices, double gamma) {
    const auto probs = c.step_probs(choices);
    std::vector<uint32_t> taken;
    for (size_t s = 0; s < c.n_slots(); ++s) {
        if (c.slot_active(s)) {
            taken.push_back(choices[s]);
        }
    }
    const size_t T = probs.size();
    double v = 0.0;
    for (size_t t = 0; t < T; ++t) {
        v += std::pow(gamma, static_cast<double>(T - 1 - t)) * std::log(probs[t][taken[t]]);
    }
    return v;
}

SolutionSample identity_decode(std::span<const uint32_t> c) {
    SolutionSample s;
    s.choices.assign(c.begin(), c.end());
    return s;
}

}  // namespace

TEST_SUITE("search") {
    TEST_CASE("reward algebra, exhaustive") {
        for (int bn = 0; bn <= 1; ++bn) {
            for (int bq = 0; bq <= 1; ++bq) {
                for (int k = 0; k <= 20; ++k) {
                    const double acc = k / 20.0;
                    for (double rho : {0.0, 0.25, 0.5, 1.0}) {
                        const auto r = make_reward(acc, bn, bq, rho);
                        CHECK(r.P == bn + bq);
                        CHECK(r.R == acc - rho * (bn + bq));
                        if (bn + bq == 0) {
                            CHECK(r.R == acc);
                        }
                    }
                }
            }
        }
        CHECK(make_reward(0.9, 1, 0, 0.5).R == doctest::Approx(0.4));
        CHECK(make_reward(0.9, 0, 0, 0.5).R == 0.9);
    }

    TEST_CASE("segments and optimizer selection") {
        for (auto s : {Segment::Spatial, Segment::Duplication, Segment::Layer, Segment::Physical}) {
            CHECK(segment_from_name(segment_name(s)) == s);
        }
        CHECK_THROWS_AS(segment_from_name("bogus"), Error);
        const auto img = select_optimizers(data_kind_from_name("linear-image"));
        CHECK_FALSE(img[static_cast<size_t>(Segment::Duplication)]);
        CHECK(img[static_cast<size_t>(Segment::Layer)]);
        const auto nl = select_optimizers(DataKind::Nonlinear);
        CHECK(std::all_of(nl.begin(), nl.end(), [](bool b) { return b; }));
        const auto vec = select_optimizers(DataKind::Vector);
        CHECK_FALSE(vec[static_cast<size_t>(Segment::Layer)]);
        CHECK(vec[static_cast<size_t>(Segment::Duplication)]);
        CHECK_THROWS_AS(data_kind_from_name("audio"), Error);
    }

    TEST_CASE("spatial enumeration") {
        const auto all = enumerate_spatial(4, 4, 16);
        CHECK(std::find(all.begin(), all.end(), GroupSpec{2, 2, 2}) != all.end());
        CHECK(std::find(all.begin(), all.end(), GroupSpec{4, 4, 1}) != all.end());
        for (const auto &f : all) {
            CHECK(f.group_count(4, 4) > 0);
            CHECK(f.group_count(4, 4) * f.qubits() <= 16);
        }
        for (const auto &f : enumerate_spatial(4, 4, 4)) {
            CHECK(f.group_count(4, 4) * f.qubits() <= 4);
        }
    }

    TEST_CASE("decode (2,2,2) gives the 8-qubit layout") {
        const auto base = image_base();
        const auto space = make_space(base, {GroupSpec{2, 2, 2}, GroupSpec{4, 4, 1}}, {1, 2}, {1, 2}, 3,
                                      {true, true, true, true});
        CHECK(space.dup_slots == 4);
        CHECK(space.layer_slots == tree_levels(8));
        const auto cands = build_candidate_set(lima(), 1, 5);
        std::vector<uint32_t> choices(space.slots().size(), 0);
        const auto s = decode(space, base, choices, cands);
        CHECK(s.feasible);
        CHECK(s.n == 8);
        CHECK(s.spec.f == GroupSpec{2, 2, 2});
        CHECK(s.spec.counts == std::vector<uint32_t>{1, 1, 1, 1});
        CHECK(s.spec.R.repeats.size() == 3);
        CHECK(Model(s.spec).n_qubits() == 8);

        choices[1] = 1;  // group 0 duplicated
        const auto d = decode(space, base, choices, cands);
        CHECK(d.n == 10);
        CHECK(d.spec.counts[0] == 2);

        std::vector<uint32_t> wrong(space.slots().size() + 1, 0);
        CHECK_THROWS_AS(decode(space, base, wrong, cands), Error);
        choices[0] = 7;
        CHECK_THROWS_AS(decode(space, base, choices, cands), Error);
    }

    TEST_CASE("masked segments decode to defaults") {
        const auto base = image_base();
        const auto cands = build_candidate_set(lima(), 2, 5);
        const auto space = make_space(base, {GroupSpec{4, 4, 1}}, {1, 2, 3}, {1, 2}, 10,
                                      {true, false, true, false});
        std::vector<uint32_t> choices(space.slots().size(), 0);
        for (size_t i = 0; i < choices.size(); ++i) {
            choices[i] = space.slots()[i].segment == Segment::Layer ? 1 : 2;  // junk on masked slots
        }
        choices[0] = 0;
        const auto s = decode(space, base, choices, cands);
        CHECK(s.spec.counts == std::vector<uint32_t>{1});
        CHECK(s.n == 4);
        CHECK(cands[s.candidate].size() == 4);

        const auto no_layer = make_space(base, {GroupSpec{4, 4, 1}}, {1, 2, 3}, {1, 2}, 10,
                                         {true, true, false, true});
        const std::vector<uint32_t> c2(no_layer.slots().size(), 0);
        const auto v = decode(no_layer, base, c2, cands);
        CHECK(v.spec.ansatz == AnsatzKind::Vqc);
        CHECK(v.spec.blocks == no_layer.vqc_blocks);
    }

    TEST_CASE("oversized designs come back infeasible") {
        const auto base = image_base();
        const auto space = make_space(base, {GroupSpec{1, 1, 1}}, {1, 3}, {1}, 1, {true, true, true, true});
        std::vector<uint32_t> choices(space.slots().size(), 0);
        for (uint32_t g = 0; g < space.dup_slots; ++g) {
            choices[1 + g] = 1;  // c = 3 everywhere: 48 qubits
        }
        const auto s = decode(space, base, choices, {});
        CHECK_FALSE(s.feasible);
        CHECK(s.n == 48);
        CHECK_FALSE(s.reason.empty());
    }

    TEST_CASE("penalty gating in evaluate_solution") {
        const auto g = lima();
        const auto cands = build_candidate_set(g, 2, 5);
        Dataset data;
        EvalConfig cfg;
        int trained = 0;
        const DesignTrainer stub = [&](const Model &m) {
            ++trained;
            TrainReport r;
            r.test_acc = 0.8;
            r.params.assign(m.n_params(), 0.0);
            return r;
        };
        ModelSpec spec;
        spec.counts = {3};
        spec.R.repeats = {1, 1, 1};

        SolutionSample ok;
        ok.spec = spec;
        ok.n = 3;
        ok.candidate = 4;  // size 3 bucket
        REQUIRE(cands[ok.candidate].size() == 3);
        const auto e = evaluate_solution(ok, data, g, cands, cfg, stub);
        CHECK(e.reward.P == 0);
        CHECK(e.reward.R == 0.8);
        CHECK(trained == 1);

        SolutionSample bigger = ok;
        bigger.candidate = 6;  // 4 qubits for a 3-qubit design
        const auto eb = evaluate_solution(bigger, data, g, cands, cfg, stub);
        CHECK(eb.reward.bq == 1);
        CHECK(eb.reward.acc == 0.8);
        CHECK(eb.reward.R == doctest::Approx(0.3));

        SolutionSample smaller = ok;
        smaller.candidate = 0;  // one qubit
        const auto es = evaluate_solution(smaller, data, g, cands, cfg, stub);
        CHECK(es.reward.acc == 0.0);
        CHECK(es.reward.bq == 1);

        SolutionSample huge = ok;
        huge.n = 12;
        const auto eh = evaluate_solution(huge, data, g, cands, cfg, stub);
        CHECK(eh.reward.bn == 1);
        CHECK(eh.reward.acc == 0.0);
        CHECK(trained == 2);  // neither of the zero-acc cases trained
    }

    TEST_CASE("controller distributions and masking") {
        SearchSpace sp;
        sp.spatial = {GroupSpec{1, 1, 1}, GroupSpec{2, 2, 2}, GroupSpec{4, 4, 1}};
        sp.dup_slots = 2;
        sp.layer_slots = 2;
        sp.physical_choices = 4;
        sp.active = {true, false, true, true};
        ControllerConfig cc;
        cc.seed = 5;
        Controller ctrl(sp.slots(), sp.active, cc);
        Rng rng(51);
        for (auto &t : ctrl.params()) {
            t = rng.uniform(-1, 1);
        }
        for (int i = 0; i < 50; ++i) {
            double lp = 0.0;
            const auto c = ctrl.sample(rng, &lp);
            REQUIRE(c.size() == sp.slots().size());
            CHECK(c[1] == 0);
            CHECK(c[2] == 0);
            CHECK(lp == doctest::Approx(ctrl.log_prob(c)));
            const auto probs = ctrl.step_probs(c);
            CHECK(probs.size() == 4);  // active slots only
            double manual = 0.0;
            size_t t = 0;
            for (size_t s = 0; s < c.size(); ++s) {
                if (!ctrl.slot_active(s)) {
                    continue;
                }
                double sum = 0.0;
                for (double p : probs[t]) {
                    sum += p;
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
                manual += std::log(probs[t][c[s]]);
                ++t;
            }
            CHECK(manual == doctest::Approx(lp));
        }
        Rng a(1), b(2);
        CHECK(ctrl.sample(a, nullptr, true) == ctrl.sample(b, nullptr, true));
    }

    TEST_CASE("log-prob gradient matches finite differences") {
        SearchSpace sp;
        sp.spatial = {GroupSpec{1, 1, 1}, GroupSpec{2, 2, 2}};
        sp.dup_slots = 2;
        sp.layer_slots = 1;
        sp.physical_choices = 3;
        sp.active = {true, true, false, true};
        for (double gamma : {1.0, 0.8}) {
            ControllerConfig cc;
            cc.hidden = 6;
            cc.embed = 4;
            cc.gamma = gamma;
            Controller ctrl(sp.slots(), sp.active, cc);
            Rng rng(52);
            for (auto &t : ctrl.params()) {
                t = rng.uniform(-0.8, 0.8);
            }
            const auto choices = ctrl.sample(rng);
            const auto g = ctrl.log_prob_grad(choices);
            REQUIRE(g.size() == ctrl.params().size());
            for (size_t j = 0; j < g.size(); ++j) {
                const double keep = ctrl.params()[j];
                ctrl.params()[j] = keep + 1e-6;
                const double up = weighted_log_prob(ctrl, choices, gamma);
                ctrl.params()[j] = keep - 1e-6;
                const double dn = weighted_log_prob(ctrl, choices, gamma);
                ctrl.params()[j] = keep;
                REQUIRE(std::abs(g[j] - (up - dn) / 2e-6) < 1e-6);
            }
        }
    }

    TEST_CASE("single-slot gradient is plain REINFORCE") {
        // with T = 1 the only weight is gamma^0, so gamma drops out
        SearchSpace sp;
        sp.spatial = {GroupSpec{1, 1, 1}, GroupSpec{2, 2, 2}, GroupSpec{4, 4, 1}};
        sp.active = {true, false, false, false};
        ControllerConfig half;
        half.gamma = 0.5;
        Controller a(sp.slots(), sp.active, {}), b(sp.slots(), sp.active, half);
        b.params() = a.params();
        for (uint32_t arm = 0; arm < 3; ++arm) {
            const std::vector<uint32_t> c{arm, 0, 0, 0};
            const auto ga = a.log_prob_grad(c), gb = b.log_prob_grad(c);
            CHECK(ga == gb);
            CHECK(weighted_log_prob(a, c, 1.0) == doctest::Approx(a.log_prob(c)));
        }
    }

    TEST_CASE("equal rewards leave the policy unchanged") {
        SearchSpace sp;
        sp.spatial = {GroupSpec{1, 1, 1}, GroupSpec{2, 2, 2}};
        sp.active = {true, false, false, false};
        Controller ctrl(sp.slots(), sp.active, {});
        const auto before = ctrl.params();
        Rng rng(53);
        std::vector<std::vector<uint32_t>> eps;
        for (int i = 0; i < 5; ++i) {
            eps.push_back(ctrl.sample(rng));
        }
        const std::vector<double> r(5, 0.7);
        ctrl.update(eps, r);
        CHECK(ctrl.params() == before);
        REQUIRE(ctrl.baseline().has_value());
        CHECK(*ctrl.baseline() == doctest::Approx(0.7));
        ctrl.update(eps, r);
        CHECK(ctrl.params() == before);
    }

    TEST_CASE("two-arm bandit converges") {
        SearchSpace sp;
        sp.spatial = {GroupSpec{1, 1, 1}, GroupSpec{2, 2, 2}};
        sp.active = {true, false, false, false};
        for (uint64_t seed = 0; seed < 5; ++seed) {
            ControllerConfig cc;
            cc.seed = seed;
            Controller ctrl(sp.slots(), sp.active, cc);
            Rng rng(100 + seed);
            for (int step = 0; step < 40; ++step) {  // 40 batches of 5 = 200 episodes
                std::vector<std::vector<uint32_t>> eps;
                std::vector<double> rewards;
                for (int k = 0; k < 5; ++k) {
                    eps.push_back(ctrl.sample(rng));
                    rewards.push_back(eps.back()[0] == 1 ? 0.9 : 0.1);
                }
                ctrl.update(eps, rewards);
            }
            const std::vector<uint32_t> any{0, 0, 0, 0};
            CHECK(ctrl.step_probs(any)[0][1] > 0.9);
        }
    }

    TEST_CASE("search loop bookkeeping") {
        SearchSpace sp;
        sp.spatial = {GroupSpec{1, 1, 1}, GroupSpec{2, 2, 2}, GroupSpec{4, 4, 1}};
        sp.physical_choices = 3;
        sp.active = {true, false, false, true};
        const Scorer score = [](const SolutionSample &s) {
            Evaluation e;
            e.reward = make_reward(0.1 * (s.choices[0] + s.choices.back()), s.choices.back() == 2 ? 1 : 0, 0, 0.5);
            return e;
        };
        SearchConfig one;
        one.episodes = 1;
        const auto r1 = search(sp, identity_decode, score, one);
        CHECK(r1.history.size() == 1);
        CHECK(r1.best == 0);

        SearchConfig cfg;
        cfg.episodes = 37;
        cfg.seed = 4;
        const auto r = search(sp, identity_decode, score, cfg);
        REQUIRE(r.running_best.size() == 37);
        double m = -1e9;
        for (size_t i = 0; i < r.history.size(); ++i) {
            m = std::max(m, r.history[i].eval.reward.R);
            CHECK(r.running_best[i] == m);
            if (i > 0) {
                CHECK(r.running_best[i] >= r.running_best[i - 1]);
            }
        }
        CHECK(r.history[r.best].eval.reward.P == 0);
        const auto again = search(sp, identity_decode, score, cfg);
        for (size_t i = 0; i < r.history.size(); ++i) {
            CHECK(again.history[i].sample.choices == r.history[i].sample.choices);
        }

        cfg.random = true;
        cfg.episodes = 300;
        const auto rr = search(sp, identity_decode, score, cfg);
        std::vector<int> hist(3, 0);
        for (const auto &e : rr.history) {
            ++hist[e.sample.choices[0]];
            CHECK(e.sample.log_prob == doctest::Approx(-2 * std::log(3.0)));
        }
        for (int h : hist) {
            CHECK((h > 70 && h < 130));
        }

        std::ostringstream csv, log;
        write_history_csv(csv, r);
        write_search_log(log, r);
        CHECK(csv.str().rfind("episode,acc_ideal,acc_noisy,reward\n", 0) == 0);
        const std::string lines = log.str();
        CHECK(std::count(lines.begin(), lines.end(), '\n') == 37);
        SearchConfig none;
        none.episodes = 0;
        CHECK_THROWS_AS(search(sp, identity_decode, score, none), Error);
    }

    TEST_CASE("pick_best prefers clean designs") {
        std::vector<Episode> h(3);
        h[0].eval.reward = make_reward(0.5, 0, 0, 0.5);
        h[1].eval.reward = make_reward(0.0, 0, 0, 0.5);
        h[2].eval.reward = make_reward(0.99, 0, 1, 0.0);  // higher R, but penalised
        CHECK(pick_best(h) == 0);
        std::vector<Episode> bad(2);
        bad[0].eval.reward = make_reward(0.9, 1, 0, 0.5);
        bad[1].eval.reward = make_reward(0.9, 1, 1, 0.5);
        CHECK(pick_best(bad) == 0);
    }

    TEST_CASE("design problem memoizes training") {
        DatasetSpec ds;
        ds.id = "N2";
        ds.n_train = 64;
        ds.n_test = 32;
        const auto data = to_dataset(gen_bloch(ds));
        const auto g = lima();
        auto cands = build_candidate_set(g, 2, 5);
        ModelSpec base;
        const auto space = make_space(base, {}, {1, 2}, {1}, static_cast<uint32_t>(cands.size()),
                                      {false, true, true, true});
        EvalConfig cfg;
        cfg.train.epochs = 1;
        DesignProblem prob(space, base, data, g, cands, cfg);
        std::vector<uint32_t> c(space.slots().size(), 0);
        c[1] = 1;  // two copies
        c.back() = 2;  // a 2-qubit path
        const auto s = prob.decode(c);
        REQUIRE(s.n == 2);
        const auto a = prob.evaluate(s);
        const auto b = prob.evaluate(s);
        CHECK(prob.cache_size() == 1);
        CHECK(a.reward.R == b.reward.R);
        CHECK(a.reward.P == 0);
    }
}
