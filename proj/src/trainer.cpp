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

#include "stvqc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stvqc/common.hpp"

namespace stvqc {

// ---------------------------------------------------------------- spec JSON

namespace {

std::string encoder_name(EncoderKind k) {
    switch (k) {
        case EncoderKind::Bloch:
            return "bloch";
        case EncoderKind::Spatial:
            return "spatial";
        case EncoderKind::Angle:
            return "angle";
    }
    return "?";
}

EncoderKind encoder_from(const std::string &s) {
    if (s == "bloch") {
        return EncoderKind::Bloch;
    }
    if (s == "spatial") {
        return EncoderKind::Spatial;
    }
    if (s == "angle") {
        return EncoderKind::Angle;
    }
    throw Error("unknown encoder '" + s + "' (valid: bloch, spatial, angle)");
}

}  // namespace

nlohmann::json ModelSpec::to_json() const {
    return {{"encoder", encoder_name(encoder)},
            {"width", width},
            {"height", height},
            {"f", {f.W, f.H, f.S}},
            {"counts", counts},
            {"budget", budget},
            {"angle_scheme", angle_scheme},
            {"ansatz", ansatz == AnsatzKind::Tree ? "tree" : "vqc"},
            {"R", R.repeats},
            {"blocks", blocks},
            {"entangler", entangler_name(entangler)},
            {"min_qubits", min_qubits},
            {"n_classes", n_classes},
            {"readout", readout}};
}

ModelSpec ModelSpec::from_json(const nlohmann::json &j) {
    ModelSpec s;
    try {
        s.encoder = encoder_from(j.value("encoder", std::string("bloch")));
        s.width = j.value("width", s.width);
        s.height = j.value("height", s.height);
        if (j.contains("f")) {
            const auto f = j.at("f").get<std::vector<uint32_t>>();
            if (f.size() != 3) {
                throw Error("model field 'f' must be [W, H, S]");
            }
            s.f = {f[0], f[1], f[2]};
        }
        s.counts = j.value("counts", s.counts);
        s.budget = j.value("budget", s.budget);
        s.angle_scheme = j.value("angle_scheme", s.angle_scheme);
        const std::string a = j.value("ansatz", std::string("tree"));
        if (a != "tree" && a != "vqc") {
            throw Error("unknown ansatz '" + a + "' (valid: tree, vqc)");
        }
        s.ansatz = a == "tree" ? AnsatzKind::Tree : AnsatzKind::Vqc;
        s.R.repeats = j.value("R", s.R.repeats);
        s.blocks = j.value("blocks", s.blocks);
        s.entangler = entangler_from_name(j.value("entangler", std::string("ring")));
        s.min_qubits = j.value("min_qubits", s.min_qubits);
        s.n_classes = j.value("n_classes", s.n_classes);
        s.readout = j.value("readout", s.readout);
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed model spec: ") + e.what());
    }
    return s;
}

Dataset to_dataset(const BlochDataset &d) {
    Dataset out;
    for (const auto &s : d.train) {
        out.train.push_back({{s.theta, s.phi}, s.label});
    }
    for (const auto &s : d.test) {
        out.test.push_back({{s.theta, s.phi}, s.label});
    }
    return out;
}

Dataset to_dataset(const ImageDataset &d) {
    Dataset out;
    for (const auto &s : d.train) {
        out.train.push_back({s.pixels, s.label});
    }
    for (const auto &s : d.test) {
        out.test.push_back({s.pixels, s.label});
    }
    return out;
}

// ---------------------------------------------------------------- model

EncoderLayout resolve_layout(const ModelSpec &spec, std::vector<uint32_t> *readout) {
    if (spec.n_classes < 2) {
        throw Error("a model needs at least 2 classes");
    }
    EncoderLayout layout;
    switch (spec.encoder) {
        case EncoderKind::Bloch:
            layout = bloch_layout(spec.counts.empty() ? 1 : spec.counts.front());
            if (layout.total_qubits > spec.budget) {
                throw Error("encoder needs " + std::to_string(layout.total_qubits) + " qubits but only " +
                            std::to_string(spec.budget) + " are available");
            }
            break;
        case EncoderKind::Spatial: {
            layout = partition_groups(spec.width, spec.height, spec.f);
            std::vector<uint32_t> counts = spec.counts;
            if (counts.empty()) {
                counts.assign(layout.n_groups(), 1);
            }
            apply_duplication(layout, counts, spec.budget);
            break;
        }
        case EncoderKind::Angle: {
            const auto scheme = AngleScheme::named(spec.angle_scheme);
            layout.width = scheme.capacity();
            layout.height = 1;
            for (uint32_t q = 0; q < scheme.n_qubits; ++q) {
                layout.spans.push_back({kPadGroup, 0, q, 1});
            }
            layout.total_qubits = scheme.n_qubits;
            break;
        }
    }
    std::vector<uint32_t> ro = spec.readout;
    if (ro.empty()) {
        ro.resize(spec.n_classes);
        std::iota(ro.begin(), ro.end(), 0U);
    }
    if (ro.size() % spec.n_classes != 0) {
        throw Error("readout list size must be a multiple of n_classes");
    }
    pad_layout(layout, std::max(spec.min_qubits, *std::max_element(ro.begin(), ro.end()) + 1));
    if (readout != nullptr) {
        *readout = std::move(ro);
    }
    return layout;
}

Model::Model(ModelSpec spec) : spec_(std::move(spec)) {
    layout_ = resolve_layout(spec_, &readout_);
    if (layout_.total_qubits > kMaxSimQubits) {
        throw Error("model needs " + std::to_string(layout_.total_qubits) + " qubits, simulator limit is " +
                    std::to_string(kMaxSimQubits));
    }
    if (spec_.ansatz == AnsatzKind::Tree) {
        ansatz_ = build_tree_ansatz(layout_, spec_.R, spec_.entangler);
    } else {
        ansatz_ = build_vqc(layout_.total_qubits, spec_.blocks, spec_.entangler);
    }
}

Circuit Model::encode(std::span<const double> x) const {
    Circuit c;
    switch (spec_.encoder) {
        case EncoderKind::Bloch:
            if (x.size() != 2) {
                throw Error("bloch encoder expects (theta, phi), got " + std::to_string(x.size()) + " values");
            }
            c = encode_bloch_state(x[0], x[1], layout_);
            break;
        case EncoderKind::Spatial:
            c = encode_with_layout(x, layout_);
            break;
        case EncoderKind::Angle:
            c = angle_encode(x, AngleScheme::named(spec_.angle_scheme));
            break;
    }
    c.set_n_qubits(layout_.total_qubits);
    return c;
}

StateVector Model::encoded_state(std::span<const double> x) const { return run_circuit(encode(x), {}); }

Circuit Model::full_circuit(std::span<const double> x) const {
    Circuit c = encode(x);
    std::vector<uint32_t> id(n_qubits());
    std::iota(id.begin(), id.end(), 0U);
    c.append(ansatz_, id);
    return c;
}

std::vector<double> Model::scores(const StateVector &state) const {
    const auto z = expectation_z(state, readout_);
    const size_t m = readout_.size() / spec_.n_classes;
    std::vector<double> s(spec_.n_classes, 0.0);
    for (size_t k = 0; k < spec_.n_classes; ++k) {
        for (size_t j = 0; j < m; ++j) {
            s[k] += z[k * m + j];
        }
        s[k] /= static_cast<double>(m);
    }
    return s;
}

std::vector<double> Model::scores_from_marginal(std::span<const double> marginal) const {
    const size_t m = readout_.size() / spec_.n_classes;
    std::vector<double> s(spec_.n_classes, 0.0);
    for (size_t b = 0; b < marginal.size(); ++b) {
        for (size_t r = 0; r < readout_.size(); ++r) {
            const double sign = ((b >> r) & 1U) ? -1.0 : 1.0;
            s[r / m] += sign * marginal[b];
        }
    }
    for (auto &v : s) {
        v /= static_cast<double>(m);
    }
    return s;
}

std::vector<double> softmax(std::span<const double> scores) {
    const double mx = *std::max_element(scores.begin(), scores.end());
    std::vector<double> p(scores.size());
    double sum = 0.0;
    for (size_t k = 0; k < scores.size(); ++k) {
        p[k] = std::exp(scores[k] - mx);
        sum += p[k];
    }
    for (auto &v : p) {
        v /= sum;
    }
    return p;
}

int argmax(std::span<const double> v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::vector<double> forward(const Model &model, std::span<const double> params, std::span<const double> x) {
    StateVector s = model.encoded_state(x);
    run_in_place(model.ansatz(), params, s);
    return softmax(model.scores(s));
}

// ---------------------------------------------------------------- gradients

std::vector<std::pair<double, double>> shift_rule(GateKind kind) {
    if (is_controlled_rotation(kind)) {
        const double r2 = std::sqrt(2.0);
        const double cp = (r2 + 1.0) / (4.0 * r2);
        const double cm = (r2 - 1.0) / (4.0 * r2);
        return {{kPi / 2, cp}, {-kPi / 2, -cp}, {3 * kPi / 2, -cm}, {-3 * kPi / 2, cm}};
    }
    if (is_parameterized(kind)) {
        return {{kPi / 2, 0.5}, {-kPi / 2, -0.5}};
    }
    throw Error("gate " + std::string(gate_name(kind)) + " has no shift rule");
}

namespace {

double weighted_z(const StateVector &s, std::span<const uint32_t> qubits, std::span<const double> w) {
    double v = 0.0;
    for (size_t r = 0; r < qubits.size(); ++r) {
        if (w[r] != 0.0) {
            v += w[r] * kernels::serial::expectation_z(s.amplitudes(), qubits[r]);
        }
    }
    return v;
}

// Adds d/dtheta of sum_r w_r <Z_{q_r}> into g, walking the ansatz once and
// re-running the suffix from the cached prefix state for every shift.
void accumulate_grad(const Circuit &ansatz, std::span<const double> params, const StateVector &init,
                     std::span<const uint32_t> readout, std::span<const double> w, std::span<double> g) {
    const auto &ops = ansatz.ops();
    StateVector s = init;
    for (size_t i = 0; i < ops.size(); ++i) {
        const GateOp &op = ops[i];
        if (op.angle.trainable() && op.angle.scale != 0.0) {
            const double angle = op.angle.value(params);
            double d = 0.0;
            for (const auto &[shift, coef] : shift_rule(op.kind)) {
                StateVector t = s;
                apply_gate_angle(t, op, angle + shift);
                run_in_place(ansatz, params, t, i + 1);
                d += coef * weighted_z(t, readout, w);
            }
            g[*op.angle.index] += op.angle.scale * d;
        }
        apply_gate(s, op, params);
    }
}

}  // namespace

std::vector<double> expectation_grad(const Model &model, std::span<const double> params, const StateVector &state,
                                     std::span<const double> weights) {
    if (weights.size() != model.readout().size()) {
        throw Error("expectation_grad: one weight per readout qubit required");
    }
    model.ansatz().validate();
    std::vector<double> g(model.n_params(), 0.0);
    accumulate_grad(model.ansatz(), params, state, model.readout(), weights, g);
    return g;
}

LossGrad loss_and_grad(const Model &model, std::span<const double> params, std::span<const StateVector> states,
                       std::span<const int> labels) {
    if (states.empty()) {
        throw Error("gradient of an empty batch");
    }
    if (states.size() != labels.size()) {
        throw Error("batch states/labels size mismatch");
    }
    if (params.size() < model.n_params()) {
        throw Error("model needs " + std::to_string(model.n_params()) + " parameters, got " +
                    std::to_string(params.size()));
    }
    for (int y : labels) {
        if (y < 0 || static_cast<uint32_t>(y) >= model.spec().n_classes) {
            throw Error("label " + std::to_string(y) + " outside [0, n_classes)");
        }
    }
    const size_t P = model.n_params();
    const size_t B = states.size();
    const auto &readout = model.readout();
    const size_t m = readout.size() / model.spec().n_classes;
    // Per-sample slots so the reduction order (and result) is thread-count independent.
    std::vector<double> per(B * P, 0.0);
    std::vector<double> loss(B, 0.0);
    std::vector<char> correct(B, 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int64_t bi = 0; bi < static_cast<int64_t>(B); ++bi) {
        const auto b = static_cast<size_t>(bi);
        StateVector s = states[b];
        run_in_place(model.ansatz(), params, s);
        const auto sc = model.scores(s);
        const auto p = softmax(sc);
        const int y = labels[b];
        loss[b] = -std::log(std::max(p[y], 1e-300));
        correct[b] = argmax(sc) == y;
        std::vector<double> w(readout.size());
        for (size_t r = 0; r < readout.size(); ++r) {
            const size_t k = r / m;
            w[r] = (p[k] - (static_cast<int>(k) == y ? 1.0 : 0.0)) / static_cast<double>(m);
        }
        accumulate_grad(model.ansatz(), params, states[b], readout, w, std::span<double>(per).subspan(b * P, P));
    }
    LossGrad out;
    out.grad.assign(P, 0.0);
    for (size_t b = 0; b < B; ++b) {
        out.loss += loss[b];
        out.accuracy += correct[b];
        for (size_t j = 0; j < P; ++j) {
            out.grad[j] += per[b * P + j];
        }
    }
    const auto inv = 1.0 / static_cast<double>(B);
    out.loss *= inv;
    out.accuracy *= inv;
    for (auto &v : out.grad) {
        v *= inv;
    }
    return out;
}

LossGrad grad(const Model &model, std::span<const double> params, std::span<const Example> batch) {
    const auto states = encode_all(model, batch);
    std::vector<int> labels;
    for (const auto &e : batch) {
        labels.push_back(e.label);
    }
    return loss_and_grad(model, params, states, labels);
}

// ---------------------------------------------------------------- training

nlohmann::json TrainConfig::to_json() const {
    return {{"batch_size", batch_size}, {"epochs", epochs}, {"lr", lr}, {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json &j) {
    TrainConfig c;
    try {
        c.batch_size = j.value("batch_size", c.batch_size);
        c.epochs = j.value("epochs", c.epochs);
        c.lr = j.value("lr", c.lr);
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed train config: ") + e.what());
    }
    if (c.batch_size < 1 || !(c.lr > 0.0)) {
        throw Error("train config needs batch_size >= 1 and lr > 0");
    }
    return c;
}

nlohmann::json TrainReport::to_json() const {
    nlohmann::json j{{"epoch_loss", epoch_loss},
                     {"epoch_train_acc", epoch_train_acc},
                     {"initial_test_acc", initial_test_acc},
                     {"test_acc", test_acc},
                     {"n_qubits", n_qubits},
                     {"n_params", n_params},
                     {"params", params}};
    j["noisy_test_acc"] = noisy_test_acc ? nlohmann::json(*noisy_test_acc) : nlohmann::json(nullptr);
    j["deviation"] = deviation ? nlohmann::json(*deviation) : nlohmann::json(nullptr);
    return j;
}

std::vector<double> init_params(uint32_t n, uint64_t seed) {
    Rng rng(stream_seed(seed, 0x1A17));
    std::vector<double> p(n);
    for (auto &v : p) {
        v = rng.uniform(-0.1, 0.1);
    }
    return p;
}

std::vector<StateVector> encode_all(const Model &model, std::span<const Example> examples) {
    std::vector<StateVector> out(examples.size(), StateVector(model.n_qubits()));
    // Exceptions cannot cross the parallel region; keep the first one.
    std::string failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (int64_t i = 0; i < static_cast<int64_t>(examples.size()); ++i) {
        try {
            out[i] = model.encoded_state(examples[i].x);
        } catch (const std::exception &e) {
#pragma omp critical
            if (failure.empty()) {
                failure = "sample " + std::to_string(i) + ": " + e.what();
            }
        }
    }
    if (!failure.empty()) {
        throw Error(failure);
    }
    return out;
}

namespace {

double ideal_accuracy(const Model &model, std::span<const double> params, std::span<const StateVector> states,
                      std::span<const Example> ex) {
    if (ex.empty()) {
        return 0.0;
    }
    int64_t ok = 0;
#pragma omp parallel for reduction(+ : ok) schedule(dynamic, 8)
    for (int64_t i = 0; i < static_cast<int64_t>(ex.size()); ++i) {
        StateVector s = states[i];
        run_in_place(model.ansatz(), params, s);
        ok += argmax(model.scores(s)) == ex[i].label;
    }
    return static_cast<double>(ok) / static_cast<double>(ex.size());
}

}  // namespace

TrainReport train(const Model &model, const Dataset &data, const TrainConfig &cfg) {
    if (data.train.empty()) {
        throw Error("training set is empty");
    }
    if (cfg.batch_size < 1 || !(cfg.lr > 0.0)) {
        throw Error("train config needs batch_size >= 1 and lr > 0");
    }
    TrainReport rep;
    rep.n_qubits = model.n_qubits();
    rep.n_params = model.n_params();
    std::vector<double> params = init_params(model.n_params(), cfg.seed);

    const auto train_states = encode_all(model, data.train);
    const auto test_states = encode_all(model, data.test);
    rep.initial_test_acc = ideal_accuracy(model, params, test_states, data.test);

    Rng rng(stream_seed(cfg.seed, 0x5EED));
    std::vector<size_t> order(data.train.size());
    std::iota(order.begin(), order.end(), size_t{0});
    const size_t P = params.size();
    std::vector<double> m1(P, 0.0);
    std::vector<double> m2(P, 0.0);
    constexpr double kB1 = 0.9;
    constexpr double kB2 = 0.999;
    constexpr double kEps = 1e-8;
    uint64_t step = 0;
    std::vector<StateVector> batch_states;
    std::vector<int> batch_labels;
    for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_in_place(order, rng);
        double loss_sum = 0.0;
        double acc_sum = 0.0;
        for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const size_t end = std::min(order.size(), start + cfg.batch_size);
            batch_states.clear();
            batch_labels.clear();
            for (size_t i = start; i < end; ++i) {
                batch_states.push_back(train_states[order[i]]);
                batch_labels.push_back(data.train[order[i]].label);
            }
            const LossGrad lg = loss_and_grad(model, params, batch_states, batch_labels);
            const auto nb = static_cast<double>(end - start);
            loss_sum += lg.loss * nb;
            acc_sum += lg.accuracy * nb;
            ++step;
            const double c1 = 1.0 - std::pow(kB1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(kB2, static_cast<double>(step));
            for (size_t j = 0; j < P; ++j) {
                m1[j] = kB1 * m1[j] + (1 - kB1) * lg.grad[j];
                m2[j] = kB2 * m2[j] + (1 - kB2) * lg.grad[j] * lg.grad[j];
                params[j] -= cfg.lr * (m1[j] / c1) / (std::sqrt(m2[j] / c2) + kEps);
            }
        }
        const auto n = static_cast<double>(order.size());
        rep.epoch_loss.push_back(loss_sum / n);
        rep.epoch_train_acc.push_back(acc_sum / n);
    }
    rep.test_acc = cfg.epochs == 0 ? rep.initial_test_acc : ideal_accuracy(model, params, test_states, data.test);
    rep.params = params;
    const auto &st = rng.state();
    rep.rng_state = {st[0], st[1], st[2], st[3]};
    return rep;
}

// ---------------------------------------------------------------- evaluation

std::vector<uint32_t> default_mapping(const CouplingGraph &g, uint32_t n) {
    if (n > g.n_phys()) {
        throw Error("model needs " + std::to_string(n) + " qubits, device has " + std::to_string(g.n_phys()));
    }
    auto paths = rank_candidates(find_paths(g, n), 1);
    if (!paths.empty()) {
        return paths.front().path;
    }
    const uint32_t N = g.longest_path_qubits();
    const auto longest = rank_candidates(find_paths(g, N), 1);
    const Candidate G = grow_subgraph(g, longest.front(), n);
    const auto order = placement_order(G);
    return {order.begin(), order.begin() + n};
}

EvalResult evaluate(const Model &model, std::span<const double> params, std::span<const Example> samples,
                    const NoisyEval *noisy) {
    EvalResult r;
    if (samples.empty()) {
        return r;
    }
    const auto states = encode_all(model, samples);
    r.accuracy = ideal_accuracy(model, params, states, samples);
    if (!noisy) {
        return r;
    }
    if (!noisy->graph) {
        throw Error("noisy evaluation needs a coupling graph");
    }
    noisy->noise.validate();
    const CouplingGraph &g = *noisy->graph;
    const std::vector<uint32_t> mapping =
        noisy->mapping.empty() ? default_mapping(g, model.n_qubits()) : noisy->mapping;
    int64_t ok = 0;
    double dev = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const Circuit logical = model.full_circuit(samples[i].x);
        StateVector ideal = states[i];
        run_in_place(model.ansatz(), params, ideal);
        const auto ideal_marg = marginal(ideal.probabilities(), model.readout());

        const CompiledCircuit cc = route_naive(logical, g, mapping);
        std::vector<uint32_t> where;
        const Circuit phys = compact(cc, where);
        std::vector<uint32_t> ro;
        for (uint32_t q : model.readout()) {
            ro.push_back(where[q]);
        }
        NoiseModel nm = noisy->noise;
        nm.seed = stream_seed(noisy->noise.seed, i);
        const auto dist = run_noisy(phys, params, nm, noisy->shots);
        const auto marg = marginal(dist, ro);
        ok += argmax(model.scores_from_marginal(marg)) == samples[i].label;
        dev += deviation(ideal_marg, marg);
    }
    r.noisy_accuracy = static_cast<double>(ok) / static_cast<double>(samples.size());
    r.deviation = dev / static_cast<double>(samples.size());
    return r;
}

nlohmann::json checkpoint_json(const ModelSpec &spec, const TrainReport &report, const TrainConfig &cfg) {
    return {{"model", spec.to_json()},
            {"params", report.params},
            {"config", cfg.to_json()},
            {"rng_state", report.rng_state}};
}

}  // namespace stvqc
