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

#include "stvqc/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "stvqc/baselines.hpp"
#include "stvqc/common.hpp"

namespace stvqc {

ModelSpec preset_spec(const std::string &name, bool image) {
    ModelSpec s;
    if (!image) {
        s.encoder = EncoderKind::Bloch;
        if (name == "vqc") {
            s.ansatz = AnsatzKind::Vqc;
            s.blocks = 3;
            s.min_qubits = 2;
            return s;
        }
        if (name == "st-vqc") {
            s.counts = {2};
            s.R.repeats = {1, 3};
            return s;
        }
        throw Error("unknown Bloch preset '" + name + "' (expected vqc or st-vqc)");
    }
    s.width = 4;
    s.height = 4;
    if (name == "vqc") {
        s.encoder = EncoderKind::Angle;
        s.angle_scheme = "4x4_ryzxy";
        s.ansatz = AnsatzKind::Vqc;
        s.blocks = 2;
        return s;
    }
    s.encoder = EncoderKind::Spatial;
    if (name == "st-vqc") {
        s.f = {4, 2, 2};
        s.R.repeats = {2, 2};
        return s;
    }
    if (name == "amp") {
        s.f = {4, 4, 1};
        s.R.repeats = {3};
        return s;
    }
    throw Error("unknown image preset '" + name + "' (expected vqc, st-vqc or amp)");
}

namespace {

FeatureSet features(const std::vector<BlochSample> &v) {
    FeatureSet f;
    for (const auto &s : v) {
        const auto a = encode_bloch(s);
        f.x.push_back({a.begin(), a.end()});
        f.y.push_back(s.label);
    }
    return f;
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<AccuracyRow> bloch_table(const std::string &id, uint64_t seed, const TrainConfig &cfg) {
    DatasetSpec ds;
    ds.id = id;
    ds.seed = seed;
    const auto bloch = gen_bloch(ds);
    const auto data = to_dataset(bloch);
    const auto train_f = features(bloch.train);
    const auto test_f = features(bloch.test);
    std::vector<AccuracyRow> rows;

    auto t0 = std::chrono::steady_clock::now();
    const auto lin = train_linear(train_f);
    rows.push_back({id, "linear", seed, accuracy(lin, test_f), 0, static_cast<uint32_t>(lin.weights.size() + 1),
                    since(t0)});

    t0 = std::chrono::steady_clock::now();
    MlpConfig mc;
    mc.seed = seed;
    const auto mlp = train_quad_mlp(train_f, mc);
    rows.push_back({id, "mlp", seed, accuracy(mlp, test_f), 0,
                    static_cast<uint32_t>(mlp.w1.size() + mlp.b1.size() + mlp.w2.size() + 1), since(t0)});

    for (const char *name : {"vqc", "st-vqc"}) {
        t0 = std::chrono::steady_clock::now();
        const Model model(preset_spec(name, false));
        TrainConfig c = cfg;
        c.seed = seed;
        const auto rep = train(model, data, c);
        rows.push_back({id, name, seed, rep.test_acc, model.n_qubits(), model.n_params(), since(t0)});
    }
    return rows;
}

void write_rows_csv(std::ostream &out, const std::vector<AccuracyRow> &rows) {
    out << "dataset,model,seed,test_acc,n_qubits,n_params,seconds\n";
    char buf[256];
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%llu,%.6f,%u,%u,%.3f\n", r.dataset.c_str(), r.model.c_str(),
                      static_cast<unsigned long long>(r.seed), r.test_acc, r.n_qubits, r.n_params, r.seconds);
        out << buf;
    }
}

}  // namespace stvqc
