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

// stvqc command line: gen-data, train, search, compile, eval, report.

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stvqc/compiler.hpp"
#include "stvqc/data.hpp"
#include "stvqc/experiments.hpp"
#include "stvqc/qasm.hpp"
#include "stvqc/search.hpp"
#include "stvqc/trainer.hpp"

namespace fs = std::filesystem;
using namespace stvqc;
using nlohmann::json;

namespace {

struct Global {
    uint64_t seed = 0;
    int jobs = 0;
    std::string out;
};

struct DataOpts {
    std::string id;
    std::string train_csv;
    std::string test_csv;
    std::string mnist;
    std::vector<int> classes{3, 6};
    uint32_t n_train = 1600;
    uint32_t n_test = 320;
};

struct NoiseOpts {
    bool noisy = false;
    std::string topology;
    double p1 = 0.001;
    double p2 = 0.01;
    double p_ro = 0.02;
    uint64_t shots = 1024;
};

struct LoadedData {
    Dataset data;
    bool image = false;
    std::string name;
};

void add_data_opts(CLI::App *cmd, DataOpts &d) {
    cmd->add_option("--data-id", d.id, "regenerate a Bloch dataset (L1, L2, N1..N6) from --seed");
    cmd->add_option("--train-csv", d.train_csv, "theta,phi,label CSV")->check(CLI::ExistingFile);
    cmd->add_option("--test-csv", d.test_csv, "theta,phi,label CSV")->check(CLI::ExistingFile);
    cmd->add_option("--mnist", d.mnist, "directory with MNIST IDX files")->check(CLI::ExistingDirectory);
    cmd->add_option("--classes", d.classes, "digits kept from MNIST")->delimiter(',');
    cmd->add_option("--n-train", d.n_train, "synthetic train size");
    cmd->add_option("--n-test", d.n_test, "synthetic test size");
}

void add_noise_opts(CLI::App *cmd, NoiseOpts &n) {
    cmd->add_flag("--noisy", n.noisy, "also compile to --topology and evaluate under noise");
    cmd->add_option("--topology", n.topology, "coupling graph JSON")->check(CLI::ExistingFile);
    cmd->add_option("--p1", n.p1, "depolarizing probability per 1-qubit gate");
    cmd->add_option("--p2", n.p2, "depolarizing probability per 2-qubit gate");
    cmd->add_option("--p-ro", n.p_ro, "readout flip probability");
    cmd->add_option("--shots", n.shots, "trajectories per sample");
}

LoadedData load_data(const DataOpts &d, uint64_t seed) {
    const int sources = !d.id.empty() + !d.train_csv.empty() + !d.mnist.empty();
    if (sources != 1) {
        throw Error("give exactly one of --data-id, --train-csv/--test-csv or --mnist");
    }
    LoadedData out;
    if (!d.id.empty()) {
        DatasetSpec spec;
        spec.id = d.id;
        spec.seed = seed;
        spec.n_train = d.n_train;
        spec.n_test = d.n_test;
        out.data = to_dataset(gen_bloch(spec));
        out.name = d.id;
    } else if (!d.train_csv.empty()) {
        if (d.test_csv.empty()) {
            throw Error("--train-csv needs --test-csv");
        }
        BlochDataset b;
        b.train = read_bloch_csv(d.train_csv);
        b.test = read_bloch_csv(d.test_csv);
        out.data = to_dataset(b);
        out.name = fs::path(d.train_csv).stem().string();
    } else {
        out.data = to_dataset(ingest_images(d.mnist, d.classes, 4, 4, 200));
        out.image = true;
        out.name = "mnist";
    }
    return out;
}

/// Enough to reload the same data later (stored in checkpoints).
json data_json(const DataOpts &d, uint64_t seed) {
    if (!d.id.empty()) {
        return {{"id", d.id}, {"seed", seed}, {"n_train", d.n_train}, {"n_test", d.n_test}};
    }
    if (!d.train_csv.empty()) {
        return {{"train_csv", fs::absolute(d.train_csv).string()}, {"test_csv", fs::absolute(d.test_csv).string()}};
    }
    return {{"mnist", fs::absolute(d.mnist).string()}, {"classes", d.classes}};
}

DataOpts data_from_json(const json &j, uint64_t *seed) {
    DataOpts d;
    d.id = j.value("id", "");
    d.train_csv = j.value("train_csv", "");
    d.test_csv = j.value("test_csv", "");
    d.mnist = j.value("mnist", "");
    d.classes = j.value("classes", d.classes);
    d.n_train = j.value("n_train", d.n_train);
    d.n_test = j.value("n_test", d.n_test);
    *seed = j.value("seed", *seed);
    return d;
}

std::optional<NoiseModel> noise_model(const NoiseOpts &n, uint64_t seed) {
    if (!n.noisy) {
        return std::nullopt;
    }
    return NoiseModel{n.p1, n.p2, n.p_ro, seed};
}

CouplingGraph load_topology(const NoiseOpts &n, bool required) {
    if (n.topology.empty()) {
        if (required) {
            throw Error("--topology is required here");
        }
        return {};
    }
    return CouplingGraph::load(n.topology);
}

fs::path out_dir(const Global &g) {
    std::string dir = g.out;
    if (dir.empty()) {
        const char *env = std::getenv("STVQC_OUT");
        dir = env != nullptr ? env : ".";
    }
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
        throw Error("failed to write '" + path.string() + "'");
    }
}

void write_json(const fs::path &path, const json &j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw Error("cannot open '" + path + "'");
    }
    try {
        return json::parse(f);
    } catch (const json::exception &e) {
        throw Error("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Accepts a bare ModelSpec, a checkpoint or a search best.json.
ModelSpec spec_from_file(const std::string &path) {
    const json j = read_json(path);
    try {
        if (j.contains("spec")) {
            return ModelSpec::from_json(j.at("spec"));
        }
        if (j.contains("model")) {
            return ModelSpec::from_json(j.at("model"));
        }
        return ModelSpec::from_json(j);
    } catch (const json::exception &e) {
        throw Error("'" + path + "' does not hold a model spec: " + e.what());
    }
}

// ------------------------------------------------------------------ commands

void cmd_gen_data(const Global &g, const DataOpts &d) {
    const auto dir = out_dir(g);
    if (!d.mnist.empty()) {
        const auto img = ingest_images(d.mnist, d.classes, 4, 4, 200);
        std::ostringstream tr, te;
        write_image_csv(tr, img.train);
        write_image_csv(te, img.test);
        write_text(dir / "mnist_train.csv", tr.str());
        write_text(dir / "mnist_test.csv", te.str());
        write_json(dir / "mnist_manifest.json", {{"source", d.mnist},
                                                 {"classes", d.classes},
                                                 {"size", {4, 4}},
                                                 {"n_train", img.train.size()},
                                                 {"n_test", img.test.size()}});
        std::cout << "wrote " << img.train.size() << " train / " << img.test.size() << " test images to "
                  << dir.string() << "\n";
        return;
    }
    if (d.id.empty()) {
        throw Error("gen-data needs --id or --mnist");
    }
    DatasetSpec spec;
    spec.id = d.id;
    spec.seed = g.seed;
    spec.n_train = d.n_train;
    spec.n_test = d.n_test;
    const auto b = gen_bloch(spec);
    std::ostringstream tr, te;
    write_bloch_csv(tr, b.train);
    write_bloch_csv(te, b.test);
    write_text(dir / (d.id + "_train.csv"), tr.str());
    write_text(dir / (d.id + "_test.csv"), te.str());
    write_json(dir / (d.id + "_manifest.json"), manifest_json(spec));
    std::cout << "wrote " << d.id << " (" << b.train.size() << " train, " << b.test.size() << " test) to "
              << dir.string() << "\n";
}

struct TrainOpts {
    std::string preset = "st-vqc";
    std::string model;
    uint32_t epochs = 0;  // 0 = 50 synthetic / 20 images
    uint32_t batch = 128;
    double lr = 0.005;
};

TrainConfig train_config(const TrainOpts &t, bool image, uint64_t seed) {
    TrainConfig cfg;
    cfg.epochs = t.epochs > 0 ? t.epochs : (image ? 20 : 50);
    cfg.batch_size = t.batch;
    cfg.lr = t.lr;
    cfg.seed = seed;
    return cfg;
}

json eval_json(const EvalResult &r) {
    json j{{"accuracy", r.accuracy}};
    if (r.noisy_accuracy) {
        j["noisy_accuracy"] = *r.noisy_accuracy;
    }
    if (r.deviation) {
        j["deviation"] = *r.deviation;
    }
    return j;
}

void cmd_train(const Global &g, const DataOpts &d, const TrainOpts &t, const NoiseOpts &n) {
    const auto data = load_data(d, g.seed);
    const ModelSpec spec = t.model.empty() ? preset_spec(t.preset, data.image) : spec_from_file(t.model);
    const Model model(spec);
    const auto cfg = train_config(t, data.image, g.seed);
    auto report = train(model, data.data, cfg);
    if (n.noisy) {
        const auto graph = load_topology(n, true);
        NoisyEval ne;
        ne.noise = *noise_model(n, g.seed);
        ne.graph = &graph;
        ne.shots = n.shots;
        const auto r = evaluate(model, report.params, data.data.test, &ne);
        report.noisy_test_acc = r.noisy_accuracy;
        report.deviation = r.deviation;
    }
    const auto dir = out_dir(g);
    json rep = report.to_json();
    rep["dataset"] = data.name;
    rep["model"] = spec.to_json();
    write_json(dir / "report.json", rep);
    json ck = checkpoint_json(spec, report, cfg);
    ck["data"] = data_json(d, g.seed);
    write_json(dir / "checkpoint.json", ck);
    std::printf("%s: test acc %.4f (%u qubits, %u params)", data.name.c_str(), report.test_acc, report.n_qubits,
                report.n_params);
    if (report.noisy_test_acc) {
        std::printf(", noisy %.4f, deviation %.4f", *report.noisy_test_acc, *report.deviation);
    }
    std::printf("\n");
}

struct SearchOpts {
    uint32_t episodes = 60;
    std::string kind;
    std::vector<std::string> segments;
    bool random = false;
    double rho = 0.5;
    uint32_t top_k = 2;
    std::vector<uint32_t> dup{1, 2, 3, 4};
    std::vector<uint32_t> layers{1, 2, 3};
    std::vector<std::string> spatial;  // "W,H,S" each
    bool retrain = true;
};

GroupSpec parse_group(const std::string &s) {
    GroupSpec f;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> f.W >> c1 >> f.H >> c2 >> f.S) || c1 != ',' || c2 != ',') {
        throw Error("group '" + s + "' must look like W,H,S");
    }
    return f;
}

void cmd_search(const Global &g, const DataOpts &d, const TrainOpts &t, const SearchOpts &s, const NoiseOpts &n) {
    const auto data = load_data(d, g.seed);
    const auto graph = load_topology(n, true);
    const uint32_t N = graph.longest_path_qubits();

    std::array<bool, 4> mask{};
    if (!s.segments.empty()) {
        for (const auto &name : s.segments) {
            mask[static_cast<size_t>(segment_from_name(name))] = true;
        }
    } else {
        const std::string kind = s.kind.empty() ? (data.image ? "linear-image" : "nonlinear") : s.kind;
        mask = select_optimizers(data_kind_from_name(kind));
    }

    ModelSpec base = data.image ? preset_spec("st-vqc", true) : preset_spec("st-vqc", false);
    base.counts.clear();
    std::vector<GroupSpec> spatial;
    for (const auto &txt : s.spatial) {
        spatial.push_back(parse_group(txt));
    }
    if (spatial.empty()) {
        spatial = data.image ? enumerate_spatial(4, 4, std::min(N + 1, kMaxSimQubits)) : std::vector{GroupSpec{}};
    }
    const uint32_t max_size = std::max(N + 1, 2U);
    auto candidates = build_candidate_set(graph, s.top_k, max_size);
    const auto space = make_space(base, spatial, s.dup, s.layers, static_cast<uint32_t>(candidates.size()), mask);

    const auto full = train_config(t, data.image, g.seed);
    EvalConfig ec;
    ec.train = full;
    ec.train.epochs = std::max(1U, full.epochs / 2);
    ec.rho = s.rho;
    ec.noise = noise_model(n, g.seed);
    ec.shots = n.shots;
    DesignProblem problem(space, base, data.data, graph, candidates, ec);

    SearchConfig sc;
    sc.episodes = s.episodes;
    sc.random = s.random;
    sc.seed = g.seed;
    const auto result = search(problem, sc);

    const auto dir = out_dir(g);
    {
        std::ostringstream log, hist;
        write_search_log(log, result);
        write_history_csv(hist, result);
        write_text(dir / "search_log.jsonl", log.str());
        write_text(dir / "history.csv", hist.str());
    }
    const auto &best = result.history[result.best];
    json bj = best.sample.to_json();
    bj["episode"] = best.index;
    bj["reward"] = {{"acc", best.eval.reward.acc}, {"P", best.eval.reward.P}, {"bn", best.eval.reward.bn},
                    {"bq", best.eval.reward.bq}, {"rho", best.eval.reward.rho}, {"R", best.eval.reward.R}};
    bj["space"] = space.to_json();
    if (best.sample.candidate < candidates.size()) {
        bj["placement"] = candidate_to_json(candidates[best.sample.candidate]);
    }
    if (s.retrain && best.sample.feasible) {
        // The returned design is retrained at the full budget.
        const Model model(best.sample.spec);
        const auto rep = train(model, data.data, full);
        bj["retrained_acc"] = rep.test_acc;
        bj["train_config"] = full.to_json();
    }
    write_json(dir / "best.json", bj);
    std::printf("best of %u episodes: episode %u, R %.4f, acc %.4f, P %d, n %u", s.episodes, best.index,
                best.eval.reward.R, best.eval.reward.acc, best.eval.reward.P, best.sample.n);
    if (bj.contains("retrained_acc")) {
        std::printf(", retrained acc %.4f", bj["retrained_acc"].get<double>());
    }
    std::printf("\n");
}

struct CompileOpts {
    std::string circuit;
    std::string ansatz = "ring";
    uint32_t qubits = 4;
    uint32_t blocks = 1;
    std::string strategy = "naive";
};

void cmd_compile(const Global &g, const CompileOpts &c, const NoiseOpts &n) {
    const auto graph = load_topology(n, true);
    CompiledCircuit cc;
    if (c.strategy == "naive") {
        const Circuit logical = !c.circuit.empty()
                                    ? read_qasm_file(c.circuit)
                                    : build_vqc(c.qubits, c.blocks, entangler_from_name(c.ansatz));
        const auto mapping = default_mapping(graph, logical.n_qubits());
        cc = route_naive(logical, graph, mapping);
    } else if (c.strategy == "swap-free") {
        if (!c.circuit.empty()) {
            throw Error("the swap-free strategy builds its own ansatz; use --qubits/--blocks instead of --circuit");
        }
        const auto cands = build_candidate_set(graph, 1, c.qubits);
        const Candidate *pick = nullptr;
        for (const auto &cand : cands) {
            if (cand.size() == c.qubits) {
                pick = &cand;
                break;
            }
        }
        if (pick == nullptr) {
            throw Error("no " + std::to_string(c.qubits) + "-qubit placement on this topology");
        }
        const auto design = build_swap_free(c.qubits, *pick, c.blocks);
        cc = route_naive(design.fragment, graph, design.mapping);
    } else {
        throw Error("unknown strategy '" + c.strategy + "' (expected naive or swap-free)");
    }
    const auto dir = out_dir(g);
    write_text(dir / "compiled.qasm", to_qasm(cc.circuit));
    json m = metrics_to_json(metrics(cc));
    m["strategy"] = c.strategy;
    m["mapping"] = cc.mapping;
    m["final_mapping"] = cc.final_mapping;
    write_json(dir / "metrics.json", m);
    std::cout << m.dump() << "\n";
}

struct EvalOpts {
    std::string checkpoint;
};

void cmd_eval(const Global &g, const DataOpts &d, const EvalOpts &e, const NoiseOpts &n) {
    const json ck = read_json(e.checkpoint);
    ModelSpec spec;
    std::vector<double> params;
    try {
        spec = ModelSpec::from_json(ck.at("model"));
        params = ck.at("params").get<std::vector<double>>();
    } catch (const json::exception &ex) {
        throw Error("'" + e.checkpoint + "' is not a checkpoint: " + ex.what());
    }
    const Model model(spec);
    if (params.size() != model.n_params()) {
        throw Error("checkpoint has " + std::to_string(params.size()) + " parameters, model needs " +
                    std::to_string(model.n_params()));
    }
    // no data flags: reuse what the checkpoint was trained on
    const bool given = !d.id.empty() || !d.train_csv.empty() || !d.mnist.empty();
    uint64_t data_seed = g.seed;
    if (!given && !ck.contains("data")) {
        throw Error("checkpoint records no dataset; pass --data-id, --train-csv/--test-csv or --mnist");
    }
    const DataOpts stored = given ? d : data_from_json(ck["data"], &data_seed);
    const auto data = load_data(stored, data_seed);
    EvalResult r;
    if (n.noisy) {
        const auto graph = load_topology(n, true);
        NoisyEval ne;
        ne.noise = *noise_model(n, g.seed);
        ne.graph = &graph;
        ne.shots = n.shots;
        r = evaluate(model, params, data.data.test, &ne);
    } else {
        r = evaluate(model, params, data.data.test);
    }
    json j = eval_json(r);
    j["dataset"] = data.name;
    write_json(out_dir(g) / "eval.json", j);
    std::cout << j.dump() << "\n";
}

struct ReportOpts {
    std::vector<std::string> ids{"L1", "L2", "N1", "N2", "N3", "N4", "N5", "N6"};
    uint32_t seeds = 1;
    uint32_t epochs = 50;
    std::string mnist;
};

void cmd_report(const Global &g, const ReportOpts &r) {
    std::vector<AccuracyRow> rows;
    TrainConfig cfg;
    cfg.epochs = r.epochs;
    for (const auto &id : r.ids) {
        for (uint32_t k = 0; k < r.seeds; ++k) {
            auto part = bloch_table(id, g.seed + k, cfg);
            for (const auto &row : part) {
                std::printf("%s %-7s seed %llu  acc %.4f\n", row.dataset.c_str(), row.model.c_str(),
                            static_cast<unsigned long long>(row.seed), row.test_acc);
            }
            rows.insert(rows.end(), part.begin(), part.end());
        }
    }
    if (!r.mnist.empty()) {
        const auto data = to_dataset(ingest_images(r.mnist, {3, 6}, 4, 4, 200));
        TrainConfig icfg;
        icfg.epochs = 20;
        icfg.seed = g.seed;
        for (const char *name : {"vqc", "st-vqc"}) {
            const Model model(preset_spec(name, true));
            const auto rep = train(model, data, icfg);
            rows.push_back({"mnist", name, g.seed, rep.test_acc, model.n_qubits(), model.n_params(), 0.0});
            std::printf("mnist %-7s acc %.4f\n", name, rep.test_acc);
        }
    }
    std::ostringstream csv;
    write_rows_csv(csv, rows);
    write_text(out_dir(g) / "report.csv", csv.str());
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"stvqc: spatial-temporal VQC design, training and compilation"};
    app.set_config("--config", "", "TOML file mirroring the command-line flags");
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "global seed");
    app.add_option("--jobs", g.jobs, "worker threads (0 = OpenMP default)");
    app.add_option("--out", g.out, "output directory (default $STVQC_OUT or .)");

    DataOpts data;
    NoiseOpts noise;
    TrainOpts topt;

    auto *gen = app.add_subcommand("gen-data", "write a dataset as CSV plus a manifest");
    gen->add_option("--id", data.id, "L1, L2, N1..N6");
    gen->add_option("--mnist", data.mnist, "convert MNIST IDX files instead")->check(CLI::ExistingDirectory);
    gen->add_option("--classes", data.classes, "digits kept from MNIST")->delimiter(',');
    gen->add_option("--n-train", data.n_train, "train size");
    gen->add_option("--n-test", data.n_test, "test size");

    auto *tr = app.add_subcommand("train", "train a model and write report.json + checkpoint.json");
    add_data_opts(tr, data);
    add_noise_opts(tr, noise);
    tr->add_option("--preset", topt.preset, "vqc, st-vqc or amp");
    tr->add_option("--model", topt.model, "model spec JSON (also accepts checkpoints and best.json)")
        ->check(CLI::ExistingFile);
    tr->add_option("--epochs", topt.epochs, "epochs (default 50 synthetic, 20 images)");
    tr->add_option("--batch", topt.batch, "batch size");
    tr->add_option("--lr", topt.lr, "Adam learning rate");

    SearchOpts sopt;
    auto *se = app.add_subcommand("search", "RL design search; writes search_log.jsonl, history.csv, best.json");
    add_data_opts(se, data);
    add_noise_opts(se, noise);
    se->add_option("--episodes", sopt.episodes, "episode budget");
    se->add_option("--kind", sopt.kind, "linear-image, nonlinear or vector (selects the active segments)");
    se->add_option("--segments", sopt.segments, "explicit active segments")->delimiter(',');
    se->add_flag("--random", sopt.random, "uniform random sampling instead of the controller");
    se->add_option("--rho", sopt.rho, "penalty weight");
    se->add_option("--top-k", sopt.top_k, "candidates kept per qubit count");
    se->add_option("--dup", sopt.dup, "duplication choices")->delimiter(',');
    se->add_option("--layers", sopt.layers, "per-level repeat choices")->delimiter(',');
    se->add_option("--spatial", sopt.spatial, "group windows, e.g. --spatial 2,2,2 --spatial 4,4,1");
    se->add_option("--epochs", topt.epochs, "final-training epochs (search uses half)");
    se->add_option("--batch", topt.batch, "batch size");
    se->add_option("--lr", topt.lr, "Adam learning rate");
    se->add_flag("!--no-retrain", sopt.retrain, "skip retraining the best design");

    CompileOpts copt;
    auto *co = app.add_subcommand("compile", "route a circuit onto a topology; writes compiled.qasm + metrics.json");
    co->add_option("--circuit", copt.circuit, "OpenQASM 2 input")->check(CLI::ExistingFile);
    co->add_option("--ansatz", copt.ansatz, "ring or path (when no --circuit)");
    co->add_option("--qubits", copt.qubits, "logical qubits");
    co->add_option("--blocks", copt.blocks, "ansatz blocks");
    co->add_option("--strategy", copt.strategy, "naive or swap-free");
    co->add_option("--topology", noise.topology, "coupling graph JSON")->check(CLI::ExistingFile);

    EvalOpts eopt;
    auto *ev = app.add_subcommand("eval", "evaluate a checkpoint; writes eval.json");
    add_data_opts(ev, data);
    add_noise_opts(ev, noise);
    ev->add_option("--checkpoint", eopt.checkpoint, "checkpoint.json from train")->required();

    ReportOpts ropt;
    auto *rp = app.add_subcommand("report", "accuracy table of linear, mlp, vqc and st-vqc; writes report.csv");
    rp->add_option("--ids", ropt.ids, "dataset ids")->delimiter(',');
    rp->add_option("--seeds", ropt.seeds, "seeds per dataset, starting at --seed");
    rp->add_option("--epochs", ropt.epochs, "quantum training epochs");
    rp->add_option("--mnist", ropt.mnist, "also run MNIST-2 from this directory")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);
    try {
        if (g.jobs > 0) {
            omp_set_num_threads(g.jobs);
        }
        if (gen->parsed()) {
            cmd_gen_data(g, data);
        } else if (tr->parsed()) {
            cmd_train(g, data, topt, noise);
        } else if (se->parsed()) {
            cmd_search(g, data, topt, sopt, noise);
        } else if (co->parsed()) {
            cmd_compile(g, copt, noise);
        } else if (ev->parsed()) {
            cmd_eval(g, data, eopt, noise);
        } else if (rp->parsed()) {
            cmd_report(g, ropt);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
