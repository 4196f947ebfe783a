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

#include "stvqc/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace stvqc {

namespace {

constexpr std::array<const char *, 4> kSegmentNames{"spatial", "duplication", "layer", "physical"};

// Qubit budget used only to measure demand; the real limit is checked after.
constexpr uint32_t kDemandBudget = 1U << 20;

}  // namespace

std::string segment_name(Segment s) { return kSegmentNames[static_cast<size_t>(s)]; }

Segment segment_from_name(const std::string &name) {
    for (size_t i = 0; i < kSegmentNames.size(); ++i) {
        if (name == kSegmentNames[i]) {
            return static_cast<Segment>(i);
        }
    }
    throw Error("unknown segment '" + name + "' (expected spatial, duplication, layer or physical)");
}

std::vector<SearchSpace::Slot> SearchSpace::slots() const {
    std::vector<Slot> out;
    out.push_back({Segment::Spatial, static_cast<uint32_t>(spatial.size())});
    for (uint32_t i = 0; i < dup_slots; ++i) {
        out.push_back({Segment::Duplication, static_cast<uint32_t>(dup_choices.size())});
    }
    for (uint32_t i = 0; i < layer_slots; ++i) {
        out.push_back({Segment::Layer, static_cast<uint32_t>(layer_choices.size())});
    }
    out.push_back({Segment::Physical, physical_choices});
    return out;
}

void SearchSpace::validate() const {
    if (spatial.empty()) {
        throw Error("search space has no spatial choices");
    }
    if (is_active(Segment::Duplication) && (dup_slots == 0 || dup_choices.empty())) {
        throw Error("duplication segment is active but empty");
    }
    if (is_active(Segment::Layer) && (layer_slots == 0 || layer_choices.empty())) {
        throw Error("layer segment is active but empty");
    }
    if (is_active(Segment::Physical) && physical_choices == 0) {
        throw Error("physical segment is active but has no candidates");
    }
    for (uint32_t c : dup_choices) {
        if (c < 1) {
            throw Error("duplication choices must be >= 1");
        }
    }
    for (uint32_t r : layer_choices) {
        if (r < 1) {
            throw Error("layer choices must be >= 1");
        }
    }
    if (vqc_blocks < 1) {
        throw Error("vqc_blocks must be >= 1");
    }
}

nlohmann::json SearchSpace::to_json() const {
    nlohmann::json sp = nlohmann::json::array();
    for (const auto &f : spatial) {
        sp.push_back({f.W, f.H, f.S});
    }
    nlohmann::json act = nlohmann::json::array();
    for (size_t i = 0; i < 4; ++i) {
        if (active[i]) {
            act.push_back(kSegmentNames[i]);
        }
    }
    return {{"spatial", sp},
            {"dup_slots", dup_slots},
            {"dup_choices", dup_choices},
            {"layer_slots", layer_slots},
            {"layer_choices", layer_choices},
            {"physical_choices", physical_choices},
            {"active", act},
            {"vqc_blocks", vqc_blocks}};
}

DataKind data_kind_from_name(const std::string &name) {
    if (name == "linear-image") {
        return DataKind::LinearImage;
    }
    if (name == "nonlinear") {
        return DataKind::Nonlinear;
    }
    if (name == "vector") {
        return DataKind::Vector;
    }
    throw Error("unknown data kind '" + name + "' (expected linear-image, nonlinear or vector)");
}

std::array<bool, 4> select_optimizers(DataKind kind) {
    std::array<bool, 4> mask{true, true, true, true};
    if (kind == DataKind::LinearImage) {
        mask[static_cast<size_t>(Segment::Duplication)] = false;
    } else if (kind == DataKind::Vector) {
        mask[static_cast<size_t>(Segment::Layer)] = false;
    }
    return mask;
}

std::vector<GroupSpec> enumerate_spatial(uint32_t width, uint32_t height, uint32_t max_qubits) {
    std::vector<GroupSpec> out;
    for (uint32_t W = 1; W <= width; ++W) {
        for (uint32_t H = 1; H <= height; ++H) {
            for (uint32_t S = 1; S <= std::min(W, H); ++S) {
                // S <= W, H keeps windows touching; the remainder test puts the last one on the edge.
                if ((width - W) % S != 0 || (height - H) % S != 0) {
                    continue;
                }
                const GroupSpec f{W, H, S};
                if (f.group_count(width, height) * f.qubits() <= max_qubits) {
                    out.push_back(f);
                }
            }
        }
    }
    return out;
}

SearchSpace make_space(const ModelSpec &base, std::vector<GroupSpec> spatial, std::vector<uint32_t> dup_choices,
                       std::vector<uint32_t> layer_choices, uint32_t physical_choices, std::array<bool, 4> active) {
    SearchSpace space;
    space.active = active;
    space.spatial = std::move(spatial);
    space.dup_choices = std::move(dup_choices);
    space.layer_choices = std::move(layer_choices);
    space.physical_choices = physical_choices;
    if (space.spatial.empty()) {
        space.spatial.push_back(base.f);
    }
    const uint32_t max_c = space.is_active(Segment::Duplication) && !space.dup_choices.empty()
                               ? *std::max_element(space.dup_choices.begin(), space.dup_choices.end())
                               : 1;
    space.dup_slots = 1;
    space.layer_slots = 1;
    for (const auto &f : space.spatial) {
        ModelSpec spec = base;
        spec.f = f;
        spec.budget = kDemandBudget;
        uint32_t groups = 1;
        if (base.encoder == EncoderKind::Spatial) {
            groups = f.group_count(base.width, base.height);
            if (groups == 0) {
                continue;
            }
        }
        spec.counts.assign(groups, max_c);
        space.dup_slots = std::max(space.dup_slots, groups);
        const auto layout = resolve_layout(spec);
        space.layer_slots =
            std::max(space.layer_slots, tree_levels(static_cast<uint32_t>(layout.spans.size())));
    }
    space.validate();
    return space;
}

nlohmann::json SolutionSample::to_json() const {
    return {{"choices", choices}, {"log_prob", log_prob}, {"spec", spec.to_json()}, {"candidate", candidate},
            {"n", n},           {"feasible", feasible},  {"reason", reason}};
}

SolutionSample decode(const SearchSpace &space, const ModelSpec &base, std::span<const uint32_t> choices,
                      std::span<const Candidate> candidates) {
    const auto slots = space.slots();
    if (choices.size() != slots.size()) {
        throw Error("solution has " + std::to_string(choices.size()) + " choices for " +
                    std::to_string(slots.size()) + " slots");
    }
    for (size_t i = 0; i < slots.size(); ++i) {
        if (space.is_active(slots[i].segment) && choices[i] >= slots[i].size) {
            throw Error("choice " + std::to_string(choices[i]) + " out of range for slot " + std::to_string(i));
        }
    }
    SolutionSample s;
    s.choices.assign(choices.begin(), choices.end());
    s.spec = base;
    s.spec.entangler = Entangler::PathChain;

    const size_t dup0 = 1;
    const size_t layer0 = dup0 + space.dup_slots;
    const size_t phys = layer0 + space.layer_slots;

    s.spec.f = space.spatial[space.is_active(Segment::Spatial) ? choices[0] : 0];
    uint32_t groups = 1;
    if (base.encoder == EncoderKind::Spatial) {
        groups = s.spec.f.group_count(base.width, base.height);
        if (groups == 0) {
            s.feasible = false;
            s.reason = "group window does not fit the data";
            return s;
        }
    }
    if (base.encoder == EncoderKind::Angle) {
        s.spec.counts.clear();
    } else {
        s.spec.counts.assign(groups, 1);
        if (space.is_active(Segment::Duplication)) {
            for (uint32_t g = 0; g < groups && g < space.dup_slots; ++g) {
                s.spec.counts[g] = space.dup_choices[choices[dup0 + g]];
            }
        }
    }

    EncoderLayout layout;
    try {
        ModelSpec probe = s.spec;
        probe.budget = kDemandBudget;
        layout = resolve_layout(probe);
    } catch (const Error &e) {
        s.feasible = false;
        s.reason = e.what();
        return s;
    }
    s.n = layout.total_qubits;
    s.spec.budget = std::max(s.n, kMaxSimQubits);

    if (space.is_active(Segment::Layer)) {
        const uint32_t levels = tree_levels(static_cast<uint32_t>(layout.spans.size()));
        if (levels > space.layer_slots) {
            s.feasible = false;
            s.reason = "design needs " + std::to_string(levels) + " tree levels, space has " +
                       std::to_string(space.layer_slots);
            return s;
        }
        s.spec.ansatz = AnsatzKind::Tree;
        s.spec.R.repeats.clear();
        for (uint32_t l = 0; l < levels; ++l) {
            s.spec.R.repeats.push_back(space.layer_choices[choices[layer0 + l]]);
        }
    } else {
        s.spec.ansatz = AnsatzKind::Vqc;
        s.spec.blocks = space.vqc_blocks;
        s.spec.R.repeats.clear();
    }

    if (space.is_active(Segment::Physical)) {
        s.candidate = choices[phys];
    } else {
        s.candidate = 0;
        for (size_t i = 0; i < candidates.size(); ++i) {
            if (candidates[i].size() == s.n) {
                s.candidate = static_cast<uint32_t>(i);
                break;
            }
        }
    }
    if (!candidates.empty() && s.candidate >= candidates.size()) {
        throw Error("candidate index " + std::to_string(s.candidate) + " out of range");
    }
    if (s.n > kMaxSimQubits) {
        s.feasible = false;
        s.reason = "design needs " + std::to_string(s.n) + " qubits, simulator limit is " +
                   std::to_string(kMaxSimQubits);
    }
    return s;
}

RewardRecord make_reward(double acc, int bn, int bq, double rho) {
    RewardRecord r;
    r.acc = acc;
    r.bn = bn;
    r.bq = bq;
    r.P = bn + bq;
    r.rho = rho;
    r.R = acc - rho * r.P;
    return r;
}

// ---------------------------------------------------------------- controller

struct Controller::Trace {
    std::vector<size_t> steps;                  // active slot per step
    std::vector<std::vector<double>> x;         // step input
    std::vector<std::vector<double>> h;         // h[t + 1] after step t, h[0] = 0
    std::vector<std::vector<double>> p;         // head distribution
};

Controller::Controller(std::vector<SearchSpace::Slot> slots, std::array<bool, 4> active, ControllerConfig cfg)
    : cfg_(cfg) {
    if (cfg_.hidden == 0 || cfg_.embed == 0 || cfg_.batch == 0) {
        throw Error("controller sizes must be positive");
    }
    for (const auto &s : slots) {
        const bool on = active[static_cast<size_t>(s.segment)];
        if (on && s.size == 0) {
            throw Error("active slot with no choices");
        }
        slot_size_.push_back(s.size);
        slot_active_.push_back(on);
    }
    const size_t H = cfg_.hidden;
    const size_t E = cfg_.embed;
    size_t off = 0;
    start_ = off;
    off += E;
    wx_ = off;
    off += H * E;
    wh_ = off;
    off += H * H;
    bh_ = off;
    off += H;
    for (uint32_t size : slot_size_) {
        emb_.push_back(off);
        off += size * E;
        head_w_.push_back(off);
        off += size * H;
        head_b_.push_back(off);
        off += size;
    }
    theta_.resize(off);
    Rng rng(cfg_.seed);
    for (auto &w : theta_) {
        w = rng.uniform(-0.1, 0.1);
    }
    m_.assign(off, 0.0);
    v_.assign(off, 0.0);
}

namespace {

// h = tanh(Wx x + Wh hp + b)
std::vector<double> cell(const std::vector<double> &th, size_t wx, size_t wh, size_t bh, size_t H, size_t E,
                         const std::vector<double> &x, const std::vector<double> &hp) {
    std::vector<double> h(H);
    for (size_t i = 0; i < H; ++i) {
        double z = th[bh + i];
        for (size_t j = 0; j < E; ++j) {
            z += th[wx + i * E + j] * x[j];
        }
        for (size_t j = 0; j < H; ++j) {
            z += th[wh + i * H + j] * hp[j];
        }
        h[i] = std::tanh(z);
    }
    return h;
}

std::vector<double> head(const std::vector<double> &th, size_t w, size_t b, size_t size, size_t H,
                         const std::vector<double> &h) {
    std::vector<double> logits(size);
    for (size_t k = 0; k < size; ++k) {
        double z = th[b + k];
        for (size_t j = 0; j < H; ++j) {
            z += th[w + k * H + j] * h[j];
        }
        logits[k] = z;
    }
    return softmax(logits);
}

}  // namespace

Controller::Trace Controller::forward(std::span<const uint32_t> choices) const {
    if (choices.size() != slot_size_.size()) {
        throw Error("choice vector does not match the controller's slots");
    }
    const size_t H = cfg_.hidden;
    const size_t E = cfg_.embed;
    Trace tr;
    std::vector<double> x(theta_.begin() + static_cast<std::ptrdiff_t>(start_),
                          theta_.begin() + static_cast<std::ptrdiff_t>(start_ + E));
    tr.h.push_back(std::vector<double>(H, 0.0));
    for (size_t s = 0; s < slot_size_.size(); ++s) {
        if (!slot_active_[s]) {
            continue;
        }
        if (choices[s] >= slot_size_[s]) {
            throw Error("choice out of range for slot " + std::to_string(s));
        }
        auto h = cell(theta_, wx_, wh_, bh_, H, E, x, tr.h.back());
        tr.p.push_back(head(theta_, head_w_[s], head_b_[s], slot_size_[s], H, h));
        tr.steps.push_back(s);
        tr.x.push_back(x);
        tr.h.push_back(std::move(h));
        const size_t row = emb_[s] + choices[s] * E;
        x.assign(theta_.begin() + static_cast<std::ptrdiff_t>(row),
                 theta_.begin() + static_cast<std::ptrdiff_t>(row + E));
    }
    return tr;
}

std::vector<uint32_t> Controller::sample(Rng &rng, double *log_prob, bool greedy) const {
    const size_t H = cfg_.hidden;
    const size_t E = cfg_.embed;
    std::vector<uint32_t> choices(slot_size_.size(), 0);
    std::vector<double> x(theta_.begin() + static_cast<std::ptrdiff_t>(start_),
                          theta_.begin() + static_cast<std::ptrdiff_t>(start_ + E));
    std::vector<double> hp(H, 0.0);
    double lp = 0.0;
    for (size_t s = 0; s < slot_size_.size(); ++s) {
        if (!slot_active_[s]) {
            continue;
        }
        auto h = cell(theta_, wx_, wh_, bh_, H, E, x, hp);
        const auto p = head(theta_, head_w_[s], head_b_[s], slot_size_[s], H, h);
        uint32_t a = 0;
        if (greedy) {
            a = static_cast<uint32_t>(argmax(p));
        } else {
            const double u = rng.uniform();
            double acc = 0.0;
            a = static_cast<uint32_t>(p.size() - 1);
            for (size_t k = 0; k < p.size(); ++k) {
                acc += p[k];
                if (u < acc) {
                    a = static_cast<uint32_t>(k);
                    break;
                }
            }
        }
        choices[s] = a;
        lp += std::log(p[a]);
        const size_t row = emb_[s] + a * E;
        x.assign(theta_.begin() + static_cast<std::ptrdiff_t>(row),
                 theta_.begin() + static_cast<std::ptrdiff_t>(row + E));
        hp = std::move(h);
    }
    if (log_prob != nullptr) {
        *log_prob = lp;
    }
    return choices;
}

double Controller::log_prob(std::span<const uint32_t> choices) const {
    const auto tr = forward(choices);
    double lp = 0.0;
    for (size_t t = 0; t < tr.steps.size(); ++t) {
        lp += std::log(tr.p[t][choices[tr.steps[t]]]);
    }
    return lp;
}

std::vector<std::vector<double>> Controller::step_probs(std::span<const uint32_t> choices) const {
    return forward(choices).p;
}

std::vector<double> Controller::log_prob_grad(std::span<const uint32_t> choices) const {
    const auto tr = forward(choices);
    const size_t H = cfg_.hidden;
    const size_t E = cfg_.embed;
    const size_t T = tr.steps.size();
    std::vector<double> g(theta_.size(), 0.0);
    std::vector<double> dh_next(H, 0.0);
    for (size_t t = T; t-- > 0;) {
        const size_t s = tr.steps[t];
        const double w = std::pow(cfg_.gamma, static_cast<double>(T - 1 - t));
        const auto &h = tr.h[t + 1];
        const auto &hp = tr.h[t];
        const auto &x = tr.x[t];
        std::vector<double> dh = dh_next;
        for (size_t k = 0; k < slot_size_[s]; ++k) {
            const double dl = w * ((k == choices[s] ? 1.0 : 0.0) - tr.p[t][k]);
            g[head_b_[s] + k] += dl;
            for (size_t j = 0; j < H; ++j) {
                g[head_w_[s] + k * H + j] += dl * h[j];
                dh[j] += dl * theta_[head_w_[s] + k * H + j];
            }
        }
        std::vector<double> dz(H);
        for (size_t i = 0; i < H; ++i) {
            dz[i] = dh[i] * (1.0 - h[i] * h[i]);
        }
        // input source: the start vector or the previous active slot's embedding row
        size_t src = start_;
        if (t > 0) {
            const size_t ps = tr.steps[t - 1];
            src = emb_[ps] + choices[ps] * E;
        }
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        for (size_t i = 0; i < H; ++i) {
            g[bh_ + i] += dz[i];
            for (size_t j = 0; j < E; ++j) {
                g[wx_ + i * E + j] += dz[i] * x[j];
                g[src + j] += dz[i] * theta_[wx_ + i * E + j];
            }
            for (size_t j = 0; j < H; ++j) {
                g[wh_ + i * H + j] += dz[i] * hp[j];
                dh_next[j] += dz[i] * theta_[wh_ + i * H + j];
            }
        }
    }
    return g;
}

void Controller::update(std::span<const std::vector<uint32_t>> episodes, std::span<const double> rewards) {
    if (episodes.empty() || episodes.size() != rewards.size()) {
        throw Error("controller update needs a nonempty batch with one reward per episode");
    }
    const double m = static_cast<double>(episodes.size());
    double mean = 0.0;
    for (double r : rewards) {
        mean += r;
    }
    mean /= m;
    if (!baseline_) {
        baseline_ = mean;
    }
    const double b = *baseline_;
    std::vector<double> g(theta_.size(), 0.0);
    bool moved = false;
    for (size_t k = 0; k < episodes.size(); ++k) {
        const double adv = rewards[k] - b;
        if (adv == 0.0) {
            continue;
        }
        moved = true;
        const auto gk = log_prob_grad(episodes[k]);
        for (size_t i = 0; i < g.size(); ++i) {
            g[i] += adv * gk[i] / m;
        }
    }
    // A zero gradient leaves the policy (and the Adam moments) untouched.
    if (moved) {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        ++t_;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
        for (size_t i = 0; i < theta_.size(); ++i) {
            m_[i] = b1 * m_[i] + (1.0 - b1) * g[i];
            v_[i] = b2 * v_[i] + (1.0 - b2) * g[i] * g[i];
            theta_[i] += cfg_.lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps);
        }
    }
    baseline_ = cfg_.ema * b + (1.0 - cfg_.ema) * mean;
}

// ----------------------------------------------------------------- evaluator

std::vector<uint32_t> design_mapping(const Candidate &c, uint32_t n) {
    auto order = placement_order(c);
    if (order.size() < n) {
        throw Error("candidate with " + std::to_string(order.size()) + " qubits cannot hold " + std::to_string(n));
    }
    order.resize(n);
    return order;
}

Evaluation evaluate_solution(const SolutionSample &sample, const Dataset &data, const CouplingGraph &graph,
                             std::span<const Candidate> candidates, const EvalConfig &cfg) {
    return evaluate_solution(sample, data, graph, candidates, cfg,
                             [&](const Model &m) { return train(m, data, cfg.train); });
}

Evaluation evaluate_solution(const SolutionSample &sample, const Dataset &data, const CouplingGraph &graph,
                             std::span<const Candidate> candidates, const EvalConfig &cfg,
                             const DesignTrainer &trainer) {
    const uint32_t N = graph.longest_path_qubits();
    const int bn = sample.n > N ? 1 : 0;
    const Candidate *cand = sample.candidate < candidates.size() ? &candidates[sample.candidate] : nullptr;
    const int bq = (cand == nullptr || cand->size() != sample.n) ? 1 : 0;
    Evaluation ev;
    if (!sample.feasible || bn == 1 || cand == nullptr || cand->size() < sample.n) {
        ev.reward = make_reward(0.0, bn, bq, cfg.rho);
        return ev;
    }
    const Model model(sample.spec);
    const auto report = trainer(model);
    ev.acc_ideal = report.test_acc;
    double acc = ev.acc_ideal;
    if (cfg.noise) {
        NoisyEval ne;
        ne.noise = *cfg.noise;
        ne.graph = &graph;
        ne.mapping = design_mapping(*cand, model.n_qubits());
        ne.shots = cfg.shots;
        const auto r = evaluate(model, report.params, data.test, &ne);
        ev.acc_noisy = r.noisy_accuracy;
        acc = *r.noisy_accuracy;
    }
    ev.reward = make_reward(acc, bn, bq, cfg.rho);
    return ev;
}

DesignProblem::DesignProblem(SearchSpace space, ModelSpec base, const Dataset &data, const CouplingGraph &graph,
                             std::vector<Candidate> candidates, EvalConfig cfg)
    : space_(std::move(space)),
      base_(std::move(base)),
      data_(&data),
      graph_(&graph),
      candidates_(std::move(candidates)),
      cfg_(std::move(cfg)) {
    space_.validate();
}

SolutionSample DesignProblem::decode(std::span<const uint32_t> choices) const {
    return stvqc::decode(space_, base_, choices, candidates_);
}

Evaluation DesignProblem::evaluate(const SolutionSample &s) {
    std::string key = s.spec.to_json().dump() + "|" + std::to_string(s.candidate) + "|" +
                      (s.feasible ? "1" : "0") + "|" + std::to_string(s.n);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        return it->second;
    }
    auto ev = evaluate_solution(s, *data_, *graph_, candidates_, cfg_, [&](const Model &m) {
        const std::string spec_key = s.spec.to_json().dump();
        auto t = trained_.find(spec_key);
        if (t == trained_.end()) {
            t = trained_.emplace(spec_key, train(m, *data_, cfg_.train)).first;
        }
        return t->second;
    });
    cache_.emplace(std::move(key), ev);
    return ev;
}

// -------------------------------------------------------------------- search

size_t pick_best(std::span<const Episode> history) {
    if (history.empty()) {
        throw Error("empty search history");
    }
    std::optional<size_t> best_clean;
    size_t best_any = 0;
    for (size_t i = 0; i < history.size(); ++i) {
        const auto &r = history[i].eval.reward;
        if (r.R > history[best_any].eval.reward.R) {
            best_any = i;
        }
        if (r.P == 0 && r.acc > 0.0 && (!best_clean || r.R > history[*best_clean].eval.reward.R)) {
            best_clean = i;
        }
    }
    return best_clean ? *best_clean : best_any;
}

SearchResult search(const SearchSpace &space, const Decoder &decode_fn, const Scorer &score,
                    const SearchConfig &cfg) {
    if (cfg.episodes < 1) {
        throw Error("search budget must be at least one episode");
    }
    space.validate();
    ControllerConfig cc = cfg.controller;
    cc.seed = stream_seed(cfg.seed, 0xC7A1);
    Controller ctrl(space.slots(), space.active, cc);
    Rng rng(stream_seed(cfg.seed, 0x5A3B));

    SearchResult res;
    std::vector<std::vector<uint32_t>> batch;
    std::vector<double> rewards;
    for (uint32_t ep = 0; ep < cfg.episodes; ++ep) {
        std::vector<uint32_t> choices;
        double lp = 0.0;
        if (cfg.random) {
            choices.assign(ctrl.n_slots(), 0);
            for (size_t s = 0; s < ctrl.n_slots(); ++s) {
                if (ctrl.slot_active(s)) {
                    choices[s] = static_cast<uint32_t>(rng.below(ctrl.slot_size(s)));
                    lp -= std::log(static_cast<double>(ctrl.slot_size(s)));
                }
            }
        } else {
            choices = ctrl.sample(rng, &lp);
        }
        Episode e;
        e.index = ep;
        e.sample = decode_fn(choices);
        e.sample.log_prob = lp;
        e.eval = score(e.sample);
        const double r = e.eval.reward.R;
        res.running_best.push_back(res.running_best.empty() ? r : std::max(res.running_best.back(), r));
        res.history.push_back(std::move(e));
        batch.push_back(std::move(choices));
        rewards.push_back(r);
        if (batch.size() == cc.batch || ep + 1 == cfg.episodes) {
            if (!cfg.random) {
                ctrl.update(batch, rewards);
            }
            batch.clear();
            rewards.clear();
        }
    }
    res.best = pick_best(res.history);
    return res;
}

SearchResult search(DesignProblem &problem, const SearchConfig &cfg) {
    return search(
        problem.space(), [&](std::span<const uint32_t> c) { return problem.decode(c); },
        [&](const SolutionSample &s) { return problem.evaluate(s); }, cfg);
}

void write_search_log(std::ostream &out, const SearchResult &r) {
    for (const auto &e : r.history) {
        const auto &w = e.eval.reward;
        nlohmann::json j = e.sample.to_json();
        j["episode"] = e.index;
        j["acc"] = w.acc;
        j["bn"] = w.bn;
        j["bq"] = w.bq;
        j["P"] = w.P;
        j["rho"] = w.rho;
        j["R"] = w.R;
        j["acc_ideal"] = e.eval.acc_ideal;
        j["acc_noisy"] = e.eval.acc_noisy ? nlohmann::json(*e.eval.acc_noisy) : nlohmann::json(nullptr);
        out << j.dump() << '\n';
    }
}

void write_history_csv(std::ostream &out, const SearchResult &r) {
    out << "episode,acc_ideal,acc_noisy,reward\n";
    char buf[128];
    for (const auto &e : r.history) {
        if (e.eval.acc_noisy) {
            std::snprintf(buf, sizeof buf, "%u,%.6f,%.6f,%.6f\n", e.index, e.eval.acc_ideal, *e.eval.acc_noisy,
                          e.eval.reward.R);
        } else {
            std::snprintf(buf, sizeof buf, "%u,%.6f,,%.6f\n", e.index, e.eval.acc_ideal, e.eval.reward.R);
        }
        out << buf;
    }
}

}  // namespace stvqc
