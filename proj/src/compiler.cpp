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

#include "stvqc/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "stvqc/common.hpp"

namespace stvqc {

namespace {

constexpr uint32_t kUnreachable = std::numeric_limits<uint32_t>::max();
constexpr uint64_t kPartialPathCap = 1'000'000;

std::pair<uint32_t, uint32_t> edge_key(uint32_t a, uint32_t b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

// ---------------------------------------------------------------- graph

CouplingGraph::CouplingGraph(uint32_t n_phys, std::vector<std::pair<uint32_t, uint32_t>> edges,
                             std::vector<double> err_1q, std::map<std::pair<uint32_t, uint32_t>, double> err_2q,
                             std::vector<double> err_ro)
    : n_(n_phys), adj_(n_phys) {
    if (n_phys == 0) {
        throw Error("coupling graph needs at least one qubit");
    }
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (auto [a, b] : edges) {
        if (a >= n_phys || b >= n_phys || a == b) {
            throw Error("edge " + std::to_string(a) + "-" + std::to_string(b) + " invalid for " +
                        std::to_string(n_phys) + " qubits");
        }
        if (!seen.insert(edge_key(a, b)).second) {
            continue;
        }
        edges_.push_back(edge_key(a, b));
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }
    for (auto &nb : adj_) {
        std::sort(nb.begin(), nb.end());
    }
    auto fill = [&](std::vector<double> v, const char *what) {
        if (v.empty()) {
            v.assign(n_phys, 0.0);
        }
        if (v.size() != n_phys) {
            throw Error(std::string(what) + " has " + std::to_string(v.size()) + " entries for " +
                        std::to_string(n_phys) + " qubits");
        }
        for (double p : v) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw Error(std::string(what) + " values must lie in [0, 1]");
            }
        }
        return v;
    };
    err_1q_ = fill(std::move(err_1q), "err_1q");
    err_ro_ = fill(std::move(err_ro), "err_ro");
    for (const auto &[k, p] : err_2q) {
        if (!seen.count(edge_key(k.first, k.second))) {
            throw Error("err_2q given for non-edge " + std::to_string(k.first) + "-" + std::to_string(k.second));
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error("err_2q values must lie in [0, 1]");
        }
        err_2q_[edge_key(k.first, k.second)] = p;
    }
}

CouplingGraph CouplingGraph::line(uint32_t n) {
    std::vector<std::pair<uint32_t, uint32_t>> e;
    for (uint32_t i = 0; i + 1 < n; ++i) {
        e.emplace_back(i, i + 1);
    }
    return CouplingGraph(n, e);
}

CouplingGraph CouplingGraph::from_json(const nlohmann::json &j) {
    try {
        const auto n = j.at("n_phys").get<uint32_t>();
        std::vector<std::pair<uint32_t, uint32_t>> edges;
        for (const auto &e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) {
                throw Error("topology edges must be [a, b] pairs");
            }
            edges.emplace_back(e[0].get<uint32_t>(), e[1].get<uint32_t>());
        }
        std::vector<double> e1 = j.value("err_1q", std::vector<double>{});
        std::vector<double> ero = j.value("err_ro", std::vector<double>{});
        std::map<std::pair<uint32_t, uint32_t>, double> e2;
        if (j.contains("err_2q")) {
            for (const auto &[key, val] : j.at("err_2q").items()) {
                const auto dash = key.find('-');
                if (dash == std::string::npos) {
                    throw Error("err_2q key '" + key + "' must look like \"a-b\"");
                }
                const auto a = static_cast<uint32_t>(std::stoul(key.substr(0, dash)));
                const auto b = static_cast<uint32_t>(std::stoul(key.substr(dash + 1)));
                e2[edge_key(a, b)] = val.get<double>();
            }
        }
        return CouplingGraph(n, edges, e1, e2, ero);
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed topology JSON: ") + e.what());
    }
}

CouplingGraph CouplingGraph::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open topology file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error("topology file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

nlohmann::json CouplingGraph::to_json() const {
    nlohmann::json j;
    j["n_phys"] = n_;
    auto edges = nlohmann::json::array();
    for (auto [a, b] : edges_) {
        edges.push_back({a, b});
    }
    j["edges"] = edges;
    j["err_1q"] = err_1q_;
    nlohmann::json e2 = nlohmann::json::object();
    for (const auto &[k, p] : err_2q_) {
        e2[std::to_string(k.first) + "-" + std::to_string(k.second)] = p;
    }
    j["err_2q"] = e2;
    j["err_ro"] = err_ro_;
    return j;
}

bool CouplingGraph::adjacent(uint32_t a, uint32_t b) const {
    if (a >= n_ || b >= n_) {
        return false;
    }
    return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

double CouplingGraph::err_2q(uint32_t a, uint32_t b) const {
    const auto it = err_2q_.find(edge_key(a, b));
    return it == err_2q_.end() ? 0.0 : it->second;
}

std::vector<uint32_t> CouplingGraph::distances(uint32_t src) const {
    std::vector<uint32_t> d(n_, kUnreachable);
    std::deque<uint32_t> q{src};
    d[src] = 0;
    while (!q.empty()) {
        const uint32_t u = q.front();
        q.pop_front();
        for (uint32_t v : adj_[u]) {
            if (d[v] == kUnreachable) {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    return d;
}

std::vector<uint32_t> CouplingGraph::shortest_path(uint32_t a, uint32_t b) const {
    const auto d = distances(b);
    if (d[a] == kUnreachable) {
        return {};
    }
    std::vector<uint32_t> path{a};
    uint32_t cur = a;
    while (cur != b) {
        // Lowest-index neighbour one hop closer keeps routing deterministic.
        for (uint32_t v : adj_[cur]) {
            if (d[v] + 1 == d[cur]) {
                cur = v;
                break;
            }
        }
        path.push_back(cur);
    }
    return path;
}

uint32_t CouplingGraph::longest_path_qubits() const {
    uint32_t best = 1;
    uint64_t budget = kPartialPathCap;
    std::vector<char> used(n_, 0);
    uint32_t len = 0;
    auto dfs = [&](auto &&self, uint32_t u) -> void {
        if (budget == 0 || best == n_) {
            return;
        }
        --budget;
        used[u] = 1;
        ++len;
        best = std::max(best, len);
        for (uint32_t v : adj_[u]) {
            if (!used[v]) {
                self(self, v);
            }
        }
        used[u] = 0;
        --len;
    };
    for (uint32_t r = 0; r < n_; ++r) {
        dfs(dfs, r);
    }
    if (budget == 0) {
        // Exhaustive walk truncated; top up with the randomized search.
        for (uint32_t n = best + 1; n <= n_; ++n) {
            if (find_paths(*this, n).empty()) {
                break;
            }
            best = n;
        }
    }
    return best;
}

// ---------------------------------------------------------------- candidates

std::vector<uint32_t> Candidate::qubits() const {
    std::vector<uint32_t> q = path;
    q.insert(q.end(), extra.begin(), extra.end());
    return q;
}

double noise_score(const CouplingGraph &g, const Candidate &c) {
    double s = 0.0;
    for (uint32_t q : c.path) {
        s += g.err_1q(q);
    }
    for (size_t i = 0; i + 1 < c.path.size(); ++i) {
        s += g.err_2q(c.path[i], c.path[i + 1]);
    }
    for (size_t i = 0; i < c.extra.size(); ++i) {
        s += g.err_1q(c.extra[i]) + g.err_2q(c.extra[i], c.extra_parent[i]);
    }
    return s;
}

std::vector<Candidate> find_paths(const CouplingGraph &g, uint32_t n, bool *exhaustive) {
    if (n < 1 || n > g.n_phys()) {
        throw Error("find_paths: n = " + std::to_string(n) + " outside [1, " + std::to_string(g.n_phys()) + "]");
    }
    std::set<std::vector<uint32_t>> found;
    auto record = [&](const std::vector<uint32_t> &p) {
        if (n == 1 || p.front() < p.back()) {
            found.insert(p);
        } else {
            found.insert(std::vector<uint32_t>(p.rbegin(), p.rend()));
        }
    };

    uint64_t budget = kPartialPathCap;
    std::vector<char> used(g.n_phys(), 0);
    std::vector<uint32_t> path;
    auto dfs = [&](auto &&self, uint32_t u) -> void {
        if (budget == 0) {
            return;
        }
        --budget;
        used[u] = 1;
        path.push_back(u);
        if (path.size() == n) {
            record(path);
        } else {
            for (uint32_t v : g.neighbors(u)) {
                if (!used[v]) {
                    self(self, v);
                }
            }
        }
        path.pop_back();
        used[u] = 0;
    };
    for (uint32_t r = 0; r < g.n_phys() && budget > 0; ++r) {
        dfs(dfs, r);
    }
    const bool complete = budget > 0;
    if (!complete) {
        // Randomized self-avoiding walks, seeded by n for determinism.
        Rng rng(stream_seed(0x9A7F, n));
        constexpr int kRestarts = 20000;
        for (int t = 0; t < kRestarts; ++t) {
            std::fill(used.begin(), used.end(), 0);
            path.clear();
            uint32_t u = static_cast<uint32_t>(rng.below(g.n_phys()));
            used[u] = 1;
            path.push_back(u);
            while (path.size() < n) {
                std::vector<uint32_t> open;
                for (uint32_t v : g.neighbors(u)) {
                    if (!used[v]) {
                        open.push_back(v);
                    }
                }
                if (open.empty()) {
                    break;
                }
                u = open[rng.below(open.size())];
                used[u] = 1;
                path.push_back(u);
            }
            if (path.size() == n) {
                record(path);
            }
        }
    }
    if (exhaustive) {
        *exhaustive = complete;
    }
    std::vector<Candidate> out;
    out.reserve(found.size());
    for (const auto &p : found) {
        Candidate c;
        c.path = p;
        c.noise_score = noise_score(g, c);
        out.push_back(std::move(c));
    }
    return out;
}

Candidate grow_subgraph(const CouplingGraph &g, const Candidate &P, uint32_t target) {
    if (target <= P.size()) {
        throw Error("grow_subgraph: target " + std::to_string(target) + " must exceed the candidate size " +
                    std::to_string(P.size()));
    }
    if (target > g.n_phys()) {
        throw Error("grow_subgraph: target " + std::to_string(target) + " exceeds the device's " +
                    std::to_string(g.n_phys()) + " qubits");
    }
    // Multi-source BFS distance to the base path.
    std::vector<uint32_t> dist(g.n_phys(), kUnreachable);
    std::deque<uint32_t> q;
    for (uint32_t p : P.path) {
        dist[p] = 0;
        q.push_back(p);
    }
    while (!q.empty()) {
        const uint32_t u = q.front();
        q.pop_front();
        for (uint32_t v : g.neighbors(u)) {
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    Candidate G = P;
    std::vector<char> in(g.n_phys(), 0);
    for (uint32_t v : G.qubits()) {
        in[v] = 1;
    }
    while (G.size() < target) {
        int64_t pick = -1;
        for (uint32_t v = 0; v < g.n_phys(); ++v) {
            if (in[v] || dist[v] == kUnreachable) {
                continue;
            }
            bool touches = false;
            for (uint32_t u : g.neighbors(v)) {
                touches = touches || in[u];
            }
            if (!touches) {
                continue;
            }
            if (pick < 0) {
                pick = v;
                continue;
            }
            const auto p = static_cast<uint32_t>(pick);
            if (dist[v] < dist[p] || (dist[v] == dist[p] && g.err_1q(v) < g.err_1q(p))) {
                pick = v;
            }
        }
        if (pick < 0) {
            throw Error("grow_subgraph: the connected component holds fewer than " + std::to_string(target) +
                        " qubits");
        }
        const auto v = static_cast<uint32_t>(pick);
        // Attach through the in-graph neighbour with the lowest edge error.
        uint32_t parent = kUnreachable;
        for (uint32_t u : g.neighbors(v)) {
            if (in[u] && (parent == kUnreachable || g.err_2q(v, u) < g.err_2q(v, parent))) {
                parent = u;
            }
        }
        in[v] = 1;
        G.extra.push_back(v);
        G.extra_parent.push_back(parent);
        G.extra_dist.push_back(dist[v]);
        G.fat = std::max(G.fat, dist[v]);
    }
    G.noise_score = noise_score(g, G);
    return G;
}

std::vector<Candidate> rank_candidates(std::vector<Candidate> candidates, uint32_t k) {
    if (k < 1) {
        throw Error("rank_candidates needs k >= 1");
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate &a, const Candidate &b) {
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        if (a.noise_score != b.noise_score) {
            return a.noise_score < b.noise_score;
        }
        return a.qubits() < b.qubits();
    });
    std::vector<Candidate> out;
    size_t bucket = 0;
    uint32_t taken = 0;
    for (auto &c : candidates) {
        if (c.size() != bucket) {
            bucket = c.size();
            taken = 0;
        }
        if (taken < k) {
            out.push_back(std::move(c));
            ++taken;
        }
    }
    return out;
}

std::vector<Candidate> build_candidate_set(const CouplingGraph &g, uint32_t k, uint32_t max_size) {
    const uint32_t N = g.longest_path_qubits();
    max_size = std::min(max_size, g.n_phys());
    std::vector<Candidate> all;
    for (uint32_t n = 1; n <= std::min(N, max_size); ++n) {
        auto ranked = rank_candidates(find_paths(g, n), k);
        all.insert(all.end(), ranked.begin(), ranked.end());
    }
    if (max_size > N) {
        const auto longest = rank_candidates(find_paths(g, N), k);
        for (uint32_t n = N + 1; n <= max_size; ++n) {
            std::vector<Candidate> grown;
            for (const auto &p : longest) {
                try {
                    grown.push_back(grow_subgraph(g, p, n));
                } catch (const Error &) {
                    // Component too small for this seed path.
                }
            }
            auto ranked = rank_candidates(std::move(grown), k);
            all.insert(all.end(), ranked.begin(), ranked.end());
        }
    }
    return all;
}

nlohmann::json candidate_to_json(const Candidate &c) {
    return {{"path", c.path},   {"extra", c.extra},           {"extra_parent", c.extra_parent},
            {"fat", c.fat},     {"noise_score", c.noise_score}, {"size", c.size()}};
}

std::vector<uint32_t> placement_order(const Candidate &c) {
    if (c.is_path()) {
        return c.path;
    }
    std::map<uint32_t, std::vector<uint32_t>> children;
    for (size_t i = 0; i < c.extra.size(); ++i) {
        children[c.extra_parent[i]].push_back(c.extra[i]);
    }
    std::vector<uint32_t> order;
    auto descend = [&](auto &&self, uint32_t u) -> void {
        auto it = children.find(u);
        if (it == children.end()) {
            return;
        }
        for (uint32_t v : it->second) {
            order.push_back(v);
            self(self, v);
        }
    };
    for (uint32_t p : c.path) {
        order.push_back(p);
        descend(descend, p);
    }
    return order;
}

SwapFreeDesign build_swap_free(uint32_t n_logical, const Candidate &c, uint32_t blocks) {
    if (c.size() < n_logical) {
        throw Error("candidate has " + std::to_string(c.size()) + " qubits but the design needs " +
                    std::to_string(n_logical) + "; use a processor with more qubits");
    }
    if (c.is_path() && c.path.size() != n_logical) {
        throw Error("path candidate must have exactly " + std::to_string(n_logical) + " qubits");
    }
    SwapFreeDesign d;
    const auto order = placement_order(c);
    d.mapping.assign(order.begin(), order.begin() + n_logical);
    d.fragment = n_logical >= 2 ? build_vqc(n_logical, blocks, Entangler::PathChain) : Circuit(n_logical);
    return d;
}

// ---------------------------------------------------------------- lowering

namespace {

void emit_rz(Circuit &out, uint32_t q, const Angle &a) { out.add(GateKind::RZ, q, a); }

void emit_h(Circuit &out, uint32_t q) {
    emit_rz(out, q, Angle::fixed(kPi / 2));
    out.add(GateKind::SX, q);
    emit_rz(out, q, Angle::fixed(kPi / 2));
}

void emit_rx(Circuit &out, uint32_t q, const Angle &a) {
    emit_rz(out, q, Angle::fixed(kPi / 2));
    out.add(GateKind::SX, q);
    emit_rz(out, q, a.shifted(kPi));
    out.add(GateKind::SX, q);
    emit_rz(out, q, Angle::fixed(kPi / 2));
}

void emit_ry(Circuit &out, uint32_t q, const Angle &a) {
    out.add(GateKind::SX, q);
    emit_rz(out, q, a.shifted(kPi));
    out.add(GateKind::SX, q);
    emit_rz(out, q, Angle::fixed(kPi));
}

void lower(Circuit &out, const GateOp &op) {
    const uint32_t a = op.qubits[0];
    const uint32_t b = op.qubits[1];
    switch (op.kind) {
        case GateKind::RZ:
        case GateKind::SX:
        case GateKind::X:
        case GateKind::CX:
            out.add(op);
            return;
        case GateKind::H:
            emit_h(out, a);
            return;
        case GateKind::RX:
            emit_rx(out, a, op.angle);
            return;
        case GateKind::RY:
            emit_ry(out, a, op.angle);
            return;
        case GateKind::CRZ:
            emit_rz(out, b, op.angle.scaled(0.5));
            out.add(GateKind::CX, a, b);
            emit_rz(out, b, op.angle.scaled(-0.5));
            out.add(GateKind::CX, a, b);
            return;
        case GateKind::CRY:
            emit_ry(out, b, op.angle.scaled(0.5));
            out.add(GateKind::CX, a, b);
            emit_ry(out, b, op.angle.scaled(-0.5));
            out.add(GateKind::CX, a, b);
            return;
        case GateKind::CRX:
            emit_h(out, b);
            lower(out, GateOp::two(GateKind::CRZ, a, b, op.angle));
            emit_h(out, b);
            return;
        case GateKind::SWAP:
            out.add(GateKind::CX, a, b);
            out.add(GateKind::CX, b, a);
            out.add(GateKind::CX, a, b);
            return;
    }
    throw Error("decompose_to_basis: unsupported gate " + std::string(gate_name(op.kind)));
}

bool is_trivial_rz(const Angle &a) {
    if (a.trainable() && a.scale != 0.0) {
        return false;
    }
    // RZ(2 pi k) is +-I, a global phase.
    const double r = std::remainder(a.offset, 2.0 * kPi);
    return std::abs(r) < 1e-12;
}

std::optional<Angle> merge_rz(const Angle &x, const Angle &y) {
    if (x.trainable() && y.trainable() && *x.index != *y.index) {
        return std::nullopt;
    }
    Angle m;
    m.index = x.trainable() ? x.index : y.index;
    m.scale = (x.trainable() ? x.scale : 0.0) + (y.trainable() ? y.scale : 0.0);
    m.offset = x.offset + y.offset;
    if (!m.index) {
        m.scale = 1.0;
    } else if (m.scale == 0.0) {
        m = Angle::fixed(m.offset);
    }
    return m;
}

Circuit optimize_once(const Circuit &c) {
    std::vector<GateOp> out;
    std::vector<char> alive;
    std::vector<std::vector<size_t>> stack(c.n_qubits());
    auto top = [&](uint32_t q) -> int64_t {
        auto &s = stack[q];
        while (!s.empty() && !alive[s.back()]) {
            s.pop_back();
        }
        return s.empty() ? -1 : static_cast<int64_t>(s.back());
    };
    for (const auto &op : c.ops()) {
        if (op.arity() == 1) {
            const uint32_t q = op.qubits[0];
            if (op.kind == GateKind::RZ && is_trivial_rz(op.angle)) {
                continue;
            }
            const int64_t p = top(q);
            if (p >= 0) {
                GateOp &prev = out[p];
                if (prev.arity() == 1 && prev.kind == GateKind::X && op.kind == GateKind::X) {
                    alive[p] = 0;
                    continue;
                }
                if (prev.kind == GateKind::RZ && op.kind == GateKind::RZ) {
                    if (auto m = merge_rz(prev.angle, op.angle)) {
                        if (is_trivial_rz(*m)) {
                            alive[p] = 0;
                        } else {
                            prev.angle = *m;
                        }
                        continue;
                    }
                }
            }
            out.push_back(op);
            alive.push_back(1);
            stack[q].push_back(out.size() - 1);
            continue;
        }
        const uint32_t a = op.qubits[0];
        const uint32_t b = op.qubits[1];
        const int64_t pa = top(a);
        const int64_t pb = top(b);
        if (op.kind == GateKind::CX && pa >= 0 && pa == pb && out[pa] == op) {
            alive[pa] = 0;
            continue;
        }
        out.push_back(op);
        alive.push_back(1);
        stack[a].push_back(out.size() - 1);
        stack[b].push_back(out.size() - 1);
    }
    Circuit r(c.n_qubits(), c.n_params());
    for (size_t i = 0; i < out.size(); ++i) {
        if (alive[i]) {
            r.add(out[i]);
        }
    }
    return r;
}

}  // namespace

Circuit decompose_to_basis(const Circuit &c) {
    Circuit out(c.n_qubits(), c.n_params());
    for (const auto &op : c.ops()) {
        lower(out, op);
    }
    return out;
}

Circuit optimize(const Circuit &c) {
    Circuit cur = optimize_once(c);
    while (true) {
        Circuit next = optimize_once(cur);
        if (next.size() == cur.size()) {
            return next;
        }
        cur = std::move(next);
    }
}

CompiledCircuit route_naive(const Circuit &logical, const CouplingGraph &g, std::span<const uint32_t> mapping) {
    const uint32_t n = logical.n_qubits();
    if (n > g.n_phys()) {
        throw Error("circuit needs " + std::to_string(n) + " qubits, device has " + std::to_string(g.n_phys()));
    }
    if (mapping.size() != n) {
        throw Error("mapping has " + std::to_string(mapping.size()) + " entries for " + std::to_string(n) +
                    " logical qubits");
    }
    std::vector<int64_t> phys_to_log(g.n_phys(), -1);
    std::vector<uint32_t> l2p(mapping.begin(), mapping.end());
    for (uint32_t l = 0; l < n; ++l) {
        if (l2p[l] >= g.n_phys() || phys_to_log[l2p[l]] >= 0) {
            throw Error("mapping must send logical qubits to distinct physical qubits");
        }
        phys_to_log[l2p[l]] = l;
    }
    CompiledCircuit cc;
    cc.mapping = l2p;
    Circuit routed(g.n_phys(), logical.n_params());
    for (const auto &op : logical.ops()) {
        if (op.arity() == 1) {
            routed.add(op.kind, l2p[op.qubits[0]], op.angle);
            continue;
        }
        uint32_t pa = l2p[op.qubits[0]];
        const uint32_t pb = l2p[op.qubits[1]];
        if (!g.adjacent(pa, pb)) {
            const auto path = g.shortest_path(pa, pb);
            if (path.empty()) {
                throw Error("qubits " + std::to_string(pa) + " and " + std::to_string(pb) +
                            " lie in disconnected parts of the device");
            }
            // Walk the first operand toward the second.
            for (size_t i = 0; i + 2 < path.size(); ++i) {
                const uint32_t x = path[i];
                const uint32_t y = path[i + 1];
                routed.add(GateKind::SWAP, x, y);
                ++cc.swap_count;
                std::swap(phys_to_log[x], phys_to_log[y]);
                if (phys_to_log[x] >= 0) {
                    l2p[phys_to_log[x]] = x;
                }
                if (phys_to_log[y] >= 0) {
                    l2p[phys_to_log[y]] = y;
                }
            }
            pa = l2p[op.qubits[0]];
        }
        routed.add(op.kind, pa, pb, op.angle);
    }
    cc.final_mapping = l2p;
    cc.circuit = optimize(decompose_to_basis(routed));
    return cc;
}

Metrics metrics(const Circuit &c) {
    Metrics m;
    std::vector<uint32_t> level(c.n_qubits(), 0);
    for (const auto &op : c.ops()) {
        uint32_t d = level[op.qubits[0]];
        if (op.arity() == 2) {
            d = std::max(d, level[op.qubits[1]]);
        }
        ++d;
        level[op.qubits[0]] = d;
        if (op.arity() == 2) {
            level[op.qubits[1]] = d;
        }
        m.depth = std::max(m.depth, d);
        if (op.kind == GateKind::CX) {
            ++m.cx_count;
        } else if (op.kind == GateKind::SWAP) {
            ++m.swap_count;
        }
    }
    m.param_count = c.referenced_params();
    return m;
}

Metrics metrics(const CompiledCircuit &cc) {
    Metrics m = metrics(cc.circuit);
    m.swap_count = cc.swap_count;
    return m;
}

nlohmann::json metrics_to_json(const Metrics &m) {
    return {{"depth", m.depth}, {"cx_count", m.cx_count}, {"swap_count", m.swap_count}, {"param_count", m.param_count}};
}

Circuit compact(const CompiledCircuit &cc, std::vector<uint32_t> &readout) {
    const uint32_t n_phys = cc.circuit.n_qubits();
    std::vector<char> used(n_phys, 0);
    for (const auto &op : cc.circuit.ops()) {
        used[op.qubits[0]] = 1;
        used[op.qubits[1]] = 1;
    }
    for (uint32_t p : cc.final_mapping) {
        used[p] = 1;
    }
    std::vector<uint32_t> index(n_phys, kUnreachable);
    uint32_t k = 0;
    for (uint32_t p = 0; p < n_phys; ++p) {
        if (used[p]) {
            index[p] = k++;
        }
    }
    Circuit out(k, cc.circuit.n_params());
    for (GateOp op : cc.circuit.ops()) {
        op.qubits[0] = index[op.qubits[0]];
        op.qubits[1] = index[op.qubits[1]];
        out.add(op);
    }
    readout.clear();
    for (uint32_t p : cc.final_mapping) {
        readout.push_back(index[p]);
    }
    return out;
}

}  // namespace stvqc
