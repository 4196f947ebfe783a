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

#include "stvqc/ansatz.hpp"

#include <algorithm>
#include <numeric>

#include "stvqc/common.hpp"

namespace stvqc {

std::string entangler_name(Entangler e) { return e == Entangler::Ring ? "ring" : "path"; }

Entangler entangler_from_name(const std::string &name) {
    if (name == "ring") {
        return Entangler::Ring;
    }
    if (name == "path") {
        return Entangler::PathChain;
    }
    throw Error("unknown entangler '" + name + "' (valid: ring, path)");
}

void append_block(Circuit &c, std::span<const uint32_t> qubits, Entangler e) {
    const size_t w = qubits.size();
    if (w < 2) {
        throw Error("a baseline block needs at least 2 qubits");
    }
    for (uint32_t q : qubits) {
        c.add(GateKind::RX, q, Angle::param(c.n_params()));
    }
    for (uint32_t q : qubits) {
        c.add(GateKind::RZ, q, Angle::param(c.n_params()));
    }
    for (size_t k = 0; k + 1 < w; ++k) {
        c.add(GateKind::CRZ, qubits[k], qubits[k + 1], Angle::param(c.n_params()));
    }
    if (e == Entangler::Ring || w == 2) {
        c.add(GateKind::CRZ, qubits[w - 1], qubits[0], Angle::param(c.n_params()));
    } else {
        for (size_t k = w - 1; k > 0; --k) {
            c.add(GateKind::CRZ, qubits[k], qubits[k - 1], Angle::param(c.n_params()));
        }
    }
}

Circuit build_baseline_block(std::span<const uint32_t> qubits, Entangler e) {
    if (qubits.empty()) {
        throw Error("a baseline block needs at least 2 qubits");
    }
    Circuit c(*std::max_element(qubits.begin(), qubits.end()) + 1);
    append_block(c, qubits, e);
    return c;
}

uint32_t block_params(uint32_t w, Entangler e) {
    if (w < 2) {
        return 2 * w;
    }
    const uint32_t ent = (e == Entangler::Ring || w == 2) ? w : 2 * (w - 1);
    return 2 * w + ent;
}

Circuit build_vqc(uint32_t n_qubits, uint32_t blocks, Entangler e) {
    if (blocks < 1) {
        throw Error("build_vqc needs at least one block");
    }
    std::vector<uint32_t> all(n_qubits);
    std::iota(all.begin(), all.end(), 0U);
    Circuit c(n_qubits);
    for (uint32_t b = 0; b < blocks; ++b) {
        append_block(c, all, e);
    }
    return c;
}

uint32_t tree_levels(uint32_t g) {
    if (g < 1) {
        throw Error("tree needs at least one group");
    }
    return ceil_log2(g) + 1;
}

TreeTopology tree_topology(const EncoderLayout &layout) {
    TreeTopology t;
    std::vector<std::vector<uint32_t>> cur;
    for (const auto &s : layout.spans) {
        std::vector<uint32_t> qs(s.width);
        std::iota(qs.begin(), qs.end(), s.first);
        cur.push_back(std::move(qs));
    }
    if (cur.empty()) {
        throw Error("layout has no qubit spans");
    }
    const uint32_t m = tree_levels(static_cast<uint32_t>(cur.size()));
    t.levels.push_back(cur);
    for (uint32_t l = 1; l < m; ++l) {
        std::vector<std::vector<uint32_t>> next;
        for (size_t b = 0; b + 1 < cur.size(); b += 2) {
            auto merged = cur[b];
            merged.insert(merged.end(), cur[b + 1].begin(), cur[b + 1].end());
            next.push_back(std::move(merged));
        }
        if (cur.size() % 2 == 1) {
            if (next.empty()) {
                next.push_back(cur.back());
            } else {
                next.back().insert(next.back().end(), cur.back().begin(), cur.back().end());
            }
        }
        for (auto &blk : next) {
            std::sort(blk.begin(), blk.end());
        }
        cur = std::move(next);
        t.levels.push_back(cur);
    }
    return t;
}

Circuit build_tree_ansatz(const EncoderLayout &layout, const LayerSpec &R, Entangler e) {
    const TreeTopology t = tree_topology(layout);
    if (R.levels() != t.levels.size()) {
        throw Error("layer spec has " + std::to_string(R.levels()) + " levels, tree over " +
                    std::to_string(t.levels.front().size()) + " blocks needs " + std::to_string(t.levels.size()));
    }
    if (std::all_of(R.repeats.begin(), R.repeats.end(), [](uint32_t r) { return r == 0; })) {
        throw Error("layer spec needs at least one nonzero repeat");
    }
    Circuit c(layout.total_qubits);
    for (size_t l = 0; l < t.levels.size(); ++l) {
        for (const auto &blk : t.levels[l]) {
            for (uint32_t r = 0; r < R.repeats[l]; ++r) {
                if (blk.size() == 1) {
                    c.add(GateKind::RX, blk[0], Angle::param(c.n_params()));
                    c.add(GateKind::RZ, blk[0], Angle::param(c.n_params()));
                } else {
                    append_block(c, blk, e);
                }
            }
        }
    }
    return c;
}

uint32_t tree_param_count(const EncoderLayout &layout, const LayerSpec &R, Entangler e) {
    const TreeTopology t = tree_topology(layout);
    uint32_t n = 0;
    for (size_t l = 0; l < t.levels.size() && l < R.repeats.size(); ++l) {
        for (const auto &blk : t.levels[l]) {
            n += R.repeats[l] * block_params(static_cast<uint32_t>(blk.size()), e);
        }
    }
    return n;
}

}  // namespace stvqc
