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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stvqc/circuit.hpp"
#include "stvqc/encoder.hpp"

namespace stvqc {

/// Two-qubit skeleton of a block.
///   Ring:      CRZ q0->q1, ..., q_{w-2}->q_{w-1}, then q_{w-1}->q0.
///   PathChain: the same forward chain, then a reversed chain
///              q_{w-1}->q_{w-2}, ..., q1->q0. Every pair is adjacent in
///              list order, so a block laid along a physical path needs no SWAPs.
/// Both coincide for two qubits.
enum class Entangler : uint8_t { Ring, PathChain };

std::string entangler_name(Entangler e);
Entangler entangler_from_name(const std::string &name);

/// Appends one block on `qubits`: RX on each, RZ on each, then the CRZ
/// skeleton; every gate takes a fresh parameter. Needs >= 2 qubits.
void append_block(Circuit &c, std::span<const uint32_t> qubits, Entangler e = Entangler::Ring);

/// Stand-alone block on qubits 0..w-1 (w = qubits.size() >= 2 for the ring).
Circuit build_baseline_block(std::span<const uint32_t> qubits, Entangler e = Entangler::Ring);

/// Parameters in one block on w qubits.
uint32_t block_params(uint32_t w, Entangler e = Entangler::Ring);

/// `blocks` baseline blocks stacked on all n qubits.
Circuit build_vqc(uint32_t n_qubits, uint32_t blocks, Entangler e = Entangler::Ring);

struct LayerSpec {
    std::vector<uint32_t> repeats;
    uint32_t levels() const { return static_cast<uint32_t>(repeats.size()); }
};

/// Level count for g level-1 blocks: ceil(log2 g) + 1.
uint32_t tree_levels(uint32_t g);

/// levels[l][b] = ascending qubit list of block b at level l.
struct TreeTopology {
    std::vector<std::vector<std::vector<uint32_t>>> levels;
};

/// Level 1 has one block per span of `layout`; each later level merges
/// neighbours pairwise, a trailing odd block joining the last pair. Once a
/// single block covers everything it is repeated for the remaining levels.
TreeTopology tree_topology(const EncoderLayout &layout);

/// r_l blocks on each level-l block; one-qubit level-1 blocks get r_l
/// (RX, RZ) pairs. Qubit count = layout.total_qubits.
Circuit build_tree_ansatz(const EncoderLayout &layout, const LayerSpec &R, Entangler e = Entangler::Ring);

uint32_t tree_param_count(const EncoderLayout &layout, const LayerSpec &R, Entangler e = Entangler::Ring);

}  // namespace stvqc
