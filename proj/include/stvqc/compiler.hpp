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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stvqc/ansatz.hpp"
#include "stvqc/circuit.hpp"

namespace stvqc {

/// Device topology with static error rates.
class CouplingGraph {
   public:
    CouplingGraph() = default;
    /// Error vectors may be empty (all zero) or sized n_phys.
    CouplingGraph(uint32_t n_phys, std::vector<std::pair<uint32_t, uint32_t>> edges,
                  std::vector<double> err_1q = {}, std::map<std::pair<uint32_t, uint32_t>, double> err_2q = {},
                  std::vector<double> err_ro = {});

    static CouplingGraph line(uint32_t n);
    static CouplingGraph from_json(const nlohmann::json &j);
    static CouplingGraph load(const std::string &path);
    nlohmann::json to_json() const;

    uint32_t n_phys() const { return n_; }
    const std::vector<std::pair<uint32_t, uint32_t>> &edges() const { return edges_; }
    const std::vector<uint32_t> &neighbors(uint32_t q) const { return adj_.at(q); }
    bool adjacent(uint32_t a, uint32_t b) const;
    double err_1q(uint32_t q) const { return err_1q_[q]; }
    double err_ro(uint32_t q) const { return err_ro_[q]; }
    double err_2q(uint32_t a, uint32_t b) const;

    /// BFS hop counts from `src`; unreachable = UINT32_MAX.
    std::vector<uint32_t> distances(uint32_t src) const;
    /// Vertices of a shortest path a..b inclusive; empty if disconnected.
    std::vector<uint32_t> shortest_path(uint32_t a, uint32_t b) const;
    /// N: vertex count of the longest simple path.
    uint32_t longest_path_qubits() const;

   private:
    uint32_t n_ = 0;
    std::vector<std::pair<uint32_t, uint32_t>> edges_;
    std::vector<std::vector<uint32_t>> adj_;
    std::vector<double> err_1q_;
    std::map<std::pair<uint32_t, uint32_t>, double> err_2q_;  // key (min, max)
    std::vector<double> err_ro_;
};

/// A simple path P, optionally grown into a subgraph G by `extra` qubits.
/// extra_parent[i] is the neighbour through which extra[i] attaches and
/// extra_dist[i] its hop distance to P; fat = max extra_dist.
struct Candidate {
    std::vector<uint32_t> path;
    std::vector<uint32_t> extra;
    std::vector<uint32_t> extra_parent;
    std::vector<uint32_t> extra_dist;
    uint32_t fat = 0;
    double noise_score = 0.0;

    size_t size() const { return path.size() + extra.size(); }
    bool is_path() const { return extra.empty(); }
    /// Path followed by extras.
    std::vector<uint32_t> qubits() const;
};

/// Sum of member err_1q plus err_2q of path edges and attachment edges.
double noise_score(const CouplingGraph &g, const Candidate &c);

/// Every simple path with exactly n vertices, one orientation each
/// (front < back). Beyond 10^6 partial paths the exhaustive walk stops and
/// seeded randomized DFS restarts fill in; `exhaustive` reports which ran.
std::vector<Candidate> find_paths(const CouplingGraph &g, uint32_t n, bool *exhaustive = nullptr);

/// Greedy accretion of the closest qubits to P up to `target` vertices.
Candidate grow_subgraph(const CouplingGraph &g, const Candidate &P, uint32_t target);

/// Top-k per size bucket by (noise_score, qubit list); buckets ascending.
std::vector<Candidate> rank_candidates(std::vector<Candidate> candidates, uint32_t k);

/// Candidate set S: top-k paths for every size up to N, then top-k grown
/// subgraphs for sizes N+1..max_size (seeded from the best longest paths).
std::vector<Candidate> build_candidate_set(const CouplingGraph &g, uint32_t k, uint32_t max_size);

nlohmann::json candidate_to_json(const Candidate &c);

/// Logical-to-physical placement: logical k -> order[k]. For a path this is
/// the path itself; for a subgraph, a depth-first walk that leaves P at fork
/// qubits and returns at leaves.
std::vector<uint32_t> placement_order(const Candidate &c);

struct SwapFreeDesign {
    Circuit fragment;               // `blocks` path-chain blocks on logical 0..n-1
    std::vector<uint32_t> mapping;  // logical -> physical
};

/// Path case requires |P| == n_logical; subgraph case needs size >= n_logical.
SwapFreeDesign build_swap_free(uint32_t n_logical, const Candidate &c, uint32_t blocks);

struct Metrics {
    uint32_t depth = 0;
    uint32_t cx_count = 0;
    uint32_t swap_count = 0;
    uint32_t param_count = 0;
};

struct CompiledCircuit {
    Circuit circuit;                      // over g.n_phys(), basis {RZ, SX, X, CX}
    std::vector<uint32_t> mapping;        // logical -> physical at the start
    std::vector<uint32_t> final_mapping;  // logical -> physical after routing
    uint32_t swap_count = 0;
};

/// Lowers to {RZ, SX, X, CX}; unitary-equivalent up to global phase.
Circuit decompose_to_basis(const Circuit &c);

/// Adjacent-inverse cancellation (CX CX, X X) and RZ merging, to a fixpoint.
Circuit optimize(const Circuit &c);

/// Greedy SWAP insertion along shortest paths, then decompose and optimize.
CompiledCircuit route_naive(const Circuit &logical, const CouplingGraph &g, std::span<const uint32_t> mapping);

/// Depth by DAG levelization; counts over the ops.
Metrics metrics(const Circuit &c);
Metrics metrics(const CompiledCircuit &cc);
nlohmann::json metrics_to_json(const Metrics &m);

/// Restricts a compiled circuit to the physical qubits it touches (plus the
/// final positions of the logical qubits), renumbered ascending.
/// `readout` gets the compact index of every logical qubit.
Circuit compact(const CompiledCircuit &cc, std::vector<uint32_t> &readout);

}  // namespace stvqc
