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

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stvqc/common.hpp"
#include "stvqc/compiler.hpp"
#include "stvqc/trainer.hpp"

namespace stvqc {

enum class Segment : uint8_t { Spatial = 0, Duplication = 1, Layer = 2, Physical = 3 };

std::string segment_name(Segment s);
Segment segment_from_name(const std::string &name);

/// Four segments of slots. Masked segments emit their default:
/// spatial[0], c = 1 for every group, a plain VQC of `vqc_blocks` blocks,
/// and the best-ranked candidate whose size equals the qubit demand.
struct SearchSpace {
    std::vector<GroupSpec> spatial{GroupSpec{1, 1, 1}};
    uint32_t dup_slots = 1;
    std::vector<uint32_t> dup_choices{1, 2, 3};
    uint32_t layer_slots = 1;
    std::vector<uint32_t> layer_choices{1, 2, 3};
    uint32_t physical_choices = 1;
    std::array<bool, 4> active{true, true, true, true};
    uint32_t vqc_blocks = 2;

    struct Slot {
        Segment segment;
        uint32_t size;
    };
    /// spatial, dup_slots x duplication, layer_slots x layer, physical.
    std::vector<Slot> slots() const;
    bool is_active(Segment s) const { return active[static_cast<size_t>(s)]; }
    void validate() const;
    nlohmann::json to_json() const;
};

enum class DataKind : uint8_t { LinearImage, Nonlinear, Vector };

DataKind data_kind_from_name(const std::string &name);

/// Active-segment mask for a kind of data.
std::array<bool, 4> select_optimizers(DataKind kind);

/// Windows (W, H, S) that cover a width x height grid and need at most
/// `max_qubits` qubits without duplication.
std::vector<GroupSpec> enumerate_spatial(uint32_t width, uint32_t height, uint32_t max_qubits);

/// Slot counts sized for the worst case of the other segments.
/// `base` supplies the encoder kind, data shape and readout.
SearchSpace make_space(const ModelSpec &base, std::vector<GroupSpec> spatial, std::vector<uint32_t> dup_choices,
                       std::vector<uint32_t> layer_choices, uint32_t physical_choices, std::array<bool, 4> active);

struct SolutionSample {
    std::vector<uint32_t> choices;  // one per slot
    double log_prob = 0.0;          // active slots only
    ModelSpec spec;
    uint32_t candidate = 0;  // index into the candidate set
    uint32_t n = 0;          // qubit demand
    bool feasible = true;
    std::string reason;

    nlohmann::json to_json() const;
};

/// Maps slot choices to a model. Never throws for bad designs; those come
/// back infeasible with a reason.
SolutionSample decode(const SearchSpace &space, const ModelSpec &base, std::span<const uint32_t> choices,
                      std::span<const Candidate> candidates);

struct RewardRecord {
    double acc = 0.0;
    int bn = 0;
    int bq = 0;
    int P = 0;
    double rho = 0.5;
    double R = 0.0;
};

/// P = bn + bq, R = acc - rho * P.
RewardRecord make_reward(double acc, int bn, int bq, double rho);

struct ControllerConfig {
    uint32_t hidden = 64;
    uint32_t embed = 16;
    double lr = 5e-3;
    double gamma = 1.0;
    double ema = 0.95;
    uint32_t batch = 5;
    uint64_t seed = 0;
};

/// Elman RNN over the active slots. Each step reads the embedding of the
/// previous choice (a learned start vector first) and a per-slot head turns
/// the hidden state into choice logits.
class Controller {
   public:
    Controller(std::vector<SearchSpace::Slot> slots, std::array<bool, 4> active, ControllerConfig cfg = {});

    size_t n_slots() const { return slot_size_.size(); }
    bool slot_active(size_t s) const { return slot_active_[s]; }
    uint32_t slot_size(size_t s) const { return slot_size_[s]; }

    /// Masked slots get choice 0 and add nothing to `log_prob`.
    std::vector<uint32_t> sample(Rng &rng, double *log_prob = nullptr, bool greedy = false) const;
    double log_prob(std::span<const uint32_t> choices) const;
    /// Per active slot (in order), the head distribution given the earlier choices.
    std::vector<std::vector<double>> step_probs(std::span<const uint32_t> choices) const;
    /// Gradient of sum_t w_t log pi(a_t) with w_t = gamma^(T - t), t = 1..T.
    std::vector<double> log_prob_grad(std::span<const uint32_t> choices) const;

    /// One REINFORCE step: ascend (1/m) sum_k (R_k - b) grad_k. The baseline
    /// starts at the first batch mean and moves by EMA after the step.
    void update(std::span<const std::vector<uint32_t>> episodes, std::span<const double> rewards);

    std::vector<double> &params() { return theta_; }
    const std::vector<double> &params() const { return theta_; }
    std::optional<double> baseline() const { return baseline_; }
    const ControllerConfig &config() const { return cfg_; }

   private:
    struct Trace;
    Trace forward(std::span<const uint32_t> choices) const;

    ControllerConfig cfg_;
    std::vector<uint32_t> slot_size_;
    std::vector<bool> slot_active_;
    // offsets into theta_
    size_t start_ = 0, wx_ = 0, wh_ = 0, bh_ = 0;
    std::vector<size_t> emb_, head_w_, head_b_;
    std::vector<double> theta_;
    std::vector<double> m_, v_;
    uint64_t t_ = 0;
    std::optional<double> baseline_;
};

struct Evaluation {
    RewardRecord reward;
    double acc_ideal = 0.0;
    std::optional<double> acc_noisy;
};

struct EvalConfig {
    TrainConfig train;  // search-time budget; the caller halves the epochs
    double rho = 0.5;
    std::optional<NoiseModel> noise;
    uint64_t shots = 1024;
};

/// Trains, places and validates one design. bn = 1 iff n > N (longest path
/// of the device); bq = 1 iff the chosen candidate's size differs from n.
/// Infeasible designs, and candidates too small to hold n qubits, score acc = 0.
Evaluation evaluate_solution(const SolutionSample &sample, const Dataset &data, const CouplingGraph &graph,
                             std::span<const Candidate> candidates, const EvalConfig &cfg);

using DesignTrainer = std::function<TrainReport(const Model &)>;

/// Same, with the training step supplied by the caller.
Evaluation evaluate_solution(const SolutionSample &sample, const Dataset &data, const CouplingGraph &graph,
                             std::span<const Candidate> candidates, const EvalConfig &cfg,
                             const DesignTrainer &trainer);

/// Logical-to-physical mapping used for a design: the first n qubits of the
/// candidate's placement order.
std::vector<uint32_t> design_mapping(const Candidate &c, uint32_t n);

/// evaluate_solution with memoization: training per model, validation per
/// (model, candidate).
class DesignProblem {
   public:
    DesignProblem(SearchSpace space, ModelSpec base, const Dataset &data, const CouplingGraph &graph,
                  std::vector<Candidate> candidates, EvalConfig cfg);

    const SearchSpace &space() const { return space_; }
    const std::vector<Candidate> &candidates() const { return candidates_; }
    SolutionSample decode(std::span<const uint32_t> choices) const;
    Evaluation evaluate(const SolutionSample &s);
    size_t cache_size() const { return cache_.size(); }

   private:
    SearchSpace space_;
    ModelSpec base_;
    const Dataset *data_;
    const CouplingGraph *graph_;
    std::vector<Candidate> candidates_;
    EvalConfig cfg_;
    std::map<std::string, Evaluation> cache_;
    std::map<std::string, TrainReport> trained_;
};

struct Episode {
    uint32_t index = 0;
    SolutionSample sample;
    Evaluation eval;
};

struct SearchConfig {
    uint32_t episodes = 60;
    bool random = false;  // uniform sampling, no policy
    ControllerConfig controller;
    uint64_t seed = 0;
};

struct SearchResult {
    std::vector<Episode> history;
    size_t best = 0;
    /// running_best[i] = best reward among episodes 0..i
    std::vector<double> running_best;
};

using Decoder = std::function<SolutionSample(std::span<const uint32_t>)>;
using Scorer = std::function<Evaluation(const SolutionSample &)>;

/// Sample / evaluate / update in batches of controller.batch episodes.
SearchResult search(const SearchSpace &space, const Decoder &decode, const Scorer &score, const SearchConfig &cfg);
SearchResult search(DesignProblem &problem, const SearchConfig &cfg);

/// Highest reward among P = 0 episodes with acc > 0, else highest reward.
size_t pick_best(std::span<const Episode> history);

void write_search_log(std::ostream &out, const SearchResult &r);
void write_history_csv(std::ostream &out, const SearchResult &r);

}  // namespace stvqc
