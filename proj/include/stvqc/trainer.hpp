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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stvqc/ansatz.hpp"
#include "stvqc/compiler.hpp"
#include "stvqc/data.hpp"
#include "stvqc/encoder.hpp"
#include "stvqc/sim.hpp"

namespace stvqc {

enum class EncoderKind : uint8_t {
    Bloch,    // x = (theta, phi); copies = counts[0]
    Spatial,  // x = width x height nonnegative grid; groups f, duplication counts
    Angle,    // x = values; rotation scheme
};
enum class AnsatzKind : uint8_t { Tree, Vqc };

struct ModelSpec {
    EncoderKind encoder = EncoderKind::Bloch;
    uint32_t width = 1;
    uint32_t height = 1;
    GroupSpec f{1, 1, 1};
    std::vector<uint32_t> counts;  // empty = one copy per group
    uint32_t budget = kMaxSimQubits;
    std::string angle_scheme = "4x4_ryzxy";

    AnsatzKind ansatz = AnsatzKind::Tree;
    LayerSpec R;
    uint32_t blocks = 1;
    Entangler entangler = Entangler::Ring;
    uint32_t min_qubits = 0;  // pad the register to at least this width

    uint32_t n_classes = 2;
    /// Class k reads the mean <Z> of readout[k*m .. k*m+m) with m = size/n_classes.
    /// Empty = qubits 0..n_classes-1.
    std::vector<uint32_t> readout;

    nlohmann::json to_json() const;
    static ModelSpec from_json(const nlohmann::json &j);
};

struct Example {
    std::vector<double> x;
    int label = 0;
};

struct Dataset {
    std::vector<Example> train;
    std::vector<Example> test;
};

Dataset to_dataset(const BlochDataset &d);
Dataset to_dataset(const ImageDataset &d);

/// Encoder layout after duplication and readout padding, without the
/// simulator size check. `readout` receives the resolved readout qubits.
EncoderLayout resolve_layout(const ModelSpec &spec, std::vector<uint32_t> *readout = nullptr);

/// Encoder layout, ansatz circuit and readout resolved from a ModelSpec.
class Model {
   public:
    explicit Model(ModelSpec spec);

    const ModelSpec &spec() const { return spec_; }
    const EncoderLayout &layout() const { return layout_; }
    const Circuit &ansatz() const { return ansatz_; }
    uint32_t n_qubits() const { return layout_.total_qubits; }
    uint32_t n_params() const { return ansatz_.n_params(); }
    const std::vector<uint32_t> &readout() const { return readout_; }

    /// Data-dependent encoder circuit on n_qubits() qubits (no parameters).
    Circuit encode(std::span<const double> x) const;
    StateVector encoded_state(std::span<const double> x) const;
    /// Encoder followed by the ansatz.
    Circuit full_circuit(std::span<const double> x) const;

    /// Class scores from a final state / from a readout-marginal distribution.
    std::vector<double> scores(const StateVector &state) const;
    std::vector<double> scores_from_marginal(std::span<const double> marginal) const;

   private:
    ModelSpec spec_;
    EncoderLayout layout_;
    Circuit ansatz_;
    std::vector<uint32_t> readout_;
};

std::vector<double> softmax(std::span<const double> scores);
int argmax(std::span<const double> v);

/// Softmax class probabilities for one sample.
std::vector<double> forward(const Model &model, std::span<const double> params, std::span<const double> x);

/// Ways to obtain d<Z>/d(angle) for one gate occurrence: (shift, coefficient) pairs.
/// Two terms for single-qubit rotations; four terms for controlled rotations,
/// whose generator has three distinct eigenvalues.
std::vector<std::pair<double, double>> shift_rule(GateKind kind);

struct LossGrad {
    double loss = 0.0;  // mean cross-entropy
    double accuracy = 0.0;
    std::vector<double> grad;
};

/// Batch-mean cross-entropy and its parameter-shift gradient, from
/// pre-encoded states. Runs samples in parallel.
LossGrad loss_and_grad(const Model &model, std::span<const double> params, std::span<const StateVector> states,
                       std::span<const int> labels);

/// Convenience form that encodes `batch` first.
LossGrad grad(const Model &model, std::span<const double> params, std::span<const Example> batch);

/// Gradient of the mean of sum_k w_k <Z_{readout k}> (no softmax); used by tests.
std::vector<double> expectation_grad(const Model &model, std::span<const double> params, const StateVector &state,
                                     std::span<const double> weights);

struct TrainConfig {
    uint32_t batch_size = 128;
    uint32_t epochs = 50;
    double lr = 0.005;
    uint64_t seed = 0;

    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json &j);
};

struct TrainReport {
    std::vector<double> epoch_loss;
    std::vector<double> epoch_train_acc;
    double initial_test_acc = 0.0;
    double test_acc = 0.0;
    std::optional<double> noisy_test_acc;
    std::optional<double> deviation;
    uint32_t n_qubits = 0;
    uint32_t n_params = 0;
    std::vector<double> params;
    std::array<uint64_t, 4> rng_state{};  // training RNG after the last epoch

    nlohmann::json to_json() const;
};

std::vector<double> init_params(uint32_t n, uint64_t seed);

std::vector<StateVector> encode_all(const Model &model, std::span<const Example> examples);

/// Adam(0.9, 0.999, 1e-8) on mean cross-entropy; deterministic for a seed.
TrainReport train(const Model &model, const Dataset &data, const TrainConfig &cfg);

struct NoisyEval {
    NoiseModel noise;
    const CouplingGraph *graph = nullptr;
    std::vector<uint32_t> mapping;  // logical -> physical; empty = best candidate
    uint64_t shots = 1024;
};

struct EvalResult {
    double accuracy = 0.0;
    std::optional<double> noisy_accuracy;
    std::optional<double> deviation;  // mean over samples, on the readout marginal
};

/// Ideal accuracy, plus noisy accuracy and deviation when `noisy` is given
/// (the model is compiled to noisy->graph first).
EvalResult evaluate(const Model &model, std::span<const double> params, std::span<const Example> samples,
                    const NoisyEval *noisy = nullptr);

/// Lowest-noise placement for n logical qubits: a path if one exists,
/// otherwise a subgraph grown from the best longest path.
std::vector<uint32_t> default_mapping(const CouplingGraph &g, uint32_t n);

/// (ModelSpec, params, config, rng state) as one JSON document.
nlohmann::json checkpoint_json(const ModelSpec &spec, const TrainReport &report, const TrainConfig &cfg);

}  // namespace stvqc
