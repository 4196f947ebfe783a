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
#include <vector>

namespace stvqc {

/// Binary-labelled feature matrix.
struct FeatureSet {
    std::vector<std::vector<double>> x;
    std::vector<int> y;  // 0 or 1

    size_t size() const { return y.size(); }
    size_t dim() const { return x.empty() ? 0 : x.front().size(); }
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;

    double logit(const std::vector<double> &x) const;
    int predict(const std::vector<double> &x) const { return logit(x) > 0.0 ? 1 : 0; }
};

struct LinearConfig {
    double lr = 0.5;
    double tolerance = 1e-6;  // stop when the gradient norm falls below this
    uint32_t max_iters = 5000;
};

/// Full-batch gradient descent on the mean logistic loss.
LinearModel train_linear(const FeatureSet &train, const LinearConfig &cfg = {});

/// One hidden layer with activation h = z^2 and a single logit.
struct QuadMLP {
    uint32_t hidden = 8;
    std::vector<double> w1;  // hidden x dim, row-major
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;

    double logit(const std::vector<double> &x) const;
    int predict(const std::vector<double> &x) const { return logit(x) > 0.0 ? 1 : 0; }
};

struct MlpConfig {
    uint32_t hidden = 8;
    double lr = 1e-2;
    uint32_t epochs = 500;
    uint32_t batch_size = 128;
    uint64_t seed = 0;
};

/// Adam on binary cross-entropy, minibatches reshuffled every epoch.
QuadMLP train_quad_mlp(const FeatureSet &train, const MlpConfig &cfg = {});

template <typename Model>
double accuracy(const Model &m, const FeatureSet &data) {
    if (data.size() == 0) {
        return 0.0;
    }
    size_t ok = 0;
    for (size_t i = 0; i < data.size(); ++i) {
        ok += m.predict(data.x[i]) == data.y[i];
    }
    return static_cast<double>(ok) / static_cast<double>(data.size());
}

}  // namespace stvqc
