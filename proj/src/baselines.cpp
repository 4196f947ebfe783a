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

#include "stvqc/baselines.hpp"

#include <cmath>
#include <numeric>

#include "stvqc/common.hpp"

namespace stvqc {

namespace {

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

void check_binary(const FeatureSet &d) {
    if (d.size() == 0) {
        throw Error("empty training set");
    }
    if (d.x.size() != d.y.size()) {
        throw Error("feature/label count mismatch");
    }
    bool has0 = false;
    bool has1 = false;
    for (int y : d.y) {
        if (y != 0 && y != 1) {
            throw Error("baselines expect binary labels 0/1");
        }
        has0 = has0 || y == 0;
        has1 = has1 || y == 1;
    }
    if (!has0 || !has1) {
        throw Error("training set holds a single class");
    }
}

}  // namespace

double LinearModel::logit(const std::vector<double> &x) const {
    double z = bias;
    for (size_t k = 0; k < weights.size(); ++k) {
        z += weights[k] * x[k];
    }
    return z;
}

LinearModel train_linear(const FeatureSet &train, const LinearConfig &cfg) {
    check_binary(train);
    const size_t d = train.dim();
    const auto n = static_cast<double>(train.size());
    LinearModel m;
    m.weights.assign(d, 0.0);
    std::vector<double> g(d);
    for (uint32_t it = 0; it < cfg.max_iters; ++it) {
        std::fill(g.begin(), g.end(), 0.0);
        double gb = 0.0;
        for (size_t i = 0; i < train.size(); ++i) {
            const double r = sigmoid(m.logit(train.x[i])) - train.y[i];
            for (size_t k = 0; k < d; ++k) {
                g[k] += r * train.x[i][k];
            }
            gb += r;
        }
        double norm2 = gb * gb / (n * n);
        for (size_t k = 0; k < d; ++k) {
            g[k] /= n;
            norm2 += g[k] * g[k];
        }
        if (std::sqrt(norm2) < cfg.tolerance) {
            break;
        }
        for (size_t k = 0; k < d; ++k) {
            m.weights[k] -= cfg.lr * g[k];
        }
        m.bias -= cfg.lr * gb / n;
    }
    return m;
}

double QuadMLP::logit(const std::vector<double> &x) const {
    const size_t d = x.size();
    double z = b2;
    for (uint32_t h = 0; h < hidden; ++h) {
        double a = b1[h];
        for (size_t k = 0; k < d; ++k) {
            a += w1[h * d + k] * x[k];
        }
        z += w2[h] * a * a;
    }
    return z;
}

QuadMLP train_quad_mlp(const FeatureSet &train, const MlpConfig &cfg) {
    check_binary(train);
    if (cfg.hidden < 1 || cfg.batch_size < 1) {
        throw Error("MLP needs hidden >= 1 and batch_size >= 1");
    }
    const size_t d = train.dim();
    const uint32_t H = cfg.hidden;
    Rng rng(cfg.seed);
    QuadMLP m;
    m.hidden = H;
    m.w1.resize(H * d);
    m.b1.assign(H, 0.0);
    m.w2.resize(H);
    for (auto &w : m.w1) {
        w = rng.normal() / std::sqrt(static_cast<double>(d));
    }
    for (auto &w : m.w2) {
        w = rng.normal() / std::sqrt(static_cast<double>(H));
    }

    // Flat parameter view for Adam: w1, b1, w2, b2.
    const size_t P = H * d + H + H + 1;
    std::vector<double> mom(P, 0.0);
    std::vector<double> vel(P, 0.0);
    std::vector<double> grad(P);
    auto param = [&](size_t i) -> double & {
        if (i < H * d) {
            return m.w1[i];
        }
        i -= H * d;
        if (i < H) {
            return m.b1[i];
        }
        i -= H;
        if (i < H) {
            return m.w2[i];
        }
        return m.b2;
    };
    constexpr double kB1 = 0.9;
    constexpr double kB2 = 0.999;
    constexpr double kEps = 1e-8;
    uint64_t step = 0;

    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<double> act(H);
    for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_in_place(order, rng);
        for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const size_t end = std::min(order.size(), start + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (size_t b = start; b < end; ++b) {
                const auto &x = train.x[order[b]];
                double z = m.b2;
                for (uint32_t h = 0; h < H; ++h) {
                    double a = m.b1[h];
                    for (size_t k = 0; k < d; ++k) {
                        a += m.w1[h * d + k] * x[k];
                    }
                    act[h] = a;
                    z += m.w2[h] * a * a;
                }
                const double r = sigmoid(z) - train.y[order[b]];
                for (uint32_t h = 0; h < H; ++h) {
                    const double da = r * m.w2[h] * 2.0 * act[h];
                    for (size_t k = 0; k < d; ++k) {
                        grad[h * d + k] += da * x[k];
                    }
                    grad[H * d + h] += da;
                    grad[H * d + H + h] += r * act[h] * act[h];
                }
                grad[P - 1] += r;
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            ++step;
            const double c1 = 1.0 - std::pow(kB1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(kB2, static_cast<double>(step));
            for (size_t i = 0; i < P; ++i) {
                const double g = grad[i] * inv;
                mom[i] = kB1 * mom[i] + (1 - kB1) * g;
                vel[i] = kB2 * vel[i] + (1 - kB2) * g * g;
                param(i) -= cfg.lr * (mom[i] / c1) / (std::sqrt(vel[i] / c2) + kEps);
            }
        }
    }
    return m;
}

}  // namespace stvqc
