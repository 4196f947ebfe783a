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

#include "stvqc/encoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "stvqc/common.hpp"

namespace stvqc {

uint32_t GroupSpec::qubits() const { return std::max(1U, ceil_log2(uint64_t{W} * H)); }

uint32_t GroupSpec::group_count(uint32_t width, uint32_t height) const {
    if (W < 1 || H < 1 || S < 1 || W > width || H > height) {
        return 0;
    }
    return ((width - W) / S + 1) * ((height - H) / S + 1);
}

void EncoderLayout::validate() const {
    uint32_t next = 0;
    for (const auto &s : spans) {
        if (s.first != next) {
            throw Error("layout spans are not contiguous at qubit " + std::to_string(next));
        }
        if (s.group != kPadGroup) {
            if (s.group >= group_cells.size()) {
                throw Error("layout span references missing group " + std::to_string(s.group));
            }
            if (s.width != f.qubits()) {
                throw Error("layout span width " + std::to_string(s.width) + " != group qubits " +
                            std::to_string(f.qubits()));
            }
        }
        next += s.width;
    }
    if (next != total_qubits) {
        throw Error("layout spans cover " + std::to_string(next) + " qubits, expected " +
                    std::to_string(total_qubits));
    }
}

EncoderLayout partition_groups(uint32_t width, uint32_t height, const GroupSpec &f) {
    if (f.W < 1 || f.H < 1 || f.S < 1) {
        throw Error("group spec needs W, H, S >= 1");
    }
    if (f.W > width || f.H > height) {
        throw Error("group " + std::to_string(f.W) + "x" + std::to_string(f.H) + " exceeds " +
                    std::to_string(width) + "x" + std::to_string(height) + " data");
    }
    EncoderLayout layout;
    layout.width = width;
    layout.height = height;
    layout.f = f;
    const uint32_t q = f.qubits();
    for (uint32_t y0 = 0; y0 + f.H <= height; y0 += f.S) {
        for (uint32_t x0 = 0; x0 + f.W <= width; x0 += f.S) {
            std::vector<uint32_t> cells;
            for (uint32_t dy = 0; dy < f.H; ++dy) {
                for (uint32_t dx = 0; dx < f.W; ++dx) {
                    cells.push_back((y0 + dy) * width + (x0 + dx));
                }
            }
            const auto g = static_cast<uint32_t>(layout.group_cells.size());
            layout.spans.push_back({g, 0, g * q, q});
            layout.group_cells.push_back(std::move(cells));
        }
    }
    layout.total_qubits = layout.n_groups() * q;
    return layout;
}

void apply_duplication(EncoderLayout &layout, std::span<const uint32_t> counts, uint32_t budget) {
    if (counts.size() != layout.n_groups()) {
        throw Error("duplication counts have " + std::to_string(counts.size()) + " entries for " +
                    std::to_string(layout.n_groups()) + " groups");
    }
    const uint32_t q = layout.f.qubits();
    uint64_t need = 0;
    for (uint32_t c : counts) {
        if (c < 1) {
            throw Error("duplication count must be >= 1");
        }
        need += uint64_t{c} * q;
    }
    if (need > budget) {
        throw Error("encoder needs " + std::to_string(need) + " qubits but only " + std::to_string(budget) +
                    " are available");
    }
    layout.spans.clear();
    uint32_t next = 0;
    for (uint32_t g = 0; g < counts.size(); ++g) {
        for (uint32_t k = 0; k < counts[g]; ++k) {
            layout.spans.push_back({g, k, next, q});
            next += q;
        }
    }
    layout.total_qubits = next;
}

void pad_layout(EncoderLayout &layout, uint32_t n_qubits) {
    if (layout.total_qubits >= n_qubits) {
        return;
    }
    const uint32_t extra = n_qubits - layout.total_qubits;
    layout.spans.push_back({kPadGroup, 0, layout.total_qubits, extra});
    layout.total_qubits = n_qubits;
}

Circuit amplitude_prep(std::span<const double> values) {
    if (values.empty()) {
        throw Error("amplitude_prep needs at least one value");
    }
    double norm2 = 0.0;
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error("amplitude_prep expects finite nonnegative values");
        }
        norm2 += v * v;
    }
    if (norm2 == 0.0) {
        throw Error("amplitude_prep: all-zero input cannot be normalized");
    }
    const uint32_t n = std::max(1U, ceil_log2(values.size()));
    const size_t dim = size_t{1} << n;
    std::vector<double> a(dim, 0.0);
    std::copy(values.begin(), values.end(), a.begin());
    // Prefix sums of squared amplitudes make every block norm O(1).
    std::vector<double> cum(dim + 1, 0.0);
    for (size_t i = 0; i < dim; ++i) {
        cum[i + 1] = cum[i] + a[i] * a[i] / norm2;
    }

    Circuit c(n);
    constexpr double kTol = 1e-14;
    for (uint32_t k = 0; k < n; ++k) {
        const uint32_t target = n - 1 - k;
        const size_t patterns = size_t{1} << k;
        const size_t block = dim >> k;
        const size_t half = block / 2;
        std::vector<double> theta(patterns);
        for (size_t j = 0; j < patterns; ++j) {
            const size_t base = j * block;
            const double n0 = std::sqrt(std::max(0.0, cum[base + half] - cum[base]));
            const double n1 = std::sqrt(std::max(0.0, cum[base + block] - cum[base + half]));
            theta[j] = 2.0 * std::atan2(n1, n0);
        }
        const bool all_zero = std::all_of(theta.begin(), theta.end(), [](double t) { return std::abs(t) < kTol; });
        if (all_zero) {
            continue;
        }
        const bool all_equal =
            std::all_of(theta.begin(), theta.end(), [&](double t) { return std::abs(t - theta[0]) < kTol; });
        if (all_equal) {
            c.add(GateKind::RY, target, Angle::fixed(theta[0]));
            continue;
        }
        // Uniformly controlled RY: Gray-code walk over the control patterns.
        // Bit b of pattern j is qubit n - k + b.
        auto gray = [](size_t i) { return i ^ (i >> 1); };
        for (size_t i = 0; i < patterns; ++i) {
            double alpha = 0.0;
            for (size_t j = 0; j < patterns; ++j) {
                alpha += (std::popcount(j & gray(i)) & 1) ? -theta[j] : theta[j];
            }
            alpha /= static_cast<double>(patterns);
            c.add(GateKind::RY, target, Angle::fixed(alpha));
            const size_t flip = gray(i) ^ gray((i + 1) % patterns);
            const auto b = static_cast<uint32_t>(std::countr_zero(flip));
            c.add(GateKind::CX, n - k + b, target);
        }
    }
    return c;
}

AngleScheme AngleScheme::named(const std::string &name) {
    if (name == "4x4_ryzxy") {
        return {name, 4, {GateKind::RY, GateKind::RZ, GateKind::RX, GateKind::RY}};
    }
    if (name == "8x2_ryz") {
        return {name, 8, {GateKind::RY, GateKind::RZ}};
    }
    throw Error("unknown angle scheme '" + name + "' (valid: 4x4_ryzxy, 8x2_ryz)");
}

Circuit angle_encode(std::span<const double> values, const AngleScheme &scheme) {
    if (scheme.n_qubits == 0 || scheme.cycle.empty()) {
        throw Error("angle scheme needs at least one qubit and one axis");
    }
    if (values.size() > scheme.capacity()) {
        throw Error("angle scheme " + scheme.name + " holds " + std::to_string(scheme.capacity()) +
                    " values, got " + std::to_string(values.size()));
    }
    Circuit c(scheme.n_qubits);
    for (size_t j = 0; j < values.size(); ++j) {
        const GateKind axis = scheme.cycle[j / scheme.n_qubits];
        c.add(axis, static_cast<uint32_t>(j % scheme.n_qubits), Angle::fixed(values[j]));
    }
    return c;
}

Circuit place_groups(const EncoderLayout &layout, const GroupPrep &prep) {
    Circuit c(layout.total_qubits);
    std::map<uint32_t, Circuit> cache;
    for (const auto &span : layout.spans) {
        if (span.group == kPadGroup) {
            continue;
        }
        auto it = cache.find(span.group);
        if (it == cache.end()) {
            it = cache.emplace(span.group, prep(span.group)).first;
        }
        const Circuit &p = it->second;
        if (p.n_qubits() > span.width) {
            throw Error("group prep uses " + std::to_string(p.n_qubits()) + " qubits, span has " +
                        std::to_string(span.width));
        }
        std::vector<uint32_t> map(p.n_qubits());
        for (uint32_t q = 0; q < map.size(); ++q) {
            map[q] = span.first + q;
        }
        c.append(p, map);
    }
    return c;
}

Circuit group_prep(std::span<const double> data, const std::vector<uint32_t> &cells) {
    std::vector<double> v;
    v.reserve(cells.size());
    for (uint32_t cell : cells) {
        if (cell >= data.size()) {
            throw Error("group cell " + std::to_string(cell) + " outside data of size " +
                        std::to_string(data.size()));
        }
        const double x = data[cell];
        if (!std::isfinite(x) || x < 0.0) {
            throw Error("encoder expects finite nonnegative data");
        }
        v.push_back(x);
    }
    if (v.size() == 1) {
        Circuit c(1);
        const double theta = 2.0 * std::asin(std::min(v[0], 1.0));
        if (theta != 0.0) {
            c.add(GateKind::RY, 0, Angle::fixed(theta));
        }
        return c;
    }
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
        // Blank patch (common at image borders): leave the span in |0...0>.
        return Circuit(std::max(1U, ceil_log2(v.size())));
    }
    return amplitude_prep(v);
}

Circuit encode_with_layout(std::span<const double> data, const EncoderLayout &layout) {
    if (data.size() != size_t{layout.width} * layout.height) {
        throw Error("data has " + std::to_string(data.size()) + " values, layout expects " +
                    std::to_string(layout.width) + "x" + std::to_string(layout.height));
    }
    return place_groups(layout, [&](uint32_t g) { return group_prep(data, layout.group_cells[g]); });
}

StEncoding build_st_encoder(std::span<const double> data, uint32_t width, uint32_t height, const GroupSpec &f,
                            std::span<const uint32_t> counts, uint32_t budget) {
    EncoderLayout layout = partition_groups(width, height, f);
    if (counts.empty()) {
        std::vector<uint32_t> ones(layout.n_groups(), 1);
        apply_duplication(layout, ones, budget);
    } else {
        apply_duplication(layout, counts, budget);
    }
    Circuit c = encode_with_layout(data, layout);
    return {std::move(c), std::move(layout)};
}

EncoderLayout bloch_layout(uint32_t copies) {
    if (copies < 1) {
        throw Error("bloch encoder needs at least one copy");
    }
    EncoderLayout layout;
    layout.width = 1;
    layout.height = 1;
    layout.f = GroupSpec{1, 1, 1};
    layout.group_cells = {{0}};
    for (uint32_t k = 0; k < copies; ++k) {
        layout.spans.push_back({0, k, k, 1});
    }
    layout.total_qubits = copies;
    return layout;
}

Circuit encode_bloch_state(double theta, double phi, const EncoderLayout &layout) {
    return place_groups(layout, [&](uint32_t) {
        Circuit c(1);
        c.add(GateKind::RY, 0, Angle::fixed(theta));
        if (phi != 0.0) {
            c.add(GateKind::RZ, 0, Angle::fixed(phi));
        }
        return c;
    });
}

nlohmann::json layout_to_json(const EncoderLayout &layout) {
    nlohmann::json j;
    j["width"] = layout.width;
    j["height"] = layout.height;
    j["f"] = {{"W", layout.f.W}, {"H", layout.f.H}, {"S", layout.f.S}};
    auto groups = nlohmann::json::array();
    for (const auto &cells : layout.group_cells) {
        auto cj = nlohmann::json::array();
        for (uint32_t cell : cells) {
            cj.push_back({cell % layout.width, cell / layout.width});
        }
        groups.push_back({{"cells", cj}});
    }
    j["groups"] = groups;
    auto spans = nlohmann::json::array();
    for (const auto &s : layout.spans) {
        nlohmann::json sj{{"first", s.first}, {"width", s.width}};
        if (s.group == kPadGroup) {
            sj["pad"] = true;
        } else {
            sj["group"] = s.group;
            sj["copy"] = s.copy;
        }
        spans.push_back(sj);
    }
    j["spans"] = spans;
    j["total_qubits"] = layout.total_qubits;
    return j;
}

}  // namespace stvqc
