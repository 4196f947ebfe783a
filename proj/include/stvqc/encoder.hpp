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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stvqc/circuit.hpp"

namespace stvqc {

/// Sliding-window group shape f = (W, H, S).
struct GroupSpec {
    uint32_t W = 1;
    uint32_t H = 1;
    uint32_t S = 1;

    uint32_t cells() const { return W * H; }
    /// Qubits per group copy: max(1, ceil(log2(W*H))).
    uint32_t qubits() const;
    /// Number of windows over a width x height grid (0 if the window does not fit).
    uint32_t group_count(uint32_t width, uint32_t height) const;
    bool operator==(const GroupSpec &) const = default;
};

inline constexpr uint32_t kPadGroup = ~uint32_t{0};

/// Contiguous qubit range [first, first + width) holding one copy of one group.
/// Padding spans (group == kPadGroup) hold no data and start in |0>.
struct QubitSpan {
    uint32_t group = 0;
    uint32_t copy = 0;
    uint32_t first = 0;
    uint32_t width = 0;
};

struct EncoderLayout {
    uint32_t width = 0;
    uint32_t height = 0;
    GroupSpec f;
    /// Per group: flat cell indices (y * width + x) in amplitude order.
    std::vector<std::vector<uint32_t>> group_cells;
    /// Group-major: all copies of group 0, then group 1, ...
    std::vector<QubitSpan> spans;
    uint32_t total_qubits = 0;

    uint32_t n_groups() const { return static_cast<uint32_t>(group_cells.size()); }
    /// Throws if spans overlap, leave gaps or have the wrong width.
    void validate() const;
};

/// Row-major window enumeration with one copy per group.
EncoderLayout partition_groups(uint32_t width, uint32_t height, const GroupSpec &f);

/// Replaces the spans of `layout` with counts[i] copies of group i. Throws if
/// any count is 0, if counts.size() != g, or if the result needs more than
/// `budget` qubits.
void apply_duplication(EncoderLayout &layout, std::span<const uint32_t> counts, uint32_t budget);

/// Appends an empty padding span so the layout covers at least n qubits.
void pad_layout(EncoderLayout &layout, uint32_t n_qubits);

/// Uniformly-controlled RY tree preparing values/||values|| (zero-padded to a
/// power of two) on max(1, ceil(log2 N)) qubits; qubit 0 is the LSB of the
/// amplitude index. Values must be nonnegative and not all zero.
Circuit amplitude_prep(std::span<const double> values);

/// Rotation-axis cycle over k qubits, e.g. "4x4_ryzxy" = 4 qubits, rounds of RY, RZ, RX, RY.
struct AngleScheme {
    std::string name;
    uint32_t n_qubits = 0;
    std::vector<GateKind> cycle;

    uint32_t capacity() const { return n_qubits * static_cast<uint32_t>(cycle.size()); }
    /// "4x4_ryzxy" or "8x2_ryz".
    static AngleScheme named(const std::string &name);
};

/// Value j goes to a rotation about cycle[j / k] on qubit j % k.
Circuit angle_encode(std::span<const double> values, const AngleScheme &scheme);

/// Prep circuit for one group copy on `width` qubits, from the group index.
using GroupPrep = std::function<Circuit(uint32_t group)>;

/// Generic core: places prep(group) on every span of `layout`.
Circuit place_groups(const EncoderLayout &layout, const GroupPrep &prep);

/// Circuit for one data group: amplitude prep of the L2-normalized cells, or
/// a single RY(2 asin(min(v, 1))) when the group has one cell.
Circuit group_prep(std::span<const double> data, const std::vector<uint32_t> &cells);

struct StEncoding {
    Circuit circuit;
    EncoderLayout layout;
};

/// Spatial encoder with duplication. `data` is row-major width x height;
/// counts empty means one copy per group.
StEncoding build_st_encoder(std::span<const double> data, uint32_t width, uint32_t height, const GroupSpec &f,
                            std::span<const uint32_t> counts, uint32_t budget);

/// Builds only the circuit for a layout already produced for this shape.
Circuit encode_with_layout(std::span<const double> data, const EncoderLayout &layout);

/// Single-qubit Bloch state RY(theta) then RZ(phi), i.e. (cos t/2, e^{i phi} sin t/2)
/// up to global phase, duplicated onto `copies` qubits (layout with one 1-cell group).
EncoderLayout bloch_layout(uint32_t copies);
Circuit encode_bloch_state(double theta, double phi, const EncoderLayout &layout);

nlohmann::json layout_to_json(const EncoderLayout &layout);

}  // namespace stvqc
