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
#include <iosfwd>
#include <string>
#include <vector>

#include "stvqc/data.hpp"
#include "stvqc/trainer.hpp"

namespace stvqc {

/// Named model shapes shared by the CLI and the acceptance run.
///   "vqc"    baseline: Bloch -> 3 ring blocks on 2 qubits;
///            4x4 images -> 4x4_ryzxy angle encoding + 2 ring blocks
///   "st-vqc" Bloch -> 2 copies, tree R = [1, 3];
///            4x4 images -> f = (4, 2, 2), two 8-pixel groups on 6 qubits, tree R = [2, 2]
///   "amp"    4x4 images -> one 16-value amplitude group, tree R = [3]
ModelSpec preset_spec(const std::string &name, bool image);

/// One row of the accuracy tables; classical and quantum models share it.
struct AccuracyRow {
    std::string dataset;
    std::string model;
    uint64_t seed = 0;
    double test_acc = 0.0;
    uint32_t n_qubits = 0;  // 0 for classical models
    uint32_t n_params = 0;
    double seconds = 0.0;
};

/// linear, mlp, vqc and st-vqc on one regenerated Bloch dataset.
std::vector<AccuracyRow> bloch_table(const std::string &id, uint64_t seed, const TrainConfig &cfg);

void write_rows_csv(std::ostream &out, const std::vector<AccuracyRow> &rows);

}  // namespace stvqc
