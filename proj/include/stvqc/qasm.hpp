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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "stvqc/circuit.hpp"

namespace stvqc {

/// OpenQASM 2.0 text for `circuit`. Trainable angles are written as affine
/// expressions over a `theta[k]` array, e.g. `rz(0.5*theta[3]+1.5707963267948966)`;
/// the parameter count is recorded in a `// params N` comment so it survives
/// a round trip even when trailing parameters are unused.
std::string to_qasm(const Circuit &circuit);

/// Parses the subset written by to_qasm (plus `pi`, parentheses and
/// arithmetic in angle expressions, and `measure`/`barrier`/`creg` lines,
/// which are ignored). Angles must be affine in at most one theta[k].
Circuit from_qasm(std::string_view text);

Circuit read_qasm_file(const std::string &path);
void write_qasm_file(const std::string &path, const Circuit &circuit);

/// `basis_index,probability` CSV with a header row.
void write_distribution_csv(std::ostream &out, std::span<const double> probs);

}  // namespace stvqc
