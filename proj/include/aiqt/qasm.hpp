// Copyright 2026 The AIQT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file
 * OpenQASM 2.0 export of trained transforms and a reader for the subset the
 * exporter produces (plus h/u1/cp aliases), used to verify exported files.
 */

#include "aiqt/circuit.hpp"
#include "aiqt/transform.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace aiqt {

/// Emits model_circuit(m): the controlled-phase/U3 pattern of every block,
/// then a single swap network.
/// Angles are written with 17 significant digits.
[[nodiscard]] std::string emit_qasm(const TransformModel &m);

/// Parses an OpenQASM 2.0 program made of a single qreg and the gates
/// u3, u1, h, cu1, cp and swap. Throws IoError on anything else.
[[nodiscard]] QuantumCircuit parse_qasm(std::string_view text);

/// Rebuilds the unitary from `text` and returns max |U_file - U_model|.
[[nodiscard]] double qasm_deviation(std::string_view text,
                                    const TransformModel &m);

/// Emits, verifies against dense_matrix within `tolerance`, then writes
/// atomically. Throws Error when verification fails; nothing is written then.
void export_qasm(const TransformModel &m, const std::filesystem::path &path,
                 double tolerance = 1e-9);

} // namespace aiqt
