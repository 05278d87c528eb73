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
 * Gate-level view of the transform and dense verification oracles.
 *
 * Qubit b of a circuit addresses bit b of the amplitude index (qubit 0 is the
 * least significant bit). Dense unitaries are built by applying each gate to
 * the identity column by column; nothing here touches the butterfly kernel.
 */

#include "aiqt/transform.hpp"
#include "aiqt/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace aiqt {

using DenseMatrix = Eigen::MatrixXcd;

enum class GateKind { U3, ControlledPhase, Swap };

struct Gate {
    GateKind kind;
    std::size_t q0;     ///< target (U3), first wire otherwise
    std::size_t q1 = 0; ///< second wire for two-qubit gates
    double a = 0.0;     ///< alpha / theta
    double b = 0.0;     ///< beta
    double c = 0.0;     ///< gamma

    static Gate u3(std::size_t q, double alpha, double beta, double gamma) {
        return {GateKind::U3, q, 0, alpha, beta, gamma};
    }
    static Gate cphase(std::size_t control, std::size_t target, double theta) {
        return {GateKind::ControlledPhase, control, target, theta, 0.0, 0.0};
    }
    static Gate swap(std::size_t a, std::size_t b) {
        return {GateKind::Swap, a, b, 0.0, 0.0, 0.0};
    }
};

struct QuantumCircuit {
    std::size_t qubits = 0;
    std::vector<Gate> gates;
};

struct GateCounts {
    std::size_t single_qubit = 0;
    std::size_t controlled_phase = 0;
    std::size_t swaps = 0;
};

/// Gate list of one block in time order, ending with the swap network that
/// reverses the qubit order (the block as a standalone transform).
[[nodiscard]] QuantumCircuit block_circuit(const ParameterSet &p);
/// Gates of every block, block 0 first, then one swap network.
[[nodiscard]] QuantumCircuit model_circuit(const TransformModel &m);

[[nodiscard]] GateCounts count_gates(const QuantumCircuit &c);

/// Largest qubit count accepted by the dense builders.
inline constexpr std::size_t kDenseQubitLimit = 12;

/// Unitary of a gate list. Throws ResourceLimit above kDenseQubitLimit.
[[nodiscard]] DenseMatrix circuit_unitary(const QuantumCircuit &c);

[[nodiscard]] DenseMatrix dense_matrix(const ParameterSet &p);
/// Unitary of model_circuit(m).
[[nodiscard]] DenseMatrix dense_matrix(const TransformModel &m);

/// Unitary DFT matrix F[j][l] = exp(-2 pi i j l / N) / sqrt(N).
[[nodiscard]] DenseMatrix dft_matrix(std::size_t dimension);

/// O(N^2) unitary DFT with the same kernel as dft_matrix.
[[nodiscard]] ComplexVector dft_oracle(std::span<const Complex> x);

/// max |M^dagger M - I|.
[[nodiscard]] double unitarity_error(const DenseMatrix &m);

[[nodiscard]] ComplexVector matvec(const DenseMatrix &m,
                                   std::span<const Complex> x);

} // namespace aiqt
