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

#include "aiqt/circuit.hpp"

#include "aiqt/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace aiqt {

namespace {

void append_block_gates(QuantumCircuit &c, const ParameterSet &p) {
    const std::size_t n = p.qubits();
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t wire = n - 1 - s;
        for (std::size_t q = 0; q < s; ++q) {
            c.gates.push_back(Gate::cphase(wire, n - 1 - q, p.level(s)[q]));
        }
        const auto &m = p.mixers()[s];
        c.gates.push_back(Gate::u3(wire, m.alpha, m.beta, m.gamma));
    }
}

void append_reversal(QuantumCircuit &c) {
    const std::size_t n = c.qubits;
    for (std::size_t b = 0; b < n / 2; ++b) {
        c.gates.push_back(Gate::swap(b, n - 1 - b));
    }
}

} // namespace

QuantumCircuit block_circuit(const ParameterSet &p) {
    QuantumCircuit c{p.qubits(), {}};
    append_block_gates(c, p);
    append_reversal(c);
    return c;
}

QuantumCircuit model_circuit(const TransformModel &m) {
    QuantumCircuit c{m.qubits(), {}};
    for (const auto &block : m.blocks()) {
        append_block_gates(c, block);
    }
    append_reversal(c);
    return c;
}

GateCounts count_gates(const QuantumCircuit &c) {
    GateCounts counts;
    for (const auto &g : c.gates) {
        switch (g.kind) {
        case GateKind::U3:
            ++counts.single_qubit;
            break;
        case GateKind::ControlledPhase:
            ++counts.controlled_phase;
            break;
        case GateKind::Swap:
            ++counts.swaps;
            break;
        }
    }
    return counts;
}

namespace {

void check_wire(std::size_t wire, std::size_t qubits) {
    if (wire >= qubits) {
        throw InvalidArgument("gate wire " + std::to_string(wire) +
                              " out of range");
    }
}

// Left-multiplies `m` by the gate, treating every column as a state vector.
void apply_gate(DenseMatrix &m, const Gate &g, std::size_t qubits) {
    const auto dim = static_cast<Eigen::Index>(m.rows());
    switch (g.kind) {
    case GateKind::U3: {
        check_wire(g.q0, qubits);
        const Eigen::Index bit = Eigen::Index{1} << g.q0;
        const double ch = std::cos(g.a / 2.0);
        const double sh = std::sin(g.a / 2.0);
        const Complex u00{ch, 0.0};
        const Complex u01 = -std::polar(sh, g.c);
        const Complex u10 = std::polar(sh, g.b);
        const Complex u11 = std::polar(ch, g.b + g.c);
        for (Eigen::Index r0 = 0; r0 < dim; ++r0) {
            if (r0 & bit) {
                continue;
            }
            const Eigen::Index r1 = r0 | bit;
            for (Eigen::Index col = 0; col < dim; ++col) {
                const Complex v0 = m(r0, col);
                const Complex v1 = m(r1, col);
                m(r0, col) = u00 * v0 + u01 * v1;
                m(r1, col) = u10 * v0 + u11 * v1;
            }
        }
        break;
    }
    case GateKind::ControlledPhase: {
        check_wire(g.q0, qubits);
        check_wire(g.q1, qubits);
        if (g.q0 == g.q1) {
            throw InvalidArgument("controlled phase on a single wire");
        }
        const Eigen::Index mask =
            (Eigen::Index{1} << g.q0) | (Eigen::Index{1} << g.q1);
        const Complex phase = std::polar(1.0, g.a);
        for (Eigen::Index r = 0; r < dim; ++r) {
            if ((r & mask) == mask) {
                m.row(r) *= phase;
            }
        }
        break;
    }
    case GateKind::Swap: {
        check_wire(g.q0, qubits);
        check_wire(g.q1, qubits);
        const Eigen::Index b0 = Eigen::Index{1} << g.q0;
        const Eigen::Index b1 = Eigen::Index{1} << g.q1;
        for (Eigen::Index r = 0; r < dim; ++r) {
            if ((r & b0) && !(r & b1)) {
                m.row(r).swap(m.row((r ^ b0) | b1));
            }
        }
        break;
    }
    }
}

} // namespace

DenseMatrix circuit_unitary(const QuantumCircuit &c) {
    if (c.qubits > kDenseQubitLimit) {
        throw ResourceLimit("dense unitary limited to " +
                            std::to_string(kDenseQubitLimit) + " qubits");
    }
    if (c.qubits < 1) {
        throw InvalidArgument("circuit has no qubits");
    }
    const auto dim = Eigen::Index{1} << c.qubits;
    DenseMatrix m = DenseMatrix::Identity(dim, dim);
    for (const auto &g : c.gates) {
        apply_gate(m, g, c.qubits);
    }
    return m;
}

DenseMatrix dense_matrix(const ParameterSet &p) {
    if (p.qubits() > kDenseQubitLimit) {
        throw ResourceLimit("dense_matrix limited to " +
                            std::to_string(kDenseQubitLimit) + " qubits");
    }
    return circuit_unitary(block_circuit(p));
}

DenseMatrix dense_matrix(const TransformModel &m) {
    if (m.qubits() > kDenseQubitLimit) {
        throw ResourceLimit("dense_matrix limited to " +
                            std::to_string(kDenseQubitLimit) + " qubits");
    }
    return circuit_unitary(model_circuit(m));
}

DenseMatrix dft_matrix(std::size_t dimension) {
    if (!is_power_of_two(dimension)) {
        throw InvalidArgument("DFT dimension must be a power of two");
    }
    const auto dim = static_cast<Eigen::Index>(dimension);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
    DenseMatrix f(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index l = 0; l < dim; ++l) {
            const auto r = static_cast<double>((j * l) % dim);
            f(j, l) = std::polar(scale, -2.0 * std::numbers::pi * r /
                                            static_cast<double>(dim));
        }
    }
    return f;
}

ComplexVector dft_oracle(std::span<const Complex> x) {
    const std::size_t dim = x.size();
    if (!is_power_of_two(dim)) {
        throw InvalidArgument("DFT length must be a power of two");
    }
    ComplexVector roots(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        roots[r] = std::polar(1.0, -2.0 * std::numbers::pi *
                                       static_cast<double>(r) /
                                       static_cast<double>(dim));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    ComplexVector y(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t l = 0; l < dim; ++l) {
            acc += x[l] * roots[(j * l) % dim];
        }
        y[j] = acc * scale;
    }
    return y;
}

double unitarity_error(const DenseMatrix &m) {
    const DenseMatrix gram = m.adjoint() * m;
    return (gram - DenseMatrix::Identity(m.rows(), m.cols()))
        .cwiseAbs()
        .maxCoeff();
}

ComplexVector matvec(const DenseMatrix &m, std::span<const Complex> x) {
    if (static_cast<Eigen::Index>(x.size()) != m.cols()) {
        throw InvalidArgument("matrix/vector size mismatch");
    }
    const Eigen::Map<const Eigen::VectorXcd> in(x.data(), m.cols());
    const Eigen::VectorXcd out = m * in;
    return ComplexVector(out.data(), out.data() + out.size());
}

} // namespace aiqt
