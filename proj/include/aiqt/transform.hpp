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
 * Trainable butterfly transform built on the quantum Fourier transform
 * skeleton.
 *
 * A block on n qubits (N = 2^n amplitudes) runs n butterfly stages. The input
 * is first put in bit-reversed order; stage s then pairs elements that are
 * 2^s apart inside blocks of 2^(s+1). The odd member of every pair is
 * multiplied by a twiddle e^{i phi_s(k)}, where k < 2^s is the position inside
 * the block and
 *
 *     phi_s(k) = sum over set bits q of k of theta[s][q],
 *
 * and the pair is then mixed by the stage's U3 gate. Stage 0 has no phases,
 * stage s has s of them, so the phase ladder holds n(n-1)/2 angles packed
 * level by level (level L == stage L, L = 1..n-1).
 *
 * In circuit form (qubit b == bit b of the amplitude index), stage s is the
 * U3 on qubit n-1-s preceded by controlled phases CR(theta[s][q]) between
 * qubits n-1-s and n-1-q; a final swap network reverses the qubit order. With
 * the Fourier initialization every mixer is a Hadamard and
 * theta[L][q] = -pi / 2^(L-q), which reproduces the unitary DFT with kernel
 * exp(-2 pi i j l / N) in natural index order.
 *
 * A depth-D model applies the gates of blocks 1..D in turn and reverses the
 * qubit order once at the end, U = R C_D ... C_1. A block with all angles
 * zero is therefore the identity inside a model, while a single block on its
 * own (forward, inverse, dense_matrix of a ParameterSet) is R C and reduces
 * to the bit-reversal permutation at zero angles.
 */

#include "aiqt/types.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aiqt {

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

/// U3(alpha, beta, gamma) =
///   [[cos(a/2), -e^{i g} sin(a/2)], [e^{i b} sin(a/2), e^{i(b+g)} cos(a/2)]].
/// Throws InvalidArgument on a non-finite angle.
[[nodiscard]] Matrix2 u3_matrix(double alpha, double beta, double gamma);

struct MixerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    friend bool operator==(const MixerAngles &, const MixerAngles &) = default;
};

/// All trainable angles of one transform block.
class ParameterSet {
  public:
    /// All-zero angles (the identity transform) on `qubits` qubits.
    explicit ParameterSet(std::size_t qubits);
    ParameterSet(std::size_t qubits, std::vector<MixerAngles> mixers,
                 std::vector<double> phases);

    [[nodiscard]] std::size_t qubits() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return std::size_t{1} << qubits_;
    }

    [[nodiscard]] std::span<const MixerAngles> mixers() const noexcept {
        return mixers_;
    }
    [[nodiscard]] std::span<MixerAngles> mixers() noexcept { return mixers_; }
    [[nodiscard]] std::span<const double> phases() const noexcept {
        return phases_;
    }
    [[nodiscard]] std::span<double> phases() noexcept { return phases_; }

    /// Angles of ladder level `level` (1 <= level < n), level[q] acting on
    /// bit q of the in-block position.
    [[nodiscard]] std::span<const double> level(std::size_t level) const;
    [[nodiscard]] std::span<double> level(std::size_t level);

    /// 3n + n(n-1)/2.
    [[nodiscard]] static constexpr std::size_t
    parameter_count(std::size_t qubits) noexcept {
        return 3 * qubits + qubits * (qubits - 1) / 2;
    }
    [[nodiscard]] std::size_t parameter_count() const noexcept {
        return parameter_count(qubits_);
    }
    /// Offset of level L inside the packed phase array.
    [[nodiscard]] static constexpr std::size_t
    level_offset(std::size_t level) noexcept {
        return level * (level - 1) / 2;
    }

    /// Flattening order: (alpha, beta, gamma) per stage, then packed phases.
    void flatten_into(std::span<double> out) const;
    void assign_from(std::span<const double> in);

    /// Throws InvalidArgument when any angle is non-finite.
    void validate() const;

    friend bool operator==(const ParameterSet &, const ParameterSet &) = default;

  private:
    std::size_t qubits_;
    std::vector<MixerAngles> mixers_;
    std::vector<double> phases_;
};

/// Depth-D stack of blocks; block 0 is applied first, followed by one
/// output qubit reversal.
class TransformModel {
  public:
    TransformModel(std::size_t qubits, std::vector<ParameterSet> blocks);

    [[nodiscard]] std::size_t qubits() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return std::size_t{1} << qubits_;
    }
    [[nodiscard]] std::size_t depth() const noexcept { return blocks_.size(); }

    [[nodiscard]] const std::vector<ParameterSet> &blocks() const noexcept {
        return blocks_;
    }
    [[nodiscard]] ParameterSet &block(std::size_t d) { return blocks_.at(d); }
    [[nodiscard]] const ParameterSet &block(std::size_t d) const {
        return blocks_.at(d);
    }

    [[nodiscard]] std::size_t parameter_count() const noexcept {
        return depth() * ParameterSet::parameter_count(qubits_);
    }
    [[nodiscard]] std::vector<double> flatten() const;
    void assign_from(std::span<const double> flat);

    friend bool operator==(const TransformModel &,
                           const TransformModel &) = default;

  private:
    std::size_t qubits_;
    std::vector<ParameterSet> blocks_;
};

/// Mixers U3(pi/2, 0, pi); level L holds (-pi/2^L, ..., -pi/2).
[[nodiscard]] ParameterSet fourier_init(std::size_t qubits);

/// All angles zero. Exactly the identity as a block of a TransformModel;
/// forward() of the lone block is the bit-reversal permutation.
[[nodiscard]] ParameterSet identity_init(std::size_t qubits);

/// Block 0 Fourier, blocks 1..D-1 identity with seeded mixer angles
/// (0, b, -b), b uniform in [-noise, noise]. Each such block is exactly the
/// identity map and the model equals fourier_model.
[[nodiscard]] TransformModel deep_init(std::size_t qubits, std::size_t depth,
                                       std::uint64_t seed,
                                       double noise = 1e-2);

/// y = U(p) x. Throws InvalidArgument on length mismatch.
[[nodiscard]] ComplexVector forward(std::span<const Complex> x,
                                    const ParameterSet &p);
/// x = U(p)^dagger y, running the stages backwards with adjoint gates.
[[nodiscard]] ComplexVector inverse(std::span<const Complex> y,
                                    const ParameterSet &p);

void forward_in_place(std::span<Complex> v, const ParameterSet &p);
void inverse_in_place(std::span<Complex> v, const ParameterSet &p);

[[nodiscard]] ComplexVector deep_forward(std::span<const Complex> x,
                                         const TransformModel &m);
[[nodiscard]] ComplexVector deep_inverse(std::span<const Complex> y,
                                         const TransformModel &m);

/// Reorders `v` so that v[i] <- v[reverse_bits(i)].
void bit_reverse_permute(std::span<Complex> v);

} // namespace aiqt
