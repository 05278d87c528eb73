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

#include "aiqt/transform.hpp"

#include "aiqt/detail/butterfly.hpp"
#include "aiqt/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace aiqt {

namespace {

void require_finite(double angle, const char *name) {
    if (!std::isfinite(angle)) {
        throw InvalidArgument(std::string("non-finite angle: ") + name);
    }
}

void require_length(std::size_t length, std::size_t qubits) {
    if (!is_power_of_two(length) || length != (std::size_t{1} << qubits)) {
        throw InvalidArgument("vector length " + std::to_string(length) +
                              " does not match 2^" + std::to_string(qubits));
    }
}

} // namespace

Matrix2 u3_matrix(double alpha, double beta, double gamma) {
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_finite(gamma, "gamma");
    const double c = std::cos(alpha / 2.0);
    const double s = std::sin(alpha / 2.0);
    return {{{Complex{c, 0.0}, -std::polar(s, gamma)},
             {std::polar(s, beta), std::polar(c, beta + gamma)}}};
}

// ParameterSet ---------------------------------------------------------------

ParameterSet::ParameterSet(std::size_t qubits)
    : qubits_(qubits), mixers_(qubits), phases_(qubits * (qubits - 1) / 2) {
    if (qubits < 1 || qubits > 30) {
        throw InvalidArgument("qubit count must be in [1, 30]");
    }
}

ParameterSet::ParameterSet(std::size_t qubits, std::vector<MixerAngles> mixers,
                           std::vector<double> phases)
    : qubits_(qubits), mixers_(std::move(mixers)), phases_(std::move(phases)) {
    if (qubits < 1 || qubits > 30) {
        throw InvalidArgument("qubit count must be in [1, 30]");
    }
    if (mixers_.size() != qubits) {
        throw InvalidArgument("expected " + std::to_string(qubits) +
                              " mixer triples, got " +
                              std::to_string(mixers_.size()));
    }
    if (phases_.size() != qubits * (qubits - 1) / 2) {
        throw InvalidArgument("expected " +
                              std::to_string(qubits * (qubits - 1) / 2) +
                              " phase angles, got " +
                              std::to_string(phases_.size()));
    }
    validate();
}

std::span<const double> ParameterSet::level(std::size_t level) const {
    if (level < 1 || level >= qubits_) {
        throw InvalidArgument("ladder level out of range");
    }
    return std::span<const double>(phases_).subspan(level_offset(level),
                                                    level);
}

std::span<double> ParameterSet::level(std::size_t level) {
    if (level < 1 || level >= qubits_) {
        throw InvalidArgument("ladder level out of range");
    }
    return std::span<double>(phases_).subspan(level_offset(level), level);
}

void ParameterSet::flatten_into(std::span<double> out) const {
    if (out.size() != parameter_count()) {
        throw InvalidArgument("flatten: wrong output size");
    }
    std::size_t i = 0;
    for (const auto &m : mixers_) {
        out[i++] = m.alpha;
        out[i++] = m.beta;
        out[i++] = m.gamma;
    }
    for (double t : phases_) {
        out[i++] = t;
    }
}

void ParameterSet::assign_from(std::span<const double> in) {
    if (in.size() != parameter_count()) {
        throw InvalidArgument("assign: wrong parameter count");
    }
    std::size_t i = 0;
    for (auto &m : mixers_) {
        m.alpha = in[i++];
        m.beta = in[i++];
        m.gamma = in[i++];
    }
    for (double &t : phases_) {
        t = in[i++];
    }
}

void ParameterSet::validate() const {
    for (const auto &m : mixers_) {
        require_finite(m.alpha, "alpha");
        require_finite(m.beta, "beta");
        require_finite(m.gamma, "gamma");
    }
    for (double t : phases_) {
        require_finite(t, "theta");
    }
}

// TransformModel -------------------------------------------------------------

TransformModel::TransformModel(std::size_t qubits,
                               std::vector<ParameterSet> blocks)
    : qubits_(qubits), blocks_(std::move(blocks)) {
    if (blocks_.empty()) {
        throw InvalidArgument("a model needs at least one block");
    }
    for (const auto &b : blocks_) {
        if (b.qubits() != qubits_) {
            throw InvalidArgument("block qubit count does not match model");
        }
    }
}

std::vector<double> TransformModel::flatten() const {
    const std::size_t per_block = ParameterSet::parameter_count(qubits_);
    std::vector<double> flat(parameter_count());
    for (std::size_t d = 0; d < blocks_.size(); ++d) {
        blocks_[d].flatten_into(
            std::span<double>(flat).subspan(d * per_block, per_block));
    }
    return flat;
}

void TransformModel::assign_from(std::span<const double> flat) {
    const std::size_t per_block = ParameterSet::parameter_count(qubits_);
    if (flat.size() != parameter_count()) {
        throw InvalidArgument("model assign: wrong parameter count");
    }
    for (std::size_t d = 0; d < blocks_.size(); ++d) {
        blocks_[d].assign_from(flat.subspan(d * per_block, per_block));
    }
}

// Initializations ------------------------------------------------------------

ParameterSet fourier_init(std::size_t qubits) {
    ParameterSet p(qubits);
    for (auto &m : p.mixers()) {
        m = {std::numbers::pi / 2.0, 0.0, std::numbers::pi};
    }
    for (std::size_t level = 1; level < qubits; ++level) {
        auto angles = p.level(level);
        for (std::size_t q = 0; q < level; ++q) {
            angles[q] = -std::numbers::pi / std::ldexp(1.0, int(level - q));
        }
    }
    return p;
}

ParameterSet identity_init(std::size_t qubits) { return ParameterSet(qubits); }

TransformModel deep_init(std::size_t qubits, std::size_t depth,
                         std::uint64_t seed, double noise) {
    if (depth < 1) {
        throw InvalidArgument("depth must be >= 1");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw InvalidArgument("init noise must be finite and >= 0");
    }
    std::vector<ParameterSet> blocks;
    blocks.reserve(depth);
    blocks.push_back(fourier_init(qubits));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-noise, noise);
    for (std::size_t d = 1; d < depth; ++d) {
        ParameterSet p = identity_init(qubits);
        if (noise > 0.0) {
            // U3(0, b, -b) == I for every b.
            for (auto &m : p.mixers()) {
                m.beta = jitter(rng);
                m.gamma = -m.beta;
            }
        }
        blocks.push_back(std::move(p));
    }
    return TransformModel(qubits, std::move(blocks));
}

// Butterfly ------------------------------------------------------------------

namespace detail {

void stage_twiddles(std::span<const double> angles, std::span<Complex> tw) {
    tw[0] = Complex{1.0, 0.0};
    for (std::size_t q = 0; q < angles.size(); ++q) {
        const std::size_t top = std::size_t{1} << q;
        const Complex e = std::polar(1.0, angles[q]);
        for (std::size_t k = 0; k < top; ++k) {
            tw[top + k] = tw[k] * e;
        }
    }
}

void apply_stage(std::span<Complex> v, std::size_t stage, const Matrix2 &u,
                 std::span<const Complex> tw) {
    const std::size_t half = std::size_t{1} << stage;
    for (std::size_t base = 0; base < v.size(); base += 2 * half) {
        for (std::size_t k = 0; k < half; ++k) {
            const Complex a = v[base + k];
            const Complex b = v[base + half + k] * tw[k];
            v[base + k] = u[0][0] * a + u[0][1] * b;
            v[base + half + k] = u[1][0] * a + u[1][1] * b;
        }
    }
}

void apply_stage_adjoint(std::span<Complex> v, std::size_t stage,
                         const Matrix2 &u, std::span<const Complex> tw) {
    const Matrix2 ud = adjoint(u);
    const std::size_t half = std::size_t{1} << stage;
    for (std::size_t base = 0; base < v.size(); base += 2 * half) {
        for (std::size_t k = 0; k < half; ++k) {
            const Complex a = v[base + k];
            const Complex b = v[base + half + k];
            v[base + k] = ud[0][0] * a + ud[0][1] * b;
            v[base + half + k] =
                (ud[1][0] * a + ud[1][1] * b) * std::conj(tw[k]);
        }
    }
}

} // namespace detail

void bit_reverse_permute(std::span<Complex> v) {
    const std::size_t n = v.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(v[i], v[j]);
        }
    }
}

namespace {

// Butterfly stages of one block on input that is already bit-reversed.
void run_stages(std::span<Complex> v, const ParameterSet &p) {
    ComplexVector tw(v.size() / 2);
    for (std::size_t s = 0; s < p.qubits(); ++s) {
        const auto &m = p.mixers()[s];
        const auto angles = s == 0 ? std::span<const double>{} : p.level(s);
        detail::stage_twiddles(angles, tw);
        detail::apply_stage(v, s, u3_matrix(m.alpha, m.beta, m.gamma), tw);
    }
}

void run_stages_adjoint(std::span<Complex> v, const ParameterSet &p) {
    ComplexVector tw(v.size() / 2);
    for (std::size_t s = p.qubits(); s-- > 0;) {
        const auto &m = p.mixers()[s];
        const auto angles = s == 0 ? std::span<const double>{} : p.level(s);
        detail::stage_twiddles(angles, tw);
        detail::apply_stage_adjoint(v, s, u3_matrix(m.alpha, m.beta, m.gamma),
                                    tw);
    }
}

} // namespace

void forward_in_place(std::span<Complex> v, const ParameterSet &p) {
    require_length(v.size(), p.qubits());
    bit_reverse_permute(v);
    run_stages(v, p);
}

void inverse_in_place(std::span<Complex> v, const ParameterSet &p) {
    require_length(v.size(), p.qubits());
    run_stages_adjoint(v, p);
    bit_reverse_permute(v);
}

ComplexVector forward(std::span<const Complex> x, const ParameterSet &p) {
    ComplexVector v(x.begin(), x.end());
    forward_in_place(v, p);
    return v;
}

ComplexVector inverse(std::span<const Complex> y, const ParameterSet &p) {
    ComplexVector v(y.begin(), y.end());
    inverse_in_place(v, p);
    return v;
}

ComplexVector deep_forward(std::span<const Complex> x,
                           const TransformModel &m) {
    require_length(x.size(), m.qubits());
    ComplexVector v(x.begin(), x.end());
    bit_reverse_permute(v);
    for (const auto &block : m.blocks()) {
        run_stages(v, block);
    }
    return v;
}

ComplexVector deep_inverse(std::span<const Complex> y,
                           const TransformModel &m) {
    require_length(y.size(), m.qubits());
    ComplexVector v(y.begin(), y.end());
    for (auto it = m.blocks().rbegin(); it != m.blocks().rend(); ++it) {
        run_stages_adjoint(v, *it);
    }
    bit_reverse_permute(v);
    return v;
}

} // namespace aiqt
