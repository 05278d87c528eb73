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

#include "aiqt/transform.hpp"
#include "aiqt/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>

namespace aiqt::test {

inline constexpr double kPi = std::numbers::pi;

inline ComplexVector random_complex(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> nd;
    ComplexVector v(n);
    for (auto &z : v) {
        z = {nd(rng), nd(rng)};
    }
    return v;
}

inline RealVector random_real(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> nd;
    RealVector v(n);
    for (auto &z : v) {
        z = nd(rng);
    }
    return v;
}

inline ComplexVector random_state(std::mt19937_64 &rng, std::size_t n) {
    ComplexVector v = random_complex(rng, n);
    double s = 0.0;
    for (const auto &z : v) {
        s += std::norm(z);
    }
    for (auto &z : v) {
        z /= std::sqrt(s);
    }
    return v;
}

inline ParameterSet random_params(std::mt19937_64 &rng, std::size_t qubits) {
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    ParameterSet p(qubits);
    std::vector<double> flat(p.parameter_count());
    for (auto &a : flat) {
        a = ang(rng);
    }
    p.assign_from(flat);
    return p;
}

inline TransformModel random_model(std::mt19937_64 &rng, std::size_t qubits,
                                   std::size_t depth) {
    std::vector<ParameterSet> blocks;
    for (std::size_t d = 0; d < depth; ++d) {
        blocks.push_back(random_params(rng, qubits));
    }
    return {qubits, std::move(blocks)};
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline double norm2(std::span<const Complex> a) {
    double s = 0.0;
    for (const auto &z : a) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

inline ComplexVector to_complex(std::span<const double> x) {
    return {x.begin(), x.end()};
}

} // namespace aiqt::test
