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

#include <cstddef>
#include <span>

namespace aiqt::detail {

/// tw[k] = exp(i * sum of angles[q] over the set bits q of k), for
/// k < 2^angles.size(). O(2^s).
void stage_twiddles(std::span<const double> angles, std::span<Complex> tw);

/// One forward stage: odd member of each pair times tw[k], then U mix.
void apply_stage(std::span<Complex> v, std::size_t stage, const Matrix2 &u,
                 std::span<const Complex> tw);

/// Exact adjoint of apply_stage.
void apply_stage_adjoint(std::span<Complex> v, std::size_t stage,
                         const Matrix2 &u, std::span<const Complex> tw);

[[nodiscard]] inline Matrix2 adjoint(const Matrix2 &u) {
    return {{{std::conj(u[0][0]), std::conj(u[1][0])},
             {std::conj(u[0][1]), std::conj(u[1][1])}}};
}

} // namespace aiqt::detail
