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

// Least-squares power-law fits cRMSE = A k^B in log-log space.

#include <cstddef>
#include <span>
#include <string>

namespace aiqt {

struct PowerLawFit {
    double amplitude = 0.0; ///< A
    double exponent = 0.0;  ///< B
    double r_squared = 0.0; ///< in log space, clamped to [0, 1]
    std::size_t points = 0;
};

/// OLS of ln y on ln k. Throws FitRefused with fewer than three distinct k,
/// mismatched lengths, or any non-positive (or non-finite) value. When the
/// log values have no spread the fit is exact and R^2 is reported as 1.
[[nodiscard]] PowerLawFit fit_power_law(std::span<const double> k,
                                        std::span<const double> y);

/// CSV "series,k,crmse": the observed points followed by `line_points`
/// log-spaced samples of the fitted curve across the observed k range.
[[nodiscard]] std::string power_law_csv(const PowerLawFit &fit,
                                        std::span<const double> k,
                                        std::span<const double> y,
                                        std::size_t line_points = 50);

} // namespace aiqt
