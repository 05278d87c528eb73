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

#include "aiqt/powerlaw.hpp"

#include "aiqt/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace aiqt {

PowerLawFit fit_power_law(std::span<const double> k, std::span<const double> y) {
    if (k.size() != y.size()) {
        throw FitRefused("power-law fit: k and cRMSE lengths differ");
    }
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!(k[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(k[i]) ||
            !std::isfinite(y[i])) {
            throw FitRefused("power-law fit: point " + std::to_string(i) +
                             " is not strictly positive");
        }
    }
    if (std::set<double>(k.begin(), k.end()).size() < 3) {
        throw FitRefused("power-law fit needs at least 3 distinct k values");
    }
    const auto n = static_cast<double>(k.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        mx += std::log(k[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double dx = std::log(k[i]) - mx;
        const double dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    PowerLawFit fit;
    fit.points = k.size();
    fit.exponent = sxy / sxx;
    fit.amplitude = std::exp(my - fit.exponent * mx);
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            const double r = std::log(y[i]) -
                             (my + fit.exponent * (std::log(k[i]) - mx));
            ss_res += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

std::string power_law_csv(const PowerLawFit &fit, std::span<const double> k,
                          std::span<const double> y, std::size_t line_points) {
    std::ostringstream out;
    out.precision(17);
    out << "series,k,crmse\n";
    for (std::size_t i = 0; i < k.size() && i < y.size(); ++i) {
        out << "observed," << k[i] << ',' << y[i] << '\n';
    }
    if (k.empty() || line_points == 0) {
        return out.str();
    }
    const auto [lo_it, hi_it] = std::minmax_element(k.begin(), k.end());
    const double lo = std::log(*lo_it);
    const double hi = std::log(*hi_it);
    for (std::size_t i = 0; i < line_points; ++i) {
        const double t = line_points == 1
                             ? 0.0
                             : static_cast<double>(i) /
                                   static_cast<double>(line_points - 1);
        const double kk = std::exp(lo + t * (hi - lo));
        out << "fit," << kk << ',' << fit.amplitude * std::pow(kk, fit.exponent)
            << '\n';
    }
    return out.str();
}

} // namespace aiqt
