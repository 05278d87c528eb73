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
 * Sparse amplitude-encoding pipeline around a transform: energy profile,
 * coefficient selection, truncation, reconstruction and the metrics used to
 * compare reconstructions with the exact encoded state.
 *
 * Indices are 0-based throughout; coefficient j here is coefficient j+1 in
 * 1-based notation.
 */

#include "aiqt/transform.hpp"
#include "aiqt/types.hpp"

#include <json.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aiqt {

/// Normalized squared magnitudes and the descending rank order.
struct EnergyProfile {
    RealVector m;
    /// Indices sorted by m descending; ties keep the lower index first.
    std::vector<std::size_t> rank_order;
};

enum class SelectionRule { PlainTopK, ConjugateSymmetric };

[[nodiscard]] std::string_view to_string(SelectionRule rule) noexcept;
/// Accepts "plain-topk" and "conjugate-symmetric".
[[nodiscard]] SelectionRule parse_selection_rule(std::string_view name);

struct SelectionMask {
    std::vector<std::size_t> kept; ///< sorted ascending
    SelectionRule rule = SelectionRule::PlainTopK;
    std::size_t budget = 0;
};

/// m_j = |y_j|^2 / sum |y_l|^2. Throws DegenerateInput on a zero vector.
[[nodiscard]] EnergyProfile energies(std::span<const Complex> y);

/// The k largest m_j, lowest index first among ties.
[[nodiscard]] SelectionMask select_topk(const EnergyProfile &e, std::size_t k);

/// Always keeps 0 and N/2 (outside the budget), then the top k/2 pairs
/// (j, N-j), j = 1..N/2-1, ranked by m_j + m_{N-j}, lower j first on ties.
/// |kept| = k + 2.
[[nodiscard]] SelectionMask select_conjugate_symmetric(const EnergyProfile &e,
                                                       std::size_t k);

[[nodiscard]] SelectionMask select(const EnergyProfile &e, SelectionRule rule,
                                   std::size_t k);

/// Hard tail: energy outside the mask.
[[nodiscard]] double tail_energy(const EnergyProfile &e,
                                 const SelectionMask &mask);

/// phi_j = y_j / ||y_K|| on the mask, zero elsewhere.
[[nodiscard]] ComplexVector truncate_normalize(std::span<const Complex> y,
                                               const SelectionMask &mask);

/// Inverse transform of a unit-norm coefficient state.
[[nodiscard]] ComplexVector reconstruct(std::span<const Complex> phi,
                                        const TransformModel &m);

/// x / ||x||_2 as complex amplitudes.
[[nodiscard]] ComplexVector exact_state(std::span<const double> x);

/// Single-block Fourier model used by the baseline loader.
[[nodiscard]] TransformModel fourier_model(std::size_t qubits);

struct ReconstructionReport {
    double crmse = 0.0;
    double fidelity = 0.0;
    double imag_norm = 0.0;
    double real_norm = 0.0;
    double tail_loss = 0.0;
    std::size_t kept = 0;
};

/// Metrics between two unit-norm states; tail_loss/kept are left at zero.
[[nodiscard]] ReconstructionReport compare_states(std::span<const Complex> psi,
                                                  std::span<const Complex> rec);

struct PipelineResult {
    ComplexVector exact;
    ComplexVector coefficients;
    SelectionMask mask;
    ComplexVector reconstruction;
    ReconstructionReport report;
};

/// Full pipeline for one real sample.
[[nodiscard]] PipelineResult run_pipeline(std::span<const double> x,
                                          const TransformModel &m,
                                          SelectionRule rule, std::size_t k);

[[nodiscard]] ReconstructionReport evaluate(std::span<const double> x,
                                            const TransformModel &m,
                                            SelectionRule rule, std::size_t k);

/// Unweighted dataset means of the per-sample metrics.
struct DatasetReport {
    std::size_t k = 0;
    SelectionRule rule = SelectionRule::PlainTopK;
    std::size_t depth = 1;
    std::string split;
    std::string method;
    double mean_crmse = 0.0;
    double mean_fidelity = 0.0;
    double mean_imag_norm = 0.0;
    double mean_real_norm = 0.0;
    double mean_tail_loss = 0.0;
    std::size_t kept_size = 0; ///< |K| per sample
    std::size_t n_samples = 0;
};

[[nodiscard]] DatasetReport
evaluate_dataset(std::span<const RealVector> samples, const TransformModel &m,
                 SelectionRule rule, std::size_t k, std::size_t workers = 1);

[[nodiscard]] nlohmann::json to_json(const DatasetReport &r);

struct RankProfile {
    RealVector mean;
    RealVector stddev;
};

/// Per-rank mean and population standard deviation of the sorted energies.
[[nodiscard]] RankProfile rank_profile(std::span<const RealVector> samples,
                                       const TransformModel &m);

/// CSV with columns rank, mean_m, std_m; rank 0 is the largest energy.
[[nodiscard]] std::string rank_profile_csv(const RankProfile &p);

struct PrepCost {
    /// n k / log2(n) + n with unit constants; order-of-magnitude only.
    double sparse_prep_estimate = 0.0;
    /// n + n^2 with unit constants.
    double inverse_transform_estimate = 0.0;
    /// Exact U3 + controlled-phase count of the transform circuit,
    /// depth * (n + n(n-1)/2); swaps not included.
    std::size_t transform_gates = 0;
};

[[nodiscard]] PrepCost sparse_prep_cost(std::size_t qubits, std::size_t k,
                                        std::size_t depth = 1);

} // namespace aiqt
