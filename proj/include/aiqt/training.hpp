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
 * Tail-loss training of a TransformModel.
 *
 * Per sample the coefficients y = U x give energies m. The hard tail is the
 * energy outside the top-k set. For gradients a soft keep-gate
 *
 *     g_j = sigmoid((m_j - t) / tau)
 *
 * replaces the indicator of the top-k set, with the threshold t placed midway
 * between the k-th and (k+1)-th largest energies and held constant during
 * differentiation. The objective adds lambda * H(m), H the Shannon entropy.
 * Reported values use the hard tail (straight-through); gradients are those
 * of the soft surrogate sum_j (1 - g_j) m_j + lambda H(m).
 */

#include "aiqt/error.hpp"
#include "aiqt/transform.hpp"
#include "aiqt/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aiqt {

struct LossConfig {
    std::size_t k = 1;
    double temperature = 1e-2;    ///< tau
    double entropy_weight = 1e-4; ///< lambda

    /// Throws InvalidArgument unless tau > 0, lambda >= 0, 1 <= k <= dim.
    void validate(std::size_t dimension) const;
};

/// Soft keep-gate threshold: midpoint of the k-th and (k+1)-th largest
/// energies; for k == N every coefficient is kept and the result is -inf.
[[nodiscard]] double soft_threshold(std::span<const double> m, std::size_t k);

/// sigmoid((m - threshold) / tau).
[[nodiscard]] double soft_gate(double m, double threshold, double tau);

/// -sum m ln m with 0 ln 0 = 0.
[[nodiscard]] double entropy(std::span<const double> m);

/// Batch means of the loss components.
struct LossValue {
    double hard_tail = 0.0; ///< mean hard tail energy
    double soft_tail = 0.0; ///< mean soft-gated tail
    double entropy = 0.0;   ///< mean H(m), unweighted
    double entropy_term = 0.0; ///< lambda * mean H(m)

    /// Straight-through forward value: hard tail plus entropy term.
    [[nodiscard]] double objective() const { return hard_tail + entropy_term; }
    /// Value of the smooth surrogate whose gradient is used.
    [[nodiscard]] double surrogate() const { return soft_tail + entropy_term; }
};

/// Mean hard tail energy over the batch (plain top-k).
[[nodiscard]] double tail_loss(std::span<const RealVector> batch,
                               const TransformModel &m, std::size_t k,
                               std::size_t workers = 1);

[[nodiscard]] LossValue soft_masked_loss(std::span<const RealVector> batch,
                                         const TransformModel &m,
                                         const LossConfig &cfg,
                                         std::size_t workers = 1);

struct GradientResult {
    LossValue loss;
    /// d(surrogate)/d(angle), aligned with TransformModel::flatten().
    std::vector<double> gradient;
};

/// Analytic reverse-mode gradient of the batch-mean surrogate. Per-sample
/// gradients are reduced in sample order, so the result does not depend on
/// the worker count. Throws NumericFailure naming the first non-finite entry.
[[nodiscard]] GradientResult backward(std::span<const RealVector> batch,
                                      const TransformModel &m,
                                      const LossConfig &cfg,
                                      std::size_t workers = 1);

/// Central differences of the surrogate with every sample's threshold frozen
/// at its value for the unperturbed model. Guarded to n <= 6 and D <= 3.
[[nodiscard]] std::vector<double>
fd_gradient_oracle(std::span<const RealVector> batch, const TransformModel &m,
                   const LossConfig &cfg, double step = 1e-5);

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Bias-corrected Adam over a flat parameter vector.
class AdamOptimizer {
  public:
    AdamOptimizer(std::size_t parameter_count, AdamConfig config = {});

    void step(std::span<double> params, std::span<const double> grad,
              double learning_rate);

    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] std::span<const double> first_moment() const noexcept {
        return m_;
    }
    [[nodiscard]] std::span<const double> second_moment() const noexcept {
        return v_;
    }

  private:
    AdamConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::size_t steps_ = 0;
};

/// Cosine annealing from lr_max to lr_min over the first ceil(2E/3) epochs,
/// then held at lr_min. `epoch` is 0-based.
[[nodiscard]] double learning_rate(std::size_t epoch, std::size_t total_epochs,
                                   double lr_max, double lr_min);

struct TrainConfig {
    LossConfig loss;
    std::size_t epochs = 150;
    std::size_t batch_size = 128;
    double lr_max = 1e-3;
    double lr_min = 1e-5;
    AdamConfig adam;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    /// Write a checkpoint every this many epochs when > 0.
    std::size_t checkpoint_every = 0;
    std::filesystem::path checkpoint_dir;

    void validate(std::size_t dimension) const;
};

/// One history row. Row 0 describes the initial model; row e the model after
/// e epochs, with `lr` the rate used during that epoch. Metrics are measured
/// on the full training set with plain top-k selection.
struct EpochRecord {
    std::size_t epoch = 0;
    double lr = 0.0;
    double hard_tail_loss = 0.0;
    double soft_loss = 0.0;
    double entropy_term = 0.0;
    double mean_imag_norm = 0.0;
    double mean_real_norm = 0.0;
    double wall_time_s = 0.0;
};

struct TrainResult {
    TransformModel model;
    std::vector<EpochRecord> history;
};

/// Raised when the loss turns non-finite; carries the model from the last
/// completed epoch.
class TrainingFailure : public Error {
  public:
    TrainingFailure(const std::string &what, TransformModel last_good,
                    std::size_t epoch)
        : Error(what), last_good_(std::move(last_good)), epoch_(epoch) {}
    [[nodiscard]] const TransformModel &last_good() const noexcept {
        return last_good_;
    }
    [[nodiscard]] std::size_t epoch() const noexcept { return epoch_; }

  private:
    TransformModel last_good_;
    std::size_t epoch_;
};

/// Called after every history row is recorded.
using EpochCallback =
    std::function<void(const EpochRecord &, const TransformModel &)>;

/// Minibatch Adam on the surrogate; deterministic for a fixed seed.
[[nodiscard]] TrainResult train(std::span<const RealVector> train_set,
                                TransformModel initial,
                                const TrainConfig &config,
                                const EpochCallback &on_epoch = {});

/// CSV: epoch, lr, hard_tail_loss, soft_loss, entropy_term, mean_imag_norm,
/// mean_real_norm, wall_time_s.
[[nodiscard]] std::string history_csv(std::span<const EpochRecord> history);

} // namespace aiqt
