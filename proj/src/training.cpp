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

#include "aiqt/training.hpp"

#include "aiqt/checkpoint.hpp"
#include "aiqt/detail/butterfly.hpp"
#include "aiqt/encoding.hpp"
#include "aiqt/parallel.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace aiqt {

void LossConfig::validate(std::size_t dimension) const {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw InvalidArgument("soft-mask temperature must be > 0");
    }
    if (!(entropy_weight >= 0.0) || !std::isfinite(entropy_weight)) {
        throw InvalidArgument("entropy weight must be >= 0");
    }
    if (k < 1 || k > dimension) {
        throw InvalidArgument("sparsity k=" + std::to_string(k) +
                              " outside [1, " + std::to_string(dimension) +
                              "]");
    }
}

double soft_threshold(std::span<const double> m, std::size_t k) {
    if (k < 1 || k > m.size()) {
        throw InvalidArgument("threshold rank out of range");
    }
    if (k == m.size()) {
        return -std::numeric_limits<double>::infinity();
    }
    std::vector<double> sorted(m.begin(), m.end());
    // sorted[k-1] = k-th largest, sorted[k] = (k+1)-th largest.
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(k),
                     sorted.end(), std::greater<>());
    const double next = sorted[k];
    const double kth = *std::min_element(
        sorted.begin(), sorted.begin() + static_cast<long>(k));
    return 0.5 * (kth + next);
}

double soft_gate(double m, double threshold, double tau) {
    if (threshold == -std::numeric_limits<double>::infinity()) {
        return 1.0;
    }
    return 1.0 / (1.0 + std::exp(-(m - threshold) / tau));
}

double entropy(std::span<const double> m) {
    double h = 0.0;
    for (double v : m) {
        if (v > 0.0) {
            h -= v * std::log(v);
        }
    }
    return h;
}

namespace {

struct SampleTerms {
    double hard_tail = 0.0;
    double soft_tail = 0.0;
    double entropy = 0.0;
};

// Smallest energy fed to the logarithm in the entropy derivative.
constexpr double kLogFloor = 1e-300;

RealVector normalized_energies(std::span<const Complex> y, double &total) {
    total = 0.0;
    for (const auto &v : y) {
        total += std::norm(v);
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw DegenerateInput("sample has zero or non-finite energy");
    }
    RealVector m(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        m[j] = std::norm(y[j]) / total;
    }
    return m;
}

double hard_tail_of(std::span<const double> m, std::size_t k) {
    if (k >= m.size()) {
        return 0.0;
    }
    // Plain top-k keeps the k largest; ties do not change the kept energy.
    std::vector<double> sorted(m.begin(), m.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(k),
                     sorted.end(), std::greater<>());
    double tail = 0.0;
    for (std::size_t j = k; j < sorted.size(); ++j) {
        tail += sorted[j];
    }
    return std::clamp(tail, 0.0, 1.0);
}

SampleTerms terms_with_threshold(std::span<const double> m, double threshold,
                                 const LossConfig &cfg) {
    SampleTerms t;
    t.hard_tail = hard_tail_of(m, cfg.k);
    for (double v : m) {
        t.soft_tail += (1.0 - soft_gate(v, threshold, cfg.temperature)) * v;
    }
    t.entropy = entropy(m);
    return t;
}

LossValue mean_of(std::span<const SampleTerms> per, double entropy_weight) {
    LossValue out;
    for (const auto &t : per) {
        out.hard_tail += t.hard_tail;
        out.soft_tail += t.soft_tail;
        out.entropy += t.entropy;
    }
    const auto count = static_cast<double>(per.size());
    out.hard_tail /= count;
    out.soft_tail /= count;
    out.entropy /= count;
    out.entropy_term = entropy_weight * out.entropy;
    return out;
}

void require_batch(std::span<const RealVector> batch, const TransformModel &m) {
    if (batch.empty()) {
        throw InvalidArgument("empty batch");
    }
    for (const auto &x : batch) {
        if (x.size() != m.dimension()) {
            throw InvalidArgument("sample length does not match the model");
        }
    }
}

// Reverse-mode pass for one sample. Stage inputs and twiddles of the forward
// pass are kept in the workspace and consumed in reverse order.
class SampleGradient {
  public:
    explicit SampleGradient(const TransformModel &m)
        : model_(m), n_(m.qubits()), dim_(m.dimension()),
          inputs_(m.depth() * n_, ComplexVector(dim_)),
          twiddles_(m.depth() * n_, ComplexVector(dim_ / 2)),
          mixers_(m.depth() * n_), phase_acc_(dim_ / 2) {
        for (std::size_t d = 0; d < m.depth(); ++d) {
            const auto &block = m.block(d);
            for (std::size_t s = 0; s < n_; ++s) {
                const auto &mx = block.mixers()[s];
                mixers_[d * n_ + s] = u3_matrix(mx.alpha, mx.beta, mx.gamma);
                const auto angles =
                    s == 0 ? std::span<const double>{} : block.level(s);
                detail::stage_twiddles(angles, twiddles_[d * n_ + s]);
            }
        }
    }

    SampleTerms run(std::span<const double> x, const LossConfig &cfg,
                    std::span<double> grad) {
        ComplexVector v = exact_state(x);
        bit_reverse_permute(v);
        for (std::size_t d = 0; d < model_.depth(); ++d) {
            for (std::size_t s = 0; s < n_; ++s) {
                const std::size_t slot = d * n_ + s;
                inputs_[slot] = v;
                detail::apply_stage(v, s, mixers_[slot], twiddles_[slot]);
            }
        }

        double total = 0.0;
        const RealVector m = normalized_energies(v, total);
        const double threshold = soft_threshold(m, cfg.k);
        const SampleTerms terms = terms_with_threshold(m, threshold, cfg);

        RealVector dm(dim_);
        double weighted = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            double d = 0.0;
            if (cfg.k < dim_) {
                const double g = soft_gate(m[j], threshold, cfg.temperature);
                d += (1.0 - g) - m[j] * g * (1.0 - g) / cfg.temperature;
            }
            d -= cfg.entropy_weight * (std::log(std::max(m[j], kLogFloor)) + 1.0);
            dm[j] = d;
            weighted += d * m[j];
        }
        // Gradient w.r.t. y in the convention dJ = Re(conj(G) . dy).
        ComplexVector g(dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            g[j] = v[j] * (2.0 * (dm[j] - weighted) / total);
        }

        const std::size_t per_block = ParameterSet::parameter_count(n_);
        for (std::size_t d = model_.depth(); d-- > 0;) {
            const std::span<double> gb = grad.subspan(d * per_block, per_block);
            for (std::size_t s = n_; s-- > 0;) {
                backward_stage(d, s, g, gb);
            }
        }
        return terms;
    }

  private:
    void backward_stage(std::size_t d, std::size_t s, ComplexVector &g,
                        std::span<double> gb) {
        const std::size_t slot = d * n_ + s;
        const ComplexVector &in = inputs_[slot];
        const ComplexVector &tw = twiddles_[slot];
        const Matrix2 &u = mixers_[slot];
        const std::size_t half = std::size_t{1} << s;

        std::array<std::array<Complex, 2>, 2> acc{};
        std::fill(phase_acc_.begin(), phase_acc_.begin() + half, 0.0);
        for (std::size_t base = 0; base < dim_; base += 2 * half) {
            for (std::size_t k = 0; k < half; ++k) {
                const Complex a = in[base + k];
                const Complex b = in[base + half + k] * tw[k];
                const Complex g0 = g[base + k];
                const Complex g1 = g[base + half + k];
                acc[0][0] += std::conj(g0) * a;
                acc[0][1] += std::conj(g0) * b;
                acc[1][0] += std::conj(g1) * a;
                acc[1][1] += std::conj(g1) * b;
                const Complex ga = std::conj(u[0][0]) * g0 + std::conj(u[1][0]) * g1;
                const Complex gbt = std::conj(u[0][1]) * g0 + std::conj(u[1][1]) * g1;
                phase_acc_[k] -= (std::conj(gbt) * b).imag();
                g[base + k] = ga;
                g[base + half + k] = std::conj(tw[k]) * gbt;
            }
        }

        const auto &mx = model_.block(d).mixers()[s];
        const double c = std::cos(mx.alpha / 2.0);
        const double sn = std::sin(mx.alpha / 2.0);
        const Complex eb = std::polar(1.0, mx.beta);
        const Complex eg = std::polar(1.0, mx.gamma);
        const Complex ebg = eb * eg;
        const Complex i{0.0, 1.0};
        // dU/dalpha, dU/dbeta, dU/dgamma contracted with acc.
        const double d_alpha =
            (Complex{-sn / 2.0, 0.0} * acc[0][0] - eg * (c / 2.0) * acc[0][1] +
             eb * (c / 2.0) * acc[1][0] - ebg * (sn / 2.0) * acc[1][1])
                .real();
        const double d_beta =
            (i * eb * sn * acc[1][0] + i * ebg * c * acc[1][1]).real();
        const double d_gamma =
            (-i * eg * sn * acc[0][1] + i * ebg * c * acc[1][1]).real();
        gb[3 * s] += d_alpha;
        gb[3 * s + 1] += d_beta;
        gb[3 * s + 2] += d_gamma;

        if (s > 0) {
            const std::size_t offset = 3 * n_ + ParameterSet::level_offset(s);
            for (std::size_t k = 1; k < half; ++k) {
                for (std::size_t q = 0; q < s; ++q) {
                    if (k & (std::size_t{1} << q)) {
                        gb[offset + q] += phase_acc_[k];
                    }
                }
            }
        }
    }

    const TransformModel &model_;
    std::size_t n_;
    std::size_t dim_;
    std::vector<ComplexVector> inputs_;
    std::vector<ComplexVector> twiddles_;
    std::vector<Matrix2> mixers_;
    RealVector phase_acc_;
};

} // namespace

double tail_loss(std::span<const RealVector> batch, const TransformModel &m,
                 std::size_t k, std::size_t workers) {
    require_batch(batch, m);
    if (k < 1 || k > m.dimension()) {
        throw InvalidArgument("sparsity k out of range");
    }
    RealVector per(batch.size());
    parallel_for(batch.size(), workers, [&](std::size_t i) {
        double total = 0.0;
        const RealVector e =
            normalized_energies(deep_forward(exact_state(batch[i]), m), total);
        per[i] = hard_tail_of(e, k);
    });
    return std::accumulate(per.begin(), per.end(), 0.0) /
           static_cast<double>(per.size());
}

LossValue soft_masked_loss(std::span<const RealVector> batch,
                           const TransformModel &m, const LossConfig &cfg,
                           std::size_t workers) {
    require_batch(batch, m);
    cfg.validate(m.dimension());
    std::vector<SampleTerms> per(batch.size());
    parallel_for(batch.size(), workers, [&](std::size_t i) {
        double total = 0.0;
        const RealVector e =
            normalized_energies(deep_forward(exact_state(batch[i]), m), total);
        per[i] = terms_with_threshold(e, soft_threshold(e, cfg.k), cfg);
    });
    return mean_of(per, cfg.entropy_weight);
}

GradientResult backward(std::span<const RealVector> batch,
                        const TransformModel &m, const LossConfig &cfg,
                        std::size_t workers) {
    require_batch(batch, m);
    cfg.validate(m.dimension());
    const std::size_t count = m.parameter_count();
    std::vector<RealVector> per_grad(batch.size());
    std::vector<SampleTerms> per_terms(batch.size());

    // One workspace per contiguous chunk; chunks match parallel_for's split.
    const std::size_t threads =
        std::max<std::size_t>(1, std::min(batch.size(), workers == 0
                                                            ? default_workers()
                                                            : workers));
    const std::size_t chunk = (batch.size() + threads - 1) / threads;
    parallel_for(threads, threads, [&](std::size_t w) {
        SampleGradient kernel(m);
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(batch.size(), begin + chunk);
        for (std::size_t i = begin; i < end; ++i) {
            per_grad[i].assign(count, 0.0);
            per_terms[i] = kernel.run(batch[i], cfg, per_grad[i]);
        }
    });

    GradientResult out;
    out.loss = mean_of(per_terms, cfg.entropy_weight);
    out.gradient.assign(count, 0.0);
    for (const auto &g : per_grad) {
        for (std::size_t p = 0; p < count; ++p) {
            out.gradient[p] += g[p];
        }
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (std::size_t p = 0; p < count; ++p) {
        out.gradient[p] *= scale;
        if (!std::isfinite(out.gradient[p])) {
            throw NumericFailure("non-finite gradient entry " +
                                     std::to_string(p),
                                 p);
        }
    }
    return out;
}

std::vector<double> fd_gradient_oracle(std::span<const RealVector> batch,
                                       const TransformModel &m,
                                       const LossConfig &cfg, double step) {
    if (m.qubits() > 6 || m.depth() > 3) {
        throw ResourceLimit("finite-difference oracle limited to n<=6, D<=3");
    }
    if (!(step > 0.0)) {
        throw InvalidArgument("finite-difference step must be > 0");
    }
    require_batch(batch, m);
    cfg.validate(m.dimension());

    std::vector<double> thresholds(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double total = 0.0;
        const RealVector e =
            normalized_energies(deep_forward(exact_state(batch[i]), m), total);
        thresholds[i] = soft_threshold(e, cfg.k);
    }
    auto surrogate = [&](const TransformModel &model) {
        double sum = 0.0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            double total = 0.0;
            const RealVector e = normalized_energies(
                deep_forward(exact_state(batch[i]), model), total);
            const SampleTerms t = terms_with_threshold(e, thresholds[i], cfg);
            sum += t.soft_tail + cfg.entropy_weight * t.entropy;
        }
        return sum / static_cast<double>(batch.size());
    };

    const std::vector<double> base = m.flatten();
    std::vector<double> grad(base.size());
    TransformModel probe = m;
    std::vector<double> shifted = base;
    for (std::size_t p = 0; p < base.size(); ++p) {
        shifted[p] = base[p] + step;
        probe.assign_from(shifted);
        const double up = surrogate(probe);
        shifted[p] = base[p] - step;
        probe.assign_from(shifted);
        const double down = surrogate(probe);
        shifted[p] = base[p];
        grad[p] = (up - down) / (2.0 * step);
    }
    return grad;
}

// Adam -----------------------------------------------------------------------

AdamOptimizer::AdamOptimizer(std::size_t parameter_count, AdamConfig config)
    : config_(config), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grad,
                         double learning_rate) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw InvalidArgument("optimizer shape mismatch");
    }
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double c1 = 1.0 - std::pow(config_.beta1, t);
    const double c2 = 1.0 - std::pow(config_.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grad[i];
        v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
        const double mhat = m_[i] / c1;
        const double vhat = v_[i] / c2;
        params[i] -= learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
}

double learning_rate(std::size_t epoch, std::size_t total_epochs,
                     double lr_max, double lr_min) {
    const std::size_t anneal = (2 * total_epochs + 2) / 3; // ceil(2E/3)
    if (epoch >= anneal || anneal == 0) {
        return lr_min;
    }
    const double phase = std::numbers::pi * static_cast<double>(epoch) /
                         static_cast<double>(anneal);
    return lr_min + (lr_max - lr_min) * 0.5 * (1.0 + std::cos(phase));
}

// Training loop --------------------------------------------------------------

void TrainConfig::validate(std::size_t dimension) const {
    loss.validate(dimension);
    if (batch_size < 1) {
        throw InvalidArgument("batch size must be >= 1");
    }
    if (!(lr_max > 0.0) || !(lr_min >= 0.0) || lr_min > lr_max) {
        throw InvalidArgument("learning rates must satisfy 0 <= lr_min <= lr_max, lr_max > 0");
    }
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 &&
          adam.beta2 < 1.0 && adam.epsilon > 0.0)) {
        throw InvalidArgument("invalid Adam constants");
    }
}

namespace {

EpochRecord measure(std::span<const RealVector> data, const TransformModel &m,
                    const TrainConfig &cfg, std::size_t epoch, double lr,
                    double elapsed) {
    const LossValue loss = soft_masked_loss(data, m, cfg.loss, cfg.workers);
    const DatasetReport rep = evaluate_dataset(data, m, SelectionRule::PlainTopK,
                                               cfg.loss.k, cfg.workers);
    EpochRecord r;
    r.epoch = epoch;
    r.lr = lr;
    r.hard_tail_loss = loss.hard_tail;
    r.soft_loss = loss.soft_tail;
    r.entropy_term = loss.entropy_term;
    r.mean_imag_norm = rep.mean_imag_norm;
    r.mean_real_norm = rep.mean_real_norm;
    r.wall_time_s = elapsed;
    return r;
}

} // namespace

TrainResult train(std::span<const RealVector> train_set, TransformModel initial,
                  const TrainConfig &config, const EpochCallback &on_epoch) {
    config.validate(initial.dimension());
    require_batch(train_set, initial);

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    };

    TrainResult result{std::move(initial), {}};
    TransformModel &model = result.model;
    std::vector<double> params = model.flatten();
    AdamOptimizer adam(params.size(), config.adam);
    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto record = [&](const EpochRecord &r) {
        result.history.push_back(r);
        if (on_epoch) {
            on_epoch(r, model);
        }
        if (config.checkpoint_every > 0 && r.epoch > 0 &&
            r.epoch % config.checkpoint_every == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "checkpoint_epoch_%04zu.json",
                          r.epoch);
            save_checkpoint(config.checkpoint_dir / name, model,
                            {config.seed, r.epoch, r.hard_tail_loss});
        }
    };

    record(measure(train_set, model, config, 0, 0.0, elapsed()));
    TransformModel last_good = model;

    std::vector<RealVector> batch;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr =
            learning_rate(epoch, config.epochs, config.lr_max, config.lr_min);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t begin = 0; begin < order.size();
             begin += config.batch_size) {
            const std::size_t end =
                std::min(order.size(), begin + config.batch_size);
            batch.clear();
            for (std::size_t i = begin; i < end; ++i) {
                batch.push_back(train_set[order[i]]);
            }
            GradientResult g;
            try {
                g = backward(batch, model, config.loss, config.workers);
            } catch (const NumericFailure &e) {
                throw TrainingFailure(std::string("training diverged: ") +
                                          e.what(),
                                      last_good, epoch);
            }
            if (!std::isfinite(g.loss.surrogate())) {
                throw TrainingFailure("training loss became non-finite",
                                      last_good, epoch);
            }
            adam.step(params, g.gradient, lr);
            model.assign_from(params);
        }
        const EpochRecord r =
            measure(train_set, model, config, epoch + 1, lr, elapsed());
        if (!std::isfinite(r.hard_tail_loss) || !std::isfinite(r.soft_loss)) {
            throw TrainingFailure("training loss became non-finite", last_good,
                                  epoch);
        }
        record(r);
        last_good = model;
    }
    return result;
}

std::string history_csv(std::span<const EpochRecord> history) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,lr,hard_tail_loss,soft_loss,entropy_term,mean_imag_norm,"
           "mean_real_norm,wall_time_s\n";
    for (const auto &r : history) {
        out << r.epoch << ',' << r.lr << ',' << r.hard_tail_loss << ','
            << r.soft_loss << ',' << r.entropy_term << ',' << r.mean_imag_norm
            << ',' << r.mean_real_norm << ',' << r.wall_time_s << '\n';
    }
    return out.str();
}

} // namespace aiqt
