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

#include "aiqt/encoding.hpp"

#include "aiqt/error.hpp"
#include "aiqt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace aiqt {

std::string_view to_string(SelectionRule rule) noexcept {
    switch (rule) {
    case SelectionRule::PlainTopK:
        return "plain-topk";
    case SelectionRule::ConjugateSymmetric:
        return "conjugate-symmetric";
    }
    return "unknown";
}

SelectionRule parse_selection_rule(std::string_view name) {
    if (name == "plain-topk") {
        return SelectionRule::PlainTopK;
    }
    if (name == "conjugate-symmetric") {
        return SelectionRule::ConjugateSymmetric;
    }
    throw InvalidArgument("unknown selection rule '" + std::string(name) +
                          "'");
}

EnergyProfile energies(std::span<const Complex> y) {
    double total = 0.0;
    for (const auto &v : y) {
        total += std::norm(v);
    }
    if (!(total > 0.0)) {
        throw DegenerateInput("energy profile of a zero vector");
    }
    EnergyProfile e;
    e.m.resize(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        e.m[j] = std::norm(y[j]) / total;
    }
    e.rank_order.resize(y.size());
    std::iota(e.rank_order.begin(), e.rank_order.end(), std::size_t{0});
    std::stable_sort(e.rank_order.begin(), e.rank_order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return e.m[a] > e.m[b];
                     });
    return e;
}

SelectionMask select_topk(const EnergyProfile &e, std::size_t k) {
    if (k < 1 || k > e.m.size()) {
        throw InvalidArgument("top-k budget " + std::to_string(k) +
                              " outside [1, " + std::to_string(e.m.size()) +
                              "]");
    }
    SelectionMask mask{{e.rank_order.begin(),
                        e.rank_order.begin() + static_cast<long>(k)},
                       SelectionRule::PlainTopK,
                       k};
    std::sort(mask.kept.begin(), mask.kept.end());
    return mask;
}

SelectionMask select_conjugate_symmetric(const EnergyProfile &e,
                                         std::size_t k) {
    const std::size_t dim = e.m.size();
    if (dim < 2 || dim % 2 != 0) {
        throw InvalidArgument("conjugate-symmetric selection needs even N");
    }
    if (k % 2 != 0) {
        throw InvalidArgument("conjugate-symmetric budget must be even");
    }
    const std::size_t pairs = dim / 2 - 1;
    if (k / 2 > pairs) {
        throw InvalidArgument("conjugate-symmetric budget exceeds N-2");
    }
    std::vector<std::size_t> order(pairs);
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return e.m[a] + e.m[dim - a] > e.m[b] + e.m[dim - b];
                     });
    SelectionMask mask{{0, dim / 2}, SelectionRule::ConjugateSymmetric, k};
    for (std::size_t i = 0; i < k / 2; ++i) {
        mask.kept.push_back(order[i]);
        mask.kept.push_back(dim - order[i]);
    }
    std::sort(mask.kept.begin(), mask.kept.end());
    return mask;
}

SelectionMask select(const EnergyProfile &e, SelectionRule rule,
                     std::size_t k) {
    return rule == SelectionRule::PlainTopK
               ? select_topk(e, k)
               : select_conjugate_symmetric(e, k);
}

double tail_energy(const EnergyProfile &e, const SelectionMask &mask) {
    double kept = 0.0;
    for (std::size_t j : mask.kept) {
        kept += e.m[j];
    }
    return std::clamp(1.0 - kept, 0.0, 1.0);
}

ComplexVector truncate_normalize(std::span<const Complex> y,
                                 const SelectionMask &mask) {
    double kept = 0.0;
    for (std::size_t j : mask.kept) {
        if (j >= y.size()) {
            throw InvalidArgument("mask index out of range");
        }
        kept += std::norm(y[j]);
    }
    if (!(kept > 0.0)) {
        throw DegenerateInput("all retained coefficients are zero");
    }
    const double scale = 1.0 / std::sqrt(kept);
    ComplexVector phi(y.size(), Complex{0.0, 0.0});
    for (std::size_t j : mask.kept) {
        phi[j] = y[j] * scale;
    }
    return phi;
}

ComplexVector reconstruct(std::span<const Complex> phi,
                          const TransformModel &m) {
    double norm2 = 0.0;
    for (const auto &v : phi) {
        norm2 += std::norm(v);
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) {
        throw InvalidArgument("reconstruct expects a unit-norm state");
    }
    return deep_inverse(phi, m);
}

ComplexVector exact_state(std::span<const double> x) {
    double norm2 = 0.0;
    for (double v : x) {
        norm2 += v * v;
    }
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
        throw DegenerateInput("cannot amplitude-encode a zero vector");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    ComplexVector psi(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        psi[j] = Complex{x[j] * scale, 0.0};
    }
    return psi;
}

TransformModel fourier_model(std::size_t qubits) {
    return TransformModel(qubits, {fourier_init(qubits)});
}

ReconstructionReport compare_states(std::span<const Complex> psi,
                                    std::span<const Complex> rec) {
    if (psi.size() != rec.size() || psi.empty()) {
        throw InvalidArgument("state length mismatch");
    }
    ReconstructionReport r;
    double err2 = 0.0;
    double im2 = 0.0;
    double re2 = 0.0;
    Complex overlap{0.0, 0.0};
    for (std::size_t j = 0; j < psi.size(); ++j) {
        err2 += std::norm(rec[j] - psi[j]);
        im2 += rec[j].imag() * rec[j].imag();
        re2 += rec[j].real() * rec[j].real();
        overlap += std::conj(psi[j]) * rec[j];
    }
    r.crmse = std::sqrt(err2 / static_cast<double>(psi.size()));
    r.fidelity = std::norm(overlap);
    r.imag_norm = std::sqrt(im2);
    r.real_norm = std::sqrt(re2);
    return r;
}

PipelineResult run_pipeline(std::span<const double> x, const TransformModel &m,
                            SelectionRule rule, std::size_t k) {
    if (x.size() != m.dimension()) {
        throw InvalidArgument("sample length does not match the model");
    }
    PipelineResult out;
    out.exact = exact_state(x);
    out.coefficients = deep_forward(out.exact, m);
    const EnergyProfile e = energies(out.coefficients);
    out.mask = select(e, rule, k);
    const ComplexVector phi = truncate_normalize(out.coefficients, out.mask);
    out.reconstruction = reconstruct(phi, m);
    out.report = compare_states(out.exact, out.reconstruction);
    out.report.tail_loss = tail_energy(e, out.mask);
    out.report.kept = out.mask.kept.size();
    return out;
}

ReconstructionReport evaluate(std::span<const double> x,
                              const TransformModel &m, SelectionRule rule,
                              std::size_t k) {
    return run_pipeline(x, m, rule, k).report;
}

DatasetReport evaluate_dataset(std::span<const RealVector> samples,
                               const TransformModel &m, SelectionRule rule,
                               std::size_t k, std::size_t workers) {
    if (samples.empty()) {
        throw InvalidArgument("cannot evaluate an empty dataset");
    }
    std::vector<ReconstructionReport> per(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t i) {
        per[i] = evaluate(samples[i], m, rule, k);
    });
    DatasetReport r;
    r.k = k;
    r.rule = rule;
    r.depth = m.depth();
    r.n_samples = samples.size();
    r.kept_size = per.front().kept;
    for (const auto &p : per) {
        r.mean_crmse += p.crmse;
        r.mean_fidelity += p.fidelity;
        r.mean_imag_norm += p.imag_norm;
        r.mean_real_norm += p.real_norm;
        r.mean_tail_loss += p.tail_loss;
    }
    const auto count = static_cast<double>(per.size());
    r.mean_crmse /= count;
    r.mean_fidelity /= count;
    r.mean_imag_norm /= count;
    r.mean_real_norm /= count;
    r.mean_tail_loss /= count;
    return r;
}

nlohmann::json to_json(const DatasetReport &r) {
    return {{"k", r.k},
            {"rule", std::string(to_string(r.rule))},
            {"depth", r.depth},
            {"split", r.split},
            {"method", r.method},
            {"mean_crmse", r.mean_crmse},
            {"mean_fidelity", r.mean_fidelity},
            {"mean_imag_norm", r.mean_imag_norm},
            {"mean_real_norm", r.mean_real_norm},
            {"mean_tail_loss", r.mean_tail_loss},
            {"kept_size", r.kept_size},
            {"n_samples", r.n_samples}};
}

RankProfile rank_profile(std::span<const RealVector> samples,
                         const TransformModel &m) {
    if (samples.empty()) {
        throw InvalidArgument("rank profile of an empty dataset");
    }
    const std::size_t dim = m.dimension();
    RankProfile p{RealVector(dim, 0.0), RealVector(dim, 0.0)};
    RealVector sum_sq(dim, 0.0);
    for (const auto &x : samples) {
        if (x.size() != dim) {
            throw InvalidArgument("sample length does not match the model");
        }
        const EnergyProfile e = energies(deep_forward(exact_state(x), m));
        for (std::size_t r = 0; r < dim; ++r) {
            const double v = e.m[e.rank_order[r]];
            p.mean[r] += v;
            sum_sq[r] += v * v;
        }
    }
    const auto count = static_cast<double>(samples.size());
    for (std::size_t r = 0; r < dim; ++r) {
        p.mean[r] /= count;
        const double var = sum_sq[r] / count - p.mean[r] * p.mean[r];
        p.stddev[r] = std::sqrt(std::max(var, 0.0));
    }
    return p;
}

std::string rank_profile_csv(const RankProfile &p) {
    std::ostringstream out;
    out.precision(17);
    out << "rank,mean_m,std_m\n";
    for (std::size_t r = 0; r < p.mean.size(); ++r) {
        out << r << ',' << p.mean[r] << ',' << p.stddev[r] << '\n';
    }
    return out.str();
}

PrepCost sparse_prep_cost(std::size_t qubits, std::size_t k,
                          std::size_t depth) {
    if (qubits < 2) {
        throw InvalidArgument("cost model needs n >= 2");
    }
    if (k < 1 || k > (std::size_t{1} << qubits)) {
        throw InvalidArgument("cost model needs 1 <= k <= 2^n");
    }
    const auto n = static_cast<double>(qubits);
    PrepCost c;
    c.sparse_prep_estimate = n * static_cast<double>(k) / std::log2(n) + n;
    c.inverse_transform_estimate = n + n * n;
    c.transform_gates = depth * (qubits + qubits * (qubits - 1) / 2);
    return c;
}

} // namespace aiqt
