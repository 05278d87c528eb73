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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   aiqt_acceptance            run every criterion
//   aiqt_acceptance AC6 AC8    run the named criteria only
//
// Exit status is 0 only when every selected criterion passes.

#include "aiqt/circuit.hpp"
#include "aiqt/commands.hpp"
#include "aiqt/encoding.hpp"
#include "aiqt/io.hpp"
#include "aiqt/qasm.hpp"
#include "aiqt/training.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#ifndef AIQT_ACCEPTANCE_OUT
#define AIQT_ACCEPTANCE_OUT "acceptance_out"
#endif
#ifndef AIQT_MNIST_PATH
#define AIQT_MNIST_PATH "data/mnist/images-idx3-ubyte.gz"
#endif

namespace {

using namespace aiqt;
using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ComplexVector random_complex(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> nd;
    ComplexVector v(n);
    for (auto &z : v) {
        z = {nd(rng), nd(rng)};
    }
    return v;
}

RealVector random_real(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> nd;
    RealVector v(n);
    for (auto &z : v) {
        z = nd(rng);
    }
    return v;
}

ComplexVector random_state(std::mt19937_64 &rng, std::size_t n) {
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

ParameterSet random_params(std::mt19937_64 &rng, std::size_t qubits) {
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    ParameterSet p(qubits);
    std::vector<double> flat(p.parameter_count());
    for (auto &a : flat) {
        a = ang(rng);
    }
    p.assign_from(flat);
    return p;
}

TransformModel random_model(std::mt19937_64 &rng, std::size_t qubits, std::size_t depth) {
    std::vector<ParameterSet> blocks;
    for (std::size_t d = 0; d < depth; ++d) {
        blocks.push_back(random_params(rng, qubits));
    }
    return {qubits, std::move(blocks)};
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// -- shared trained runs ---------------------------------------------------

// Piecewise corpus, n=8, 2000 samples, k=64, 50 epochs, lr_max 1e-2.
ExperimentConfig piecewise_config(const std::string &tag, std::size_t depth) {
    json j = {
        {"dataset", {{"source", "synthetic"}, {"kind", "piecewise"}, {"count", 2000}}},
        {"n", 8},
        {"k", {16, 32, 64, 128}},
        {"train_k", 64},
        {"depth", depth},
        {"loss", {{"temperature", 1e-2}, {"entropy_weight", 1e-4}}},
        {"optimizer", {{"epochs", 50}, {"batch_size", 128}, {"lr_max", 1e-2}, {"lr_min", 1e-5}}},
        {"seed", 1},
        {"workers", 0},
        {"output_dir", (fs::path(AIQT_ACCEPTANCE_OUT) / tag).string()}};
    return parse_config(j);
}

struct TrainedRun {
    ExperimentConfig cfg;
    TrainOutputs outputs;
    double seconds = 0.0;
};

const TrainedRun &trained(std::size_t depth) {
    static std::map<std::size_t, TrainedRun> cache;
    auto it = cache.find(depth);
    if (it == cache.end()) {
        ExperimentConfig cfg = piecewise_config(fmt::format("piecewise_d{}", depth), depth);
        const auto t0 = Clock::now();
        TrainOutputs outputs = cmd_train(cfg);
        const double secs = seconds_since(t0);
        std::printf("  [trained D=%zu in %.1f s]\n", depth, secs);
        it = cache.emplace(depth, TrainedRun{std::move(cfg), std::move(outputs), secs}).first;
    }
    return it->second;
}

const DatasetReport &row_for(const std::vector<DatasetReport> &rows, std::size_t k,
                             const std::string &split) {
    for (const auto &r : rows) {
        if (r.k == k && r.split == split) {
            return r;
        }
    }
    throw Error(fmt::format("no evaluation row for k={} split={}", k, split));
}

// -- criteria --------------------------------------------------------------

Outcome ac1() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 10; ++n) {
        const std::size_t dim = std::size_t{1} << n;
        const DenseMatrix f = dft_matrix(dim);
        const ParameterSet p = fourier_init(n);
        for (int t = 0; t < 100; ++t) {
            const ComplexVector x = random_complex(rng, dim);
            worst = std::max(worst, max_abs_diff(forward(x, p), matvec(f, x)));
        }
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-10 && secs < 10.0,
            fmt::format("max error {:.3e} over n=1..10 x 100 inputs, {:.2f} s", worst, secs)};
}

Outcome ac2() {
    std::mt19937_64 rng(102);
    double worst_fwd = 0.0;
    double worst_unit = 0.0;
    for (std::size_t n = 2; n <= 8; ++n) {
        for (int t = 0; t < 20; ++t) {
            const ParameterSet p = random_params(rng, n);
            const DenseMatrix u = dense_matrix(p);
            worst_unit = std::max(worst_unit, unitarity_error(u));
            const ComplexVector x = random_complex(rng, std::size_t{1} << n);
            worst_fwd = std::max(worst_fwd, max_abs_diff(forward(x, p), matvec(u, x)));
        }
    }
    return {worst_fwd < 1e-9 && worst_unit < 1e-10,
            fmt::format("forward vs matrix {:.3e}, unitarity {:.3e}", worst_fwd, worst_unit)};
}

Outcome ac3() {
    // tau = 1e-3; instances closer than 10 tau to the threshold are redrawn.
    std::mt19937_64 rng(103);
    LossConfig cfg;
    cfg.temperature = 1e-3;
    cfg.entropy_weight = 1e-4;
    std::size_t accepted = 0;
    std::size_t drawn = 0;
    double worst = 0.0;
    while (accepted < 50) {
        ++drawn;
        const TransformModel m = random_model(rng, 4, 2);
        const std::vector<RealVector> batch{random_real(rng, 16), random_real(rng, 16)};
        cfg.k = 1 + rng() % 15;
        double gap = 1e300;
        for (const auto &x : batch) {
            const EnergyProfile e = energies(deep_forward(exact_state(x), m));
            const double t = soft_threshold(e.m, cfg.k);
            for (double v : e.m) {
                gap = std::min(gap, std::abs(v - t));
            }
        }
        if (gap <= 10.0 * cfg.temperature) {
            continue;
        }
        ++accepted;
        const std::vector<double> a = backward(batch, m, cfg).gradient;
        const std::vector<double> f = fd_gradient_oracle(batch, m, cfg, 1e-5);
        double scale = 0.0;
        for (double v : f) {
            scale = std::max(scale, std::abs(v));
        }
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double den = std::max({std::abs(a[i]), std::abs(f[i]), 1e-4 * scale});
            worst = std::max(worst, std::abs(a[i] - f[i]) / den);
        }
    }
    return {worst < 1e-5, fmt::format("worst relative error {:.3e} on 50 instances ({} drawn)",
                                      worst, drawn)};
}

Outcome ac4() {
    std::mt19937_64 rng(104);
    const TransformModel f = fourier_model(10);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const RealVector x = random_real(rng, 1024);
        const std::size_t k = 2 * (1 + rng() % 255);
        const ReconstructionReport r = evaluate(x, f, SelectionRule::ConjugateSymmetric, k);
        worst = std::max(worst, r.imag_norm);
    }
    return {worst < 1e-12, fmt::format("max imaginary norm {:.3e} on 200 inputs", worst)};
}

Outcome ac5() {
    std::mt19937_64 rng(105);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = std::size_t{1} << (1 + rng() % 10);
        const ComplexVector a = random_state(rng, n);
        const ComplexVector b = random_state(rng, n);
        const ReconstructionReport r = compare_states(a, b);
        Complex inner{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            inner += std::conj(a[i]) * b[i];
        }
        const double lhs = static_cast<double>(n) * r.crmse * r.crmse;
        worst = std::max(worst, std::abs(lhs - (2.0 - 2.0 * inner.real())));
    }
    return {worst < 1e-10, fmt::format("max deviation {:.3e} on 1000 pairs", worst)};
}

Outcome ac6() {
    const TrainedRun &run = trained(1);
    const auto &hist = run.outputs.result.history;
    const json base = json::parse(read_file(run.outputs.baseline));
    const double fsl_tail = base.at("fsl_tail_plain_topk").get<double>();
    const double aiqt_tail = hist.back().hard_tail_loss;

    ExperimentConfig cfg = run.cfg;
    cfg.k = {64};
    const auto aiqt_rows =
        cmd_eval(cfg, {Method::Aiqt, run.outputs.checkpoint, SplitChoice::Validation});
    const auto fsl_rows = cmd_eval(cfg, {Method::Fsl, std::nullopt, SplitChoice::Validation});
    const double a = row_for(aiqt_rows, 64, "validation").mean_crmse;
    const double f = row_for(fsl_rows, 64, "validation").mean_crmse;
    const double reduction = 1.0 - a / f;
    const bool pass = aiqt_tail < fsl_tail && reduction >= 0.15 && run.seconds < 900.0;
    return {pass, fmt::format("train tail {:.4e} vs Fourier {:.4e}; validation cRMSE {:.4e} vs "
                              "{:.4e} ({:.1f}% lower); {:.1f} s",
                              aiqt_tail, fsl_tail, a, f, 100.0 * reduction, run.seconds)};
}

Outcome ac7() {
    const auto &hist = trained(1).outputs.result.history;
    double peak = 0.0;
    for (const auto &r : hist) {
        peak = std::max(peak, r.mean_imag_norm);
    }
    const double last = hist.back().mean_imag_norm;
    const double real = hist.back().mean_real_norm;
    return {last <= 0.1 * peak && real > 0.999,
            fmt::format("imag norm peak {:.3e} -> final {:.3e} ({:.1f}x); final real norm {:.6f}",
                        peak, last, peak / last, real)};
}

Outcome ac8() {
    const TrainedRun &run = trained(1);
    const ExperimentConfig &cfg = run.cfg;
    (void)cmd_eval(cfg, {Method::Aiqt, run.outputs.checkpoint, SplitChoice::Validation});
    (void)cmd_eval(cfg, {Method::Fsl, std::nullopt, SplitChoice::Validation});
    const auto fits = cmd_powerlaw({cfg.output_dir / "eval_aiqt.json",
                                    cfg.output_dir / "eval_fsl.json"},
                                   cfg.output_dir);
    bool pass = fits.size() == 2;
    std::string detail;
    for (const auto &f : fits) {
        bool decreasing = true;
        for (std::size_t i = 1; i < f.crmse.size(); ++i) {
            decreasing = decreasing && f.crmse[i] < f.crmse[i - 1];
        }
        pass = pass && decreasing && f.fit.r_squared > 0.9;
        detail += fmt::format("{}: cRMSE", f.method);
        for (double c : f.crmse) {
            detail += fmt::format(" {:.3e}", c);
        }
        detail += fmt::format(" {} B={:.3f} R2={:.3f}; ",
                              decreasing ? "decreasing" : "NOT decreasing", f.fit.exponent,
                              f.fit.r_squared);
    }
    return {pass, detail};
}

Outcome ac9() {
    const auto &h1 = trained(1).outputs.result.history;
    const auto &h4 = trained(4).outputs.result.history;
    const EpochRecord &a = h1.front();
    const EpochRecord &b = h4.front();
    const double dev = std::max({std::abs(a.hard_tail_loss - b.hard_tail_loss),
                                 std::abs(a.soft_loss - b.soft_loss),
                                 std::abs(a.entropy_term - b.entropy_term),
                                 std::abs(a.mean_imag_norm - b.mean_imag_norm),
                                 std::abs(a.mean_real_norm - b.mean_real_norm)});
    const double f1 = h1.back().hard_tail_loss;
    const double f4 = h4.back().hard_tail_loss;
    return {dev < 1e-6 && f4 <= f1 + 1e-4,
            fmt::format("epoch-0 max deviation {:.3e}; final tail D=4 {:.4e} vs D=1 {:.4e}", dev,
                        f4, f1)};
}

Outcome ac10() {
    const fs::path path = AIQT_MNIST_PATH;
    if (!fs::exists(path)) {
        return {false, "MNIST file not found: " + path.string()};
    }
    auto fidelity = [&](const std::string &resize, SelectionRule rule) {
        json j = {{"dataset", {{"source", "mnist"}, {"path", path.string()}, {"resize", resize}}},
                  {"n", 10},
                  {"k", {52}},
                  {"seed", 0},
                  {"workers", 0},
                  {"rules", {{"fsl", std::string(to_string(rule))}}},
                  {"output_dir", (fs::path(AIQT_ACCEPTANCE_OUT) / ("mnist_" + resize)).string()}};
        const ExperimentConfig cfg = parse_config(j);
        const auto rows = cmd_eval(cfg, {Method::Fsl, std::nullopt, SplitChoice::Validation});
        return row_for(rows, 52, "validation");
    };
    const DatasetReport zp = fidelity("zero-pad", SelectionRule::ConjugateSymmetric);
    const DatasetReport zp_plain = fidelity("zero-pad", SelectionRule::PlainTopK);
    const DatasetReport bil = fidelity("bilinear", SelectionRule::ConjugateSymmetric);
    const double f = zp.mean_fidelity;
    return {f >= 0.80 && f <= 0.90,
            fmt::format("zero-pad F {:.4f} on {} validation images (required [0.80, 0.90]); "
                        "plain top-k {:.4f}; bilinear {:.4f} (informational)",
                        f, zp.n_samples, zp_plain.mean_fidelity, bil.mean_fidelity)};
}

Outcome ac11() {
    std::mt19937_64 rng(111);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + rng() % 5;
        const std::size_t depth = 1 + rng() % 2;
        const TransformModel m = random_model(rng, n, depth);
        const QuantumCircuit c = parse_qasm(emit_qasm(m));
        worst = std::max(worst, (circuit_unitary(c) - dense_matrix(m)).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-9, fmt::format("max deviation {:.3e} on 20 models", worst)};
}

struct Criterion {
    const char *id;
    const char *name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char **argv) {
    aiqt::init_logging();
    const std::vector<Criterion> all{
        {"AC1", "Fourier equivalence", ac1},
        {"AC2", "circuit matrix oracle", ac2},
        {"AC3", "gradient check", ac3},
        {"AC4", "Fourier realness", ac4},
        {"AC5", "metric identity", ac5},
        {"AC6", "trend reproduction", ac6},
        {"AC7", "imaginary leakage suppression", ac7},
        {"AC8", "monotonicity and power law", ac8},
        {"AC9", "deep model sanity", ac9},
        {"AC10", "MNIST Fourier baseline", ac10},
        {"AC11", "QASM round trip", ac11},
    };
    std::vector<const Criterion *> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string want = argv[i];
        const auto it = std::find_if(all.begin(), all.end(),
                                     [&](const Criterion &c) { return want == c.id; });
        if (it == all.end()) {
            std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
            return 2;
        }
        selected.push_back(&*it);
    }
    if (selected.empty()) {
        for (const auto &c : all) {
            selected.push_back(&c);
        }
    }

    int failures = 0;
    for (const Criterion *c : selected) {
        Outcome o;
        try {
            o = c->run();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%-4s %s  %s: %s\n", c->id, o.pass ? "PASS" : "FAIL", c->name,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
