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

#include "aiqt/commands.hpp"

#include "aiqt/checkpoint.hpp"
#include "aiqt/error.hpp"
#include "aiqt/io.hpp"
#include "aiqt/qasm.hpp"

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace aiqt {

using nlohmann::json;

void init_logging() {
    auto logger = spdlog::get("aiqt");
    if (!logger) {
        logger = spdlog::stderr_color_mt("aiqt");
        logger->set_pattern("[%l] %v");
    }
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    const char *env = std::getenv("AIQT_LOG");
    if (env == nullptr) {
        return;
    }
    const std::string level(env);
    if (level == "error") {
        spdlog::set_level(spdlog::level::err);
    } else if (level == "warn") {
        spdlog::set_level(spdlog::level::warn);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else {
        spdlog::warn("AIQT_LOG='{}' not one of error, warn, info, debug; using info",
                     level);
    }
}

std::string_view to_string(Method m) noexcept {
    return m == Method::Aiqt ? "aiqt" : "fsl";
}

Method parse_method(std::string_view name) {
    if (name == "aiqt") {
        return Method::Aiqt;
    }
    if (name == "fsl") {
        return Method::Fsl;
    }
    throw InvalidArgument("unknown method '" + std::string(name) +
                          "' (expected aiqt or fsl)");
}

namespace {

std::optional<double> baseline_tail(std::span<const RealVector> data,
                                    std::size_t qubits, SelectionRule rule,
                                    std::size_t k) {
    const TransformModel f = fourier_model(qubits);
    double sum = 0.0;
    try {
        for (const auto &x : data) {
            const EnergyProfile e = energies(deep_forward(exact_state(x), f));
            sum += tail_energy(e, select(e, rule, k));
        }
    } catch (const InvalidArgument &) {
        return std::nullopt; // budget not representable under this rule
    }
    return sum / static_cast<double>(data.size());
}

json optional_json(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

TransformModel model_for(const ExperimentConfig &cfg, Method method,
                         const std::optional<std::filesystem::path> &checkpoint) {
    if (method == Method::Fsl) {
        return fourier_model(cfg.qubits);
    }
    if (!checkpoint) {
        throw InvalidArgument("method aiqt needs --checkpoint");
    }
    TransformModel m = load_checkpoint(*checkpoint).model;
    if (m.dimension() != cfg.dimension()) {
        throw InvalidArgument("checkpoint has N=" + std::to_string(m.dimension()) +
                              " but the dataset has N=" +
                              std::to_string(cfg.dimension()));
    }
    return m;
}

std::vector<Split> chosen_splits(SplitChoice c) {
    switch (c) {
    case SplitChoice::Train:
        return {Split::Train};
    case SplitChoice::Validation:
        return {Split::Validation};
    case SplitChoice::Both:
        break;
    }
    return {Split::Train, Split::Validation};
}

} // namespace

TrainOutputs cmd_train(const ExperimentConfig &cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.sync();
    cfg.validate();
    const SampleSet data = load_dataset(cfg);
    const auto train_set = data.subset(Split::Train);
    if (train_set.empty()) {
        throw DegenerateInput("dataset has no training samples");
    }
    spdlog::info("training on {} samples (N={}, k={}, D={}, {} epochs)",
                 train_set.size(), cfg.dimension(), cfg.train_k, cfg.depth,
                 cfg.train.epochs);

    TrainConfig tc = cfg.train;
    if (tc.checkpoint_every > 0) {
        tc.checkpoint_dir = cfg.output_dir / "checkpoints";
    }
    TrainOutputs out{
        {fourier_model(cfg.qubits), {}},
        cfg.output_dir / "checkpoint.json",
        cfg.output_dir / "history.csv",
        cfg.output_dir / "baseline.json",
    };

    const json baseline = {
        {"split", "train"},
        {"k", cfg.train_k},
        {"n_samples", train_set.size()},
        {"fsl_tail_plain_topk",
         optional_json(baseline_tail(train_set, cfg.qubits,
                                     SelectionRule::PlainTopK, cfg.train_k))},
        {"fsl_tail_conjugate_symmetric",
         optional_json(baseline_tail(train_set, cfg.qubits,
                                     SelectionRule::ConjugateSymmetric,
                                     cfg.train_k))}};
    write_file_atomic(out.baseline, baseline.dump(2) + "\n");

    const TransformModel init =
        deep_init(cfg.qubits, cfg.depth, cfg.seed, cfg.init_noise);
    try {
        out.result = train(train_set, init, tc,
                           [](const EpochRecord &r, const TransformModel &) {
                               spdlog::debug("epoch {} lr {:.3e} tail {:.6e} I {:.3e} R {:.6f}",
                                             r.epoch, r.lr, r.hard_tail_loss,
                                             r.mean_imag_norm, r.mean_real_norm);
                           });
    } catch (const TrainingFailure &e) {
        save_checkpoint(cfg.output_dir / "checkpoint_last_good.json",
                        e.last_good(), {cfg.seed, e.epoch(), std::nullopt});
        spdlog::error("{} (last good model saved)", e.what());
        throw;
    }
    const auto &last = out.result.history.back();
    save_checkpoint(out.checkpoint, out.result.model,
                    {cfg.seed, last.epoch, last.hard_tail_loss});
    write_file_atomic(out.history, history_csv(out.result.history));
    spdlog::info("final training tail loss {:.6e} (epoch 0: {:.6e})",
                 last.hard_tail_loss, out.result.history.front().hard_tail_loss);
    return out;
}

std::vector<DatasetReport> cmd_eval(const ExperimentConfig &cfg,
                                    const EvalRequest &req) {
    cfg.validate();
    const TransformModel model = model_for(cfg, req.method, req.checkpoint);
    const SampleSet data = load_dataset(cfg);
    const SelectionRule rule =
        req.method == Method::Fsl ? cfg.fsl_rule : cfg.aiqt_rule;
    std::vector<Split> splits = chosen_splits(req.splits);
    if (req.method == Method::Fsl && cfg.fsl_validation_only) {
        splits = {Split::Validation};
    }
    std::vector<DatasetReport> rows;
    for (Split s : splits) {
        const auto samples = data.subset(s);
        if (samples.empty()) {
            spdlog::warn("split {} is empty; skipped", to_string(s));
            continue;
        }
        for (std::size_t k : cfg.k) {
            DatasetReport r =
                evaluate_dataset(samples, model, rule, k, cfg.workers);
            r.split = std::string(to_string(s));
            r.method = std::string(to_string(req.method));
            rows.push_back(std::move(r));
        }
    }
    json j = json::array();
    for (const auto &r : rows) {
        j.push_back(to_json(r));
    }
    const std::string stem = "eval_" + std::string(to_string(req.method));
    write_file_atomic(cfg.output_dir / (stem + ".json"), j.dump(2) + "\n");
    write_file_atomic(cfg.output_dir / (stem + ".txt"), format_eval_table(rows));
    return rows;
}

std::string format_eval_table(const std::vector<DatasetReport> &rows) {
    std::string out = fmt::format("{:<6} {:>6} {:>6} {:<11} {:>12} {:>8} {:>10} {:>10}\n",
                                  "method", "k", "|K|", "split",
                                  "cRMSE(1e-3)", "F", "I", "R");
    for (const auto &r : rows) {
        out += fmt::format("{:<6} {:>6} {:>6} {:<11} {:>12.4g} {:>8.4f} {:>10.3e} {:>10.6f}\n",
                           r.method, r.k, r.kept_size, r.split,
                           r.mean_crmse * 1e3, r.mean_fidelity,
                           r.mean_imag_norm, r.mean_real_norm);
    }
    return out;
}

std::vector<PowerLawResult>
cmd_powerlaw(const std::vector<std::filesystem::path> &eval_files,
             const std::filesystem::path &out_dir) {
    std::map<std::pair<std::string, std::string>, PowerLawResult> groups;
    for (const auto &path : eval_files) {
        json j;
        try {
            j = json::parse(read_file(path));
            for (const auto &row : j) {
                const std::string method = row.at("method");
                const std::string split = row.at("split");
                auto &g = groups[{method, split}];
                g.method = method;
                g.split = split;
                g.k.push_back(row.at("k").get<double>());
                g.crmse.push_back(row.at("mean_crmse").get<double>());
                g.kept.push_back(row.at("kept_size").get<std::size_t>());
            }
        } catch (const json::exception &e) {
            throw IoError(path.string() + ": " + e.what());
        }
    }
    if (groups.empty()) {
        throw FitRefused("no evaluation rows to fit");
    }
    std::vector<PowerLawResult> out;
    json summary = json::array();
    for (auto &[key, g] : groups) {
        g.fit = fit_power_law(g.k, g.crmse);
        write_file_atomic(out_dir / ("powerlaw_" + g.method + "_" + g.split + ".csv"),
                          power_law_csv(g.fit, g.k, g.crmse));
        summary.push_back({{"method", g.method},
                           {"split", g.split},
                           {"A", g.fit.amplitude},
                           {"B", g.fit.exponent},
                           {"r_squared", g.fit.r_squared},
                           {"k", g.k},
                           {"kept_size", g.kept},
                           {"crmse", g.crmse}});
        out.push_back(g);
    }
    write_file_atomic(out_dir / "powerlaw.json", summary.dump(2) + "\n");
    return out;
}

double cmd_export_qasm(const std::filesystem::path &checkpoint,
                       const std::filesystem::path &out_dir, double tolerance) {
    const TransformModel m = load_checkpoint(checkpoint).model;
    const double dev = qasm_deviation(emit_qasm(m), m);
    export_qasm(m, out_dir / "circuit.qasm", tolerance);
    spdlog::info("exported circuit ({} qubits, {} blocks), round-trip deviation {:.3e}",
                 m.qubits(), m.depth(), dev);
    return dev;
}

namespace {

std::string pgm(const RealVector &v, std::size_t w, std::size_t h) {
    std::string out = fmt::format("P5\n{} {}\n255\n", w, h);
    for (double p : v) {
        out.push_back(static_cast<char>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0)));
    }
    return out;
}

std::string ppm(const std::array<RealVector, 3> &c, std::size_t w, std::size_t h) {
    std::string out = fmt::format("P6\n{} {}\n255\n", w, h);
    for (std::size_t i = 0; i < w * h; ++i) {
        for (const auto &ch : c) {
            out.push_back(static_cast<char>(std::lround(std::clamp(ch[i], 0.0, 1.0) * 255.0)));
        }
    }
    return out;
}

// Undo amplitude normalization: the real part scaled back by ||x||.
RealVector denormalize(const ComplexVector &state, double norm) {
    RealVector out(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        out[i] = state[i].real() * norm;
    }
    return out;
}

double l2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

} // namespace

ReconstructOutputs cmd_reconstruct(const ExperimentConfig &cfg,
                                   const std::optional<std::filesystem::path> &checkpoint,
                                   std::size_t sample, std::size_t k) {
    cfg.validate();
    const SampleSet data = load_dataset(cfg);
    if (sample >= data.size()) {
        throw InvalidArgument("sample index " + std::to_string(sample) +
                              " out of range (dataset has " +
                              std::to_string(data.size()) + " samples)");
    }
    const TransformModel fsl_model = fourier_model(cfg.qubits);
    // k = N-2 already keeps every coefficient under the conjugate-symmetric rule
    const std::size_t fsl_k =
        cfg.fsl_rule == SelectionRule::ConjugateSymmetric
            ? std::min(k, cfg.dimension() - 2)
            : k;
    std::optional<TransformModel> aiqt_model;
    if (checkpoint) {
        aiqt_model = model_for(cfg, Method::Aiqt, checkpoint);
    }

    auto run = [&](std::size_t index) {
        const RealVector &x = data.sample(index);
        PipelineResult f = run_pipeline(x, fsl_model, cfg.fsl_rule, fsl_k);
        std::optional<PipelineResult> a;
        if (aiqt_model) {
            a = run_pipeline(x, *aiqt_model, cfg.aiqt_rule, k);
        }
        return std::pair{std::move(f), std::move(a)};
    };

    const auto [fsl, aiqt] = run(sample);
    ReconstructOutputs out;
    out.fsl = fsl.report;
    if (aiqt) {
        out.aiqt = aiqt->report;
    }

    std::ostringstream csv;
    csv.precision(17);
    csv << "index,original,fsl_re,fsl_im";
    if (aiqt) {
        csv << ",aiqt_re,aiqt_im";
    }
    csv << '\n';
    for (std::size_t i = 0; i < fsl.exact.size(); ++i) {
        csv << i << ',' << fsl.exact[i].real() << ','
            << fsl.reconstruction[i].real() << ',' << fsl.reconstruction[i].imag();
        if (aiqt) {
            csv << ',' << aiqt->reconstruction[i].real() << ','
                << aiqt->reconstruction[i].imag();
        }
        csv << '\n';
    }
    const std::string stem = fmt::format("reconstruct_{}_k{}", sample, k);
    out.csv = cfg.output_dir / (stem + ".csv");
    write_file_atomic(out.csv, csv.str());

    const json &prov = data.provenance();
    if (prov.is_object() && prov.contains("width") && prov.contains("height")) {
        const std::size_t w = prov.at("width");
        const std::size_t h = prov.at("height");
        const json channel = prov.value("channel", json{});
        const bool rgb = channel.is_array() && sample + 2 < channel.size() &&
                         channel[sample] == "r" && channel[sample + 1] == "g" &&
                         channel[sample + 2] == "b";
        auto emit = [&](const std::string &name, const std::string &body) {
            const auto path = cfg.output_dir / (stem + "_" + name);
            write_file_atomic(path, body);
            out.images.push_back(path);
        };
        if (rgb) {
            std::array<RealVector, 3> orig;
            std::array<RealVector, 3> f;
            std::array<RealVector, 3> a;
            for (std::size_t c = 0; c < 3; ++c) {
                const auto [fc, ac] = run(sample + c);
                const double norm = l2(data.sample(sample + c));
                orig[c] = data.sample(sample + c);
                f[c] = denormalize(fc.reconstruction, norm);
                if (ac) {
                    a[c] = denormalize(ac->reconstruction, norm);
                }
            }
            emit("original.ppm", ppm(orig, w, h));
            emit("fsl.ppm", ppm(f, w, h));
            if (aiqt) {
                emit("aiqt.ppm", ppm(a, w, h));
            }
        } else {
            const double norm = l2(data.sample(sample));
            emit("original.pgm", pgm(data.sample(sample), w, h));
            emit("fsl.pgm", pgm(denormalize(fsl.reconstruction, norm), w, h));
            if (aiqt) {
                emit("aiqt.pgm", pgm(denormalize(aiqt->reconstruction, norm), w, h));
            }
        }
    }
    return out;
}

RankProfile cmd_rank_profile(const ExperimentConfig &cfg, Method method,
                             const std::optional<std::filesystem::path> &checkpoint,
                             SplitChoice split) {
    cfg.validate();
    const TransformModel model = model_for(cfg, method, checkpoint);
    const SampleSet data = load_dataset(cfg);
    std::vector<RealVector> samples;
    for (Split s : chosen_splits(split)) {
        const auto part = data.subset(s);
        samples.insert(samples.end(), part.begin(), part.end());
    }
    const RankProfile p = rank_profile(samples, model);
    write_file_atomic(cfg.output_dir /
                          ("rank_profile_" + std::string(to_string(method)) + ".csv"),
                      rank_profile_csv(p));
    return p;
}

} // namespace aiqt
