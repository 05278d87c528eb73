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

// Command-line entry point.

#include "aiqt/commands.hpp"
#include "aiqt/error.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> out;
    std::optional<std::size_t> depth;
    std::vector<std::size_t> k;
};

void add_common(CLI::App *cmd, Overrides &o, bool needs_config = true) {
    auto *c = cmd->add_option("--config", o.config, "experiment config (JSON)");
    if (needs_config) {
        c->required()->check(CLI::ExistingFile);
    }
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--depth", o.depth, "number of transform blocks");
    cmd->add_option("--k", o.k, "sparsity budget(s), comma separated")
        ->delimiter(',');
}

aiqt::ExperimentConfig resolve(const Overrides &o) {
    aiqt::ExperimentConfig cfg = aiqt::load_config(o.config);
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.workers) {
        cfg.workers = *o.workers;
    }
    if (o.out) {
        cfg.output_dir = *o.out;
    }
    if (o.depth) {
        cfg.depth = *o.depth;
    }
    if (!o.k.empty()) {
        cfg.k = o.k;
        cfg.train_k = 0;
    }
    cfg.sync();
    cfg.validate();
    return cfg;
}

aiqt::SplitChoice parse_split(const std::string &s) {
    if (s == "train") {
        return aiqt::SplitChoice::Train;
    }
    if (s == "validation") {
        return aiqt::SplitChoice::Validation;
    }
    return aiqt::SplitChoice::Both;
}

std::optional<std::filesystem::path> maybe_path(const std::string &s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return std::filesystem::path(s);
}

} // namespace

int main(int argc, char **argv) {
    aiqt::init_logging();
    CLI::App app{"Trainable quantum-transform sparse encoding toolkit"};
    app.require_subcommand(1);

    Overrides o;
    std::string method = "aiqt";
    std::string checkpoint;
    std::string split = "both";
    bool all_splits = false;
    std::vector<std::string> inputs;
    std::size_t sample = 0;
    double tolerance = 1e-9;
    std::string out_dir = ".";

    auto *train = app.add_subcommand("train", "train a model and write checkpoint + history");
    add_common(train, o);

    auto *eval = app.add_subcommand("eval", "evaluate a checkpoint or the Fourier baseline");
    add_common(eval, o);
    eval->add_option("--method", method, "aiqt or fsl")
        ->check(CLI::IsMember({"aiqt", "fsl"}));
    eval->add_option("--checkpoint", checkpoint, "trained checkpoint (aiqt)");
    eval->add_option("--split", split, "train, validation or both")
        ->check(CLI::IsMember({"train", "validation", "both"}));
    eval->add_flag("--all-splits", all_splits,
                   "report fsl rows on every split, not only validation");

    auto *powerlaw = app.add_subcommand("powerlaw", "fit cRMSE = A k^B to eval outputs");
    powerlaw->add_option("--input", inputs, "eval_*.json files")->required();
    powerlaw->add_option("--out", out_dir, "output directory");

    auto *qasm = app.add_subcommand("export-qasm", "write the trained circuit as OpenQASM 2.0");
    qasm->add_option("--checkpoint", checkpoint, "checkpoint to export")
        ->required()
        ->check(CLI::ExistingFile);
    qasm->add_option("--out", out_dir, "output directory");
    qasm->add_option("--tolerance", tolerance, "round-trip tolerance");

    auto *recon = app.add_subcommand("reconstruct", "reconstruct one sample");
    add_common(recon, o);
    recon->add_option("--checkpoint", checkpoint, "trained checkpoint");
    recon->add_option("--sample", sample, "sample index")->required();

    auto *rank = app.add_subcommand("rank-profile", "mean sorted energy profile");
    add_common(rank, o);
    rank->add_option("--method", method, "aiqt or fsl")
        ->check(CLI::IsMember({"aiqt", "fsl"}));
    rank->add_option("--checkpoint", checkpoint, "trained checkpoint (aiqt)");
    rank->add_option("--split", split, "train, validation or both")
        ->check(CLI::IsMember({"train", "validation", "both"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            const auto outputs = aiqt::cmd_train(resolve(o));
            std::cout << "checkpoint: " << outputs.checkpoint.string() << '\n'
                      << "history:    " << outputs.history.string() << '\n';
        } else if (eval->parsed()) {
            auto cfg = resolve(o);
            if (all_splits) {
                cfg.fsl_validation_only = false;
            }
            const auto rows = aiqt::cmd_eval(
                cfg, {aiqt::parse_method(method), maybe_path(checkpoint),
                      parse_split(split)});
            std::cout << aiqt::format_eval_table(rows);
        } else if (powerlaw->parsed()) {
            std::vector<std::filesystem::path> files(inputs.begin(), inputs.end());
            for (const auto &r : aiqt::cmd_powerlaw(files, out_dir)) {
                std::printf("%-5s %-11s A=%.6g B=%.4f R2=%.4f (%zu points)\n",
                            r.method.c_str(), r.split.c_str(), r.fit.amplitude,
                            r.fit.exponent, r.fit.r_squared, r.fit.points);
            }
        } else if (qasm->parsed()) {
            const double dev = aiqt::cmd_export_qasm(checkpoint, out_dir, tolerance);
            std::printf("wrote %s/circuit.qasm (max deviation %.3e)\n",
                        out_dir.c_str(), dev);
        } else if (recon->parsed()) {
            const auto cfg = resolve(o);
            if (cfg.k.size() != 1) {
                throw aiqt::InvalidArgument("reconstruct takes exactly one --k");
            }
            const auto r = aiqt::cmd_reconstruct(cfg, maybe_path(checkpoint),
                                                 sample, cfg.k.front());
            std::printf("fsl  cRMSE %.6e F %.6f\n", r.fsl.crmse, r.fsl.fidelity);
            if (r.aiqt) {
                std::printf("aiqt cRMSE %.6e F %.6f\n", r.aiqt->crmse,
                            r.aiqt->fidelity);
            }
            std::cout << "csv: " << r.csv.string() << '\n';
        } else if (rank->parsed()) {
            const auto cfg = resolve(o);
            (void)aiqt::cmd_rank_profile(cfg, aiqt::parse_method(method),
                                         maybe_path(checkpoint), parse_split(split));
            std::cout << "wrote " << (cfg.output_dir / ("rank_profile_" + method + ".csv")).string()
                      << '\n';
        }
    } catch (const aiqt::Error &e) {
        spdlog::error("{}", e.what());
        return 1;
    } catch (const std::exception &e) {
        spdlog::error("unexpected failure: {}", e.what());
        return 2;
    }
    return 0;
}
