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

// Implementations behind the command-line subcommands. Each function writes
// its artifacts atomically below the given output directory and returns what
// it computed so callers (and tests) need not parse files back.

#include "aiqt/config.hpp"
#include "aiqt/encoding.hpp"
#include "aiqt/powerlaw.hpp"
#include "aiqt/training.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aiqt {

/// Reads AIQT_LOG (error, warn, info, debug); anything else keeps "info" and
/// logs a warning.
void init_logging();

enum class Method { Aiqt, Fsl };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method parse_method(std::string_view name);

struct TrainOutputs {
    TrainResult result;
    std::filesystem::path checkpoint;
    std::filesystem::path history;
    std::filesystem::path baseline;
};

/// Trains on the training split and writes checkpoint.json, history.csv and
/// baseline.json (Fourier tail loss on the training split under both rules).
/// On divergence the last good model is saved as checkpoint_last_good.json
/// before TrainingFailure propagates.
[[nodiscard]] TrainOutputs cmd_train(const ExperimentConfig &cfg);

enum class SplitChoice { Train, Validation, Both };

struct EvalRequest {
    Method method = Method::Aiqt;
    std::optional<std::filesystem::path> checkpoint; ///< required for aiqt
    SplitChoice splits = SplitChoice::Both;
};

/// One report per (k, split). The model's N must match the dataset. FSL rows
/// use cfg.fsl_rule and, when cfg.fsl_validation_only is set, only the
/// validation split. Writes eval_<method>.json and eval_<method>.txt.
[[nodiscard]] std::vector<DatasetReport> cmd_eval(const ExperimentConfig &cfg,
                                                  const EvalRequest &req);

/// Aligned text table; cRMSE is shown in units of 1e-3 with 4 significant
/// digits.
[[nodiscard]] std::string format_eval_table(const std::vector<DatasetReport> &rows);

struct PowerLawResult {
    std::string method;
    std::string split;
    PowerLawFit fit;
    std::vector<double> k;
    std::vector<double> crmse;
    std::vector<std::size_t> kept;
};

/// Fits every (method, split) group found in the given eval JSON files, using
/// the nominal k on the x axis. Writes powerlaw.json and one
/// powerlaw_<method>_<split>.csv per group.
[[nodiscard]] std::vector<PowerLawResult>
cmd_powerlaw(const std::vector<std::filesystem::path> &eval_files,
             const std::filesystem::path &out_dir);

/// Writes <out_dir>/circuit.qasm after the round-trip check; returns the
/// measured deviation.
double cmd_export_qasm(const std::filesystem::path &checkpoint,
                       const std::filesystem::path &out_dir,
                       double tolerance = 1e-9);

struct ReconstructOutputs {
    std::filesystem::path csv;
    std::vector<std::filesystem::path> images;
    ReconstructionReport fsl;
    std::optional<ReconstructionReport> aiqt;
};

/// Reconstructs one sample with the Fourier baseline and, given a
/// checkpoint, the trained model. Image samples also produce PGM files (PPM
/// for a complete RGB triple).
[[nodiscard]] ReconstructOutputs
cmd_reconstruct(const ExperimentConfig &cfg,
                const std::optional<std::filesystem::path> &checkpoint,
                std::size_t sample, std::size_t k);

/// Writes rank_profile_<method>.csv for the chosen split.
[[nodiscard]] RankProfile
cmd_rank_profile(const ExperimentConfig &cfg, Method method,
                 const std::optional<std::filesystem::path> &checkpoint,
                 SplitChoice split);

} // namespace aiqt
