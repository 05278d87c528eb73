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
 * Experiment configuration read from JSON. Every object rejects keys it does
 * not know, so a misspelled option fails loudly instead of being ignored.
 *
 * Schema (all keys optional unless marked):
 *
 *     {
 *       "dataset": {                      // required
 *         "source": "synthetic" | "csv" | "mnist" | "cifar" | "cache",
 *         "kind": "piecewise",            // synthetic
 *         "count": 2000,                  // synthetic
 *         "path": "prices.csv",           // csv, mnist, cifar, cache
 *         "column": "close",              // csv
 *         "window": 1024, "stride": 128,  // csv
 *         "mode": "bw" | "rgb",           // cifar
 *         "resize": "zero-pad" | "bilinear", // mnist
 *         "limit": 0,                     // mnist, cifar: max images
 *         "split_seed": 0,                // image split; defaults to "seed"
 *         "active_pairs": 4, "rank": 6, "noise": 0.001 // synthetic options
 *       },
 *       "n": 8,                           // required, log2 of sample length
 *       "k": 64 | [16, 32, 64],           // required
 *       "train_k": 64,                    // defaults to the first k
 *       "depth": 1,
 *       "init_noise": 0.01,
 *       "loss": {"temperature": 0.01, "entropy_weight": 0.0001},
 *       "optimizer": {"epochs": 150, "batch_size": 128, "lr_max": 0.001,
 *                     "lr_min": 1e-05, "beta1": 0.9, "beta2": 0.999,
 *                     "epsilon": 1e-08},
 *       "seed": 0,
 *       "workers": 0,                     // 0 = machine parallelism
 *       "checkpoint_every": 0,
 *       "output_dir": "out",
 *       "rules": {"aiqt": "plain-topk", "fsl": "conjugate-symmetric"},
 *       "fsl_validation_only": true
 *     }
 *
 * Relative paths are resolved against the directory of the config file.
 */

#include "aiqt/data.hpp"
#include "aiqt/encoding.hpp"
#include "aiqt/training.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aiqt {

enum class DataSource { Synthetic, Csv, Mnist, Cifar, Cache };

struct DatasetSpec {
    DataSource source = DataSource::Synthetic;
    CorpusKind kind = CorpusKind::Piecewise;
    std::size_t count = 2000;
    std::filesystem::path path;
    std::string column = "close";
    std::size_t window = 0; ///< 0 = 2^n
    std::size_t stride = 128;
    CifarMode mode = CifarMode::Bw;
    ResizeMode resize = ResizeMode::ZeroPad;
    std::size_t limit = 0;
    std::optional<std::uint64_t> split_seed;
    SyntheticOptions synthetic;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    std::size_t qubits = 0;
    std::vector<std::size_t> k;
    std::size_t train_k = 0;
    std::size_t depth = 1;
    double init_noise = 1e-2;
    TrainConfig train;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    std::filesystem::path output_dir = "out";
    SelectionRule aiqt_rule = SelectionRule::PlainTopK;
    SelectionRule fsl_rule = SelectionRule::ConjugateSymmetric;
    bool fsl_validation_only = true;

    [[nodiscard]] std::size_t dimension() const noexcept {
        return std::size_t{1} << qubits;
    }

    /// Checks ranges, k validity for N (and the FSL rule), and that every
    /// referenced input file exists. Throws InvalidArgument.
    void validate() const;

    /// Propagates seed, workers and train_k into `train`.
    void sync();
};

/// Parses and validates. `base_dir` anchors relative paths.
[[nodiscard]] ExperimentConfig
parse_config(const nlohmann::json &j, const std::filesystem::path &base_dir = {});

/// Reads a JSON file; syntax errors become IoError.
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path &path);

/// Builds the SampleSet described by the dataset spec.
[[nodiscard]] SampleSet load_dataset(const ExperimentConfig &cfg);

} // namespace aiqt
