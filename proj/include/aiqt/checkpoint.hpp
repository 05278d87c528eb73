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

#include "aiqt/transform.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>

namespace aiqt {

inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointMetadata {
    std::uint64_t seed = 0;
    std::size_t epoch = 0;
    std::optional<double> loss;
};

struct Checkpoint {
    TransformModel model;
    CheckpointMetadata metadata;
};

/// {format_version, n, depth, blocks:[{mixers:[[a,b,g]...], phases:[...]}],
///  metadata:{seed, epoch, loss}}
[[nodiscard]] nlohmann::json to_json(const TransformModel &m,
                                     const CheckpointMetadata &meta);
[[nodiscard]] Checkpoint checkpoint_from_json(const nlohmann::json &j);

/// Serialized text; doubles round-trip exactly.
[[nodiscard]] std::string dump_checkpoint(const TransformModel &m,
                                          const CheckpointMetadata &meta);

void save_checkpoint(const std::filesystem::path &path,
                     const TransformModel &m, const CheckpointMetadata &meta);
[[nodiscard]] Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace aiqt
