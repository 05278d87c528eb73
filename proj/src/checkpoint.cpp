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

#include "aiqt/checkpoint.hpp"

#include "aiqt/error.hpp"
#include "aiqt/io.hpp"

#include <string>
#include <utility>
#include <vector>

namespace aiqt {

using nlohmann::json;

json to_json(const TransformModel &m, const CheckpointMetadata &meta) {
    json blocks = json::array();
    for (const auto &b : m.blocks()) {
        json mixers = json::array();
        for (const auto &mx : b.mixers()) {
            mixers.push_back({mx.alpha, mx.beta, mx.gamma});
        }
        json phases(std::vector<double>(b.phases().begin(), b.phases().end()));
        blocks.push_back({{"mixers", std::move(mixers)},
                          {"phases", std::move(phases)}});
    }
    json metadata = {{"seed", meta.seed}, {"epoch", meta.epoch}};
    metadata["loss"] = meta.loss ? json(*meta.loss) : json(nullptr);
    return {{"format_version", kCheckpointFormatVersion},
            {"n", m.qubits()},
            {"depth", m.depth()},
            {"blocks", std::move(blocks)},
            {"metadata", std::move(metadata)}};
}

Checkpoint checkpoint_from_json(const json &j) {
    try {
        if (j.at("format_version").get<int>() != kCheckpointFormatVersion) {
            throw IoError("unsupported checkpoint format_version");
        }
        const auto n = j.at("n").get<std::size_t>();
        const auto depth = j.at("depth").get<std::size_t>();
        const auto &jb = j.at("blocks");
        if (!jb.is_array() || jb.size() != depth) {
            throw IoError("checkpoint depth does not match block list");
        }
        std::vector<ParameterSet> blocks;
        for (const auto &b : jb) {
            std::vector<MixerAngles> mixers;
            for (const auto &t : b.at("mixers")) {
                if (!t.is_array() || t.size() != 3) {
                    throw IoError("mixer entries must be [alpha, beta, gamma]");
                }
                mixers.push_back({t[0].get<double>(), t[1].get<double>(),
                                  t[2].get<double>()});
            }
            blocks.emplace_back(n, std::move(mixers),
                                b.at("phases").get<std::vector<double>>());
        }
        CheckpointMetadata meta;
        if (j.contains("metadata")) {
            const auto &md = j.at("metadata");
            meta.seed = md.value("seed", std::uint64_t{0});
            meta.epoch = md.value("epoch", std::size_t{0});
            if (md.contains("loss") && !md.at("loss").is_null()) {
                meta.loss = md.at("loss").get<double>();
            }
        }
        return {TransformModel(n, std::move(blocks)), meta};
    } catch (const json::exception &e) {
        throw IoError(std::string("malformed checkpoint: ") + e.what());
    } catch (const InvalidArgument &e) {
        throw IoError(std::string("invalid checkpoint: ") + e.what());
    }
}

std::string dump_checkpoint(const TransformModel &m,
                            const CheckpointMetadata &meta) {
    return to_json(m, meta).dump(2) + "\n";
}

void save_checkpoint(const std::filesystem::path &path,
                     const TransformModel &m, const CheckpointMetadata &meta) {
    write_file_atomic(path, dump_checkpoint(m, meta));
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception &e) {
        throw IoError("cannot parse " + path.string() + ": " + e.what());
    }
    return checkpoint_from_json(j);
}

} // namespace aiqt
