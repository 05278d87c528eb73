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

#include "aiqt/config.hpp"

#include "aiqt/error.hpp"
#include "aiqt/io.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace aiqt {

namespace {

using nlohmann::json;

void require_object(const json &j, std::string_view where) {
    if (!j.is_object()) {
        throw InvalidArgument(std::string(where) + ": expected a JSON object");
    }
}

void check_keys(const json &j, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
    require_object(j, where);
    for (const auto &[key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            std::string known;
            for (auto a : allowed) {
                known += known.empty() ? "" : ", ";
                known += a;
            }
            throw InvalidArgument(std::string(where) + ": unknown key '" + key +
                                  "' (known: " + known + ")");
        }
    }
}

bool non_negative_integer(const json &v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

template <class T>
void read(const json &j, const char *key, T &out, std::string_view where) {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        if constexpr (std::is_unsigned_v<T>) {
            if (!non_negative_integer(*it)) {
                throw InvalidArgument("expected a non-negative integer");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) {
                throw InvalidArgument("expected a number");
            }
        }
        out = it->get<T>();
    } catch (const json::exception &) {
        throw InvalidArgument(std::string(where) + "." + key +
                              ": wrong value type");
    } catch (const InvalidArgument &e) {
        throw InvalidArgument(std::string(where) + "." + key + ": " + e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path &p,
                              const std::filesystem::path &base) {
    if (p.empty() || p.is_absolute() || base.empty()) {
        return p;
    }
    return base / p;
}

DataSource parse_source(const std::string &s) {
    if (s == "synthetic") return DataSource::Synthetic;
    if (s == "csv") return DataSource::Csv;
    if (s == "mnist") return DataSource::Mnist;
    if (s == "cifar") return DataSource::Cifar;
    if (s == "cache") return DataSource::Cache;
    throw InvalidArgument("dataset.source: unknown source '" + s + "'");
}

DatasetSpec parse_dataset(const json &j, const std::filesystem::path &base) {
    check_keys(j,
               {"source", "kind", "count", "path", "column", "window", "stride",
                "mode", "resize", "limit", "split_seed", "active_pairs", "rank",
                "noise"},
               "dataset");
    DatasetSpec d;
    std::string text;
    if (!j.contains("source")) {
        throw InvalidArgument("dataset.source is required");
    }
    read(j, "source", text, "dataset");
    d.source = parse_source(text);
    if (j.contains("kind")) {
        read(j, "kind", text, "dataset");
        d.kind = parse_corpus_kind(text);
    }
    read(j, "count", d.count, "dataset");
    if (j.contains("path")) {
        read(j, "path", text, "dataset");
        d.path = resolve(text, base);
    }
    read(j, "column", d.column, "dataset");
    read(j, "window", d.window, "dataset");
    read(j, "stride", d.stride, "dataset");
    if (j.contains("mode")) {
        read(j, "mode", text, "dataset");
        if (text != "bw" && text != "rgb") {
            throw InvalidArgument("dataset.mode must be bw or rgb");
        }
        d.mode = text == "bw" ? CifarMode::Bw : CifarMode::Rgb;
    }
    if (j.contains("resize")) {
        read(j, "resize", text, "dataset");
        if (text != "zero-pad" && text != "bilinear") {
            throw InvalidArgument("dataset.resize must be zero-pad or bilinear");
        }
        d.resize = text == "zero-pad" ? ResizeMode::ZeroPad : ResizeMode::Bilinear;
    }
    read(j, "limit", d.limit, "dataset");
    if (j.contains("split_seed")) {
        std::uint64_t s = 0;
        read(j, "split_seed", s, "dataset");
        d.split_seed = s;
    }
    read(j, "active_pairs", d.synthetic.active_pairs, "dataset");
    read(j, "rank", d.synthetic.rank, "dataset");
    read(j, "noise", d.synthetic.noise, "dataset");
    return d;
}

} // namespace

void ExperimentConfig::sync() {
    train.seed = seed;
    train.workers = workers;
    if (train_k == 0 && !k.empty()) {
        train_k = k.front();
    }
    train.loss.k = train_k;
}

void ExperimentConfig::validate() const {
    if (qubits < 1 || qubits > 20) {
        throw InvalidArgument("n must lie in [1, 20]");
    }
    const std::size_t dim = dimension();
    if (k.empty()) {
        throw InvalidArgument("k must list at least one sparsity budget");
    }
    for (std::size_t v : k) {
        if (v < 1 || v > dim) {
            throw InvalidArgument("k=" + std::to_string(v) + " outside [1, N=" +
                                  std::to_string(dim) + "]");
        }
    }
    if (train_k < 1 || train_k > dim) {
        throw InvalidArgument("train_k=" + std::to_string(train_k) +
                              " outside [1, N=" + std::to_string(dim) + "]");
    }
    if (depth < 1) {
        throw InvalidArgument("depth must be >= 1");
    }
    if (!(init_noise >= 0.0)) {
        throw InvalidArgument("init_noise must be >= 0");
    }
    train.validate(dim);

    const auto &d = dataset;
    switch (d.source) {
    case DataSource::Synthetic:
        if (qubits > 12) {
            throw InvalidArgument("synthetic corpora need n <= 12");
        }
        if (d.count < 1) {
            throw InvalidArgument("dataset.count must be >= 1");
        }
        break;
    case DataSource::Csv:
        if (d.window != 0 && d.window != dim) {
            throw InvalidArgument("dataset.window must equal 2^n");
        }
        if (d.stride < 1) {
            throw InvalidArgument("dataset.stride must be >= 1");
        }
        break;
    case DataSource::Mnist:
    case DataSource::Cifar:
        if (dim != 1024) {
            throw InvalidArgument("image datasets need n = 10 (32x32 pixels)");
        }
        break;
    case DataSource::Cache:
        break;
    }
    if (d.source != DataSource::Synthetic) {
        if (d.path.empty()) {
            throw InvalidArgument("dataset.path is required for this source");
        }
        if (!std::filesystem::exists(d.path)) {
            throw InvalidArgument("dataset.path does not exist: " +
                                  d.path.string());
        }
    }
}

ExperimentConfig parse_config(const nlohmann::json &j,
                              const std::filesystem::path &base_dir) {
    check_keys(j,
               {"dataset", "n", "k", "train_k", "depth", "init_noise", "loss",
                "optimizer", "seed", "workers", "checkpoint_every",
                "output_dir", "rules", "fsl_validation_only"},
               "config");
    ExperimentConfig c;
    if (!j.contains("dataset") || !j.contains("n") || !j.contains("k")) {
        throw InvalidArgument("config: dataset, n and k are required");
    }
    c.dataset = parse_dataset(j.at("dataset"), base_dir);
    read(j, "n", c.qubits, "config");
    const json &k = j.at("k");
    if (k.is_array()) {
        for (const auto &v : k) {
            if (!non_negative_integer(v)) {
                throw InvalidArgument("config.k: entries must be positive integers");
            }
            c.k.push_back(v.get<std::size_t>());
        }
    } else if (non_negative_integer(k)) {
        c.k.push_back(k.get<std::size_t>());
    } else {
        throw InvalidArgument("config.k: expected an integer or a list");
    }
    read(j, "train_k", c.train_k, "config");
    read(j, "depth", c.depth, "config");
    read(j, "init_noise", c.init_noise, "config");
    if (j.contains("loss")) {
        const json &l = j.at("loss");
        check_keys(l, {"temperature", "entropy_weight"}, "loss");
        read(l, "temperature", c.train.loss.temperature, "loss");
        read(l, "entropy_weight", c.train.loss.entropy_weight, "loss");
    }
    if (j.contains("optimizer")) {
        const json &o = j.at("optimizer");
        check_keys(o,
                   {"epochs", "batch_size", "lr_max", "lr_min", "beta1", "beta2",
                    "epsilon"},
                   "optimizer");
        read(o, "epochs", c.train.epochs, "optimizer");
        read(o, "batch_size", c.train.batch_size, "optimizer");
        read(o, "lr_max", c.train.lr_max, "optimizer");
        read(o, "lr_min", c.train.lr_min, "optimizer");
        read(o, "beta1", c.train.adam.beta1, "optimizer");
        read(o, "beta2", c.train.adam.beta2, "optimizer");
        read(o, "epsilon", c.train.adam.epsilon, "optimizer");
    }
    read(j, "seed", c.seed, "config");
    read(j, "workers", c.workers, "config");
    read(j, "checkpoint_every", c.train.checkpoint_every, "config");
    if (j.contains("output_dir")) {
        std::string out;
        read(j, "output_dir", out, "config");
        c.output_dir = resolve(out, base_dir);
    }
    if (j.contains("rules")) {
        const json &r = j.at("rules");
        check_keys(r, {"aiqt", "fsl"}, "rules");
        std::string name;
        if (r.contains("aiqt")) {
            read(r, "aiqt", name, "rules");
            c.aiqt_rule = parse_selection_rule(name);
        }
        if (r.contains("fsl")) {
            read(r, "fsl", name, "rules");
            c.fsl_rule = parse_selection_rule(name);
        }
    }
    read(j, "fsl_validation_only", c.fsl_validation_only, "config");
    c.sync();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception &e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

SampleSet load_dataset(const ExperimentConfig &cfg) {
    const auto &d = cfg.dataset;
    const std::uint64_t split_seed = d.split_seed.value_or(cfg.seed);
    switch (d.source) {
    case DataSource::Synthetic:
        return synthetic_corpus(d.kind, cfg.qubits, d.count, cfg.seed,
                                d.synthetic);
    case DataSource::Csv: {
        const auto series = load_csv_series(d.path, d.column);
        return window_all(series, cfg.dimension(), d.stride);
    }
    case DataSource::Mnist:
        return load_mnist(d.path, {d.resize, split_seed, d.limit});
    case DataSource::Cifar:
        return load_cifar(d.path, d.mode, {d.resize, split_seed, d.limit});
    case DataSource::Cache: {
        SampleSet s = load_cache(d.path);
        if (s.dimension() != cfg.dimension()) {
            throw InvalidArgument("cached samples have N=" +
                                  std::to_string(s.dimension()) +
                                  ", config expects " +
                                  std::to_string(cfg.dimension()));
        }
        return s;
    }
    }
    throw InvalidArgument("unknown dataset source");
}

} // namespace aiqt
