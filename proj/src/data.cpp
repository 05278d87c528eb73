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

#include "aiqt/data.hpp"

#include "aiqt/error.hpp"
#include "aiqt/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace aiqt {

std::string_view to_string(Split s) noexcept {
    return s == Split::Train ? "train" : "validation";
}

namespace {

bool usable(std::span<const double> x) {
    double norm2 = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) {
            return false;
        }
        norm2 += v * v;
    }
    return norm2 > 0.0;
}

} // namespace

SampleSet::SampleSet(std::size_t dimension, std::vector<RealVector> samples,
                     std::vector<Split> splits, nlohmann::json provenance)
    : dimension_(dimension), samples_(std::move(samples)),
      splits_(std::move(splits)), provenance_(std::move(provenance)) {
    if (!is_power_of_two(dimension_)) {
        throw InvalidArgument("sample length must be a power of two");
    }
    if (splits_.size() != samples_.size()) {
        throw InvalidArgument("one split tag per sample required");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].size() != dimension_) {
            throw InvalidArgument("sample " + std::to_string(i) +
                                  " has the wrong length");
        }
        if (!usable(samples_[i])) {
            throw DegenerateInput("sample " + std::to_string(i) +
                                  " is zero or non-finite");
        }
    }
}

const RealVector &SampleSet::sample(std::size_t i) const {
    if (i >= samples_.size()) {
        throw InvalidArgument("sample index " + std::to_string(i) +
                              " out of range (size " +
                              std::to_string(samples_.size()) + ")");
    }
    return samples_[i];
}

std::vector<RealVector> SampleSet::subset(Split s) const {
    std::vector<RealVector> out;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (splits_[i] == s) {
            out.push_back(samples_[i]);
        }
    }
    return out;
}

std::size_t SampleSet::count(Split s) const noexcept {
    return static_cast<std::size_t>(std::count(splits_.begin(), splits_.end(), s));
}

SampleSet SampleSet::pool(std::span<const SampleSet> parts) {
    if (parts.empty()) {
        throw InvalidArgument("nothing to pool");
    }
    std::vector<RealVector> samples;
    std::vector<Split> splits;
    nlohmann::json prov = nlohmann::json::array();
    for (const auto &p : parts) {
        if (p.dimension() != parts.front().dimension()) {
            throw InvalidArgument("pooled sets differ in sample length");
        }
        samples.insert(samples.end(), p.samples_.begin(), p.samples_.end());
        splits.insert(splits.end(), p.splits_.begin(), p.splits_.end());
        prov.push_back(p.provenance_);
    }
    return {parts.front().dimension(), std::move(samples), std::move(splits),
            std::move(prov)};
}

// Time series ----------------------------------------------------------------

SampleSet window_timeseries(std::span<const double> series, std::size_t window,
                            std::size_t stride) {
    if (!is_power_of_two(window)) {
        throw InvalidArgument("window length must be a power of two");
    }
    if (stride < 1) {
        throw InvalidArgument("stride must be >= 1");
    }
    if (series.size() < window) {
        throw DegenerateInput("series of length " +
                              std::to_string(series.size()) +
                              " is shorter than the window " +
                              std::to_string(window));
    }
    const std::size_t count = (series.size() - window) / stride + 1;
    const std::size_t split_point = series.size() * 4 / 5;
    std::vector<RealVector> samples;
    std::vector<Split> splits;
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const auto w = series.subspan(i * stride, window);
        if (!usable(w)) {
            ++rejected;
            continue;
        }
        samples.emplace_back(w.begin(), w.end());
        splits.push_back(i * stride + window <= split_point ? Split::Train
                                                            : Split::Validation);
    }
    nlohmann::json prov = {{"source", "timeseries"},
                           {"length", series.size()},
                           {"window", window},
                           {"stride", stride},
                           {"windows", count},
                           {"split_point", split_point},
                           {"rejected_zero_norm", rejected}};
    return {window, std::move(samples), std::move(splits), std::move(prov)};
}

SampleSet window_all(std::span<const NamedSeries> series, std::size_t window,
                     std::size_t stride) {
    std::vector<RealVector> samples;
    std::vector<Split> splits;
    nlohmann::json parts = nlohmann::json::array();
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto &s : series) {
        if (s.values.size() < window) {
            skipped.push_back({{"instrument", s.instrument},
                               {"length", s.values.size()},
                               {"reason", "shorter than window"}});
            continue;
        }
        SampleSet one = window_timeseries(s.values, window, stride);
        auto prov = one.provenance();
        prov["instrument"] = s.instrument;
        parts.push_back(prov);
        for (std::size_t i = 0; i < one.size(); ++i) {
            samples.push_back(one.samples()[i]);
            splits.push_back(one.splits()[i]);
        }
    }
    if (samples.empty()) {
        throw DegenerateInput("no usable windows in any series");
    }
    nlohmann::json prov = {{"source", "timeseries"},
                           {"window", window},
                           {"stride", stride},
                           {"series", parts},
                           {"skipped", skipped}};
    return {window, std::move(samples), std::move(splits), std::move(prov)};
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(std::move(cell));
    for (auto &s : cells) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    }
    return cells;
}

bool parse_double(std::string_view text, double &out) {
    if (text.empty()) {
        return false;
    }
    const char *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

} // namespace

std::vector<NamedSeries> load_csv_series(const std::filesystem::path &path,
                                         std::string_view column) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open CSV file " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "timestamp" ||
        header[1] != "instrument") {
        throw IoError(path.string() +
                      ": header must start with timestamp,instrument and "
                      "name at least one price column");
    }
    const auto col_it = std::find(header.begin() + 2, header.end(), column);
    if (col_it == header.end()) {
        throw IoError(path.string() + ": no column named '" +
                      std::string(column) + "'");
    }
    const auto col = static_cast<std::size_t>(col_it - header.begin());

    struct Row {
        std::string timestamp;
        double value;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<Row>> groups;
    std::vector<std::string> problems;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            problems.push_back("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
            continue;
        }
        double v = 0.0;
        if (!parse_double(cells[col], v)) {
            problems.push_back("line " + std::to_string(line_no) +
                               ": non-numeric value '" + cells[col] +
                               "' in column " + std::string(column));
            continue;
        }
        auto [it, inserted] = groups.try_emplace(cells[1]);
        if (inserted) {
            order.push_back(cells[1]);
        }
        it->second.push_back({cells[0], v});
    }
    if (!problems.empty()) {
        std::string msg = path.string() + ": " + std::to_string(problems.size()) +
                          " malformed row(s)";
        for (const auto &p : problems) {
            msg += "\n  " + p;
        }
        throw IoError(msg);
    }
    if (order.empty()) {
        throw IoError(path.string() + ": no data rows");
    }

    bool numeric = true;
    for (const auto &[name, rows] : groups) {
        for (const auto &r : rows) {
            double t = 0.0;
            numeric = numeric && parse_double(r.timestamp, t);
        }
    }
    std::vector<NamedSeries> out;
    for (const auto &name : order) {
        auto &rows = groups[name];
        if (numeric) {
            std::stable_sort(rows.begin(), rows.end(),
                             [](const Row &a, const Row &b) {
                                 double ta = 0.0;
                                 double tb = 0.0;
                                 parse_double(a.timestamp, ta);
                                 parse_double(b.timestamp, tb);
                                 return ta < tb;
                             });
        } else {
            std::stable_sort(rows.begin(), rows.end(),
                             [](const Row &a, const Row &b) {
                                 return a.timestamp < b.timestamp;
                             });
        }
        NamedSeries s{name, {}};
        s.values.reserve(rows.size());
        for (const auto &r : rows) {
            s.values.push_back(r.value);
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Images -----------------------------------------------------------------------

std::vector<Split> random_split(std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Split> tags(count, Split::Validation);
    const std::size_t train = count * 4 / 5;
    for (std::size_t i = 0; i < train; ++i) {
        tags[idx[i]] = Split::Train;
    }
    return tags;
}

RealVector pad_to_32(std::span<const double> image28) {
    if (image28.size() != 28 * 28) {
        throw InvalidArgument("expected a 28x28 image");
    }
    RealVector out(32 * 32, 0.0);
    for (std::size_t r = 0; r < 28; ++r) {
        std::copy_n(image28.begin() + static_cast<long>(r * 28), 28,
                    out.begin() + static_cast<long>((r + 2) * 32 + 2));
    }
    return out;
}

RealVector bilinear_to_32(std::span<const double> image28) {
    if (image28.size() != 28 * 28) {
        throw InvalidArgument("expected a 28x28 image");
    }
    RealVector out(32 * 32);
    const double scale = 27.0 / 31.0;
    for (std::size_t r = 0; r < 32; ++r) {
        const double sr = static_cast<double>(r) * scale;
        const std::size_t r0 = std::min<std::size_t>(26, static_cast<std::size_t>(sr));
        const double fr = sr - static_cast<double>(r0);
        for (std::size_t c = 0; c < 32; ++c) {
            const double sc = static_cast<double>(c) * scale;
            const std::size_t c0 = std::min<std::size_t>(26, static_cast<std::size_t>(sc));
            const double fc = sc - static_cast<double>(c0);
            const auto at = [&](std::size_t rr, std::size_t cc) {
                return image28[rr * 28 + cc];
            };
            out[r * 32 + c] = (1 - fr) * ((1 - fc) * at(r0, c0) + fc * at(r0, c0 + 1)) +
                              fr * ((1 - fc) * at(r0 + 1, c0) + fc * at(r0 + 1, c0 + 1));
        }
    }
    return out;
}

namespace {

// gzread passes uncompressed files through unchanged.
class GzReader {
  public:
    explicit GzReader(const std::filesystem::path &path)
        : file_(gzopen(path.c_str(), "rb")), path_(path) {
        if (file_ == nullptr) {
            throw IoError("cannot open " + path.string());
        }
    }
    ~GzReader() { gzclose(file_); }
    GzReader(const GzReader &) = delete;
    GzReader &operator=(const GzReader &) = delete;

    // Returns the number of bytes read; throws on a decompression error.
    std::size_t read(void *dst, std::size_t bytes) {
        const int got = gzread(file_, dst, static_cast<unsigned>(bytes));
        if (got < 0) {
            int code = 0;
            throw IoError(path_.string() + ": " + gzerror(file_, &code));
        }
        return static_cast<std::size_t>(got);
    }

    void read_exact(void *dst, std::size_t bytes, const char *what) {
        if (read(dst, bytes) != bytes) {
            throw IoError(path_.string() + ": truncated file (" + what + ")");
        }
    }

  private:
    gzFile file_;
    std::filesystem::path path_;
};

std::uint32_t big_endian_u32(const unsigned char *p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

} // namespace

SampleSet load_mnist(const std::filesystem::path &path,
                     const ImageOptions &options) {
    GzReader in(path);
    std::array<unsigned char, 16> header{};
    in.read_exact(header.data(), header.size(), "IDX header");
    const std::uint32_t magic = big_endian_u32(header.data());
    if (magic != 0x00000803) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "bad IDX magic 0x%08x (want 0x00000803)",
                      magic);
        throw IoError(path.string() + ": " + buf);
    }
    const std::size_t count = big_endian_u32(header.data() + 4);
    const std::size_t rows = big_endian_u32(header.data() + 8);
    const std::size_t cols = big_endian_u32(header.data() + 12);
    if (rows != 28 || cols != 28) {
        throw IoError(path.string() + ": expected 28x28 images, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    }
    const std::size_t take =
        options.limit == 0 ? count : std::min(count, options.limit);

    std::vector<RealVector> samples;
    std::vector<unsigned char> pixels(28 * 28);
    RealVector image(28 * 28);
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < take; ++i) {
        in.read_exact(pixels.data(), pixels.size(), "image data");
        for (std::size_t p = 0; p < pixels.size(); ++p) {
            image[p] = pixels[p] / 255.0;
        }
        if (!usable(image)) {
            ++rejected;
            continue;
        }
        samples.push_back(options.resize == ResizeMode::ZeroPad
                              ? pad_to_32(image)
                              : bilinear_to_32(image));
    }
    if (samples.empty()) {
        throw DegenerateInput(path.string() + ": no usable images");
    }
    auto splits = random_split(samples.size(), options.seed);
    nlohmann::json prov = {
        {"source", "mnist"},
        {"path", path.string()},
        {"images", take},
        {"rejected_zero_norm", rejected},
        {"resize", options.resize == ResizeMode::ZeroPad ? "zero-pad" : "bilinear"},
        {"split_seed", options.seed},
        {"width", 32},
        {"height", 32},
        {"channel", "gray"}};
    return {1024, std::move(samples), std::move(splits), std::move(prov)};
}

SampleSet load_cifar(const std::filesystem::path &path, CifarMode mode,
                     const ImageOptions &options) {
    GzReader in(path);
    constexpr std::size_t kRecord = 3073;
    std::vector<unsigned char> rec(kRecord);
    std::vector<std::vector<RealVector>> images; // per image: 1 or 3 samples
    std::size_t rejected = 0;
    std::size_t read_images = 0;
    while (options.limit == 0 || read_images < options.limit) {
        const std::size_t got = in.read(rec.data(), kRecord);
        if (got == 0) {
            break;
        }
        if (got != kRecord) {
            throw IoError(path.string() + ": truncated file (record " +
                          std::to_string(read_images) + ")");
        }
        ++read_images;
        const unsigned char *r = rec.data() + 1;
        const unsigned char *g = r + 1024;
        const unsigned char *b = g + 1024;
        std::vector<RealVector> parts;
        if (mode == CifarMode::Bw) {
            RealVector x(1024);
            for (std::size_t p = 0; p < 1024; ++p) {
                x[p] = (0.299 * r[p] + 0.587 * g[p] + 0.114 * b[p]) / 255.0;
            }
            parts.push_back(std::move(x));
        } else {
            for (const unsigned char *ch : {r, g, b}) {
                RealVector x(1024);
                for (std::size_t p = 0; p < 1024; ++p) {
                    x[p] = ch[p] / 255.0;
                }
                parts.push_back(std::move(x));
            }
        }
        images.push_back(std::move(parts));
    }
    if (read_images == 0) {
        throw IoError(path.string() + ": no records");
    }
    const auto image_splits = random_split(images.size(), options.seed);
    std::vector<RealVector> samples;
    std::vector<Split> splits;
    nlohmann::json channels = nlohmann::json::array();
    static constexpr std::array<const char *, 3> kNames{"r", "g", "b"};
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t c = 0; c < images[i].size(); ++c) {
            if (!usable(images[i][c])) {
                ++rejected;
                continue;
            }
            samples.push_back(std::move(images[i][c]));
            splits.push_back(image_splits[i]);
            if (mode == CifarMode::Rgb) {
                channels.push_back(kNames[c]);
            }
        }
    }
    if (samples.empty()) {
        throw DegenerateInput(path.string() + ": no usable images");
    }
    nlohmann::json prov = {{"source", "cifar"},
                           {"path", path.string()},
                           {"images", read_images},
                           {"mode", mode == CifarMode::Bw ? "bw" : "rgb"},
                           {"rejected_zero_norm", rejected},
                           {"split_seed", options.seed},
                           {"width", 32},
                           {"height", 32},
                           {"channel", mode == CifarMode::Bw
                                           ? nlohmann::json("luma")
                                           : channels}};
    return {1024, std::move(samples), std::move(splits), std::move(prov)};
}

// Synthetic corpora ---------------------------------------------------------

std::string_view to_string(CorpusKind k) noexcept {
    switch (k) {
    case CorpusKind::Bandlimited:
        return "bandlimited";
    case CorpusKind::Piecewise:
        return "piecewise";
    case CorpusKind::LowRankMixture:
        return "low-rank-mixture";
    }
    return "unknown";
}

CorpusKind parse_corpus_kind(std::string_view name) {
    for (auto k : {CorpusKind::Bandlimited, CorpusKind::Piecewise,
                   CorpusKind::LowRankMixture}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw InvalidArgument("unknown corpus kind '" + std::string(name) + "'");
}

namespace {

using Rng = std::mt19937_64;

constexpr double kPiecewiseNoise = 1e-3;

std::size_t uniform_index(Rng &rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

RealVector bandlimited_sample(Rng &rng, std::size_t dim, std::size_t pairs) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealVector x(dim, 0.5 + unit(rng));
    const std::size_t available = dim >= 4 ? dim / 2 - 1 : 0;
    const std::size_t use = std::min(pairs, available);
    if (use == 0) {
        return x;
    }
    // Frequencies drawn from the lowest band that still has room for `use`.
    const std::size_t band = std::max(use, std::min(available, std::max<std::size_t>(dim / 8, 1)));
    std::vector<std::size_t> freqs(band);
    std::iota(freqs.begin(), freqs.end(), std::size_t{1});
    std::shuffle(freqs.begin(), freqs.end(), rng);
    for (std::size_t p = 0; p < use; ++p) {
        const double amp = 0.2 + unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        const double w = 2.0 * std::numbers::pi * static_cast<double>(freqs[p]) /
                         static_cast<double>(dim);
        for (std::size_t t = 0; t < dim; ++t) {
            x[t] += amp * std::cos(w * static_cast<double>(t) + phase);
        }
    }
    return x;
}

RealVector piecewise_sample(Rng &rng, std::size_t dim) {
    std::normal_distribution<double> normal;
    RealVector x(dim, 0.0);
    // Break points and pulses sit on a grid of 64 cells (every sample when
    // N < 64).
    const std::size_t cell = std::max<std::size_t>(dim / 64, 1);
    const std::size_t cells = dim / cell;
    const std::size_t segments = cells >= 4 ? uniform_index(rng, 2, 5) : 1;
    std::vector<std::size_t> cuts{0};
    for (std::size_t s = 1; s < segments; ++s) {
        cuts.push_back(cell * uniform_index(rng, 1, cells - 1));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(dim);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double level = normal(rng);
        for (std::size_t t = cuts[s]; t < cuts[s + 1]; ++t) {
            x[t] = level;
        }
    }
    const std::size_t pulses = uniform_index(rng, 0, 2);
    for (std::size_t j = 0; j < pulses; ++j) {
        const std::size_t at = cell * uniform_index(rng, 0, cells - 1);
        const double amp = 2.0 * normal(rng);
        for (std::size_t t = at; t < at + cell; ++t) {
            x[t] += amp;
        }
    }
    for (auto &v : x) {
        v += kPiecewiseNoise * normal(rng);
    }
    return x;
}

std::vector<RealVector> mixture_atoms(Rng &rng, std::size_t dim,
                                      std::size_t rank) {
    std::vector<RealVector> atoms;
    for (std::size_t r = 0; r < rank; ++r) {
        atoms.push_back(piecewise_sample(rng, dim));
    }
    return atoms;
}

} // namespace

SampleSet synthetic_corpus(CorpusKind kind, std::size_t qubits,
                           std::size_t count, std::uint64_t seed,
                           const SyntheticOptions &options) {
    if (qubits < 1 || qubits > 12) {
        throw InvalidArgument("synthetic corpora need 1 <= n <= 12");
    }
    if (count < 1) {
        throw InvalidArgument("synthetic corpora need count >= 1");
    }
    const std::size_t dim = std::size_t{1} << qubits;
    Rng rng(seed);
    std::vector<RealVector> samples;
    samples.reserve(count);
    std::vector<RealVector> atoms;
    if (kind == CorpusKind::LowRankMixture) {
        if (options.rank < 1) {
            throw InvalidArgument("low-rank mixture needs rank >= 1");
        }
        atoms = mixture_atoms(rng, dim, options.rank);
    }
    std::normal_distribution<double> normal;
    while (samples.size() < count) {
        RealVector x;
        switch (kind) {
        case CorpusKind::Bandlimited:
            x = bandlimited_sample(rng, dim, options.active_pairs);
            break;
        case CorpusKind::Piecewise:
            x = piecewise_sample(rng, dim);
            break;
        case CorpusKind::LowRankMixture:
            x.assign(dim, 0.0);
            for (const auto &a : atoms) {
                const double c = normal(rng);
                for (std::size_t t = 0; t < dim; ++t) {
                    x[t] += c * a[t];
                }
            }
            for (auto &v : x) {
                v += options.noise * normal(rng);
            }
            break;
        }
        if (usable(x)) {
            samples.push_back(std::move(x));
        }
    }
    auto splits = random_split(count, seed);
    nlohmann::json prov = {{"source", "synthetic"},
                           {"kind", std::string(to_string(kind))},
                           {"qubits", qubits},
                           {"count", count},
                           {"seed", seed}};
    if (kind == CorpusKind::Bandlimited) {
        prov["active_pairs"] = options.active_pairs;
    } else if (kind == CorpusKind::LowRankMixture) {
        prov["rank"] = options.rank;
        prov["noise"] = options.noise;
    }
    return {dim, std::move(samples), std::move(splits), std::move(prov)};
}

// Cache --------------------------------------------------------------------

namespace {

template <class T> void put_le(std::string &out, T v) {
    static_assert(std::is_unsigned_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

template <class T> T get_le(std::string_view in, std::size_t &pos) {
    if (pos + sizeof(T) > in.size()) {
        throw IoError("cache file truncated");
    }
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<T>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    }
    pos += sizeof(T);
    return v;
}

std::filesystem::path sidecar(const std::filesystem::path &path) {
    return path.string() + ".json";
}

} // namespace

void save_cache(const SampleSet &set, const std::filesystem::path &path) {
    std::string bin;
    bin.reserve(24 + set.size() * set.dimension() * 8);
    put_le(bin, kCacheMagic);
    put_le(bin, kCacheVersion);
    put_le(bin, static_cast<std::uint64_t>(set.dimension()));
    put_le(bin, static_cast<std::uint64_t>(set.size()));
    for (const auto &x : set.samples()) {
        for (double v : x) {
            put_le(bin, std::bit_cast<std::uint64_t>(v));
        }
    }
    std::vector<int> tags;
    for (Split s : set.splits()) {
        tags.push_back(static_cast<int>(s));
    }
    const nlohmann::json meta = {{"format_version", kCacheVersion},
                                 {"dimension", set.dimension()},
                                 {"count", set.size()},
                                 {"splits", tags},
                                 {"provenance", set.provenance()}};
    write_file_atomic(path, bin);
    write_file_atomic(sidecar(path), meta.dump(2) + "\n");
}

SampleSet load_cache(const std::filesystem::path &path) {
    const std::string bin = read_file(path);
    std::size_t pos = 0;
    if (get_le<std::uint32_t>(bin, pos) != kCacheMagic) {
        throw IoError(path.string() + ": not a sample cache (bad magic)");
    }
    const auto version = get_le<std::uint32_t>(bin, pos);
    if (version != kCacheVersion) {
        throw IoError(path.string() + ": unsupported cache version " +
                      std::to_string(version));
    }
    const auto dim = get_le<std::uint64_t>(bin, pos);
    const auto count = get_le<std::uint64_t>(bin, pos);
    if (dim == 0 || bin.size() - pos != count * dim * 8) {
        throw IoError(path.string() + ": payload size does not match header");
    }
    std::vector<RealVector> samples(count, RealVector(dim));
    for (auto &x : samples) {
        for (auto &v : x) {
            v = std::bit_cast<double>(get_le<std::uint64_t>(bin, pos));
        }
    }
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(sidecar(path)));
    } catch (const nlohmann::json::exception &e) {
        throw IoError(sidecar(path).string() + ": " + e.what());
    }
    std::vector<Split> splits;
    try {
        for (int t : meta.at("splits").get<std::vector<int>>()) {
            if (t != 0 && t != 1) {
                throw IoError("bad split tag");
            }
            splits.push_back(static_cast<Split>(t));
        }
        if (splits.size() != count) {
            throw IoError(sidecar(path).string() + ": split tag count mismatch");
        }
        return {dim, std::move(samples), std::move(splits),
                meta.value("provenance", nlohmann::json{})};
    } catch (const nlohmann::json::exception &e) {
        throw IoError(sidecar(path).string() + ": " + e.what());
    }
}

} // namespace aiqt
