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

// Dataset construction: windowed time series, image ingestion, synthetic
// corpora and the cached binary container.

#include "aiqt/types.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aiqt {

enum class Split : std::uint8_t { Train = 0, Validation = 1 };

[[nodiscard]] std::string_view to_string(Split s) noexcept;

// Immutable collection of length-N real samples with split tags. Every sample
// is finite with nonzero norm and N is a power of two.
class SampleSet {
  public:
    SampleSet(std::size_t dimension, std::vector<RealVector> samples,
              std::vector<Split> splits, nlohmann::json provenance = {});

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] std::span<const RealVector> samples() const noexcept {
        return samples_;
    }
    [[nodiscard]] const RealVector &sample(std::size_t i) const;
    [[nodiscard]] std::span<const Split> splits() const noexcept {
        return splits_;
    }
    [[nodiscard]] const nlohmann::json &provenance() const noexcept {
        return provenance_;
    }

    [[nodiscard]] std::vector<RealVector> subset(Split s) const;
    [[nodiscard]] std::size_t count(Split s) const noexcept;

    /// Concatenation; dimensions must agree. Provenance becomes a list.
    [[nodiscard]] static SampleSet pool(std::span<const SampleSet> parts);

  private:
    std::size_t dimension_;
    std::vector<RealVector> samples_;
    std::vector<Split> splits_;
    nlohmann::json provenance_;
};

// -- time series -------------------------------------------------------------

struct NamedSeries {
    std::string instrument;
    RealVector values;
};

/// Windows [i*stride, i*stride + N). Windows ending at or before
/// floor(0.8 * len) are training windows, the rest validation, so a window
/// straddling the split point is never used for training. Zero-norm windows
/// are dropped and counted in provenance["rejected_zero_norm"].
/// Throws InvalidArgument if N is not a power of two or stride is 0 and
/// DegenerateInput if the series is shorter than N.
[[nodiscard]] SampleSet window_timeseries(std::span<const double> series,
                                          std::size_t window,
                                          std::size_t stride);

/// Windows every series independently and pools the results. Series shorter
/// than the window are skipped and listed under provenance["skipped"].
[[nodiscard]] SampleSet window_all(std::span<const NamedSeries> series,
                                   std::size_t window, std::size_t stride);

/// CSV with header "timestamp,instrument,<price columns...>". Rows are grouped
/// by instrument (first-appearance order) and sorted by timestamp, numerically
/// when every timestamp parses as a number, lexicographically otherwise.
/// Malformed rows are collected and reported together in one IoError.
[[nodiscard]] std::vector<NamedSeries>
load_csv_series(const std::filesystem::path &path, std::string_view column);

// -- images ------------------------------------------------------------------

enum class ResizeMode { ZeroPad, Bilinear };
enum class CifarMode { Bw, Rgb };

struct ImageOptions {
    ResizeMode resize = ResizeMode::ZeroPad;
    std::uint64_t seed = 0;         ///< random 80/20 split
    std::size_t limit = 0;          ///< read at most this many images; 0 = all
};

/// IDX image file (magic 0x00000803), optionally gzip-compressed. Images are
/// mapped to 32x32 and scaled to [0, 1]; all-black images are dropped.
[[nodiscard]] SampleSet load_mnist(const std::filesystem::path &path,
                                   const ImageOptions &options = {});

/// CIFAR-10 binary batch (3073-byte records). Bw: luma 0.299R + 0.587G +
/// 0.114B. Rgb: each channel is a separate sample; the channels of one image
/// share its split.
[[nodiscard]] SampleSet load_cifar(const std::filesystem::path &path,
                                   CifarMode mode,
                                   const ImageOptions &options = {});

/// 28x28 -> 32x32 with the image centred in a zero border.
[[nodiscard]] RealVector pad_to_32(std::span<const double> image28);
/// 28x28 -> 32x32 bilinear, corners aligned.
[[nodiscard]] RealVector bilinear_to_32(std::span<const double> image28);

// -- synthetic corpora -------------------------------------------------------

enum class CorpusKind { Bandlimited, Piecewise, LowRankMixture };

[[nodiscard]] std::string_view to_string(CorpusKind k) noexcept;
[[nodiscard]] CorpusKind parse_corpus_kind(std::string_view name);

struct SyntheticOptions {
    /// Bandlimited: cosine pairs per sample (0 < f < N/2).
    std::size_t active_pairs = 4;
    /// Low-rank mixture: number of shared atoms.
    std::size_t rank = 6;
    /// Low-rank mixture: additive Gaussian noise level.
    double noise = 1e-3;
};

/// Deterministic per seed, randomly split 80/20 with the same seed.
///  - bandlimited: DC offset plus active_pairs cosines, exactly sparse under
///    the conjugate-symmetric Fourier rule with k >= 2 * active_pairs.
///  - piecewise: a few constant segments at random break points plus short
///    decaying transients.
///  - low-rank-mixture: random combinations of `rank` shared smooth atoms.
/// Throws InvalidArgument unless 1 <= n <= 12 and count >= 1.
[[nodiscard]] SampleSet synthetic_corpus(CorpusKind kind, std::size_t qubits,
                                         std::size_t count, std::uint64_t seed,
                                         const SyntheticOptions &options = {});

/// Indices of a seeded random 80/20 split: floor(0.8 * count) training items.
[[nodiscard]] std::vector<Split> random_split(std::size_t count,
                                              std::uint64_t seed);

// -- cache ---------------------------------------------------------------

inline constexpr std::uint32_t kCacheMagic = 0x51494141; // "AAIQ" little-endian
inline constexpr std::uint32_t kCacheVersion = 1;

/// Binary container: magic, version (u32), N, count (u64), then count*N
/// little-endian float64 values. Split tags and provenance go to the JSON
/// sidecar `<path>.json`. Both files are written atomically.
void save_cache(const SampleSet &set, const std::filesystem::path &path);
[[nodiscard]] SampleSet load_cache(const std::filesystem::path &path);

} // namespace aiqt
