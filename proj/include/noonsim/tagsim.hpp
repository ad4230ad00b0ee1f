// Copyright 2026 The noonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "noonsim/detection.hpp"

namespace noonsim {

/// Seedable generator for the tag engine. The bit stream is MT19937-64 as
/// fixed by the C++ standard; every variate is derived here from raw 64-bit
/// outputs (53-bit uniforms, inverse-CDF exponentials, Box-Muller normals) so
/// streams are identical across standard libraries and platforms.
class PortableRng {
   public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
    double normal();
    bool bernoulli(double p) { return uniform() < p; }

   private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

struct TagRecord {
    std::uint8_t channel = 0;
    std::int64_t timestamp_ps = 0;

    friend bool operator==(const TagRecord &, const TagRecord &) = default;
};

/// Time-ordered detector clicks. Timestamps are integer picoseconds.
struct TagStream {
    std::vector<TagRecord> records;
    double duration_s = 0.0;
    std::vector<std::string> channels;  // name per channel id

    /// Throws ValidationError if records are unsorted or use unknown ids.
    void validate() const;
};

/// Channel names of the four-detector setup, indexed by Detector.
std::vector<std::string> default_channel_names();

struct TagSimConfig {
    double pair_rate = 0.0;  // pairs/s leaving the chip
    PatternProbs probabilities;  // remainder 1 - total() is undetected
    std::array<double, kDetectorCount> efficiency = {1.0, 1.0, 1.0, 1.0};
    std::array<double, kDetectorCount> dark_rate_cps = {0.0, 0.0, 0.0, 0.0};
    double jitter_ps = 0.0;  // Gaussian sigma
    double duration_s = 1.0;
    std::optional<std::uint64_t> seed;  // required

    void validate() const;
};

/// Simulated time-tagger output. Pairs arrive as a Poisson process; each is
/// assigned a chip output pattern, routed through the fiber splitters,
/// thinned by detector efficiency, jittered and merged with Poisson dark
/// counts. Two photons on one detector give a single click.
TagStream generate_tags(const TagSimConfig &config);

struct TagSimStats {
    std::uint64_t pairs_emitted = 0;
    std::uint64_t dark_counts = 0;
};
TagStream generate_tags(const TagSimConfig &config, TagSimStats &stats);

using ChannelPair = std::pair<int, int>;

/// The six detector pairs: (a1,a2), (a1,b1), (a1,b2), (a2,b1), (a2,b2), (b1,b2).
std::vector<ChannelPair> all_detector_pairs();

struct CoincidenceResult {
    std::int64_t window_ps = 0;
    double duration_s = 0.0;
    std::vector<ChannelPair> pairs;
    std::vector<std::uint64_t> counts;       // per pair
    std::vector<double> accidentals;         // per pair, R1 R2 window T
    std::vector<std::uint64_t> singles;      // per channel

    std::uint64_t count(int c1, int c2) const;
    double accidental(int c1, int c2) const;
};

/// Streaming coincidence counter with bounded memory. Two clicks on the two
/// channels of a pair coincide when |t1 - t2| <= window / 2; a new click is
/// matched to the nearest earlier unconsumed click of the partner channel and
/// each click is used at most once per pair.
class CoincidenceCounter {
   public:
    CoincidenceCounter(std::int64_t window_ps, std::vector<ChannelPair> pairs, int channel_count);

    /// Records must arrive in non-decreasing time order.
    void push(const TagRecord &record);
    CoincidenceResult finish(double duration_s) const;

   private:
    struct PairState {
        std::deque<std::int64_t> pending_first;
        std::deque<std::int64_t> pending_second;
        std::uint64_t count = 0;
    };

    std::int64_t window_ps_;
    std::vector<ChannelPair> pairs_;
    std::vector<PairState> states_;
    std::vector<std::vector<int>> pairs_by_channel_;
    std::vector<std::uint64_t> singles_;
    std::int64_t last_timestamp_ = 0;
};

CoincidenceResult count_coincidences(const TagStream &stream, std::int64_t window_ps,
                                     std::span<const ChannelPair> pairs);

/// Coincidences grouped by chip output pattern using the four-detector
/// channel layout. Indexed by Pattern.
struct PatternCounts {
    std::array<double, 3> counts{};
    std::array<double, 3> accidentals{};
};
PatternCounts pattern_counts(const CoincidenceResult &result);

struct FringeTagPoint {
    double phase = 0.0;
    std::array<double, 3> counts{};
    std::array<double, 3> accidentals{};
    std::array<double, 3> value{};            // normalized raw rate
    std::array<double, 3> error{};            // 1 sigma
    std::array<double, 3> corrected{};        // accidental-subtracted
    std::array<double, 3> corrected_error{};
};

struct FringeTagResult {
    std::vector<FringeTagPoint> points;
    std::array<VisibilityFit, 3> raw;
    std::array<VisibilityFit, 3> corrected;
    bool insufficient_counts = false;
};

struct FringeTagOptions {
    std::int64_t window_ps = 1000;
    double frequency = 2.0;  // fringe frequency in the phase variable
    /// Emitted pairs at each phase point. When given, values are fractions of
    /// pairs with binomial errors; when empty, rates in counts/s with Poisson
    /// errors.
    std::vector<double> pairs_per_point;
    double min_counts = 10.0;
};

/// Coincidence fringe and visibility (raw and accidental-corrected) from one
/// tag stream per phase. Needs at least 5 phases.
FringeTagResult fringe_from_tags(std::span<const std::pair<double, TagStream>> scans, const FringeTagOptions &options);

}  // namespace noonsim
