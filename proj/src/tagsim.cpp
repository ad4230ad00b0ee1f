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

#include "noonsim/tagsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noonsim/error.hpp"

namespace noonsim {

double PortableRng::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

void TagStream::validate() const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].channel >= channels.size()) {
            throw ValidationError("tag uses unregistered channel " + std::to_string(records[i].channel));
        }
        if (i > 0 && records[i].timestamp_ps < records[i - 1].timestamp_ps) {
            throw ValidationError("tag timestamps must be non-decreasing");
        }
    }
}

std::vector<std::string> default_channel_names() { return {"a1", "a2", "b1", "b2"}; }

void TagSimConfig::validate() const {
    if (!seed) {
        throw ValidationError("tag simulation needs an explicit RNG seed");
    }
    if (!(pair_rate >= 0.0) || !std::isfinite(pair_rate)) {
        throw ValidationError("pair rate must be finite and >= 0");
    }
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw ValidationError("duration must be positive");
    }
    if (!(jitter_ps >= 0.0)) {
        throw ValidationError("jitter must be >= 0");
    }
    for (double p : {probabilities.bunched_a, probabilities.split, probabilities.bunched_b}) {
        if (!(p >= 0.0)) {
            throw ValidationError("pattern probabilities must be >= 0");
        }
    }
    if (probabilities.total() > 1.0 + 1e-9) {
        throw ValidationError("pattern probabilities sum above 1");
    }
    for (int d = 0; d < kDetectorCount; ++d) {
        if (!(efficiency[d] >= 0.0 && efficiency[d] <= 1.0)) {
            throw ValidationError("detector efficiency must lie in [0, 1]");
        }
        if (!(dark_rate_cps[d] >= 0.0) || !std::isfinite(dark_rate_cps[d])) {
            throw ValidationError("dark count rate must be finite and >= 0");
        }
    }
}

TagStream generate_tags(const TagSimConfig &config) {
    TagSimStats stats;
    return generate_tags(config, stats);
}

TagStream generate_tags(const TagSimConfig &config, TagSimStats &stats) {
    config.validate();
    stats = {};
    PortableRng rng(*config.seed);
    TagStream stream;
    stream.duration_s = config.duration_s;
    stream.channels = default_channel_names();

    const double duration_ps = config.duration_s * 1e12;
    auto emit = [&](int detector, double time_ps) {
        if (!rng.bernoulli(config.efficiency[detector])) {
            return;
        }
        double t = time_ps;
        if (config.jitter_ps > 0.0) {
            t += config.jitter_ps * rng.normal();
        }
        stream.records.push_back({static_cast<std::uint8_t>(detector), std::max<std::int64_t>(0, std::llround(t))});
    };

    const double p_a = config.probabilities.bunched_a;
    const double p_split = config.probabilities.split;
    const double p_b = config.probabilities.bunched_b;
    if (config.pair_rate > 0.0) {
        const double rate_per_ps = config.pair_rate * 1e-12;
        double t = rng.exponential(rate_per_ps);
        while (t < duration_ps) {
            ++stats.pairs_emitted;
            const double u = rng.uniform();
            if (u < p_a + p_split + p_b) {
                int first;
                int second;
                if (u < p_a) {
                    first = rng.bernoulli(0.5) ? kA1 : kA2;
                    second = rng.bernoulli(0.5) ? kA1 : kA2;
                } else if (u < p_a + p_split) {
                    first = rng.bernoulli(0.5) ? kA1 : kA2;
                    second = rng.bernoulli(0.5) ? kB1 : kB2;
                } else {
                    first = rng.bernoulli(0.5) ? kB1 : kB2;
                    second = rng.bernoulli(0.5) ? kB1 : kB2;
                }
                if (first == second) {
                    emit(first, t);  // no photon-number resolution
                } else {
                    emit(first, t);
                    emit(second, t);
                }
            }
            t += rng.exponential(rate_per_ps);
        }
    }

    for (int d = 0; d < kDetectorCount; ++d) {
        const double rate_per_ps = config.dark_rate_cps[d] * 1e-12;
        if (rate_per_ps <= 0.0) continue;
        for (double t = rng.exponential(rate_per_ps); t < duration_ps; t += rng.exponential(rate_per_ps)) {
            stream.records.push_back({static_cast<std::uint8_t>(d), std::llround(t)});
            ++stats.dark_counts;
        }
    }

    std::stable_sort(stream.records.begin(), stream.records.end(), [](const TagRecord &a, const TagRecord &b) {
        return a.timestamp_ps < b.timestamp_ps || (a.timestamp_ps == b.timestamp_ps && a.channel < b.channel);
    });
    return stream;
}

std::vector<ChannelPair> all_detector_pairs() {
    return {{kA1, kA2}, {kA1, kB1}, {kA1, kB2}, {kA2, kB1}, {kA2, kB2}, {kB1, kB2}};
}

std::uint64_t CoincidenceResult::count(int c1, int c2) const {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i] == ChannelPair{c1, c2} || pairs[i] == ChannelPair{c2, c1}) return counts[i];
    }
    throw ValidationError("channel pair was not counted");
}

double CoincidenceResult::accidental(int c1, int c2) const {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i] == ChannelPair{c1, c2} || pairs[i] == ChannelPair{c2, c1}) return accidentals[i];
    }
    throw ValidationError("channel pair was not counted");
}

CoincidenceCounter::CoincidenceCounter(std::int64_t window_ps, std::vector<ChannelPair> pairs, int channel_count)
    : window_ps_(window_ps),
      pairs_(std::move(pairs)),
      states_(pairs_.size()),
      pairs_by_channel_(channel_count),
      singles_(channel_count, 0) {
    if (window_ps <= 0) {
        throw ValidationError("coincidence window must be positive");
    }
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto [c1, c2] = pairs_[i];
        if (c1 < 0 || c2 < 0 || c1 >= channel_count || c2 >= channel_count) {
            throw ValidationError("coincidence pair uses an unknown channel");
        }
        if (c1 == c2) {
            throw ValidationError("coincidence pair needs two distinct channels");
        }
        pairs_by_channel_[c1].push_back(static_cast<int>(i));
        pairs_by_channel_[c2].push_back(static_cast<int>(i));
    }
}

void CoincidenceCounter::push(const TagRecord &record) {
    if (record.channel >= singles_.size()) {
        throw ValidationError("unknown channel id " + std::to_string(record.channel));
    }
    if (record.timestamp_ps < last_timestamp_) {
        throw ValidationError("tags must arrive in time order");
    }
    last_timestamp_ = record.timestamp_ps;
    ++singles_[record.channel];
    const std::int64_t t = record.timestamp_ps;
    auto expired = [&](std::int64_t earlier) { return 2 * (t - earlier) > window_ps_; };
    for (int index : pairs_by_channel_[record.channel]) {
        PairState &state = states_[index];
        const bool is_first = pairs_[index].first == record.channel;
        auto &mine = is_first ? state.pending_first : state.pending_second;
        auto &theirs = is_first ? state.pending_second : state.pending_first;
        while (!theirs.empty() && expired(theirs.front())) theirs.pop_front();
        while (!mine.empty() && expired(mine.front())) mine.pop_front();
        if (!theirs.empty()) {
            theirs.pop_back();  // nearest earlier partner click
            ++state.count;
        } else {
            mine.push_back(t);
        }
    }
}

CoincidenceResult CoincidenceCounter::finish(double duration_s) const {
    if (!(duration_s > 0.0)) {
        throw ValidationError("duration must be positive");
    }
    CoincidenceResult result;
    result.window_ps = window_ps_;
    result.duration_s = duration_s;
    result.pairs = pairs_;
    result.singles = singles_;
    const double window_s = static_cast<double>(window_ps_) * 1e-12;
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        result.counts.push_back(states_[i].count);
        const double r1 = static_cast<double>(singles_[pairs_[i].first]) / duration_s;
        const double r2 = static_cast<double>(singles_[pairs_[i].second]) / duration_s;
        result.accidentals.push_back(r1 * r2 * window_s * duration_s);
    }
    return result;
}

CoincidenceResult count_coincidences(const TagStream &stream, std::int64_t window_ps,
                                     std::span<const ChannelPair> pairs) {
    CoincidenceCounter counter(window_ps, {pairs.begin(), pairs.end()}, static_cast<int>(stream.channels.size()));
    for (const auto &record : stream.records) {
        counter.push(record);
    }
    return counter.finish(stream.duration_s);
}

PatternCounts pattern_counts(const CoincidenceResult &result) {
    PatternCounts out;
    auto add = [&](Pattern p, int c1, int c2) {
        const auto i = static_cast<std::size_t>(p);
        out.counts[i] += static_cast<double>(result.count(c1, c2));
        out.accidentals[i] += result.accidental(c1, c2);
    };
    add(Pattern::kBunchedA, kA1, kA2);
    add(Pattern::kSplit, kA1, kB1);
    add(Pattern::kSplit, kA1, kB2);
    add(Pattern::kSplit, kA2, kB1);
    add(Pattern::kSplit, kA2, kB2);
    add(Pattern::kBunchedB, kB1, kB2);
    return out;
}

namespace {

VisibilityFit safe_fit(std::span<const FringeSample> samples, std::span<const double> sigmas, double frequency,
                       bool &insufficient) {
    try {
        return visibility(samples, sigmas, frequency);
    } catch (const ShapeError &) {
        throw;
    } catch (const ValidationError &) {
        // Non-positive offset: accidental subtraction ate the whole signal.
        insufficient = true;
        VisibilityFit fit;
        fit.flat = true;
        return fit;
    }
}

}  // namespace

FringeTagResult fringe_from_tags(std::span<const std::pair<double, TagStream>> scans,
                                 const FringeTagOptions &options) {
    if (scans.size() < 5) {
        throw ValidationError("a tag fringe needs at least 5 phase points");
    }
    const bool normalized = !options.pairs_per_point.empty();
    if (normalized && options.pairs_per_point.size() != scans.size()) {
        throw ShapeError("need one pair count per phase point");
    }
    for (double n : options.pairs_per_point) {
        if (!(n > 0.0)) throw ValidationError("pairs per point must be positive");
    }
    const auto pairs = all_detector_pairs();
    FringeTagResult result;
    std::array<double, 3> totals{};
    for (std::size_t i = 0; i < scans.size(); ++i) {
        const auto &[phase, stream] = scans[i];
        const auto counts = pattern_counts(count_coincidences(stream, options.window_ps, pairs));
        FringeTagPoint point;
        point.phase = phase;
        point.counts = counts.counts;
        point.accidentals = counts.accidentals;
        for (std::size_t k = 0; k < 3; ++k) {
            const double n = counts.counts[k];
            totals[k] += n;
            if (normalized) {
                const double trials = options.pairs_per_point[i];
                const double p = n / trials;
                point.value[k] = p;
                point.error[k] = std::sqrt(std::max(p * (1.0 - p), 1.0 / trials) / trials);
                point.corrected[k] = (n - counts.accidentals[k]) / trials;
            } else {
                point.value[k] = n / stream.duration_s;
                point.error[k] = std::sqrt(std::max(n, 1.0)) / stream.duration_s;
                point.corrected[k] = (n - counts.accidentals[k]) / stream.duration_s;
            }
            point.corrected_error[k] = point.error[k];
        }
        result.points.push_back(point);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        if (totals[k] < options.min_counts) {
            result.insufficient_counts = true;
        }
        std::vector<FringeSample> raw;
        std::vector<FringeSample> corrected;
        std::vector<double> sigmas;
        for (const auto &point : result.points) {
            raw.push_back({point.phase, point.value[k]});
            corrected.push_back({point.phase, point.corrected[k]});
            sigmas.push_back(point.error[k]);
        }
        result.raw[k] = safe_fit(raw, sigmas, options.frequency, result.insufficient_counts);
        result.corrected[k] = safe_fit(corrected, sigmas, options.frequency, result.insufficient_counts);
    }
    return result;
}

}  // namespace noonsim
