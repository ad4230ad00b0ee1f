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

#include "noonsim/commands.hpp"

#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "noonsim/format.hpp"
#include "noonsim/hom.hpp"
#include "noonsim/tagio.hpp"
#include "noonsim/tagsim.hpp"

namespace noonsim {

using nlohmann::json;

namespace {

constexpr double kReferenceQuantumVisibility = 0.968;
constexpr double kReferenceClassicalVisibility = 0.982;
constexpr double kReferenceBrightness = 2.3e8;
constexpr double kReferenceHomVisibility = 0.832;
constexpr double kReferenceDipWidthFs = 71.9;

std::filesystem::path output_dir(const RunConfig &config, const CommandOptions &options) {
    std::filesystem::path dir = options.out_dir.value_or(config.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

class CsvWriter {
   public:
    CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header) : out_(path) {
        if (!out_) {
            throw ValidationError("cannot open " + path.string() + " for writing");
        }
        bool first = true;
        for (const auto &h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }

    void row(const std::vector<double> &values) {
        bool first = true;
        for (double v : values) {
            out_ << (first ? "" : ",") << format_double(v);
            first = false;
        }
        out_ << '\n';
    }

   private:
    std::ofstream out_;
};

void write_json(const std::filesystem::path &path, const json &j) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot open " + path.string() + " for writing");
    }
    out << j.dump(2) << '\n';
}

json fit_json(const VisibilityFit &fit) {
    return {{"visibility", fit.visibility}, {"offset", fit.offset}, {"amplitude", fit.amplitude}, {"flat", fit.flat}};
}

const char *pattern_key(Pattern p) {
    switch (p) {
        case Pattern::kBunchedA:
            return "p20";
        case Pattern::kSplit:
            return "p11";
        case Pattern::kBunchedB:
            return "p02";
    }
    return "?";
}

}  // namespace

CommandResult cmd_fringe2d(const RunConfig &config, const CommandOptions &options) {
    const auto dir = output_dir(config, options);
    const auto thetas = config.theta.values();
    const auto phis = config.phi.values();
    const auto fringe = config.fringe_options(effective_threads(options.threads));
    const auto grid = fringe_grid(fringe, thetas, phis);

    CommandResult result;
    result.files.push_back(dir / "fringe2d.csv");
    {
        CsvWriter csv(result.files.back(),
                      {"theta", "phi", "p11", "p20", "p02", "frac_cross", "frac_same_a", "frac_same_b"});
        for (const auto &pt : grid) {
            csv.row({pt.theta, pt.phi, pt.probs.split, pt.probs.bunched_a, pt.probs.bunched_b, pt.fractions.cross,
                     pt.fractions.same_a, pt.fractions.same_b});
        }
    }

    json summary = {{"command", "fringe2d"},
                    {"theta_steps", thetas.size()},
                    {"phi_steps", phis.size()},
                    {"visibility_theta", config.visibility_theta},
                    {"reference_average_visibility", kReferenceQuantumVisibility}};
    double max_split = 0.0;
    for (const auto &pt : grid) max_split = std::max(max_split, pt.probs.split);
    summary["max_p11"] = max_split;

    const std::vector<double> row_theta = {config.visibility_theta};
    const auto row = fringe_grid(fringe, row_theta, phis);
    try {
        json vis = json::object();
        double sum = 0.0;
        for (Pattern p : kPatterns) {
            std::vector<FringeSample> samples;
            for (const auto &pt : row) samples.push_back({pt.phi, pt.probs[p]});
            const auto fit = visibility(samples, 2.0);
            vis[pattern_key(p)] = fit_json(fit);
            sum += fit.visibility;
        }
        vis["average"] = sum / 3.0;
        summary["visibility"] = vis;
    } catch (const ValidationError &e) {
        summary["visibility"] = nullptr;
        summary["visibility_note"] = e.what();
    }
    result.files.push_back(dir / "fringe2d_summary.json");
    write_json(result.files.back(), summary);
    result.summary = std::move(summary);
    return result;
}

CommandResult cmd_classical_mzi(const RunConfig &config, const CommandOptions &options) {
    std::vector<double> thetas;
    std::vector<double> powers;
    if (config.power_mw) {
        if (!config.calibration) {
            throw ConfigError("a heater-power scan needs circuit.calibration", "/scan/power_mw", 0);
        }
        powers = config.power_mw->values();
        for (double p : powers) thetas.push_back(power_to_phase(*config.calibration, p));
    } else {
        thetas = config.theta.values();
    }
    const auto dir = output_dir(config, options);
    CommandResult result;
    result.files.push_back(dir / "classical_mzi.csv");

    std::array<std::vector<FringeSample>, 4> curves;
    {
        std::vector<std::string> header = {"theta", "in_a_out_a", "in_a_out_b", "in_b_out_a", "in_b_out_b"};
        if (!powers.empty()) header.insert(header.begin() + 1, "power_mw");
        CsvWriter csv(result.files.back(), header);
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const auto netlist = config.circuit_at(thetas[i]);
            auto from_a = classical_transmission(netlist, 0);
            auto from_b = classical_transmission(netlist, 1);
            if (config.apply_output_loss) {
                const double eta[2] = {config.loss.eta_a(), config.loss.eta_b()};
                for (int k = 0; k < 2; ++k) {
                    from_a[k] *= eta[k];
                    from_b[k] *= eta[k];
                }
            }
            std::vector<double> row = {thetas[i], from_a[0], from_a[1], from_b[0], from_b[1]};
            if (!powers.empty()) row.insert(row.begin() + 1, powers[i]);
            csv.row(row);
            curves[0].push_back({thetas[i], from_a[0]});
            curves[1].push_back({thetas[i], from_a[1]});
            curves[2].push_back({thetas[i], from_b[0]});
            curves[3].push_back({thetas[i], from_b[1]});
        }
    }

    json summary = {{"command", "classical-mzi"},
                    {"points", thetas.size()},
                    {"reference_average_visibility", kReferenceClassicalVisibility}};
    try {
        const char *names[4] = {"in_a_out_a", "in_a_out_b", "in_b_out_a", "in_b_out_b"};
        json vis = json::object();
        double sum = 0.0;
        for (int c = 0; c < 4; ++c) {
            const auto fit = visibility(curves[c], 1.0);
            vis[names[c]] = fit_json(fit);
            sum += fit.visibility;
        }
        vis["average"] = sum / 4.0;
        summary["visibility"] = vis;
    } catch (const ValidationError &e) {
        summary["visibility"] = nullptr;
        summary["visibility_note"] = e.what();
    }
    result.files.push_back(dir / "classical_mzi_summary.json");
    write_json(result.files.back(), summary);
    result.summary = std::move(summary);
    return result;
}

CommandResult cmd_hom_scan(const RunConfig &config, const CommandOptions &options) {
    HomScanSpec spec;
    spec.delay_min_fs = config.delay_min_fs;
    spec.delay_max_fs = config.delay_max_fs;
    spec.delay_step_fs = config.delay_step_fs;
    spec.spectrum = config.spectrum;
    spec.baseline_visibility = config.hom_visibility;
    const auto points = hom_scan(spec, effective_threads(options.threads));

    const auto dir = output_dir(config, options);
    CommandResult result;
    result.files.push_back(dir / "hom_scan.csv");
    {
        CsvWriter csv(result.files.back(), {"delay_fs", "coincidence_probability"});
        for (const auto &pt : points) csv.row({pt.delay_fs, pt.coincidence});
    }

    json summary = {{"command", "hom-scan"},
                    {"spectrum",
                     {{"center_nm", spec.spectrum.center_nm},
                      {"fwhm_nm", spec.spectrum.fwhm_nm},
                      {"shape", std::string(to_string(spec.spectrum.shape))}}},
                    {"delay_fs", {{"start", spec.delay_min_fs}, {"stop", spec.delay_max_fs}, {"step", spec.delay_step_fs}}},
                    {"baseline_visibility", spec.baseline_visibility},
                    {"coincidence_at_zero_delay", hom_coincidence(0.0, spec)},
                    {"model", "cw-pair anti-correlated detunings, kernel cos(2 W tau)"},
                    {"reference_visibility", kReferenceHomVisibility},
                    {"reference_dip_fwhm_fs", kReferenceDipWidthFs}};
    if (spec.baseline_visibility > 0.0) {
        const double width = dip_fwhm(spec);
        summary["dip_fwhm_fs"] = width;
        summary["bandwidth_from_dip_nm"] = bandwidth_from_dip(width, spec.spectrum.shape, spec.spectrum.center_nm);
        summary["bandwidth_from_reference_dip_nm"] =
            bandwidth_from_dip(kReferenceDipWidthFs, spec.spectrum.shape, spec.spectrum.center_nm);
    } else {
        summary["dip_fwhm_fs"] = nullptr;
    }
    result.files.push_back(dir / "hom_scan.json");
    write_json(result.files.back(), summary);
    result.summary = std::move(summary);
    return result;
}

namespace {

TagSimConfig tag_config(const RunConfig &config, const PatternProbs &probs, std::uint64_t seed) {
    TagSimConfig cfg;
    cfg.pair_rate = config.tagsim.pair_rate.value_or(pair_rate(config.rate));
    cfg.probabilities = probs;
    cfg.efficiency = config.efficiencies;
    cfg.dark_rate_cps = config.dark_counts_cps;
    cfg.jitter_ps = config.tagsim.jitter_ps;
    cfg.duration_s = config.tagsim.duration_s;
    cfg.seed = seed;
    return cfg;
}

// Mean coincidences per pattern from the analytic model.
std::array<double, 3> expected_pattern_counts(const TagSimConfig &cfg) {
    const auto frac = splitter_tree_click_probs(cfg.probabilities);
    const auto &e = cfg.efficiency;
    const double pairs = cfg.pair_rate * cfg.duration_s;
    const double cross_eff = 0.25 * (e[kA1] * e[kB1] + e[kA1] * e[kB2] + e[kA2] * e[kB1] + e[kA2] * e[kB2]);
    return {pairs * frac.same_a * e[kA1] * e[kA2], pairs * frac.cross * cross_eff, pairs * frac.same_b * e[kB1] * e[kB2]};
}

}  // namespace

CommandResult cmd_tagsim(const RunConfig &config, const CommandOptions &options) {
    const std::optional<std::uint64_t> seed = options.seed ? options.seed : config.tagsim.seed;
    if (!seed) {
        throw ConfigError("tagsim needs a seed (tagsim.seed or --seed)", "/tagsim/seed", 0);
    }
    const auto dir = output_dir(config, options);
    const auto fringe = config.fringe_options(1);
    const auto pairs = all_detector_pairs();
    const auto names = default_channel_names();
    CommandResult result;
    json summary = {{"command", "tagsim"}, {"seed", *seed}, {"window_ps", config.tagsim.window_ps}};

    if (!config.tagsim.sweep_phi) {
        const auto point = fringe_point(fringe, config.tagsim.theta, config.noon.phase);
        const auto cfg = tag_config(config, point.probs, *seed);
        TagSimStats stats;
        const TagStream stream = generate_tags(cfg, stats);
        const auto coinc = count_coincidences(stream, config.tagsim.window_ps, pairs);
        const auto grouped = pattern_counts(coinc);
        const auto expected = expected_pattern_counts(cfg);

        result.files.push_back(dir / (config.tagsim.format == "binary" ? "tags.bin" : "tags.csv"));
        save_tags(result.files.back(), stream);

        summary["pair_rate"] = cfg.pair_rate;
        summary["duration_s"] = cfg.duration_s;
        summary["pairs_emitted"] = stats.pairs_emitted;
        summary["dark_counts"] = stats.dark_counts;
        summary["records"] = stream.records.size();
        summary["theta"] = config.tagsim.theta;
        summary["phi"] = config.noon.phase;
        summary["probabilities"] = {{"p20", point.probs.bunched_a}, {"p11", point.probs.split}, {"p02", point.probs.bunched_b}};
        json singles = json::object();
        for (std::size_t c = 0; c < names.size(); ++c) singles[names[c]] = coinc.singles[c];
        summary["singles"] = singles;
        json per_pair = json::array();
        for (std::size_t i = 0; i < coinc.pairs.size(); ++i) {
            per_pair.push_back({{"channels", {names[coinc.pairs[i].first], names[coinc.pairs[i].second]}},
                                {"counts", coinc.counts[i]},
                                {"accidentals", coinc.accidentals[i]}});
        }
        summary["pairs"] = per_pair;
        json patterns = json::object();
        for (Pattern p : kPatterns) {
            const auto k = static_cast<std::size_t>(p);
            patterns[pattern_key(p)] = {{"counts", grouped.counts[k]},
                                        {"accidentals", grouped.accidentals[k]},
                                        {"expected", expected[k]}};
        }
        summary["patterns"] = patterns;
    } else {
        const auto phis = config.phi.values();
        std::vector<std::pair<double, TagStream>> scans(phis.size());
        std::vector<double> emitted(phis.size());
        const int workers = std::clamp<int>(effective_threads(options.threads), 1, static_cast<int>(phis.size()));
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < phis.size(); i += workers) {
                            const auto point = fringe_point(fringe, config.tagsim.theta, phis[i]);
                            TagSimStats stats;
                            // Point i uses seed + i.
                            scans[i] = {phis[i], generate_tags(tag_config(config, point.probs, *seed + i), stats)};
                            emitted[i] = static_cast<double>(std::max<std::uint64_t>(stats.pairs_emitted, 1));
                        }
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto &e : errors) {
            if (e) std::rethrow_exception(e);
        }
        FringeTagOptions fopts;
        fopts.window_ps = config.tagsim.window_ps;
        fopts.pairs_per_point = emitted;
        const auto analysis = fringe_from_tags(scans, fopts);

        result.files.push_back(dir / "tagsim_fringe.csv");
        {
            CsvWriter csv(result.files.back(),
                          {"phi", "pairs", "count20", "count11", "count02", "frac20", "frac11", "frac02", "err20",
                           "err11", "err02", "corrected20", "corrected11", "corrected02"});
            for (std::size_t i = 0; i < analysis.points.size(); ++i) {
                const auto &pt = analysis.points[i];
                csv.row({pt.phase, emitted[i], pt.counts[0], pt.counts[1], pt.counts[2], pt.value[0], pt.value[1],
                         pt.value[2], pt.error[0], pt.error[1], pt.error[2], pt.corrected[0], pt.corrected[1],
                         pt.corrected[2]});
            }
        }
        summary["theta"] = config.tagsim.theta;
        summary["phi_points"] = phis.size();
        summary["insufficient_counts"] = analysis.insufficient_counts;
        json vis = json::object();
        for (Pattern p : kPatterns) {
            const auto k = static_cast<std::size_t>(p);
            vis[pattern_key(p)] = {{"raw", analysis.raw[k].visibility},
                                   {"raw_error", analysis.raw[k].visibility_error},
                                   {"corrected", analysis.corrected[k].visibility},
                                   {"corrected_error", analysis.corrected[k].visibility_error}};
        }
        summary["visibility"] = vis;
    }
    result.files.push_back(dir / "coincidences.json");
    write_json(result.files.back(), summary);
    result.summary = std::move(summary);
    return result;
}

CommandResult cmd_loss_budget(const RunConfig &config, const CommandOptions &options) {
    const auto &a = config.loss.mode_a;
    const auto &b = config.loss.mode_b;
    a.validate();
    b.validate();
    if (config.rate.pump_mw == 0.0) {
        throw ConfigError("pump power is zero; brightness is undefined", "/source/rate/pump_mw", 0);
    }
    const double per_photon_db = 0.5 * (a.total_db() + b.total_db());
    const double brightness = loss_budget(config.detected_pairs_per_s, per_photon_db, config.rate.pump_mw);
    auto breakdown = [](const LossBreakdown &l) {
        return json{{"grating_coupler_db", l.grating_coupler_db},
                    {"long_pass_filter_db", l.long_pass_filter_db},
                    {"fiber_splitter_db", l.fiber_splitter_db},
                    {"detector_db", l.detector_db},
                    {"total_db", l.total_db()},
                    {"transmission", l.transmission()}};
    };
    json summary = {{"command", "loss-budget"},
                    {"detected_pairs_per_s", config.detected_pairs_per_s},
                    {"pump_mw", config.rate.pump_mw},
                    {"loss", {{"a", breakdown(a)}, {"b", breakdown(b)}}},
                    {"per_photon_loss_db", per_photon_db},
                    {"pair_loss_db", 2.0 * per_photon_db},
                    {"brightness_pairs_per_s_per_mw", brightness},
                    {"reference_brightness", kReferenceBrightness}};

    const auto dir = output_dir(config, options);
    CommandResult result;
    result.files.push_back(dir / "loss_budget.json");
    write_json(result.files.back(), summary);
    result.summary = std::move(summary);
    return result;
}

}  // namespace noonsim
