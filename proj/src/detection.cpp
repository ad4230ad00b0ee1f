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

#include "noonsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "noonsim/error.hpp"

namespace noonsim {

namespace {

double binomial(int n, int k) { return std::round(std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0))); }

// All loss-count vectors with per-mode entries in [0, max_photons] and a
// total of at most max_photons.
void loss_patterns(int modes, int max_photons, std::vector<int> &prefix, std::vector<std::vector<int>> &out) {
    if (static_cast<int>(prefix.size()) == modes) {
        out.push_back(prefix);
        return;
    }
    int used = 0;
    for (int n : prefix) used += n;
    for (int k = 0; k + used <= max_photons; ++k) {
        prefix.push_back(k);
        loss_patterns(modes, max_photons, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

void LossBreakdown::validate() const {
    for (double db : {grating_coupler_db, long_pass_filter_db, fiber_splitter_db, detector_db}) {
        if (!(db >= 0.0) || !std::isfinite(db)) {
            throw ValidationError("loss breakdown entries must be finite and >= 0 dB");
        }
    }
}

double LossBreakdown::total_db() const {
    return grating_coupler_db + long_pass_filter_db + fiber_splitter_db + detector_db;
}

double LossBreakdown::transmission() const {
    validate();
    return db_to_transmission(total_db());
}

double db_to_transmission(double db) { return std::pow(10.0, -db / 10.0); }

DensityMatrix apply_loss(const DensityMatrix &rho, std::span<const double> transmissions) {
    const int modes = rho.mode_count();
    if (static_cast<int>(transmissions.size()) != modes) {
        throw ShapeError("need one transmission per mode");
    }
    for (double eta : transmissions) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw ValidationError("transmission must lie in [0, 1]");
        }
    }
    const auto &in_basis = rho.basis();
    int max_photons = 0;
    for (const auto &s : in_basis) max_photons = std::max(max_photons, s.photon_number());
    auto out_basis = enumerate_sectors(modes, max_photons);
    const auto in_dim = static_cast<Eigen::Index>(in_basis.size());
    const auto out_dim = static_cast<Eigen::Index>(out_basis.size());

    std::vector<std::vector<int>> patterns;
    std::vector<int> prefix;
    loss_patterns(modes, max_photons, prefix, patterns);

    CMatrix out = CMatrix::Zero(out_dim, out_dim);
    CMatrix kraus(out_dim, in_dim);
    for (const auto &lost : patterns) {
        kraus.setZero();
        bool any = false;
        for (Eigen::Index s = 0; s < in_dim; ++s) {
            const auto &occ = in_basis[s].occupations();
            std::vector<int> kept(modes);
            double amp = 1.0;
            for (int k = 0; k < modes && amp != 0.0; ++k) {
                if (lost[k] > occ[k]) {
                    amp = 0.0;
                    break;
                }
                kept[k] = occ[k] - lost[k];
                amp *= std::sqrt(binomial(occ[k], lost[k]) * std::pow(transmissions[k], kept[k]) *
                                 std::pow(1.0 - transmissions[k], lost[k]));
            }
            if (amp == 0.0) continue;
            const auto it = std::find(out_basis.begin(), out_basis.end(), FockState(kept));
            kraus(it - out_basis.begin(), s) = amp;
            any = true;
        }
        if (any) {
            out.noalias() += kraus * rho.matrix() * kraus.adjoint();
        }
    }
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(std::move(out_basis), std::move(out));
}

DensityMatrix apply_loss(const DensityMatrix &rho, double eta_a, double eta_b) {
    const std::array<double, 2> eta = {eta_a, eta_b};
    return apply_loss(rho, eta);
}

DensityMatrix propagate(const DensityMatrix &rho, const CircuitSpec &spec) {
    if (rho.mode_count() != spec.mode_count) {
        throw ShapeError("state and circuit disagree on mode count");
    }
    DensityMatrix state = rho;
    for (const auto &stage : compose_stages(spec)) {
        state = evolve(state, stage.unitary);
        if (std::any_of(stage.transmissions.begin(), stage.transmissions.end(), [](double t) { return t != 1.0; })) {
            state = apply_loss(state, stage.transmissions);
        }
    }
    return state;
}

const char *pattern_label(Pattern pattern) {
    switch (pattern) {
        case Pattern::kBunchedA:
            return "|2,0>";
        case Pattern::kSplit:
            return "|1,1>";
        case Pattern::kBunchedB:
            return "|0,2>";
    }
    return "?";
}

double PatternProbs::operator[](Pattern p) const {
    switch (p) {
        case Pattern::kBunchedA:
            return bunched_a;
        case Pattern::kSplit:
            return split;
        case Pattern::kBunchedB:
            return bunched_b;
    }
    return 0.0;
}

PatternProbs pattern_probs(const DensityMatrix &rho) {
    if (rho.mode_count() != 2) {
        throw ShapeError("pattern probabilities are defined for two output modes");
    }
    return {rho.probability(FockState{2, 0}), rho.probability(FockState{1, 1}), rho.probability(FockState{0, 2})};
}

std::vector<double> sector_probabilities(const DensityMatrix &rho, int photons) {
    const auto basis = enumerate_basis(rho.mode_count(), photons);
    std::vector<double> out;
    out.reserve(basis.size());
    for (const auto &s : basis) out.push_back(rho.probability(s));
    return out;
}

double SplitterTreeFractions::operator[](Pattern p) const {
    switch (p) {
        case Pattern::kBunchedA:
            return same_a;
        case Pattern::kSplit:
            return cross;
        case Pattern::kBunchedB:
            return same_b;
    }
    return 0.0;
}

SplitterTreeFractions splitter_tree_click_probs(const PatternProbs &probs) {
    for (double p : {probs.bunched_a, probs.split, probs.bunched_b}) {
        if (!(p >= 0.0 && p <= 1.0 + 1e-12)) {
            throw ValidationError("pattern probabilities must lie in [0, 1]");
        }
    }
    // Two photons in one fiber splitter input take one of four equally likely
    // routes; two of them separate the photons onto different detectors.
    return {0.5 * probs.bunched_a, probs.split, 0.5 * probs.bunched_b};
}

VisibilityFit visibility(std::span<const FringeSample> samples, double frequency) {
    return visibility(samples, {}, frequency);
}

VisibilityFit visibility(std::span<const FringeSample> samples, std::span<const double> sigmas, double frequency) {
    if (samples.size() < 5) {
        throw ValidationError("visibility fit needs at least 5 samples");
    }
    if (!sigmas.empty() && sigmas.size() != samples.size()) {
        throw ShapeError("need one sigma per sample");
    }
    if (!(frequency > 0.0)) {
        throw ValidationError("fringe frequency must be positive");
    }
    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end(),
                                              [](const auto &a, const auto &b) { return a.phase < b.phase; });
    const double span = hi_it->phase - lo_it->phase;
    const double period = 2.0 * std::numbers::pi / frequency;
    // Sampled on a grid, the last point sits one spacing short of a full period.
    const double spacing = span / static_cast<double>(samples.size() - 1);
    if (span + spacing < period * (1.0 - 1e-9)) {
        throw ValidationError("samples must cover at least one fringe period");
    }

    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    double y_min = samples.front().value;
    double y_max = y_min;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = frequency * samples[i].phase;
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(x);
        design(i, 2) = std::sin(x);
        y(i) = samples[i].value;
        y_min = std::min(y_min, y(i));
        y_max = std::max(y_max, y(i));
    }

    VisibilityFit fit;
    if (y_max - y_min <= 1e-15 * std::max(1.0, std::abs(y_max))) {
        fit.flat = true;
        fit.offset = y_max;
        return fit;
    }
    // coefficients = M y with M the least-squares pseudo-inverse.
    const Eigen::MatrixXd pinv = (design.transpose() * design).ldlt().solve(design.transpose());
    const Eigen::Vector3d c = pinv * y;
    fit.offset = c(0);
    fit.amplitude = std::hypot(c(1), c(2));
    fit.phase = std::atan2(c(2), c(1));
    if (!(fit.offset > 0.0)) {
        throw ValidationError("fringe offset must be positive to define a visibility");
    }
    const double raw = fit.amplitude / fit.offset;
    fit.visibility = std::clamp(raw, 0.0, 1.0);
    fit.flat = fit.amplitude <= 1e-12 * fit.offset;

    if (!sigmas.empty() && fit.amplitude > 0.0) {
        const Eigen::RowVector3d grad(-raw / fit.offset, c(1) / (fit.amplitude * fit.offset),
                                      c(2) / (fit.amplitude * fit.offset));
        const Eigen::RowVectorXd per_sample = grad * pinv;
        double var = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            var += per_sample(i) * per_sample(i) * sigmas[i] * sigmas[i];
        }
        fit.visibility_error = std::sqrt(var);
    }
    return fit;
}

double loss_budget(double detected_pairs_per_s, double per_photon_loss_db, double pump_mw) {
    if (!(detected_pairs_per_s >= 0.0) || !(per_photon_loss_db >= 0.0) || !(pump_mw >= 0.0)) {
        throw ValidationError("loss budget inputs must be non-negative");
    }
    if (pump_mw == 0.0) {
        throw ValidationError("pump power is zero; brightness is undefined");
    }
    return detected_pairs_per_s * std::pow(10.0, 2.0 * per_photon_loss_db / 10.0) / pump_mw;
}

FringeGridOptions ideal_mzi_options() {
    FringeGridOptions options;
    options.circuit.mode_count = 2;
    options.circuit.elements = {Coupler{}, PhaseShifter{1, 0.0}, Coupler{}};
    options.theta_elements = {1};
    return options;
}

FringeGridPoint fringe_point(const FringeGridOptions &options, double theta, double phi) {
    CircuitSpec circuit = options.circuit;
    for (int index : options.theta_elements) {
        if (index < 0 || index >= static_cast<int>(circuit.elements.size())) {
            throw ValidationError("theta binding refers to a missing element");
        }
        auto *shifter = std::get_if<PhaseShifter>(&circuit.elements[index]);
        if (shifter == nullptr) {
            throw ValidationError("theta binding must refer to a phase shifter");
        }
        shifter->phase = theta;
    }
    NoonSpec noon = options.noon;
    noon.phase = phi;
    DensityMatrix state = propagate(noon_mixed(noon), circuit);
    if (!options.transmissions.empty()) {
        state = apply_loss(state, options.transmissions);
    }
    const PatternProbs probs = pattern_probs(state);
    return {theta, phi, probs, splitter_tree_click_probs(probs)};
}

std::vector<FringeGridPoint> fringe_grid(const FringeGridOptions &options, std::span<const double> thetas,
                                         std::span<const double> phis) {
    const std::size_t total = thetas.size() * phis.size();
    std::vector<FringeGridPoint> out(total);
    const int workers = std::clamp<int>(options.threads, 1, static_cast<int>(std::max<std::size_t>(total, 1)));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = fringe_point(options, thetas[i / phis.size()], phis[i % phis.size()]);
        }
    };
    if (workers == 1) {
        work(0, total);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, w, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace noonsim
