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
#include <span>
#include <utility>
#include <vector>

#include "noonsim/circuit.hpp"
#include "noonsim/fock.hpp"
#include "noonsim/sources.hpp"

namespace noonsim {

/// Insertion loss seen by one output photon, split by component.
struct LossBreakdown {
    double grating_coupler_db = 10.0;
    double long_pass_filter_db = 1.0;
    double fiber_splitter_db = 1.0;
    double detector_db = 1.0;

    void validate() const;
    double total_db() const;
    /// 10^(-total_db / 10).
    double transmission() const;
};

struct LossSpec {
    LossBreakdown mode_a;
    LossBreakdown mode_b;

    double eta_a() const { return mode_a.transmission(); }
    double eta_b() const { return mode_b.transmission(); }
};

double db_to_transmission(double db);

/// Independent binomial thinning of every mode: each photon in mode k
/// survives with probability transmissions[k]. The output basis holds all
/// photon-number sectors from the input maximum down to vacuum.
DensityMatrix apply_loss(const DensityMatrix &rho, std::span<const double> transmissions);
DensityMatrix apply_loss(const DensityMatrix &rho, double eta_a, double eta_b);

/// Runs a netlist on a state, applying each loss layer where it sits.
DensityMatrix propagate(const DensityMatrix &rho, const CircuitSpec &spec);

/// Two-photon detection patterns at the two chip outputs, canonical order.
enum class Pattern { kBunchedA = 0, kSplit = 1, kBunchedB = 2 };
inline constexpr std::array<Pattern, 3> kPatterns = {Pattern::kBunchedA, Pattern::kSplit, Pattern::kBunchedB};
const char *pattern_label(Pattern pattern);

/// Probabilities of |2,0>, |1,1>, |0,2>. With loss they sum to the weight of
/// the two-photon sector rather than 1.
struct PatternProbs {
    double bunched_a = 0.0;
    double split = 0.0;
    double bunched_b = 0.0;

    double operator[](Pattern p) const;
    double total() const { return bunched_a + split + bunched_b; }
};

/// Diagonal of the two-photon sector of a two-mode state.
PatternProbs pattern_probs(const DensityMatrix &rho);

/// Diagonal of the `photons` sector, in enumerate_basis order.
std::vector<double> sector_probabilities(const DensityMatrix &rho, int photons);

/// Detector channels behind the two off-chip 50:50 fiber splitters.
enum Detector : int { kA1 = 0, kA2 = 1, kB1 = 2, kB2 = 3 };
inline constexpr int kDetectorCount = 4;

/// Twofold coincidence fractions on the four non-number-resolving detectors.
/// A |1,1> always lands on one of the four cross pairs; a bunched pattern
/// splits at its fiber splitter half of the time.
struct SplitterTreeFractions {
    double same_a = 0.0;  // (a1, a2)
    double cross = 0.0;   // sum over (a_i, b_j)
    double same_b = 0.0;  // (b1, b2)

    double cross_pair() const { return 0.25 * cross; }
    double operator[](Pattern p) const;
};

SplitterTreeFractions splitter_tree_click_probs(const PatternProbs &probs);

struct FringeSample {
    double phase;
    double value;
};

struct VisibilityFit {
    double visibility = 0.0;  // clamped to [0, 1]
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;  // value ~ offset + amplitude cos(f x - phase)
    bool flat = false;
    double visibility_error = 0.0;  // 1 sigma, when sample errors were given
};

/// Least-squares fit of offset + amplitude cos(frequency x - phase) at the
/// known fringe frequency; V = amplitude / offset = (max-min)/(max+min).
/// Requires >= 5 samples covering one period. Constant input gives V = 0
/// with `flat` set.
VisibilityFit visibility(std::span<const FringeSample> samples, double frequency);

/// Same fit with the 1 sigma errors of the samples propagated to V.
VisibilityFit visibility(std::span<const FringeSample> samples, std::span<const double> sigmas, double frequency);

/// On-chip brightness (pairs/s/mW) from a detected pair rate; both photons
/// of a pair see `per_photon_loss_db`. Throws for a zero pump.
double loss_budget(double detected_pairs_per_s, double per_photon_loss_db, double pump_mw);

struct FringeGridPoint {
    double theta;
    double phi;
    PatternProbs probs;
    SplitterTreeFractions fractions;
};

struct FringeGridOptions {
    NoonSpec noon;                       // phase is overwritten by the grid
    CircuitSpec circuit;                 // phase shifters bound to theta via theta_elements
    std::vector<int> theta_elements;     // indices of elements whose phase is theta
    std::vector<double> transmissions;   // output loss per mode; empty = lossless
    int threads = 1;
};

/// Default MZI netlist coupler, phase_shifter(mode 1), coupler; theta binds
/// to element 1.
FringeGridOptions ideal_mzi_options();

/// Evaluates the detection statistics over the (theta, phi) grid, row-major
/// in theta. Points are independent and computed on `threads` workers.
std::vector<FringeGridPoint> fringe_grid(const FringeGridOptions &options, std::span<const double> thetas,
                                         std::span<const double> phis);

/// Single-point version of fringe_grid.
FringeGridPoint fringe_point(const FringeGridOptions &options, double theta, double phi);

}  // namespace noonsim
