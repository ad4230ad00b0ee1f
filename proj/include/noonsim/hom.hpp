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

#include <vector>

#include "noonsim/sources.hpp"

namespace noonsim {

/// Off-chip Hong-Ou-Mandel delay scan.
///
/// The pump is continuous-wave, so the two photons of a pair sit at
/// anti-correlated detunings +-W about the degenerate center. Delaying one
/// photon by tau then gives the overlap kernel
///   g(tau) = int S(W) cos(2 W tau) dW / int S(W) dW
/// with S the marginal intensity spectrum. The factor 2 in the cosine makes
/// the dip half as wide as the single-wavepacket formula would for the same
/// bandwidth.
struct HomScanSpec {
    double delay_min_fs = -200.0;
    double delay_max_fs = 200.0;
    double delay_step_fs = 1.0;
    SpectrumSpec spectrum;
    double baseline_visibility = 1.0;  // V0, lumps all non-spectral distinguishability

    void validate() const;
    std::vector<double> delays() const;
};

/// Normalized overlap kernel g(tau); g(0) = 1, g -> 0 for large delays.
double hom_overlap(double delay_fs, const SpectrumSpec &spectrum);

/// Coincidence probability P(tau) = (1 - V0 g(tau)) / 2.
double hom_coincidence(double delay_fs, const HomScanSpec &spec);

struct HomPoint {
    double delay_fs;
    double coincidence;
};

/// P(tau) over spec.delays(), evaluated on `threads` workers.
std::vector<HomPoint> hom_scan(const HomScanSpec &spec, int threads = 1);

/// Full width of the dip at half its depth, in fs. Independent of V0;
/// throws ValidationError when V0 = 0 (no dip).
double dip_fwhm(const HomScanSpec &spec);

/// Intensity FWHM (nm) of a spectrum of the given shape and center whose
/// dip_fwhm equals `width_fs`, by numerical inversion.
double bandwidth_from_dip(double width_fs, SpectralShape shape, double center_nm = 1562.0);

}  // namespace noonsim
