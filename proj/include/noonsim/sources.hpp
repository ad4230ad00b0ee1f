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

#include <string>
#include <string_view>

#include "noonsim/fock.hpp"

namespace noonsim {

/// Speed of light in nm/fs.
inline constexpr double kSpeedOfLight = 299.792458;

/// Two-photon path-entangled state sqrt(b)|2,0> + e^{2i phi} sqrt(1-b)|0,2>
/// with coherence p between the two terms.
struct NoonSpec {
    double balance = 0.5;  // pair-generation weight of source a, [0, 1]
    double phase = 0.0;    // N00N phase phi, radians
    double purity = 1.0;   // [0, 1]

    void validate() const;
};

enum class SpectralShape { kGaussian, kSincSquared };

std::string_view to_string(SpectralShape shape);
/// Accepts "gaussian" and "sinc2"; throws ValidationError otherwise.
SpectralShape parse_spectral_shape(std::string_view text);

/// Marginal single-photon intensity spectrum. Amplitudes are real and
/// positive; the spectrum is cut off at +-5 FWHM around its center.
struct SpectrumSpec {
    double center_nm = 1562.0;
    double fwhm_nm = 50.0;
    SpectralShape shape = SpectralShape::kGaussian;

    void validate() const;

    /// Center angular frequency in rad/fs.
    double center_omega() const;
    /// Intensity FWHM in angular frequency (rad/fs), linearized around the
    /// center: 2 pi c dlambda / lambda^2.
    double fwhm_omega() const;
    /// Unnormalized intensity at detuning `delta` (rad/fs) from the center;
    /// 1 at zero detuning, 0 beyond the +-5 FWHM cutoff.
    double intensity_at_detuning(double delta) const;
};

struct SourceRateSpec {
    double brightness = 2.3e8;  // pairs / s / mW on chip
    double pump_mw = 0.01;      // on-chip pump power

    void validate() const;
};

/// Pure N00N state over {|2,0>, |1,1>, |0,2>}; throws for b outside [0, 1].
PureState noon_pure(double balance, double phase);

/// Partially coherent N00N state: diagonal (b, 0, 1-b), coherence
/// rho(|2,0>,|0,2>) = p sqrt(b(1-b)) e^{-2i phi}.
DensityMatrix noon_mixed(double balance, double phase, double purity);
DensityMatrix noon_mixed(const NoonSpec &spec);

/// |int f1(w) f2(w) dw|^2 of unit-normalized real spectral amplitudes, by
/// adaptive Gauss-Kronrod quadrature. Symmetric; 1 for identical spectra.
double spectral_overlap(const SpectrumSpec &s1, const SpectrumSpec &s2);

/// On-chip pair rate (pairs/s) for a CW pump: brightness x pump power.
double pair_rate(const SourceRateSpec &spec);

/// sin^2(x/2) / (x/2)^2 for x = dk L; 1 at phase matching.
double qpm_response(double dk_times_length);

/// Full width at half maximum of qpm_response in units of dk L (~5.566).
double qpm_fwhm();

/// Half-maximum point y of sinc^2(y) = 1/2 (~1.3916).
double sinc2_half_max_argument();

/// Phase mismatch linear in wavelength: dk = slope (lambda - center).
struct LinearPhaseMismatch {
    double center_nm = 1562.0;
    double slope_per_um_per_nm = 1.0;  // (1/um) per nm
};

/// Normalized conversion efficiency at `wavelength_nm` for a poled section
/// of `length_um`.
double qpm_spectrum(const LinearPhaseMismatch &mismatch, double length_um, double wavelength_nm);

/// FWHM of qpm_spectrum in nm; inversely proportional to the length.
double qpm_bandwidth_nm(const LinearPhaseMismatch &mismatch, double length_um);

}  // namespace noonsim
