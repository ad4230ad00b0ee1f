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

#include "noonsim/sources.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noonsim/error.hpp"

namespace noonsim {

namespace {

constexpr double kCutoffWidths = 5.0;
constexpr int kPanels = 200;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

double sinc(double y) { return y == 0.0 ? 1.0 : std::sin(y) / y; }

// Integral over [lo, hi] as a sum of fixed 31-point Gauss-Kronrod panels.
// Callers keep spectrum cutoffs on panel edges, so integrands are smooth
// inside each panel.
template <class F>
double integrate(F f, double lo, double hi) {
    if (!(hi > lo)) {
        return 0.0;
    }
    const double step = (hi - lo) / kPanels;
    double total = 0.0;
    for (int k = 0; k < kPanels; ++k) {
        const double a = lo + k * step;
        const double b = (k + 1 == kPanels) ? hi : a + step;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0);
    }
    return total;
}

}  // namespace

void NoonSpec::validate() const {
    if (!in_unit_interval(balance)) {
        throw ValidationError("balance b must lie in [0, 1]");
    }
    if (!in_unit_interval(purity)) {
        throw ValidationError("purity p must lie in [0, 1]");
    }
    if (!std::isfinite(phase)) {
        throw ValidationError("phase must be finite");
    }
}

std::string_view to_string(SpectralShape shape) {
    return shape == SpectralShape::kGaussian ? "gaussian" : "sinc2";
}

SpectralShape parse_spectral_shape(std::string_view text) {
    if (text == "gaussian") {
        return SpectralShape::kGaussian;
    }
    if (text == "sinc2") {
        return SpectralShape::kSincSquared;
    }
    throw ValidationError("unknown spectral shape '" + std::string(text) + "' (expected gaussian or sinc2)");
}

void SpectrumSpec::validate() const {
    if (!(center_nm > 0.0) || !std::isfinite(center_nm)) {
        throw ValidationError("spectrum center wavelength must be positive");
    }
    if (!(fwhm_nm > 0.0) || !std::isfinite(fwhm_nm)) {
        throw ValidationError("spectrum bandwidth must be positive");
    }
}

double SpectrumSpec::center_omega() const { return 2.0 * std::numbers::pi * kSpeedOfLight / center_nm; }

double SpectrumSpec::fwhm_omega() const {
    return 2.0 * std::numbers::pi * kSpeedOfLight * fwhm_nm / (center_nm * center_nm);
}

double SpectrumSpec::intensity_at_detuning(double delta) const {
    const double width = fwhm_omega();
    if (std::abs(delta) > kCutoffWidths * width) {
        return 0.0;
    }
    const double x = delta / width;
    if (shape == SpectralShape::kGaussian) {
        return std::exp(-4.0 * std::numbers::ln2 * x * x);
    }
    const double s = sinc(2.0 * sinc2_half_max_argument() * x);
    return s * s;
}

void SourceRateSpec::validate() const {
    if (!(brightness >= 0.0) || !(pump_mw >= 0.0)) {
        throw ValidationError("brightness and pump power must be non-negative");
    }
}

PureState noon_pure(double balance, double phase) {
    NoonSpec{balance, phase, 1.0}.validate();
    CVector amplitudes(3);
    amplitudes << std::sqrt(balance), 0.0, std::polar(std::sqrt(1.0 - balance), 2.0 * phase);
    return PureState(enumerate_basis(2, 2), std::move(amplitudes));
}

DensityMatrix noon_mixed(double balance, double phase, double purity) {
    NoonSpec{balance, phase, purity}.validate();
    CMatrix rho = CMatrix::Zero(3, 3);
    rho(0, 0) = balance;
    rho(2, 2) = 1.0 - balance;
    rho(0, 2) = std::polar(purity * std::sqrt(balance * (1.0 - balance)), -2.0 * phase);
    rho(2, 0) = std::conj(rho(0, 2));
    return DensityMatrix(enumerate_basis(2, 2), std::move(rho));
}

DensityMatrix noon_mixed(const NoonSpec &spec) { return noon_mixed(spec.balance, spec.phase, spec.purity); }

double spectral_overlap(const SpectrumSpec &s1, const SpectrumSpec &s2) {
    s1.validate();
    s2.validate();
    const double c1 = s1.center_omega();
    const double c2 = s2.center_omega();
    const double h1 = kCutoffWidths * s1.fwhm_omega();
    const double h2 = kCutoffWidths * s2.fwhm_omega();
    auto i1 = [&](double w) { return s1.intensity_at_detuning(w - c1); };
    auto i2 = [&](double w) { return s2.intensity_at_detuning(w - c2); };
    const double norm1 = integrate(i1, c1 - h1, c1 + h1);
    const double norm2 = integrate(i2, c2 - h2, c2 + h2);
    const double lo = std::max(c1 - h1, c2 - h2);
    const double hi = std::min(c1 + h1, c2 + h2);
    const double cross = integrate([&](double w) { return std::sqrt(i1(w) * i2(w)); }, lo, hi);
    const double amplitude = cross / std::sqrt(norm1 * norm2);
    return std::clamp(amplitude * amplitude, 0.0, 1.0);
}

double pair_rate(const SourceRateSpec &spec) {
    spec.validate();
    return spec.brightness * spec.pump_mw;
}

double qpm_response(double dk_times_length) {
    const double s = sinc(0.5 * dk_times_length);
    return s * s;
}

double sinc2_half_max_argument() {
    static const double root = [] {
        auto f = [](double y) { return sinc(y) * sinc(y) - 0.5; };
        auto tol = boost::math::tools::eps_tolerance<double>(52);
        auto [lo, hi] = boost::math::tools::bisect(f, 1.0, 2.0, tol);
        return 0.5 * (lo + hi);
    }();
    return root;
}

double qpm_fwhm() { return 4.0 * sinc2_half_max_argument(); }

double qpm_spectrum(const LinearPhaseMismatch &mismatch, double length_um, double wavelength_nm) {
    const double dk = mismatch.slope_per_um_per_nm * (wavelength_nm - mismatch.center_nm);
    return qpm_response(dk * length_um);
}

double qpm_bandwidth_nm(const LinearPhaseMismatch &mismatch, double length_um) {
    if (!(length_um > 0.0) || mismatch.slope_per_um_per_nm == 0.0) {
        throw ValidationError("poled length must be positive and the mismatch slope nonzero");
    }
    return qpm_fwhm() / (std::abs(mismatch.slope_per_um_per_nm) * length_um);
}

}  // namespace noonsim
