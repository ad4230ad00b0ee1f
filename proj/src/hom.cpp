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

#include "noonsim/hom.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "noonsim/error.hpp"

namespace noonsim {

namespace {

constexpr double kCutoffWidths = 5.0;
constexpr int kPanels = 128;

// int_{-h}^{h} S(W) cos(2 W tau) dW. The integrand is even, so integrate the
// positive half and double it.
double kernel_integral(const SpectrumSpec &spectrum, double delay_fs) {
    const double half = kCutoffWidths * spectrum.fwhm_omega();
    const double step = half / kPanels;
    auto f = [&](double w) { return spectrum.intensity_at_detuning(w) * std::cos(2.0 * w * delay_fs); };
    double total = 0.0;
    for (int k = 0; k < kPanels; ++k) {
        const double a = k * step;
        const double b = (k + 1 == kPanels) ? half : a + step;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0);
    }
    return 2.0 * total;
}

double half_width_delay(const SpectrumSpec &spectrum) {
    const double norm = kernel_integral(spectrum, 0.0);
    auto excess = [&](double tau) { return kernel_integral(spectrum, tau) / norm - 0.5; };
    double hi = 1.0 / spectrum.fwhm_omega();
    while (excess(hi) > 0.0) {
        hi *= 2.0;
    }
    auto tol = boost::math::tools::eps_tolerance<double>(48);
    auto [a, b] = boost::math::tools::bisect(excess, 0.0, hi, tol);
    return 0.5 * (a + b);
}

}  // namespace

void HomScanSpec::validate() const {
    spectrum.validate();
    if (!(delay_step_fs > 0.0)) {
        throw ValidationError("delay step must be positive");
    }
    if (!(delay_max_fs >= delay_min_fs)) {
        throw ValidationError("delay range is empty");
    }
    if (!(baseline_visibility >= 0.0 && baseline_visibility <= 1.0)) {
        throw ValidationError("baseline visibility V0 must lie in [0, 1]");
    }
}

std::vector<double> HomScanSpec::delays() const {
    validate();
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((delay_max_fs - delay_min_fs) / delay_step_fs + 1e-9)) + 1;
    out.reserve(count);
    for (long i = 0; i < count; ++i) {
        out.push_back(delay_min_fs + static_cast<double>(i) * delay_step_fs);
    }
    return out;
}

double hom_overlap(double delay_fs, const SpectrumSpec &spectrum) {
    spectrum.validate();
    if (delay_fs == 0.0) {
        return 1.0;
    }
    return kernel_integral(spectrum, delay_fs) / kernel_integral(spectrum, 0.0);
}

double hom_coincidence(double delay_fs, const HomScanSpec &spec) {
    spec.validate();
    return 0.5 * (1.0 - spec.baseline_visibility * hom_overlap(delay_fs, spec.spectrum));
}

std::vector<HomPoint> hom_scan(const HomScanSpec &spec, int threads) {
    const auto delays = spec.delays();
    std::vector<HomPoint> out(delays.size());
    const int workers = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(delays.size(), 1)));
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < delays.size(); i += workers) {
                        out[i] = {delays[i], hom_coincidence(delays[i], spec)};
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
    return out;
}

double dip_fwhm(const HomScanSpec &spec) {
    spec.validate();
    if (spec.baseline_visibility == 0.0) {
        throw ValidationError("V0 = 0: there is no dip to measure");
    }
    // Half depth of (1 - V0 g) / 2 sits at g = 1/2 whatever V0 is.
    return 2.0 * half_width_delay(spec.spectrum);
}

double bandwidth_from_dip(double width_fs, SpectralShape shape, double center_nm) {
    if (!(width_fs > 0.0) || !std::isfinite(width_fs)) {
        throw ValidationError("dip width must be positive");
    }
    HomScanSpec probe;
    probe.spectrum = {center_nm, 1.0, shape};
    probe.spectrum.validate();
    auto residual = [&](double log_bandwidth) {
        probe.spectrum.fwhm_nm = std::exp(log_bandwidth);
        return std::log(dip_fwhm(probe) / width_fs);
    };
    // Width falls monotonically with bandwidth; bracket in log space.
    double lo = std::log(1e-3);
    double hi = std::log(1e4);
    auto tol = boost::math::tools::eps_tolerance<double>(40);
    auto [a, b] = boost::math::tools::bisect(residual, lo, hi, tol);
    return std::exp(0.5 * (a + b));
}

}  // namespace noonsim
