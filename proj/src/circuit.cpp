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

#include "noonsim/circuit.hpp"

#include <cmath>
#include <string>

#include "noonsim/error.hpp"

namespace noonsim {

namespace {

void check_mode(int mode, int mode_count) {
    if (mode < 0 || mode >= mode_count) {
        throw ValidationError("element references mode " + std::to_string(mode) + " outside [0, " +
                              std::to_string(mode_count) + ")");
    }
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

void CircuitSpec::validate() const {
    if (mode_count < 1) {
        throw ValidationError("mode_count must be at least 1");
    }
    for (const auto &element : elements) {
        std::visit(Overloaded{
                       [&](const PhaseShifter &e) {
                           check_mode(e.mode, mode_count);
                           if (!std::isfinite(e.phase)) {
                               throw ValidationError("phase must be finite");
                           }
                       },
                       [&](const Coupler &e) {
                           check_mode(e.mode_i, mode_count);
                           check_mode(e.mode_j, mode_count);
                           if (e.mode_i == e.mode_j) {
                               throw ValidationError("coupler modes must be distinct");
                           }
                           if (!std::isfinite(e.mixing)) {
                               throw ValidationError("mixing angle must be finite");
                           }
                       },
                       [&](const Loss &e) {
                           check_mode(e.mode, mode_count);
                           if (!(e.transmission >= 0.0 && e.transmission <= 1.0)) {
                               throw ValidationError("loss transmission must lie in [0, 1]");
                           }
                       },
                   },
                   element);
    }
}

ModeUnitary phase_shifter_unitary(double phase) {
    CMatrix m = CMatrix::Identity(2, 2);
    m(1, 1) = std::polar(1.0, phase);
    return ModeUnitary(std::move(m));
}

ModeUnitary coupler_unitary(double mixing) {
    const Complex c = std::cos(mixing);
    const Complex s = Complex(0.0, std::sin(mixing));
    CMatrix m(2, 2);
    m << c, s, s, c;
    return ModeUnitary(std::move(m));
}

ModeUnitary mzi_unitary(double phase) { return mzi_unitary(phase, kBalancedMixing, kBalancedMixing); }

ModeUnitary mzi_unitary(double phase, double mixing_in, double mixing_out) {
    return coupler_unitary(mixing_out) * phase_shifter_unitary(phase) * coupler_unitary(mixing_in);
}

ModeUnitary element_unitary(const Element &element, int mode_count) {
    CMatrix m = CMatrix::Identity(mode_count, mode_count);
    std::visit(Overloaded{
                   [&](const PhaseShifter &e) { m(e.mode, e.mode) = std::polar(1.0, e.phase); },
                   [&](const Coupler &e) {
                       const Complex c = std::cos(e.mixing);
                       const Complex s = Complex(0.0, std::sin(e.mixing));
                       m(e.mode_i, e.mode_i) = c;
                       m(e.mode_j, e.mode_j) = c;
                       m(e.mode_i, e.mode_j) = s;
                       m(e.mode_j, e.mode_i) = s;
                   },
                   [](const Loss &) {},
               },
               element);
    return ModeUnitary(std::move(m));
}

ComposedCircuit compose(const CircuitSpec &spec) {
    spec.validate();
    CMatrix total = CMatrix::Identity(spec.mode_count, spec.mode_count);
    std::vector<double> transmissions(spec.mode_count, 1.0);
    for (const auto &element : spec.elements) {
        if (const auto *loss = std::get_if<Loss>(&element)) {
            transmissions[loss->mode] *= loss->transmission;
            continue;
        }
        total = element_unitary(element, spec.mode_count).matrix() * total;
    }
    return {ModeUnitary(std::move(total)), std::move(transmissions)};
}

std::vector<CircuitStage> compose_stages(const CircuitSpec &spec) {
    spec.validate();
    std::vector<CircuitStage> stages;
    CMatrix total = CMatrix::Identity(spec.mode_count, spec.mode_count);
    std::vector<double> transmissions(spec.mode_count, 1.0);
    bool pending_loss = false;
    for (const auto &element : spec.elements) {
        if (const auto *loss = std::get_if<Loss>(&element)) {
            transmissions[loss->mode] *= loss->transmission;
            pending_loss = true;
            continue;
        }
        if (pending_loss) {
            stages.push_back({ModeUnitary(total), transmissions});
            total = CMatrix::Identity(spec.mode_count, spec.mode_count);
            transmissions.assign(spec.mode_count, 1.0);
            pending_loss = false;
        }
        total = element_unitary(element, spec.mode_count).matrix() * total;
    }
    stages.push_back({ModeUnitary(std::move(total)), std::move(transmissions)});
    return stages;
}

void ThermoOpticCalibration::validate() const {
    if (!std::isfinite(phase_offset) || !std::isfinite(phase_per_milliwatt) || phase_per_milliwatt == 0.0) {
        throw ValidationError("thermo-optic calibration needs a finite offset and a finite nonzero slope");
    }
}

double power_to_phase(const ThermoOpticCalibration &cal, double power_mw) {
    cal.validate();
    if (!(power_mw >= 0.0)) {
        throw ValidationError("electrical power must be non-negative");
    }
    return cal.phase_offset + cal.phase_per_milliwatt * power_mw;
}

std::vector<double> classical_transmission(const ModeUnitary &u, int input) {
    if (input < 0 || input >= u.mode_count()) {
        throw ValidationError("input mode out of range");
    }
    std::vector<double> out(u.mode_count());
    for (int k = 0; k < u.mode_count(); ++k) {
        out[k] = std::norm(u(k, input));
    }
    return out;
}

std::vector<double> classical_transmission(const CircuitSpec &spec, int input) {
    spec.validate();
    if (input < 0 || input >= spec.mode_count) {
        throw ValidationError("input mode out of range");
    }
    CVector field = CVector::Zero(spec.mode_count);
    field(input) = 1.0;
    for (const auto &element : spec.elements) {
        if (const auto *loss = std::get_if<Loss>(&element)) {
            field(loss->mode) *= std::sqrt(loss->transmission);
        } else {
            field = element_unitary(element, spec.mode_count).matrix() * field;
        }
    }
    std::vector<double> out(spec.mode_count);
    for (int k = 0; k < spec.mode_count; ++k) {
        out[k] = std::norm(field(k));
    }
    return out;
}

}  // namespace noonsim
