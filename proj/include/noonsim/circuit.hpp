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
#include <variant>
#include <vector>

#include "noonsim/fock.hpp"

namespace noonsim {

/// Mixing angle of an ideal 50:50 directional coupler.
inline constexpr double kBalancedMixing = 0.78539816339744830962;  // pi/4

struct PhaseShifter {
    int mode = 0;
    double phase = 0.0;  // radians
};

/// Directional coupler [[cos t, i sin t], [i sin t, cos t]] on (mode_i, mode_j).
struct Coupler {
    int mode_i = 0;
    int mode_j = 1;
    double mixing = kBalancedMixing;
};

struct Loss {
    int mode = 0;
    double transmission = 1.0;  // in [0, 1]
};

using Element = std::variant<PhaseShifter, Coupler, Loss>;

/// Netlist in physical propagation order.
struct CircuitSpec {
    int mode_count = 2;
    std::vector<Element> elements;

    /// Throws ValidationError on bad mode indices or transmissions.
    void validate() const;
};

/// R(theta) = diag(1, e^{i theta}).
ModeUnitary phase_shifter_unitary(double phase);

/// H' = [[cos t, i sin t], [i sin t, cos t]]; the default is 50:50.
ModeUnitary coupler_unitary(double mixing = kBalancedMixing);

/// U = H' R(theta) H'. Bar transmission |U_aa|^2 = sin^2(theta / 2).
ModeUnitary mzi_unitary(double phase);

/// Same MZI with imperfect couplers of the given mixing angles.
ModeUnitary mzi_unitary(double phase, double mixing_in, double mixing_out);

/// Embeds a single element as an m x m unitary (loss elements give identity).
ModeUnitary element_unitary(const Element &element, int mode_count);

struct ComposedCircuit {
    ModeUnitary unitary;
    std::vector<double> transmissions;  // per mode, product of all loss elements
};

/// Ordered product U = U_last ... U_first with loss pulled out per mode.
/// Exact when losses sit at the circuit boundaries or are mode-uniform; use
/// propagate() in detection.hpp to apply interior losses in place.
ComposedCircuit compose(const CircuitSpec &spec);

/// The same netlist split into unitary stages separated by loss layers.
struct CircuitStage {
    ModeUnitary unitary;
    std::vector<double> transmissions;  // applied after `unitary`
};
std::vector<CircuitStage> compose_stages(const CircuitSpec &spec);

/// Thermo-optic phase shifter: phase is linear in electrical heater power.
struct ThermoOpticCalibration {
    double phase_offset = 0.0;        // radians at zero drive
    double phase_per_milliwatt = 1.0;  // radians / mW, nonzero

    void validate() const;
};

/// theta = offset + slope * power. Throws for negative power.
double power_to_phase(const ThermoOpticCalibration &cal, double power_mw);

/// Fraction of single-photon (classical) power leaving each output of a
/// two-mode unitary for light entering `input`. Row k is output k.
std::vector<double> classical_transmission(const ModeUnitary &u, int input);

/// Same for a netlist, propagating the field element by element so loss
/// inside the interferometer acts where it sits.
std::vector<double> classical_transmission(const CircuitSpec &spec, int input);

}  // namespace noonsim
