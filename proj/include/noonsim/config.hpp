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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noonsim/circuit.hpp"
#include "noonsim/detection.hpp"
#include "noonsim/error.hpp"
#include "noonsim/sources.hpp"

namespace noonsim {

/// Config problem located by JSON pointer and (best effort) source line.
class ConfigError : public ValidationError {
   public:
    ConfigError(std::string message, std::string pointer, int line);

    const std::string &pointer() const { return pointer_; }
    int line() const { return line_; }
    const std::string &detail() const { return detail_; }

    /// {"error": "config", "message": ..., "path": ..., "line": ...}
    std::string to_json() const;

   private:
    std::string detail_;
    std::string pointer_;
    int line_;
};

/// Inclusive linear range; a single step yields just `start`.
struct LinearRange {
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;

    std::vector<double> values() const;
};

struct RunConfig {
    // circuit
    CircuitSpec circuit;
    std::vector<int> theta_elements;
    std::optional<ThermoOpticCalibration> calibration;

    // source
    NoonSpec noon;
    SpectrumSpec spectrum;
    SourceRateSpec rate;

    // detection
    LossSpec loss;
    bool apply_output_loss = false;
    std::array<double, kDetectorCount> efficiencies = {1.0, 1.0, 1.0, 1.0};
    std::array<double, kDetectorCount> dark_counts_cps = {0.0, 0.0, 0.0, 0.0};
    double hom_visibility = 1.0;
    double detected_pairs_per_s = 5800.0;

    // scan
    LinearRange theta{0.0, 6.283185307179586, 65};
    LinearRange phi{0.0, 3.141592653589793, 33};
    std::optional<LinearRange> power_mw;
    double delay_min_fs = -200.0;
    double delay_max_fs = 200.0;
    double delay_step_fs = 1.0;
    double visibility_theta = 1.5707963267948966;

    struct TagSim {
        std::optional<double> pair_rate;
        double duration_s = 1.0;
        double jitter_ps = 0.0;
        std::int64_t window_ps = 1000;
        std::optional<std::uint64_t> seed;
        double theta = 1.5707963267948966;
        std::string format = "csv";
        bool sweep_phi = false;
    } tagsim;

    std::filesystem::path output_dir = ".";

    /// Netlist with every theta-bound phase shifter set to `theta`.
    CircuitSpec circuit_at(double theta) const;
    FringeGridOptions fringe_options(int threads) const;
};

/// Parses and schema-checks a config document. Unknown keys, wrong types and
/// out-of-range values raise ConfigError before any computation happens.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path &path);

/// Same, with the netlist replaced by a standalone circuit document
/// {mode_count, elements, calibration} (the `circuit` section on its own).
RunConfig load_run_config(const std::filesystem::path &path, const std::filesystem::path &circuit_path);

/// Replaces the netlist of `config` from a standalone circuit document.
void apply_circuit_document(RunConfig &config, std::string_view text);

/// Angle from a number or an expression like "pi/2", "3*pi/2", "-pi".
double parse_angle_expression(std::string_view text);

}  // namespace noonsim
