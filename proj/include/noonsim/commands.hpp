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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "noonsim/config.hpp"

namespace noonsim {

struct CommandOptions {
    std::optional<std::filesystem::path> out_dir;  // overrides config output.dir
    std::optional<std::uint64_t> seed;             // overrides tagsim.seed
    int threads = 1;
};

struct CommandResult {
    nlohmann::json summary;
    std::vector<std::filesystem::path> files;
};

/// Detection statistics over the (theta, phi) grid: fringe2d.csv and
/// fringe2d_summary.json with per-state visibilities at visibility_theta.
CommandResult cmd_fringe2d(const RunConfig &config, const CommandOptions &options);

/// Single-photon transmission of both inputs to both outputs versus theta
/// (or heater power through the calibration): classical_mzi.csv.
CommandResult cmd_classical_mzi(const RunConfig &config, const CommandOptions &options);

/// HOM delay scan: hom_scan.csv plus hom_scan.json sidecar.
CommandResult cmd_hom_scan(const RunConfig &config, const CommandOptions &options);

/// Time-tag simulation and coincidence counting: tags.csv or tags.bin and
/// coincidences.json; with sweep_phi a tagsim_fringe.csv over scan.phi.
CommandResult cmd_tagsim(const RunConfig &config, const CommandOptions &options);

/// On-chip brightness from the detected rate and the loss breakdown:
/// loss_budget.json.
CommandResult cmd_loss_budget(const RunConfig &config, const CommandOptions &options);

}  // namespace noonsim
