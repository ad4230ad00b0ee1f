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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "noonsim/commands.hpp"
#include "noonsim/config.hpp"
#include "noonsim/format.hpp"

namespace {

struct Flags {
    std::string config;
    std::string circuit;
    std::string out;
    std::uint64_t seed = 0;
    int threads = 1;
};

void add_flags(CLI::App *cmd, Flags &flags) {
    cmd->add_option("--config", flags.config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--circuit", flags.circuit, "Circuit netlist (JSON), replaces the config's circuit section")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", flags.out, "Output directory (overrides output.dir)");
    cmd->add_option("--seed", flags.seed, "RNG seed (overrides tagsim.seed)");
    cmd->add_option("--threads", flags.threads, "Worker threads; NOONSIM_SINGLE_THREAD=1 forces 1")
        ->check(CLI::PositiveNumber);
}

void print_loss_table(const nlohmann::json &s) {
    std::printf("%-22s %10s %10s\n", "component", "a [dB]", "b [dB]");
    for (const char *key : {"grating_coupler_db", "long_pass_filter_db", "fiber_splitter_db", "detector_db", "total_db"}) {
        std::printf("%-22s %10.3f %10.3f\n", key, s["loss"]["a"][key].get<double>(), s["loss"]["b"][key].get<double>());
    }
    std::printf("brightness: %.4g pairs/s/mW (reference ~%.2g)\n", s["brightness_pairs_per_s_per_mw"].get<double>(),
                s["reference_brightness"].get<double>());
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"noonsim: two-source N00N interference chip simulator"};
    app.require_subcommand(1);
    Flags flags;
    using Runner = noonsim::CommandResult (*)(const noonsim::RunConfig &, const noonsim::CommandOptions &);
    const std::vector<std::tuple<const char *, const char *, Runner>> commands = {
        {"fringe2d", "Two-photon output statistics over the (theta, phi) grid", noonsim::cmd_fringe2d},
        {"classical-mzi", "Single-photon MZI transmission scan", noonsim::cmd_classical_mzi},
        {"hom-scan", "Hong-Ou-Mandel delay scan", noonsim::cmd_hom_scan},
        {"tagsim", "Monte Carlo time tags and coincidence counting", noonsim::cmd_tagsim},
        {"loss-budget", "On-chip brightness from detected rate and losses", noonsim::cmd_loss_budget},
    };
    std::vector<CLI::App *> subs;
    for (const auto &[name, help, runner] : commands) {
        subs.push_back(app.add_subcommand(name, help));
        add_flags(subs.back(), flags);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = flags.circuit.empty() ? noonsim::load_run_config(flags.config)
                                                  : noonsim::load_run_config(flags.config, flags.circuit);
        noonsim::CommandOptions options;
        if (!flags.out.empty()) options.out_dir = flags.out;
        for (auto *sub : subs) {
            if (sub->parsed() && sub->count("--seed") > 0) options.seed = flags.seed;
        }
        options.threads = noonsim::effective_threads(flags.threads);
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            const auto result = std::get<2>(commands[i])(config, options);
            if (std::string_view(std::get<0>(commands[i])) == "loss-budget") {
                print_loss_table(result.summary);
            }
            std::cout << result.summary.dump(2) << '\n';
        }
    } catch (const noonsim::ConfigError &e) {
        std::cerr << e.to_json() << '\n';
        return 2;
    } catch (const noonsim::ValidationError &e) {
        std::cerr << nlohmann::json{{"error", "validation"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << nlohmann::json{{"error", "runtime"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
