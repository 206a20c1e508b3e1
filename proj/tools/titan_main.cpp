// Copyright 2026 The Titan Authors
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

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "titan/commands.hpp"

using namespace titan;

namespace {

int dispatch(const std::string& command, const std::string& config,
             const std::string& out, CommandContext& ctx) {
    if (command == "gen-data") {
        const DatasetStats stats = cmd_gen_data(config, out, ctx);
        std::cout << "wrote " << stats.records << " records to " << out
                  << "\nmean frozen fraction: " << stats.mean_frozen_fraction
                  << "\nresampled diverged runs: " << stats.resampled_runs
                  << "\n";
    } else if (command == "train") {
        const TrainReport report = cmd_train(config, out, ctx);
        std::cout << "checkpoint " << out << " (id " << report.checkpoint_id
                  << ")\nfinal train loss: " << report.train_losses.back();
        if (!report.val_losses.empty()) {
            std::cout << "\nfinal validation loss: "
                      << report.val_losses.back();
        }
        std::cout << "\n";
    } else if (command == "run") {
        const RunRecord record = cmd_run(config, ctx);
        for (const StrategyOutcome& s : record.strategies) {
            std::cout << s.name << ": E = " << s.final_energy;
            if (s.delta_e) std::cout << ", dE vs baseline = " << *s.delta_e;
            std::cout << ", frozen "
                      << frozen_ratio_string(s.frozen, s.param_count)
                      << ", shift evals " << s.shift_evals << "\n";
        }
    } else if (command == "sweep") {
        const SweepSummary s = cmd_sweep(config, ctx);
        std::cout << "sweep: " << s.cells.size() << " cells ("
                  << s.failed_cells << " failed)\nmean frozen fraction: "
                  << s.mean_frozen_fraction
                  << "\ncells with mean dE_titan <= 0: "
                  << s.frac_cells_titan_nonworse
                  << "\ncells where titan beats random: "
                  << s.frac_cells_titan_beats_random << "\ncsv: " << s.csv_path
                  << "\n";
    } else if (command == "bench-bp") {
        const BenchBpSummary s = cmd_bench_bp(config, ctx);
        for (const auto& [scheme, slope] : s.slope) {
            std::cout << scheme << ": fitted log-log slope " << slope << "\n";
        }
        std::cout << "csv: " << s.csv_path << "\n";
    } else if (command == "convergence") {
        const ConvergenceSummary s = cmd_convergence(config, ctx);
        for (const auto& [name, e] : s.final_energy_mean) {
            std::cout << name << ": mean final energy " << e << "\n";
        }
        std::cout << "median titan grad-norm crossing iteration: "
                  << s.median_titan_crossing_iter << "\ncsv: " << s.csv_path
                  << "\n";
    } else if (command == "intensity-map") {
        const IntensitySummary s = cmd_intensity_map(config, ctx);
        std::cout << s.cells << " cells\nmean first-layer intensity: "
                  << s.mean_first_layer_intensity
                  << "\nmean last-layer intensity: "
                  << s.mean_last_layer_intensity << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"VQE workbench: adaptive parameter freezing, freeze-"
                 "intensity prediction, and experiment harness"};
    app.require_subcommand(1);

    std::string config, out;
    CommandContext ctx;
    if (const char* env = std::getenv("TITAN_OUT_DIR")) ctx.out_dir = env;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", config, "JSON config path")->required();
        if (needs_out) {
            sub->add_option("--out", out, "output file path")->required();
        }
        sub->add_option("--seed", seed, "master seed override")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--out-dir", ctx.out_dir, "output directory");
        sub->add_option("--threads", ctx.threads, "worker pool size");
        sub->add_flag("--full", ctx.full,
                      "paper-scale default grids (slow) instead of desk "
                      "scale");
    };

    add_common(app.add_subcommand("gen-data",
                                  "generate a freeze-intensity dataset"),
               true);
    add_common(app.add_subcommand("train", "train the intensity predictor"),
               true);
    add_common(app.add_subcommand("run", "run strategies on one problem"),
               false);
    add_common(app.add_subcommand("sweep", "grid sweep with heatmaps"), false);
    add_common(app.add_subcommand("bench-bp",
                                  "gradient-variance scaling scan"),
               false);
    add_common(app.add_subcommand("convergence",
                                  "per-iteration convergence envelopes"),
               false);
    add_common(app.add_subcommand("intensity-map",
                                  "APFA freeze-intensity heatmaps"),
               false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    if (seed_set) ctx.seed_override = seed;

    try {
        return dispatch(app.get_subcommands().front()->get_name(), config,
                        out, ctx);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_config() ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
