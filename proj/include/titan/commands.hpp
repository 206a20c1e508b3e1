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
//
// Library backing of the CLI subcommands. Every function throws titan::Error
// on bad configs (CLI exit 2) or runtime failures (exit 3) and writes its
// artifacts under ctx.out_dir.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "titan/harness.hpp"
#include "titan/init.hpp"

namespace titan {

struct CommandContext {
    std::string out_dir = "titan_out";
    int threads = 1;
    bool full = false; // paper-scale default grids instead of desk scale
    std::optional<std::uint64_t> seed_override;
};

/// gen-data: manifest -> JSONL dataset + stats sidecar.
DatasetStats cmd_gen_data(const std::string& manifest_path,
                          const std::string& out_path,
                          const CommandContext& ctx);

/// train: dataset -> checkpoint + per-epoch report sidecar.
TrainReport cmd_train(const std::string& config_path,
                      const std::string& out_checkpoint,
                      const CommandContext& ctx);

/// run: one problem, requested strategies, shared initial theta.
RunRecord cmd_run(const std::string& config_path, const CommandContext& ctx);

struct CellStat {
    int layers = 0;
    int qubits = 0;
    double a = 0, b = 0, c = 0;
    double median_delta_titan = 0.0; // E_titan - E_baseline, median over seeds
    double mean_delta_titan = 0.0;
    double mean_delta_random = 0.0;
    double mean_frozen_fraction = 0.0;
    bool failed = false;
};

struct SweepSummary {
    std::string csv_path;
    std::vector<std::string> heatmap_paths;
    std::vector<CellStat> cells;
    int failed_cells = 0;
    double mean_frozen_fraction = 0.0;
    double frac_cells_titan_nonworse = 0.0;    // mean delta_titan <= 0
    double frac_cells_titan_beats_random = 0.0; // mean dT < mean dR
};

/// sweep: grid of cells x seeds -> CSV + heatmaps + summary.
SweepSummary cmd_sweep(const std::string& config_path,
                       const CommandContext& ctx);

struct BenchBpSummary {
    std::vector<ScanRow> rows;
    std::map<std::string, double> slope; // scheme -> log-log fitted slope
    std::string csv_path;
    std::string svg_path;
};

/// bench-bp: gradient-variance scan -> CSV + log-log plot.
BenchBpSummary cmd_bench_bp(const std::string& config_path,
                            const CommandContext& ctx);

struct ConvergenceSummary {
    std::string csv_path;
    std::vector<std::string> svg_paths;
    // per strategy: mean final energy across seeds
    std::map<std::string, double> final_energy_mean;
    // median (over seeds) first iteration where the titan gradient norm
    // drops below the baseline's; -1 when titan never crosses
    int median_titan_crossing_iter = -1;
};

/// convergence: per-iteration energy / gradient-norm envelopes across seeds.
ConvergenceSummary cmd_convergence(const std::string& config_path,
                                   const CommandContext& ctx);

struct IntensitySummary {
    std::vector<std::string> image_paths;
    int cells = 0;
    double mean_first_layer_intensity = 0.0;
    double mean_last_layer_intensity = 0.0;
};

/// intensity-map: APFA freeze-intensity heatmap per (L, N) cell.
IntensitySummary cmd_intensity_map(const std::string& config_path,
                                   const CommandContext& ctx);

} // namespace titan
