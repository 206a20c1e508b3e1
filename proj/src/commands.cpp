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

#include "titan/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "json_util.hpp"
#include "titan/plots.hpp"

namespace titan {

using nlohmann::json;

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorKind::Io,
                    "cannot create output directory '" + dir + "': " +
                        ec.message());
    }
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

// First line of every emitted CSV: the full config needed to regenerate it.
std::string csv_config_comment(const json& cfg) {
    return "# config " + cfg.dump() + "\n";
}

std::string svg_with_config(std::string svg, const json& cfg) {
    const std::size_t nl = svg.find('\n');
    std::string comment = "<!-- config " + cfg.dump() + " -->\n";
    if (nl != std::string::npos) svg.insert(nl + 1, comment);
    return svg;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<int> default_layers(bool full) {
    if (full) return {5, 6, 7, 8, 9, 10};
    return {5, 6};
}

std::vector<int> default_qubits(bool full) {
    if (full) return {5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    return {5, 6, 7, 8};
}

} // namespace

DatasetStats cmd_gen_data(const std::string& manifest_path,
                          const std::string& out_path,
                          const CommandContext& ctx) {
    DatasetManifest manifest = load_manifest(manifest_path);
    if (ctx.seed_override) manifest.seed = *ctx.seed_override;
    const DatasetStats stats =
        generate_dataset(manifest, out_path, ctx.threads);

    json stats_json = {{"records", stats.records},
                       {"mean_frozen_fraction", stats.mean_frozen_fraction},
                       {"label_histogram", stats.label_histogram},
                       {"resampled_runs", stats.resampled_runs},
                       {"manifest", parse_json(manifest_to_json(manifest),
                                               "manifest echo")}};
    write_file(out_path + ".stats.json", stats_json.dump(2));
    return stats;
}

TrainReport cmd_train(const std::string& config_path,
                      const std::string& out_checkpoint,
                      const CommandContext& ctx) {
    const json cfg = parse_json(slurp_file(config_path), "train config");
    check_keys(cfg,
               {"dataset", "seed", "epochs", "learning_rate", "channels",
                "conv_blocks", "heads", "head_dim", "batch_cap", "resume"},
               "train config");
    if (!cfg.contains("dataset")) {
        throw_config("train config: missing 'dataset'");
    }
    const std::vector<CfcsaSample> dataset =
        read_dataset(cfg.at("dataset").get<std::string>());
    if (dataset.empty()) throw_validation("train: dataset file is empty");

    PredictorHyper hyper;
    hyper.in_channels = dataset.front().x.channels;
    hyper.channels = cfg.value("channels", hyper.channels);
    hyper.conv_blocks = cfg.value("conv_blocks", hyper.conv_blocks);
    hyper.heads = cfg.value("heads", hyper.heads);
    hyper.head_dim = cfg.value("head_dim", hyper.head_dim);
    hyper.learning_rate = cfg.value("learning_rate", hyper.learning_rate);
    hyper.epochs = cfg.value("epochs", hyper.epochs);
    hyper.batch_cap = cfg.value("batch_cap", hyper.batch_cap);

    const std::uint64_t seed = ctx.seed_override
                                   ? *ctx.seed_override
                                   : cfg.value("seed", std::uint64_t{0});

    PredictorWeights resume;
    const PredictorWeights* resume_ptr = nullptr;
    if (cfg.contains("resume")) {
        resume = load_checkpoint(cfg.at("resume").get<std::string>());
        resume_ptr = &resume;
    }

    const TrainResult result = train(dataset, hyper, seed, resume_ptr);
    save_checkpoint(result.weights, out_checkpoint);

    json report = {{"train_losses", result.report.train_losses},
                   {"val_losses", result.report.val_losses},
                   {"val_loss_at_init", result.report.val_loss_at_init},
                   {"checkpoint_id", result.report.checkpoint_id},
                   {"split_seed", result.report.split_seed},
                   {"config", cfg}};
    write_file(out_checkpoint + ".report.json", report.dump(2));
    return result.report;
}

RunRecord cmd_run(const std::string& config_path, const CommandContext& ctx) {
    const json cfg = parse_json(slurp_file(config_path), "run config");
    check_keys(cfg, {"problem", "checkpoint", "tau", "strategies", "seed"},
               "run config");
    if (!cfg.contains("problem")) throw_config("run config: missing 'problem'");
    const ProblemConfig problem =
        problem_from_json_text(cfg.at("problem").dump());
    const double tau = cfg.value("tau", 80.0);
    std::vector<std::string> strategies = {"baseline", "titan", "random"};
    if (cfg.contains("strategies")) {
        strategies = cfg.at("strategies").get<std::vector<std::string>>();
    }
    const std::uint64_t seed = ctx.seed_override
                                   ? *ctx.seed_override
                                   : cfg.value("seed", std::uint64_t{0});

    PredictorWeights weights;
    const PredictorWeights* ckpt = nullptr;
    if (cfg.contains("checkpoint")) {
        weights = load_checkpoint(cfg.at("checkpoint").get<std::string>());
        ckpt = &weights;
    }

    const RunRecord record =
        run_strategies(problem, ckpt, tau, strategies, seed);
    ensure_dir(ctx.out_dir);
    write_file(join_path(ctx.out_dir, "run_record.json"),
               run_record_to_json(record));
    return record;
}

namespace {

struct SweepCell {
    int layers;
    int qubits;
    double a, b, c;
};

struct SweepItem {
    int cell_index;
    int seed_index;
};

struct ItemResult {
    bool ok = false;
    std::string error;
    RunRecord record;
};

} // namespace

SweepSummary cmd_sweep(const std::string& config_path,
                       const CommandContext& ctx) {
    const json cfg = parse_json(slurp_file(config_path), "sweep config");
    check_keys(cfg,
               {"mode", "problem", "layers", "qubits", "a_values", "b_values",
                "c_values", "tau", "checkpoint", "strategies", "seeds",
                "seed"},
               "sweep config");
    const std::string mode = cfg.value("mode", std::string("size_grid"));
    if (mode != "size_grid" && mode != "coeff_grid") {
        throw_config("sweep config: mode must be size_grid or coeff_grid");
    }
    if (!cfg.contains("problem")) {
        throw_config("sweep config: missing 'problem'");
    }
    const ProblemConfig base = problem_from_json_text(cfg.at("problem").dump());
    const double tau = cfg.value("tau", 80.0);
    const int seeds = cfg.value("seeds", ctx.full ? 5 : 3);
    const std::uint64_t master = ctx.seed_override
                                     ? *ctx.seed_override
                                     : cfg.value("seed", std::uint64_t{0});
    std::vector<std::string> strategies = {"baseline", "titan", "random"};
    if (cfg.contains("strategies")) {
        strategies = cfg.at("strategies").get<std::vector<std::string>>();
        if (std::find(strategies.begin(), strategies.end(), "baseline") ==
            strategies.end()) {
            strategies.insert(strategies.begin(), "baseline");
        }
    }
    if (!cfg.contains("checkpoint")) {
        throw_config("sweep config: missing 'checkpoint'");
    }
    const PredictorWeights weights =
        load_checkpoint(cfg.at("checkpoint").get<std::string>());

    // build the cell list
    std::vector<SweepCell> cells;
    if (mode == "size_grid") {
        std::vector<int> layer_list = default_layers(ctx.full);
        std::vector<int> qubit_list = default_qubits(ctx.full);
        if (cfg.contains("layers")) {
            layer_list = cfg.at("layers").get<std::vector<int>>();
        }
        if (cfg.contains("qubits")) {
            qubit_list = cfg.at("qubits").get<std::vector<int>>();
        }
        if (ctx.full) {
            std::cerr << "warning: --full sweep grid ("
                      << layer_list.size() * qubit_list.size()
                      << " cells x " << seeds
                      << " seeds) can run for hours\n";
        }
        for (int l : layer_list) {
            for (int n : qubit_list) {
                cells.push_back({l, n, base.a, base.b, base.c});
            }
        }
    } else {
        if (base.ham_class != HamiltonianClass::HEISENBERG) {
            throw_config("coeff_grid sweeps cover the Heisenberg class");
        }
        std::vector<double> av = {-5, -3, -1, 0, 1, 3, 5};
        std::vector<double> bv = av;
        std::vector<double> cv = {-5, -3, -1, 0, 1, 3, 5};
        if (cfg.contains("a_values")) av = cfg.at("a_values").get<std::vector<double>>();
        if (cfg.contains("b_values")) bv = cfg.at("b_values").get<std::vector<double>>();
        if (cfg.contains("c_values")) cv = cfg.at("c_values").get<std::vector<double>>();
        for (double c : cv) {
            for (double b : bv) {
                for (double a : av) {
                    cells.push_back({base.layers, base.n_qubits, a, b, c});
                }
            }
        }
    }

    // flatten to work items and run them in the pool
    std::vector<SweepItem> items;
    for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
        for (int si = 0; si < seeds; ++si) items.push_back({ci, si});
    }
    std::vector<ItemResult> results(items.size());
    parallel_for(items.size(), ctx.threads, [&](std::size_t k) {
        const SweepItem& item = items[k];
        const SweepCell& cell = cells[item.cell_index];
        ProblemConfig p = base;
        p.layers = cell.layers;
        p.n_qubits = cell.qubits;
        p.a = cell.a;
        p.b = cell.b;
        p.c = cell.c;
        const std::uint64_t seed = derive_seed(
            master, {static_cast<std::uint64_t>(item.cell_index),
                     static_cast<std::uint64_t>(item.seed_index)});
        try {
            results[k].record =
                run_strategies(p, &weights, tau, strategies, seed);
            results[k].ok = true;
        } catch (const std::exception& e) {
            results[k].error = e.what();
        }
    });

    // CSV: one row per cell per seed per strategy
    ensure_dir(ctx.out_dir);
    std::ostringstream csv;
    csv << csv_config_comment(cfg);
    csv << "mode,L,N,a,b,c,seed_index,strategy,final_energy,delta_e,frozen,"
           "param_count,energy_evals,shift_evals,status\n";
    csv.precision(17);
    for (std::size_t k = 0; k < items.size(); ++k) {
        const SweepCell& cell = cells[items[k].cell_index];
        const std::string prefix =
            mode + ',' + std::to_string(cell.layers) + ',' +
            std::to_string(cell.qubits) + ',' + std::to_string(cell.a) + ',' +
            std::to_string(cell.b) + ',' + std::to_string(cell.c) + ',' +
            std::to_string(items[k].seed_index) + ',';
        if (!results[k].ok) {
            csv << prefix << "-,,,,,,," << "failed\n";
            continue;
        }
        for (const StrategyOutcome& s : results[k].record.strategies) {
            csv << prefix << s.name << ',' << s.final_energy << ',';
            if (s.delta_e) csv << *s.delta_e;
            csv << ',' << s.frozen << ',' << s.param_count << ','
                << s.energy_evals << ',' << s.shift_evals << ",ok\n";
        }
    }
    SweepSummary summary;
    summary.csv_path = join_path(ctx.out_dir, "sweep.csv");
    write_file(summary.csv_path, csv.str());

    // per-cell aggregation
    std::vector<double> frozen_fracs;
    for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
        CellStat stat;
        stat.layers = cells[ci].layers;
        stat.qubits = cells[ci].qubits;
        stat.a = cells[ci].a;
        stat.b = cells[ci].b;
        stat.c = cells[ci].c;
        std::vector<double> dts, drs;
        bool any_ok = false;
        for (std::size_t k = 0; k < items.size(); ++k) {
            if (items[k].cell_index != ci) continue;
            if (!results[k].ok) continue;
            any_ok = true;
            const RunRecord& rec = results[k].record;
            if (const StrategyOutcome* t = rec.find("titan")) {
                if (t->delta_e) dts.push_back(*t->delta_e);
                const double frac = t->param_count
                                        ? static_cast<double>(t->frozen) /
                                              t->param_count
                                        : 0.0;
                frozen_fracs.push_back(frac);
                stat.mean_frozen_fraction += frac;
            }
            if (const StrategyOutcome* r = rec.find("random")) {
                if (r->delta_e) drs.push_back(*r->delta_e);
            }
        }
        stat.failed = !any_ok;
        if (!dts.empty()) {
            stat.median_delta_titan = median_of(dts);
            stat.mean_delta_titan = mean_of(dts);
            stat.mean_frozen_fraction /= static_cast<double>(dts.size());
        }
        if (!drs.empty()) stat.mean_delta_random = mean_of(drs);
        summary.cells.push_back(stat);
        if (stat.failed) ++summary.failed_cells;
    }
    summary.mean_frozen_fraction = mean_of(frozen_fracs);
    int nonworse = 0, beats = 0, counted = 0;
    for (const CellStat& s : summary.cells) {
        if (s.failed) continue;
        ++counted;
        if (s.mean_delta_titan <= 0.0) ++nonworse;
        if (s.mean_delta_titan < s.mean_delta_random) ++beats;
    }
    if (counted) {
        summary.frac_cells_titan_nonworse =
            static_cast<double>(nonworse) / counted;
        summary.frac_cells_titan_beats_random =
            static_cast<double>(beats) / counted;
    }

    // heatmaps: improvement sign convention E_baseline - E_strategy
    auto cell_grid = [&](const std::string& strategy, bool frozen_counts) {
        if (mode == "size_grid") {
            std::vector<int> ls, ns;
            for (const SweepCell& c : cells) {
                if (std::find(ls.begin(), ls.end(), c.layers) == ls.end()) {
                    ls.push_back(c.layers);
                }
                if (std::find(ns.begin(), ns.end(), c.qubits) == ns.end()) {
                    ns.push_back(c.qubits);
                }
            }
            HeatmapSpec spec;
            spec.values = Grid(static_cast<int>(ls.size()),
                               static_cast<int>(ns.size()));
            for (int li = 0; li < static_cast<int>(ls.size()); ++li) {
                spec.row_labels.push_back("L=" + std::to_string(ls[li]));
            }
            for (int ni = 0; ni < static_cast<int>(ns.size()); ++ni) {
                spec.col_labels.push_back("N=" + std::to_string(ns[ni]));
            }
            for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
                const int li = static_cast<int>(
                    std::find(ls.begin(), ls.end(), cells[ci].layers) -
                    ls.begin());
                const int ni = static_cast<int>(
                    std::find(ns.begin(), ns.end(), cells[ci].qubits) -
                    ns.begin());
                std::vector<double> vals;
                for (std::size_t k = 0; k < items.size(); ++k) {
                    if (items[k].cell_index != ci || !results[k].ok) continue;
                    const StrategyOutcome* s =
                        results[k].record.find(strategy);
                    if (!s) continue;
                    vals.push_back(frozen_counts
                                       ? static_cast<double>(s->frozen)
                                       : (s->delta_e ? -*s->delta_e : 0.0));
                }
                spec.values.at(li, ni) = mean_of(vals);
            }
            return spec;
        }
        // coeff_grid handled by the caller slice-wise
        return HeatmapSpec{};
    };

    auto write_heatmap = [&](HeatmapSpec spec, const std::string& name) {
        const std::string path = join_path(ctx.out_dir, name);
        write_file(path, svg_with_config(heatmap_svg(spec), cfg));
        summary.heatmap_paths.push_back(path);
    };

    if (mode == "size_grid") {
        for (const std::string& s : strategies) {
            if (s == "baseline") continue;
            HeatmapSpec spec = cell_grid(s, false);
            spec.title = "final-energy gap, " + s + " vs baseline";
            spec.legend = "E_baseline - E_" + s + " (positive = improvement)";
            write_heatmap(std::move(spec), "heatmap_" + s + ".svg");
        }
        HeatmapSpec frozen = cell_grid("titan", true);
        frozen.title = "mean frozen parameter count (titan)";
        frozen.legend = "tau = " + std::to_string(tau);
        frozen.scale = ColorScale::SequentialBlue;
        write_heatmap(std::move(frozen), "heatmap_frozen.svg");
    } else {
        std::vector<double> cv;
        for (const SweepCell& c : cells) {
            if (std::find(cv.begin(), cv.end(), c.c) == cv.end()) {
                cv.push_back(c.c);
            }
        }
        for (const std::string& s : strategies) {
            if (s == "baseline") continue;
            for (double cval : cv) {
                std::vector<double> av, bv;
                for (const SweepCell& c : cells) {
                    if (c.c != cval) continue;
                    if (std::find(av.begin(), av.end(), c.a) == av.end()) {
                        av.push_back(c.a);
                    }
                    if (std::find(bv.begin(), bv.end(), c.b) == bv.end()) {
                        bv.push_back(c.b);
                    }
                }
                HeatmapSpec spec;
                spec.title = "E_baseline - E_" + s + " at c=" +
                             std::to_string(cval);
                spec.legend = "horizontal a, vertical b";
                spec.values = Grid(static_cast<int>(bv.size()),
                                   static_cast<int>(av.size()));
                for (double b : bv) {
                    spec.row_labels.push_back("b=" + std::to_string(b));
                }
                for (double a : av) {
                    spec.col_labels.push_back("a=" + std::to_string(a));
                }
                for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
                    if (cells[ci].c != cval) continue;
                    const int bi = static_cast<int>(
                        std::find(bv.begin(), bv.end(), cells[ci].b) -
                        bv.begin());
                    const int ai = static_cast<int>(
                        std::find(av.begin(), av.end(), cells[ci].a) -
                        av.begin());
                    std::vector<double> vals;
                    for (std::size_t k = 0; k < items.size(); ++k) {
                        if (items[k].cell_index != ci || !results[k].ok) {
                            continue;
                        }
                        const StrategyOutcome* st =
                            results[k].record.find(s);
                        if (st && st->delta_e) vals.push_back(-*st->delta_e);
                    }
                    spec.values.at(bi, ai) = mean_of(vals);
                }
                std::ostringstream name;
                name << "heatmap_" << s << "_c" << cval << ".svg";
                write_heatmap(std::move(spec), name.str());
            }
        }
    }

    // summary sidecar
    json cell_rows = json::array();
    for (const CellStat& s : summary.cells) {
        cell_rows.push_back({{"L", s.layers},
                             {"N", s.qubits},
                             {"a", s.a},
                             {"b", s.b},
                             {"c", s.c},
                             {"median_delta_titan", s.median_delta_titan},
                             {"mean_delta_titan", s.mean_delta_titan},
                             {"mean_delta_random", s.mean_delta_random},
                             {"mean_frozen_fraction", s.mean_frozen_fraction},
                             {"failed", s.failed}});
    }
    json summary_json = {
        {"config", cfg},
        {"cells", std::move(cell_rows)},
        {"failed_cells", summary.failed_cells},
        {"mean_frozen_fraction", summary.mean_frozen_fraction},
        {"frac_cells_titan_nonworse", summary.frac_cells_titan_nonworse},
        {"frac_cells_titan_beats_random",
         summary.frac_cells_titan_beats_random}};
    write_file(join_path(ctx.out_dir, "sweep_summary.json"),
               summary_json.dump(2));
    return summary;
}

BenchBpSummary cmd_bench_bp(const std::string& config_path,
                            const CommandContext& ctx) {
    const json cfg = parse_json(slurp_file(config_path), "bench-bp config");
    check_keys(cfg,
               {"n", "layers", "samples", "schemes", "seed", "init_c",
                "sigma2"},
               "bench-bp config");
    const int n = cfg.value("n", 6);
    std::vector<int> layers = {2, 4, 8, 16};
    if (cfg.contains("layers")) {
        layers = cfg.at("layers").get<std::vector<int>>();
    }
    const int samples = cfg.value("samples", 1000);
    std::vector<std::string> schemes = {"enhanced_gauss", "uniform"};
    if (cfg.contains("schemes")) {
        schemes = cfg.at("schemes").get<std::vector<std::string>>();
    }
    const std::uint64_t seed = ctx.seed_override
                                   ? *ctx.seed_override
                                   : cfg.value("seed", std::uint64_t{0});

    BenchBpSummary summary;
    LinePlotSpec plot;
    plot.title = "gradient variance vs depth";
    plot.x_label = "layers L";
    plot.y_label = "Var[dE/dtheta]";
    plot.log_x = true;
    plot.log_y = true;

    for (std::size_t si = 0; si < schemes.size(); ++si) {
        InitSpec init;
        init.scheme = scheme_from_name(schemes[si]);
        init.c_coeff = cfg.value("init_c", 1.0);
        if (cfg.contains("sigma2")) init.sigma2 = cfg.at("sigma2").get<double>();
        init.seed = derive_seed(seed, {si});
        const std::vector<ScanRow> rows =
            grad_variance_scan(n, layers, init, samples, nullptr, ctx.threads);
        summary.rows.insert(summary.rows.end(), rows.begin(), rows.end());

        // least-squares slope of log(var) on log(L)
        std::vector<double> lx, ly;
        Series series;
        series.name = schemes[si];
        for (const ScanRow& r : rows) {
            if (r.variance > 0.0) {
                lx.push_back(std::log(static_cast<double>(r.layers)));
                ly.push_back(std::log(r.variance));
            }
            series.x.push_back(r.layers);
            series.y.push_back(r.variance);
            series.y_low.push_back(r.ci_low);
            series.y_high.push_back(r.ci_high);
        }
        const double mx = mean_of(lx), my = mean_of(ly);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        summary.slope[schemes[si]] = den > 0.0 ? num / den : 0.0;
        plot.series.push_back(std::move(series));
    }

    ensure_dir(ctx.out_dir);
    summary.csv_path = join_path(ctx.out_dir, "bench_bp.csv");
    write_file(summary.csv_path,
               csv_config_comment(cfg) + scan_to_csv(summary.rows));
    summary.svg_path = join_path(ctx.out_dir, "bench_bp.svg");
    write_file(summary.svg_path, svg_with_config(line_plot_svg(plot), cfg));

    json slopes;
    for (const auto& [k, v] : summary.slope) slopes[k] = v;
    write_file(join_path(ctx.out_dir, "bench_bp_summary.json"),
               json{{"config", cfg}, {"slopes", std::move(slopes)}}.dump(2));
    return summary;
}

ConvergenceSummary cmd_convergence(const std::string& config_path,
                                   const CommandContext& ctx) {
    const json cfg = parse_json(slurp_file(config_path), "convergence config");
    check_keys(cfg, {"problem", "checkpoint", "tau", "strategies", "seeds",
                     "seed"},
               "convergence config");
    if (!cfg.contains("problem")) {
        throw_config("convergence config: missing 'problem'");
    }
    const ProblemConfig problem =
        problem_from_json_text(cfg.at("problem").dump());
    const double tau = cfg.value("tau", 80.0);
    const int seeds = cfg.value("seeds", 5);
    if (seeds < 1) throw_config("convergence config: seeds must be >= 1");
    std::vector<std::string> strategies = {"baseline", "titan", "random"};
    if (cfg.contains("strategies")) {
        strategies = cfg.at("strategies").get<std::vector<std::string>>();
    }
    const std::uint64_t master = ctx.seed_override
                                     ? *ctx.seed_override
                                     : cfg.value("seed", std::uint64_t{0});

    PredictorWeights weights;
    const PredictorWeights* ckpt = nullptr;
    if (cfg.contains("checkpoint")) {
        weights = load_checkpoint(cfg.at("checkpoint").get<std::string>());
        ckpt = &weights;
    }

    std::vector<RunRecord> records(seeds);
    parallel_for(static_cast<std::size_t>(seeds), ctx.threads,
                 [&](std::size_t si) {
                     records[si] = run_strategies(
                         problem, ckpt, tau, strategies,
                         derive_seed(master, {si}));
                 });

    const int iters = problem.apfa.max_iters + 1;
    ConvergenceSummary summary;

    std::ostringstream csv;
    csv << csv_config_comment(cfg);
    csv << "strategy,iter,energy_mean,energy_std,gradnorm_mean,gradnorm_std,"
           "seeds\n";
    csv.precision(17);

    LinePlotSpec eplot, gplot;
    eplot.title = "energy vs iteration";
    eplot.x_label = "iteration";
    eplot.y_label = "E(theta)";
    gplot.title = "gradient norm vs iteration";
    gplot.x_label = "iteration";
    gplot.y_label = "||g||_2";

    for (const std::string& name : strategies) {
        Series es, gs;
        es.name = name;
        gs.name = name;
        std::vector<double> finals;
        for (int t = 0; t < iters; ++t) {
            std::vector<double> evals, gvals;
            for (const RunRecord& rec : records) {
                const StrategyOutcome* s = rec.find(name);
                if (!s) continue;
                if (t < static_cast<int>(s->trajectory.energies.size())) {
                    evals.push_back(s->trajectory.energies[t]);
                    gvals.push_back(s->trajectory.grad_norms[t]);
                }
            }
            if (evals.empty()) continue;
            const double em = mean_of(evals), esd = std_of(evals);
            const double gm = mean_of(gvals), gsd = std_of(gvals);
            csv << name << ',' << t << ',' << em << ',' << esd << ',' << gm
                << ',' << gsd << ',' << evals.size() << '\n';
            es.x.push_back(t);
            es.y.push_back(em);
            es.y_low.push_back(em - esd);
            es.y_high.push_back(em + esd);
            gs.x.push_back(t);
            gs.y.push_back(gm);
            gs.y_low.push_back(std::max(gm - gsd, 0.0));
            gs.y_high.push_back(gm + gsd);
        }
        for (const RunRecord& rec : records) {
            if (const StrategyOutcome* s = rec.find(name)) {
                finals.push_back(s->final_energy);
            }
        }
        summary.final_energy_mean[name] = mean_of(finals);
        eplot.series.push_back(std::move(es));
        gplot.series.push_back(std::move(gs));
    }

    // median first-crossing iteration of the titan gradient norm
    std::vector<double> crossings;
    for (const RunRecord& rec : records) {
        const StrategyOutcome* t = rec.find("titan");
        const StrategyOutcome* b = rec.find("baseline");
        if (!t || !b) continue;
        int cross = -1;
        const std::size_t upto = std::min(t->trajectory.grad_norms.size(),
                                          b->trajectory.grad_norms.size());
        for (std::size_t k = 0; k < upto; ++k) {
            if (t->trajectory.grad_norms[k] < b->trajectory.grad_norms[k]) {
                cross = static_cast<int>(k);
                break;
            }
        }
        crossings.push_back(cross < 0 ? static_cast<double>(iters) : cross);
    }
    if (!crossings.empty()) {
        const double med = median_of(crossings);
        summary.median_titan_crossing_iter =
            med >= iters ? -1 : static_cast<int>(med);
    }

    ensure_dir(ctx.out_dir);
    summary.csv_path = join_path(ctx.out_dir, "convergence.csv");
    write_file(summary.csv_path, csv.str());
    const std::string e_path = join_path(ctx.out_dir, "convergence_energy.svg");
    write_file(e_path, svg_with_config(line_plot_svg(eplot), cfg));
    const std::string g_path =
        join_path(ctx.out_dir, "convergence_gradnorm.svg");
    write_file(g_path, svg_with_config(line_plot_svg(gplot), cfg));
    summary.svg_paths = {e_path, g_path};

    json finals;
    for (const auto& [k, v] : summary.final_energy_mean) finals[k] = v;
    write_file(join_path(ctx.out_dir, "convergence_summary.json"),
               json{{"config", cfg},
                    {"final_energy_mean", std::move(finals)},
                    {"median_titan_crossing_iter",
                     summary.median_titan_crossing_iter}}
                   .dump(2));
    return summary;
}

IntensitySummary cmd_intensity_map(const std::string& config_path,
                                   const CommandContext& ctx) {
    const json cfg = parse_json(slurp_file(config_path), "intensity config");
    check_keys(cfg, {"problem", "layers", "qubits", "seed"},
               "intensity config");
    if (!cfg.contains("problem")) {
        throw_config("intensity config: missing 'problem'");
    }
    const ProblemConfig base = problem_from_json_text(cfg.at("problem").dump());
    std::vector<int> layer_list = default_layers(ctx.full);
    std::vector<int> qubit_list = default_qubits(ctx.full);
    if (cfg.contains("layers")) {
        layer_list = cfg.at("layers").get<std::vector<int>>();
    }
    if (cfg.contains("qubits")) {
        qubit_list = cfg.at("qubits").get<std::vector<int>>();
    }
    const std::uint64_t master = ctx.seed_override
                                     ? *ctx.seed_override
                                     : cfg.value("seed", std::uint64_t{0});

    struct Cell {
        int layers, qubits;
        Grid intensity;
        bool ok = false;
    };
    std::vector<Cell> cells;
    for (int l : layer_list) {
        for (int n : qubit_list) cells.push_back({l, n, Grid(), false});
    }

    parallel_for(cells.size(), ctx.threads, [&](std::size_t k) {
        Cell& cell = cells[k];
        ProblemConfig p = base;
        p.layers = cell.layers;
        p.n_qubits = cell.qubits;
        const std::uint64_t seed = derive_seed(master, {k});
        const Hamiltonian h = build_hamiltonian(p);
        const CircuitSpec spec = build_ansatz(p, h, seed);
        ApfaConfig apfa = p.apfa;
        apfa.seed = derive_seed(seed, {0xA9FA});
        const ApfaTrajectory traj =
            apfa_run(spec, h, initial_parameters(p, spec, seed), apfa);
        if (traj.diverged) return;
        cell.intensity = label_from_trajectory(traj, spec);
        cell.ok = true;
    });

    ensure_dir(ctx.out_dir);
    IntensitySummary summary;
    double first_acc = 0.0, last_acc = 0.0;
    int counted = 0;
    for (const Cell& cell : cells) {
        if (!cell.ok) continue;
        HeatmapSpec spec;
        spec.title = "freeze intensity, L=" + std::to_string(cell.layers) +
                     " N=" + std::to_string(cell.qubits);
        spec.legend = "darker = more often frozen";
        spec.scale = ColorScale::SequentialBlue;
        spec.fixed_max = 1.0;
        spec.values = cell.intensity;
        for (int r = 0; r < cell.intensity.rows; ++r) {
            spec.row_labels.push_back("l=" + std::to_string(r));
        }
        for (int c = 0; c < cell.intensity.cols; ++c) {
            spec.col_labels.push_back(std::to_string(c));
        }
        const std::string path = join_path(
            ctx.out_dir, "intensity_L" + std::to_string(cell.layers) + "_N" +
                             std::to_string(cell.qubits) + ".svg");
        write_file(path, svg_with_config(heatmap_svg(spec), cfg));
        summary.image_paths.push_back(path);

        double first = 0.0, last = 0.0;
        for (int c = 0; c < cell.intensity.cols; ++c) {
            first += cell.intensity.at(0, c);
            last += cell.intensity.at(cell.intensity.rows - 1, c);
        }
        first_acc += first / cell.intensity.cols;
        last_acc += last / cell.intensity.cols;
        ++counted;
    }
    summary.cells = counted;
    if (counted) {
        summary.mean_first_layer_intensity = first_acc / counted;
        summary.mean_last_layer_intensity = last_acc / counted;
    }
    write_file(join_path(ctx.out_dir, "intensity_summary.json"),
               json{{"config", cfg},
                    {"cells", summary.cells},
                    {"mean_first_layer_intensity",
                     summary.mean_first_layer_intensity},
                    {"mean_last_layer_intensity",
                     summary.mean_last_layer_intensity}}
                   .dump(2));
    return summary;
}

} // namespace titan
