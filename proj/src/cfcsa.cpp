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

#include "titan/cfcsa.hpp"

#include <cmath>
#include <fstream>

#include "json_util.hpp"
#include "titan/ground_state.hpp"

namespace titan {

using nlohmann::json;

InputTensor encode_grid(int layers, int width, int slots_per_qubit,
                        const std::vector<double>& descriptors) {
    if (layers < 1 || width < 1 || slots_per_qubit < 1) {
        throw_config("encode: grid dimensions must be positive");
    }
    for (double s : descriptors) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw_validation("encode: descriptor " + std::to_string(s) +
                             " outside [0, 1]");
        }
    }
    const int k = static_cast<int>(descriptors.size());
    const int cols = width * slots_per_qubit;
    InputTensor x(3 + k, layers, cols);
    for (int l = 0; l < layers; ++l) {
        for (int c = 0; c < cols; ++c) {
            const int q = c / slots_per_qubit;
            const int d = c % slots_per_qubit;
            x.at(0, l, c) =
                layers > 1 ? static_cast<double>(l) / (layers - 1) : 0.0;
            x.at(1, l, c) = slots_per_qubit > 1
                                ? static_cast<double>(d) / (slots_per_qubit - 1)
                                : 0.0;
            x.at(2, l, c) =
                width > 1 ? static_cast<double>(q) / (width - 1) : 0.0;
            for (int j = 0; j < k; ++j) x.at(3 + j, l, c) = descriptors[j];
        }
    }
    return x;
}

InputTensor encode(const CircuitSpec& spec,
                   const std::vector<double>& descriptors) {
    return encode_grid(spec.layers, spec.grid_width, spec.slots_per_qubit,
                       descriptors);
}

std::vector<double>
normalize_descriptors(const std::vector<double>& raw,
                      const std::vector<std::pair<double, double>>& ranges) {
    if (raw.size() != ranges.size()) {
        throw_shape("normalize_descriptors: " + std::to_string(raw.size()) +
                    " values vs " + std::to_string(ranges.size()) + " ranges");
    }
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto [lo, hi] = ranges[i];
        if (!(hi > lo)) throw_config("normalize_descriptors: need hi > lo");
        out[i] = std::clamp((raw[i] - lo) / (hi - lo), 0.0, 1.0);
    }
    return out;
}

Grid label_from_trajectory(const ApfaTrajectory& traj,
                           const CircuitSpec& spec) {
    if (traj.param_count != spec.param_count()) {
        throw_shape("label_from_trajectory: trajectory has " +
                    std::to_string(traj.param_count) + " parameters, spec " +
                    std::to_string(spec.param_count()));
    }
    const std::vector<double> intensity = freeze_intensity(traj);
    Grid g(spec.layers, spec.grid_width * spec.slots_per_qubit);
    for (int id = 0; id < spec.param_count(); ++id) {
        const ParamCoord c = spec.coord(id);
        g.at(c.layer, c.qubit * spec.slots_per_qubit + c.slot) = intensity[id];
    }
    return g;
}

std::string hamiltonian_class_name(HamiltonianClass c) {
    switch (c) {
    case HamiltonianClass::HEISENBERG: return "heisenberg";
    case HamiltonianClass::TFIM: return "tfim";
    case HamiltonianClass::MOLECULE_FILE: return "molecule_file";
    }
    return "?";
}

HamiltonianClass hamiltonian_class_from_name(const std::string& name) {
    if (name == "heisenberg") return HamiltonianClass::HEISENBERG;
    if (name == "tfim") return HamiltonianClass::TFIM;
    if (name == "molecule_file") return HamiltonianClass::MOLECULE_FILE;
    throw_config("unknown hamiltonian class '" + name + "'");
}

void DatasetManifest::validate() const {
    if (family == Family::UNSTRUCTURED) {
        throw_config("manifest: the generator covers structured families");
    }
    if (layer_values.empty()) throw_config("manifest: layers list is empty");
    if (ham_class == HamiltonianClass::MOLECULE_FILE) {
        if (molecule_files.empty()) {
            throw_config("manifest: molecule_file class needs files");
        }
    } else if (qubit_values.empty()) {
        throw_config("manifest: qubits list is empty");
    }
    for (int l : layer_values) {
        if (l < 1) throw_config("manifest: layer value < 1");
    }
    for (int n : qubit_values) {
        if (n < 2) throw_config("manifest: qubit value < 2");
    }
    if (samples < 1) throw_config("manifest: samples must be >= 1");
    if (max_retries < 0) throw_config("manifest: max_retries must be >= 0");
    if (!(init_c > 0.0)) throw_config("manifest: init_c must be > 0");
    const std::size_t expected =
        ham_class == HamiltonianClass::HEISENBERG
            ? 3
            : (ham_class == HamiltonianClass::TFIM ? 2 : 1);
    if (coeff_ranges.size() != expected) {
        throw_config("manifest: expected " + std::to_string(expected) +
                     " coefficient ranges");
    }
    for (const auto& [lo, hi] : coeff_ranges) {
        if (!(hi > lo)) throw_config("manifest: coefficient range needs hi > lo");
    }
    apfa.validate();
}

namespace {

// Per-class descriptor range keys, in normative order.
std::vector<const char*> range_keys(HamiltonianClass c) {
    switch (c) {
    case HamiltonianClass::HEISENBERG: return {"a", "b", "c"};
    case HamiltonianClass::TFIM: return {"J", "h"};
    case HamiltonianClass::MOLECULE_FILE: return {"terms"};
    }
    return {};
}

std::vector<std::pair<double, double>> default_ranges(HamiltonianClass c) {
    switch (c) {
    case HamiltonianClass::HEISENBERG:
        return {{-5, 5}, {-5, 5}, {-5, 5}};
    case HamiltonianClass::TFIM:
        return {{-5, 5}, {-5, 5}};
    case HamiltonianClass::MOLECULE_FILE:
        return {{0, 500}};
    }
    return {};
}

ApfaConfig apfa_from_json(const json& j) {
    check_keys(j,
               {"alpha", "noise_std", "epsilon", "lambda_f_min",
                "lambda_f_max", "lambda_a_min", "lambda_a_max",
                "n_freeze_patience", "n_activate_patience", "eta", "max_iters",
                "seed", "record_theta"},
               "apfa config");
    ApfaConfig c;
    c.alpha = j.value("alpha", c.alpha);
    c.noise_std = j.value("noise_std", c.noise_std);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.lambda_f_min = j.value("lambda_f_min", c.lambda_f_min);
    c.lambda_f_max = j.value("lambda_f_max", c.lambda_f_max);
    c.lambda_a_min = j.value("lambda_a_min", c.lambda_a_min);
    c.lambda_a_max = j.value("lambda_a_max", c.lambda_a_max);
    c.n_freeze_patience = j.value("n_freeze_patience", c.n_freeze_patience);
    c.n_activate_patience =
        j.value("n_activate_patience", c.n_activate_patience);
    c.eta = j.value("eta", c.eta);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.seed = j.value("seed", c.seed);
    c.record_theta = j.value("record_theta", c.record_theta);
    c.validate();
    return c;
}

json apfa_to_json(const ApfaConfig& c) {
    return json{{"alpha", c.alpha},
                {"noise_std", c.noise_std},
                {"epsilon", c.epsilon},
                {"lambda_f_min", c.lambda_f_min},
                {"lambda_f_max", c.lambda_f_max},
                {"lambda_a_min", c.lambda_a_min},
                {"lambda_a_max", c.lambda_a_max},
                {"n_freeze_patience", c.n_freeze_patience},
                {"n_activate_patience", c.n_activate_patience},
                {"eta", c.eta},
                {"max_iters", c.max_iters},
                {"seed", c.seed}};
}

} // namespace

DatasetManifest manifest_from_json(const std::string& text) {
    const json j = parse_json(text, "manifest");
    check_keys(j,
               {"family", "hamiltonian_class", "layers", "qubits",
                "coeff_ranges", "molecule_files", "samples", "seed", "init_c",
                "max_retries", "apfa"},
               "manifest");
    DatasetManifest m;
    m.family = family_from_name(j.value("family", std::string("HEA_T1")));
    m.ham_class = hamiltonian_class_from_name(
        j.value("hamiltonian_class", std::string("heisenberg")));
    if (!j.contains("layers")) throw_config("manifest: missing 'layers'");
    m.layer_values = j.at("layers").get<std::vector<int>>();
    if (j.contains("qubits")) {
        m.qubit_values = j.at("qubits").get<std::vector<int>>();
    }
    if (j.contains("molecule_files")) {
        m.molecule_files =
            j.at("molecule_files").get<std::vector<std::string>>();
    }
    m.coeff_ranges = default_ranges(m.ham_class);
    if (j.contains("coeff_ranges")) {
        const json& r = j.at("coeff_ranges");
        const auto keys = range_keys(m.ham_class);
        check_keys(r, keys, "manifest coeff_ranges");
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (r.contains(keys[i])) {
                const json& pair = r.at(keys[i]);
                if (!pair.is_array() || pair.size() != 2) {
                    throw_config("manifest: range must be [lo, hi]");
                }
                m.coeff_ranges[i] = {pair[0].get<double>(),
                                     pair[1].get<double>()};
            }
        }
    }
    if (!j.contains("samples")) throw_config("manifest: missing 'samples'");
    m.samples = j.at("samples").get<int>();
    m.seed = j.value("seed", std::uint64_t{0});
    m.init_c = j.value("init_c", 1.0);
    m.max_retries = j.value("max_retries", 3);
    if (j.contains("apfa")) m.apfa = apfa_from_json(j.at("apfa"));
    m.validate();
    return m;
}

std::string manifest_to_json(const DatasetManifest& m) {
    json j;
    j["family"] = family_name(m.family);
    j["hamiltonian_class"] = hamiltonian_class_name(m.ham_class);
    j["layers"] = m.layer_values;
    if (!m.qubit_values.empty()) j["qubits"] = m.qubit_values;
    if (!m.molecule_files.empty()) j["molecule_files"] = m.molecule_files;
    json ranges;
    const auto keys = range_keys(m.ham_class);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        ranges[keys[i]] = {m.coeff_ranges[i].first, m.coeff_ranges[i].second};
    }
    j["coeff_ranges"] = std::move(ranges);
    j["samples"] = m.samples;
    j["seed"] = m.seed;
    j["init_c"] = m.init_c;
    j["max_retries"] = m.max_retries;
    j["apfa"] = apfa_to_json(m.apfa);
    return j.dump(2);
}

DatasetManifest load_manifest(const std::string& path) {
    return manifest_from_json(slurp_file(path));
}

std::string sample_to_jsonl(const CfcsaSample& s) {
    json j;
    j["shape"] = {s.layers, s.grid_width, s.slots_per_qubit};
    j["descriptors"] = s.descriptors;
    j["x"] = s.x.data;
    j["label"] = s.label.data;
    j["seed"] = s.seed;
    json meta = s.meta_json.empty() ? json::object()
                                    : parse_json(s.meta_json, "sample meta");
    meta["sample_index"] = s.sample_index;
    meta["retries"] = s.retries;
    j["meta"] = std::move(meta);
    return j.dump();
}

CfcsaSample sample_from_jsonl(const std::string& line) {
    const json j = parse_json(line, "dataset record");
    check_keys(j, {"shape", "descriptors", "x", "label", "seed", "meta"},
               "dataset record");
    CfcsaSample s;
    const auto shape = j.at("shape").get<std::vector<int>>();
    if (shape.size() != 3) throw_config("dataset record: shape must be [L,N,D]");
    s.layers = shape[0];
    s.grid_width = shape[1];
    s.slots_per_qubit = shape[2];
    s.descriptors = j.at("descriptors").get<std::vector<double>>();
    const int cols = s.grid_width * s.slots_per_qubit;
    s.x = InputTensor(3 + static_cast<int>(s.descriptors.size()), s.layers,
                      cols);
    const auto xs = j.at("x").get<std::vector<double>>();
    if (xs.size() != s.x.data.size()) {
        throw_config("dataset record: x has wrong length");
    }
    s.x.data = xs;
    s.label = Grid(s.layers, cols);
    const auto ls = j.at("label").get<std::vector<double>>();
    if (ls.size() != s.label.data.size()) {
        throw_config("dataset record: label has wrong length");
    }
    s.label.data = ls;
    s.seed = j.at("seed").get<std::uint64_t>();
    const json& meta = j.at("meta");
    s.sample_index = meta.value("sample_index", 0);
    s.retries = meta.value("retries", 0);
    json meta_rest = meta;
    meta_rest.erase("sample_index");
    meta_rest.erase("retries");
    s.meta_json = meta_rest.dump();
    return s;
}

std::vector<CfcsaSample> read_dataset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw_config("cannot open dataset: " + path);
    std::vector<CfcsaSample> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        out.push_back(sample_from_jsonl(line));
    }
    return out;
}

namespace {

struct DrawnInstance {
    Hamiltonian hamiltonian;
    CircuitSpec spec;
    std::vector<double> raw_desc;
    std::string extra_meta; // molecule file, etc.
};

DrawnInstance draw_instance(const DatasetManifest& m, Rng& rng,
                            std::uint64_t stream) {
    const int L = m.layer_values[rng.uniform_int(m.layer_values.size())];
    int n = 0;
    Hamiltonian h = Hamiltonian::build(1, {});
    std::vector<double> raw;
    std::string extra;
    switch (m.ham_class) {
    case HamiltonianClass::HEISENBERG: {
        n = m.qubit_values[rng.uniform_int(m.qubit_values.size())];
        const double a = rng.uniform(m.coeff_ranges[0].first,
                                     m.coeff_ranges[0].second);
        const double b = rng.uniform(m.coeff_ranges[1].first,
                                     m.coeff_ranges[1].second);
        const double c = rng.uniform(m.coeff_ranges[2].first,
                                     m.coeff_ranges[2].second);
        h = heisenberg(n, a, b, c);
        raw = {a, b, c};
        break;
    }
    case HamiltonianClass::TFIM: {
        n = m.qubit_values[rng.uniform_int(m.qubit_values.size())];
        const double J = rng.uniform(m.coeff_ranges[0].first,
                                     m.coeff_ranges[0].second);
        const double hh = rng.uniform(m.coeff_ranges[1].first,
                                      m.coeff_ranges[1].second);
        h = tfim(n, J, hh);
        raw = {J, hh};
        break;
    }
    case HamiltonianClass::MOLECULE_FILE: {
        const std::string& file =
            m.molecule_files[rng.uniform_int(m.molecule_files.size())];
        h = from_pauli_file(file);
        n = h.n_qubits();
        raw = {static_cast<double>(h.terms().size())};
        extra = file;
        break;
    }
    }

    CircuitSpec spec;
    switch (m.family) {
    case Family::HEA: spec = hea(n, L); break;
    case Family::HEA_T1:
        spec = hea_t1(n, L, sample_twirl(n, derive_seed(stream, {1})));
        break;
    case Family::SU2: spec = su2(n, L); break;
    case Family::SEL: spec = sel(n, L); break;
    case Family::UNSTRUCTURED:
        throw_config("dataset generator covers structured families");
    }
    return {std::move(h), std::move(spec), std::move(raw), std::move(extra)};
}

} // namespace

CfcsaSample generate_sample(const DatasetManifest& manifest,
                            int sample_index) {
    manifest.validate();
    for (int retry = 0; retry <= manifest.max_retries; ++retry) {
        const std::uint64_t stream = derive_seed(
            manifest.seed,
            {static_cast<std::uint64_t>(sample_index),
             static_cast<std::uint64_t>(retry)});
        Rng rng(stream);
        DrawnInstance inst = draw_instance(manifest, rng, stream);

        InitSpec init;
        init.scheme = InitScheme::ENHANCED_GAUSS;
        init.c_coeff = manifest.init_c;
        init.seed = derive_seed(stream, {2});

        ApfaConfig config = manifest.apfa;
        config.seed = derive_seed(stream, {3});

        const ApfaTrajectory traj =
            apfa_run(inst.spec, inst.hamiltonian, init, config);
        if (traj.diverged) continue;

        CfcsaSample s;
        s.layers = inst.spec.layers;
        s.grid_width = inst.spec.grid_width;
        s.slots_per_qubit = inst.spec.slots_per_qubit;
        s.descriptors =
            normalize_descriptors(inst.raw_desc, manifest.coeff_ranges);
        s.x = encode(inst.spec, s.descriptors);
        s.label = label_from_trajectory(traj, inst.spec);
        s.seed = stream;
        s.sample_index = sample_index;
        s.retries = retry;
        json meta;
        meta["family"] = family_name(manifest.family);
        meta["hamiltonian_class"] = hamiltonian_class_name(manifest.ham_class);
        meta["coefficients"] = inst.raw_desc;
        if (!inst.extra_meta.empty()) meta["file"] = inst.extra_meta;
        s.meta_json = meta.dump();
        return s;
    }
    throw Error(ErrorKind::Divergence,
                "sample " + std::to_string(sample_index) + " diverged " +
                    std::to_string(manifest.max_retries + 1) + " times");
}

DatasetStats generate_dataset(const DatasetManifest& manifest,
                              const std::string& out_path, int threads) {
    manifest.validate();
    std::vector<CfcsaSample> samples(manifest.samples);
    parallel_for(static_cast<std::size_t>(manifest.samples), threads,
                 [&](std::size_t i) {
                     samples[i] =
                         generate_sample(manifest, static_cast<int>(i));
                 });

    std::ofstream out(out_path);
    if (!out) throw Error(ErrorKind::Io, "cannot write dataset: " + out_path);

    DatasetStats stats;
    stats.label_histogram.assign(10, 0);
    double frozen_acc = 0.0;
    for (const CfcsaSample& s : samples) {
        out << sample_to_jsonl(s) << '\n';
        double mean = 0.0;
        for (double v : s.label.data) {
            mean += v;
            int bin = std::min(9, static_cast<int>(v * 10.0));
            ++stats.label_histogram[bin];
        }
        frozen_acc += mean / static_cast<double>(s.label.data.size());
        stats.resampled_runs += s.retries;
    }
    if (!out.good()) {
        throw Error(ErrorKind::Io, "short write: " + out_path);
    }
    stats.records = manifest.samples;
    stats.mean_frozen_fraction =
        frozen_acc / static_cast<double>(manifest.samples);
    return stats;
}

} // namespace titan
