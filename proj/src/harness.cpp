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

#include "titan/harness.hpp"

#include <chrono>

#include "json_util.hpp"

namespace titan {

using nlohmann::json;

namespace {

std::vector<std::pair<double, double>> default_desc_ranges(HamiltonianClass c) {
    switch (c) {
    case HamiltonianClass::HEISENBERG: return {{-5, 5}, {-5, 5}, {-5, 5}};
    case HamiltonianClass::TFIM: return {{-5, 5}, {-5, 5}};
    case HamiltonianClass::MOLECULE_FILE: return {{0, 500}};
    }
    return {};
}

ApfaConfig apfa_from_json_obj(const json& j) {
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

} // namespace

ProblemConfig problem_from_json_text(const std::string& text) {
    const json j = parse_json(text, "problem config");
    check_keys(j,
               {"hamiltonian", "ansatz", "init", "apfa", "descriptor_ranges"},
               "problem config");
    ProblemConfig p;

    if (!j.contains("hamiltonian")) {
        throw_config("problem config: missing 'hamiltonian'");
    }
    const json& h = j.at("hamiltonian");
    check_keys(h, {"type", "n", "a", "b", "c", "J", "h", "path"},
               "hamiltonian config");
    const std::string type = h.value("type", std::string("heisenberg"));
    p.ham_class = hamiltonian_class_from_name(
        type == "pauli_file" ? "molecule_file" : type);
    switch (p.ham_class) {
    case HamiltonianClass::HEISENBERG:
        if (!h.contains("n")) throw_config("heisenberg config: missing 'n'");
        p.n_qubits = h.at("n").get<int>();
        p.a = h.value("a", 1.0);
        p.b = h.value("b", 1.0);
        p.c = h.value("c", 1.0);
        break;
    case HamiltonianClass::TFIM:
        if (!h.contains("n")) throw_config("tfim config: missing 'n'");
        p.n_qubits = h.at("n").get<int>();
        p.coupling_j = h.value("J", -3.0);
        p.field_h = h.value("h", 2.0);
        break;
    case HamiltonianClass::MOLECULE_FILE:
        if (!h.contains("path")) {
            throw_config("molecule config: missing 'path'");
        }
        p.pauli_path = h.at("path").get<std::string>();
        break;
    }

    if (j.contains("ansatz")) {
        const json& a = j.at("ansatz");
        check_keys(a, {"family", "layers"}, "ansatz config");
        p.family = family_from_name(a.value("family", std::string("HEA_T1")));
        p.layers = a.value("layers", 5);
    }
    if (j.contains("init")) {
        const json& i = j.at("init");
        check_keys(i, {"scheme", "c_coeff", "sigma2"}, "init config");
        p.scheme =
            scheme_from_name(i.value("scheme", std::string("enhanced_gauss")));
        p.init_c = i.value("c_coeff", 1.0);
        if (i.contains("sigma2")) p.sigma2 = i.at("sigma2").get<double>();
    }
    if (j.contains("apfa")) p.apfa = apfa_from_json_obj(j.at("apfa"));

    p.desc_ranges = default_desc_ranges(p.ham_class);
    if (j.contains("descriptor_ranges")) {
        const json& r = j.at("descriptor_ranges");
        if (!r.is_array() || r.size() != p.desc_ranges.size()) {
            throw_config("descriptor_ranges: expected " +
                         std::to_string(p.desc_ranges.size()) +
                         " [lo, hi] pairs");
        }
        for (std::size_t i = 0; i < p.desc_ranges.size(); ++i) {
            p.desc_ranges[i] = {r[i][0].get<double>(), r[i][1].get<double>()};
        }
    }
    return p;
}

std::string problem_to_json_text(const ProblemConfig& p) {
    json h;
    switch (p.ham_class) {
    case HamiltonianClass::HEISENBERG:
        h = {{"type", "heisenberg"}, {"n", p.n_qubits},
             {"a", p.a},             {"b", p.b},
             {"c", p.c}};
        break;
    case HamiltonianClass::TFIM:
        h = {{"type", "tfim"},
             {"n", p.n_qubits},
             {"J", p.coupling_j},
             {"h", p.field_h}};
        break;
    case HamiltonianClass::MOLECULE_FILE:
        h = {{"type", "pauli_file"}, {"path", p.pauli_path}};
        break;
    }
    json init = {{"scheme", scheme_name(p.scheme)}, {"c_coeff", p.init_c}};
    if (p.sigma2) init["sigma2"] = *p.sigma2;
    json ranges = json::array();
    for (const auto& [lo, hi] : p.desc_ranges) ranges.push_back({lo, hi});
    json j = {{"hamiltonian", std::move(h)},
              {"ansatz",
               {{"family", family_name(p.family)}, {"layers", p.layers}}},
              {"init", std::move(init)},
              {"apfa",
               {{"alpha", p.apfa.alpha},
                {"noise_std", p.apfa.noise_std},
                {"epsilon", p.apfa.epsilon},
                {"lambda_f_min", p.apfa.lambda_f_min},
                {"lambda_f_max", p.apfa.lambda_f_max},
                {"lambda_a_min", p.apfa.lambda_a_min},
                {"lambda_a_max", p.apfa.lambda_a_max},
                {"n_freeze_patience", p.apfa.n_freeze_patience},
                {"n_activate_patience", p.apfa.n_activate_patience},
                {"eta", p.apfa.eta},
                {"max_iters", p.apfa.max_iters},
                {"seed", p.apfa.seed}}},
              {"descriptor_ranges", std::move(ranges)}};
    return j.dump();
}

Hamiltonian build_hamiltonian(const ProblemConfig& p) {
    switch (p.ham_class) {
    case HamiltonianClass::HEISENBERG:
        return heisenberg(p.n_qubits, p.a, p.b, p.c);
    case HamiltonianClass::TFIM:
        return tfim(p.n_qubits, p.coupling_j, p.field_h);
    case HamiltonianClass::MOLECULE_FILE: return from_pauli_file(p.pauli_path);
    }
    throw_config("unknown hamiltonian class");
}

CircuitSpec build_ansatz(const ProblemConfig& p, const Hamiltonian& h,
                         std::uint64_t seed) {
    const int n = h.n_qubits();
    switch (p.family) {
    case Family::HEA: return hea(n, p.layers);
    case Family::HEA_T1:
        return hea_t1(n, p.layers,
                      sample_twirl(n, derive_seed(seed, {0x721F1})));
    case Family::SU2: return su2(n, p.layers);
    case Family::SEL: return sel(n, p.layers);
    case Family::UNSTRUCTURED:
        throw_config("problem config: unstructured circuits enter through "
                     "the library API");
    }
    throw_config("unknown ansatz family");
}

ParamVector initial_parameters(const ProblemConfig& p, const CircuitSpec& spec,
                               std::uint64_t seed) {
    InitSpec init;
    init.scheme = p.scheme;
    init.c_coeff = p.init_c;
    init.sigma2 = p.sigma2;
    init.seed = derive_seed(seed, {0x1417});
    return init_params(spec, init);
}

std::vector<double> problem_descriptors(const ProblemConfig& p,
                                        const Hamiltonian& h) {
    std::vector<double> raw;
    switch (p.ham_class) {
    case HamiltonianClass::HEISENBERG: raw = {p.a, p.b, p.c}; break;
    case HamiltonianClass::TFIM: raw = {p.coupling_j, p.field_h}; break;
    case HamiltonianClass::MOLECULE_FILE:
        raw = {static_cast<double>(h.terms().size())};
        break;
    }
    return normalize_descriptors(raw, p.desc_ranges);
}

std::string frozen_ratio_string(int frozen, int param_count) {
    return std::to_string(frozen) + "/" + std::to_string(param_count);
}

const StrategyOutcome* RunRecord::find(const std::string& name) const {
    for (const StrategyOutcome& s : strategies) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

RunRecord run_strategies(const ProblemConfig& p,
                         const PredictorWeights* checkpoint, double tau,
                         const std::vector<std::string>& strategies,
                         std::uint64_t seed) {
    for (const std::string& s : strategies) {
        if (s != "baseline" && s != "titan" && s != "random") {
            throw_config("unknown strategy '" + s + "'");
        }
    }
    const Hamiltonian h = build_hamiltonian(p);
    const CircuitSpec spec = build_ansatz(p, h, seed);
    const ParamVector theta0 = initial_parameters(p, spec, seed);
    const int param_count = spec.param_count();

    const bool needs_mask =
        std::find(strategies.begin(), strategies.end(), "titan") !=
            strategies.end() ||
        std::find(strategies.begin(), strategies.end(), "random") !=
            strategies.end();
    MaskPrediction predicted;
    if (needs_mask) {
        if (!checkpoint) {
            throw_config("titan/random strategies need a checkpoint");
        }
        predicted =
            predict_mask(*checkpoint, spec, problem_descriptors(p, h), tau);
    }

    RunRecord record;
    record.tau = tau;
    record.seed = seed;
    record.problem_json = problem_to_json_text(p);
    record.experiment_id =
        "run-" + std::to_string(derive_seed(seed, {0xEC9D}) % 0xFFFFFF);

    for (const std::string& name : strategies) {
        StrategyOutcome out;
        out.name = name;
        out.param_count = param_count;
        const auto start = std::chrono::steady_clock::now();
        if (name == "baseline") {
            out.trajectory =
                baseline_run(spec, h, theta0, p.apfa.eta, p.apfa.max_iters);
        } else if (name == "titan") {
            out.frozen = static_cast<int>(predicted.frozen_ids.size());
            out.trajectory =
                frozen_set_run(spec, h, theta0, predicted.frozen_ids,
                               p.apfa.eta, p.apfa.max_iters);
            out.trajectory.algorithm = "titan";
        } else { // random at the matched count
            out.frozen = static_cast<int>(predicted.frozen_ids.size());
            out.trajectory = random_freeze_run(
                spec, h, theta0, out.frozen, p.apfa.eta, p.apfa.max_iters,
                derive_seed(seed, {0xA2D0}));
        }
        out.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        if (out.trajectory.diverged || out.trajectory.energies.empty()) {
            throw Error(ErrorKind::Divergence,
                        "strategy '" + name + "' diverged");
        }
        out.final_energy = out.trajectory.energies.back();
        out.energy_evals = out.trajectory.counter.energy_evals;
        out.shift_evals = out.trajectory.counter.shift_evals;
        record.strategies.push_back(std::move(out));
    }

    if (const StrategyOutcome* base = record.find("baseline")) {
        for (StrategyOutcome& s : record.strategies) {
            if (s.name != "baseline") {
                s.delta_e = s.final_energy - base->final_energy;
            }
        }
    }
    return record;
}

std::string run_record_to_json(const RunRecord& record) {
    json strategies;
    for (const StrategyOutcome& s : record.strategies) {
        json e = {{"final_energy", s.final_energy},
                  {"frozen", s.frozen},
                  {"param_count", s.param_count},
                  {"frozen_ratio", frozen_ratio_string(s.frozen, s.param_count)},
                  {"energy_evals", s.energy_evals},
                  {"shift_evals", s.shift_evals},
                  {"wall_ms", s.wall_ms}};
        // Table-style sign: delta_e = E_strategy - E_baseline, <= 0 good
        if (s.delta_e) e["delta_e"] = *s.delta_e;
        strategies[s.name] = std::move(e);
    }
    const json j = {{"experiment_id", record.experiment_id},
                    {"tau", record.tau},
                    {"seed", record.seed},
                    {"problem", parse_json(record.problem_json, "echo")},
                    {"strategies", std::move(strategies)}};
    return j.dump(2);
}

} // namespace titan
