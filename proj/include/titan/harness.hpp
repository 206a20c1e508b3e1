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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "titan/cfcsa.hpp"
#include "titan/predictor.hpp"

namespace titan {

/// One VQE problem instance: Hamiltonian source, ansatz family/depth,
/// initialization recipe, and descent settings.
struct ProblemConfig {
    HamiltonianClass ham_class = HamiltonianClass::HEISENBERG;
    int n_qubits = 5;
    double a = 1.0, b = 1.0, c = 1.0; // Heisenberg couplings
    double coupling_j = -3.0;         // TFIM
    double field_h = 2.0;
    std::string pauli_path; // molecule_file class

    Family family = Family::HEA_T1;
    int layers = 5;

    InitScheme scheme = InitScheme::ENHANCED_GAUSS;
    double init_c = 1.0;
    std::optional<double> sigma2;

    ApfaConfig apfa; // eta / max_iters drive all descent strategies

    // descriptor normalization ranges; defaults depend on ham_class
    std::vector<std::pair<double, double>> desc_ranges;
};

ProblemConfig problem_from_json_text(const std::string& text);
std::string problem_to_json_text(const ProblemConfig& p);

Hamiltonian build_hamiltonian(const ProblemConfig& p);
/// The twirl (HEA_T1 family) is drawn from derive_seed(seed, {"twirl"}).
CircuitSpec build_ansatz(const ProblemConfig& p, const Hamiltonian& h,
                         std::uint64_t seed);
ParamVector initial_parameters(const ProblemConfig& p, const CircuitSpec& spec,
                               std::uint64_t seed);
/// Raw descriptors of the instance, normalized through p.desc_ranges.
std::vector<double> problem_descriptors(const ProblemConfig& p,
                                        const Hamiltonian& h);

/// "F/P" report cell, e.g. "77/117".
std::string frozen_ratio_string(int frozen, int param_count);

struct StrategyOutcome {
    std::string name; // baseline | titan | random
    double final_energy = 0.0;
    std::optional<double> delta_e; // E_strategy - E_baseline (table sign)
    int frozen = 0;
    int param_count = 0;
    std::int64_t energy_evals = 0;
    std::int64_t shift_evals = 0;
    double wall_ms = 0.0;
    ApfaTrajectory trajectory; // in-memory; files keep summaries
};

struct RunRecord {
    std::string experiment_id;
    double tau = 80.0;
    std::uint64_t seed = 0;
    std::string problem_json; // full config echo
    std::vector<StrategyOutcome> strategies;

    [[nodiscard]] const StrategyOutcome* find(const std::string& name) const;
};

/// Executes the requested strategies from one shared initial theta. The
/// titan strategy freezes predict_mask(checkpoint, ..., tau) for the whole
/// run; random freezes the same COUNT of uniformly chosen parameters.
/// delta_e fields are filled when baseline is among the strategies.
RunRecord run_strategies(const ProblemConfig& p,
                         const PredictorWeights* checkpoint, double tau,
                         const std::vector<std::string>& strategies,
                         std::uint64_t seed);

std::string run_record_to_json(const RunRecord& record);

} // namespace titan
