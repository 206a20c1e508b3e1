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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "titan/ansatz.hpp"
#include "titan/pauli.hpp"

namespace titan {

enum class InitScheme { ENHANCED_GAUSS, PLAIN_GAUSS, ZERO, UNIFORM };

std::string scheme_name(InitScheme s);
InitScheme scheme_from_name(const std::string& name);

/// Initial-parameter recipe. Gaussian variance is gamma^2 = c / L for
/// ENHANCED_GAUSS (depth-scaled) or the explicit sigma2 for PLAIN_GAUSS.
/// UNIFORM samples [0, 2pi). Samplers are pure functions of (spec, seed).
struct InitSpec {
    InitScheme scheme = InitScheme::ENHANCED_GAUSS;
    std::optional<double> sigma2; // PLAIN_GAUSS only
    double c_coeff = 1.0;         // ENHANCED_GAUSS: gamma^2 = c / L
    std::uint64_t seed = 0;
};

/// Draws N fixed single-qubit unitaries, each uniform over the six-element
/// set { RZ(+-pi/4), RY(pi/4) RX(+-pi/4), RX(pi/4) RY(+-pi/4) }.
std::vector<Mat2> sample_twirl(int n, std::uint64_t seed);

ParamVector init_params(const CircuitSpec& spec, const InitSpec& init);

/// One row of the barren-plateau variance scan.
struct ScanRow {
    int layers = 0;
    double variance = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    InitScheme scheme = InitScheme::ENHANCED_GAUSS;
    int n_qubits = 0;
    int samples = 0;
    std::uint64_t seed = 0;
};

/// For each L: rebuild the twirled two-sublayer HEA per sample, resample
/// (twirl, theta), differentiate the fixed coordinate (layer L/2, d = 0,
/// qubit 0) by parameter shift, and report the sample variance with a 95%
/// bootstrap confidence interval. `observable` defaults to Z_0 Z_1.
std::vector<ScanRow> grad_variance_scan(
    int n, const std::vector<int>& layer_list, const InitSpec& init,
    int samples, const Hamiltonian* observable = nullptr, int threads = 1);

/// CSV with header `L,variance,ci_low,ci_high,scheme,n,samples,seed`.
std::string scan_to_csv(const std::vector<ScanRow>& rows);

} // namespace titan
