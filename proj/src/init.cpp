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

#include "titan/init.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "titan/gradient.hpp"

namespace titan {

std::string scheme_name(InitScheme s) {
    switch (s) {
    case InitScheme::ENHANCED_GAUSS: return "enhanced_gauss";
    case InitScheme::PLAIN_GAUSS: return "plain_gauss";
    case InitScheme::ZERO: return "zero";
    case InitScheme::UNIFORM: return "uniform";
    }
    return "?";
}

InitScheme scheme_from_name(const std::string& name) {
    if (name == "enhanced_gauss") return InitScheme::ENHANCED_GAUSS;
    if (name == "plain_gauss") return InitScheme::PLAIN_GAUSS;
    if (name == "zero") return InitScheme::ZERO;
    if (name == "uniform") return InitScheme::UNIFORM;
    throw_config("unknown init scheme '" + name + "'");
}

std::vector<Mat2> sample_twirl(int n, std::uint64_t seed) {
    if (n < 1) throw_config("sample_twirl: need n >= 1");
    const double q = Rng::kPi / 4.0;
    const Mat2 set[6] = {
        rz_matrix(q),
        rz_matrix(-q),
        mat2_mul(ry_matrix(q), rx_matrix(q)),
        mat2_mul(ry_matrix(q), rx_matrix(-q)),
        mat2_mul(rx_matrix(q), ry_matrix(q)),
        mat2_mul(rx_matrix(q), ry_matrix(-q)),
    };
    Rng rng(seed);
    std::vector<Mat2> out(n);
    for (int i = 0; i < n; ++i) out[i] = set[rng.uniform_int(6)];
    return out;
}

ParamVector init_params(const CircuitSpec& spec, const InitSpec& init) {
    const int p = spec.param_count();
    ParamVector theta(p, 0.0);
    Rng rng(init.seed);
    switch (init.scheme) {
    case InitScheme::ZERO:
        break;
    case InitScheme::UNIFORM:
        for (double& t : theta) t = rng.uniform(0.0, 2.0 * Rng::kPi);
        break;
    case InitScheme::PLAIN_GAUSS: {
        if (!init.sigma2 || *init.sigma2 <= 0.0) {
            throw_config("plain_gauss init needs sigma2 > 0");
        }
        const double sigma = std::sqrt(*init.sigma2);
        for (double& t : theta) t = rng.normal(0.0, sigma);
        break;
    }
    case InitScheme::ENHANCED_GAUSS: {
        if (init.c_coeff <= 0.0) {
            throw_config("enhanced_gauss init needs c_coeff > 0");
        }
        const double sigma = std::sqrt(init.c_coeff / spec.layers);
        for (double& t : theta) t = rng.normal(0.0, sigma);
        break;
    }
    }
    return theta;
}

namespace {

double sample_variance(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(n - 1);
}

} // namespace

std::vector<ScanRow> grad_variance_scan(int n,
                                        const std::vector<int>& layer_list,
                                        const InitSpec& init, int samples,
                                        const Hamiltonian* observable,
                                        int threads) {
    if (samples < 100) {
        throw_config("grad_variance_scan: need samples >= 100");
    }
    Hamiltonian default_obs =
        Hamiltonian::build(n, {{{{0, PauliAxis::Z}, {1, PauliAxis::Z}}, 1.0}});
    const Hamiltonian& obs = observable ? *observable : default_obs;
    if (obs.terms().empty()) {
        throw_validation("grad_variance_scan: observable is the zero operator");
    }
    if (obs.n_qubits() != n) {
        throw_shape("grad_variance_scan: observable qubit count mismatch");
    }

    std::vector<ScanRow> rows;
    for (int L : layer_list) {
        std::vector<double> grads(samples, 0.0);
        parallel_for(
            static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
                const std::uint64_t twirl_seed =
                    derive_seed(init.seed, {static_cast<std::uint64_t>(L), i, 0});
                const std::uint64_t theta_seed =
                    derive_seed(init.seed, {static_cast<std::uint64_t>(L), i, 1});
                CircuitSpec spec = hea_t1(n, L, sample_twirl(n, twirl_seed));
                InitSpec per_sample = init;
                per_sample.seed = theta_seed;
                const ParamVector theta = init_params(spec, per_sample);

                // Differentiate the fixed mid-circuit coordinate
                // (layer L/2, d = 0, qubit 0).
                const int j = spec.param_id({L / 2, 0, 0});
                Mask mask(spec.param_count(), 0);
                mask[j] = 1;
                EvalCounter counter;
                const GradientVector g =
                    parameter_shift_gradient(spec, theta, obs, mask, counter);
                grads[i] = g.values[j];
            });

        ScanRow row;
        row.layers = L;
        row.variance = sample_variance(grads);
        row.scheme = init.scheme;
        row.n_qubits = n;
        row.samples = samples;
        row.seed = init.seed;

        // Percentile bootstrap for the variance, 1000 resamples.
        Rng boot(derive_seed(init.seed, {static_cast<std::uint64_t>(L), 0xB351}));
        const int B = 1000;
        std::vector<double> boot_vars(B);
        std::vector<double> resample(samples);
        for (int b = 0; b < B; ++b) {
            for (int i = 0; i < samples; ++i) {
                resample[i] =
                    grads[boot.uniform_int(static_cast<std::uint64_t>(samples))];
            }
            boot_vars[b] = sample_variance(resample);
        }
        std::sort(boot_vars.begin(), boot_vars.end());
        row.ci_low = boot_vars[static_cast<int>(0.025 * (B - 1))];
        row.ci_high = boot_vars[static_cast<int>(0.975 * (B - 1))];
        rows.push_back(row);
    }
    return rows;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "L,variance,ci_low,ci_high,scheme,n,samples,seed\n";
    for (const ScanRow& r : rows) {
        out << r.layers << ',' << r.variance << ',' << r.ci_low << ','
            << r.ci_high << ',' << scheme_name(r.scheme) << ',' << r.n_qubits
            << ',' << r.samples << ',' << r.seed << '\n';
    }
    return out.str();
}

} // namespace titan
