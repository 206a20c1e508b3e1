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

#include "titan/apfa.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"

namespace titan {

void ApfaConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw_config("apfa: alpha must lie in (0, 1)");
    }
    if (!(noise_std >= 0.0)) throw_config("apfa: noise_std must be >= 0");
    if (!(epsilon > 0.0)) throw_config("apfa: epsilon must be > 0");
    if (!(0.0 < lambda_f_min && lambda_f_min < lambda_f_max &&
          lambda_f_max <= 1.0)) {
        throw_config("apfa: need 0 < lambda_f_min < lambda_f_max <= 1");
    }
    if (!(1.0 < lambda_a_min && lambda_a_min < lambda_a_max)) {
        throw_config("apfa: need 1 < lambda_a_min < lambda_a_max");
    }
    if (n_freeze_patience < 1 || n_activate_patience < 1) {
        throw_config("apfa: patience lengths must be positive");
    }
    if (!(eta > 0.0)) throw_config("apfa: eta must be > 0");
    if (max_iters < 1) throw_config("apfa: max_iters must be >= 1");
}

void ema_update(std::vector<double>& ema, const std::vector<double>& grad,
                double alpha, const Mask& active, bool decay_frozen) {
    if (ema.size() != grad.size() || ema.size() != active.size()) {
        throw_shape("ema_update: size mismatch");
    }
    for (std::size_t i = 0; i < ema.size(); ++i) {
        if (!active[i]) {
            if (decay_frozen) ema[i] = alpha * ema[i];
            continue;
        }
        ema[i] = alpha * ema[i] + (1.0 - alpha) * std::abs(grad[i]);
    }
}

ApfaThresholds thresholds(double grad_norm, double g0_norm,
                          const std::vector<double>& ema,
                          const ApfaConfig& config) {
    ApfaThresholds th;
    th.r = grad_norm / (g0_norm + config.epsilon);
    th.r = std::min(1.0, std::max(0.0, th.r));
    th.lambda_f = config.lambda_f_min +
                  (1.0 - th.r) * (config.lambda_f_max - config.lambda_f_min);
    th.lambda_a = config.lambda_a_min +
                  (1.0 - th.r) * (config.lambda_a_max - config.lambda_a_min);
    const double mean_ema =
        ema.empty() ? 0.0
                    : std::accumulate(ema.begin(), ema.end(), 0.0) /
                          static_cast<double>(ema.size());
    th.tau_f = th.lambda_f * mean_ema;
    th.tau_a = th.lambda_a * th.tau_f;
    return th;
}

void mask_update(ApfaState& state, const ApfaThresholds& th,
                 const ApfaConfig& config) {
    const std::size_t p = state.mask.size();
    for (std::size_t i = 0; i < p; ++i) {
        if (state.ema[i] < th.tau_f) {
            ++state.freeze_counters[i];
        } else {
            state.freeze_counters[i] = 0;
        }
        if (state.ema[i] > th.tau_a) {
            ++state.activate_counters[i];
        } else {
            state.activate_counters[i] = 0;
        }
        if (state.mask[i] &&
            state.freeze_counters[i] >= config.n_freeze_patience) {
            state.mask[i] = 0;
            state.freeze_counters[i] = 0;
            state.activate_counters[i] = 0;
        } else if (!state.mask[i] &&
                   state.activate_counters[i] >= config.n_activate_patience) {
            state.mask[i] = 1;
            state.freeze_counters[i] = 0;
            state.activate_counters[i] = 0;
        }
    }
}

namespace {

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void finish(ApfaTrajectory& traj, const ParamVector& theta) {
    traj.cumulative.assign(traj.param_count, 0);
    for (const Mask& row : traj.masks) {
        for (int i = 0; i < traj.param_count; ++i) {
            traj.cumulative[i] += row[i];
        }
    }
    traj.final_theta_ = theta;
}

// Shared fixed-mask descent: baseline, random freeze, and predicted-mask
// runs differ only in the mask they start from.
ApfaTrajectory fixed_mask_run(const CircuitSpec& spec, const Hamiltonian& h,
                              const ParamVector& theta0, const Mask& mask,
                              double eta, int iters, const char* algorithm) {
    if (!(eta > 0.0)) throw_config("run: eta must be > 0");
    if (iters < 1) throw_config("run: iteration count must be >= 1");
    const int p = spec.param_count();

    ApfaTrajectory traj;
    traj.algorithm = algorithm;
    traj.param_count = p;
    traj.config.eta = eta;
    traj.config.max_iters = iters;
    traj.config.noise_std = 0.0;

    ParamVector theta = theta0;
    for (int t = 0; t <= iters; ++t) {
        const double e = energy(spec, theta, h, traj.counter);
        if (!std::isfinite(e)) {
            traj.diverged = true;
            break;
        }
        traj.energies.push_back(e);
        traj.masks.push_back(mask);
        const GradientVector g =
            parameter_shift_gradient(spec, theta, h, mask, traj.counter);
        traj.grad_norms.push_back(l2_norm(g.values));
        if (t == iters) break;
        for (int i = 0; i < p; ++i) {
            if (mask[i]) theta[i] -= eta * g.values[i];
        }
    }
    finish(traj, theta);
    return traj;
}

} // namespace

ApfaTrajectory apfa_run(const CircuitSpec& spec, const Hamiltonian& h,
                        const ParamVector& theta0, const ApfaConfig& config) {
    config.validate();
    const int p = spec.param_count();
    if (static_cast<int>(theta0.size()) != p) {
        throw_shape("apfa_run: theta0 length mismatch");
    }

    ApfaState state;
    state.theta = theta0;
    state.ema.assign(p, 0.0);
    state.mask.assign(p, 1);
    state.freeze_counters.assign(p, 0);
    state.activate_counters.assign(p, 0);

    ApfaTrajectory traj;
    traj.algorithm = "apfa";
    traj.param_count = p;
    traj.config = config;
    traj.seed = config.seed;

    Rng noise_rng(derive_seed(config.seed, {0x40154})); // xi_t stream
    const int T = config.max_iters;

    for (int t = 0; t <= T; ++t) {
        state.iter = t;
        const double e = energy(spec, state.theta, h, traj.counter);
        if (!std::isfinite(e)) {
            traj.diverged = true;
            break;
        }
        traj.energies.push_back(e);
        traj.masks.push_back(state.mask);
        if (config.record_theta) traj.theta_log.push_back(state.theta);

        GradientVector g = parameter_shift_gradient(spec, state.theta, h,
                                                    state.mask, traj.counter);
        if (config.noise_std > 0.0) {
            for (int i = 0; i < p; ++i) {
                if (state.mask[i]) {
                    g.values[i] += noise_rng.normal(0.0, config.noise_std);
                }
            }
        }
        const double gnorm = l2_norm(g.values);
        if (!std::isfinite(gnorm)) {
            traj.energies.pop_back();
            traj.masks.pop_back();
            traj.diverged = true;
            break;
        }
        traj.grad_norms.push_back(gnorm);

        if (t == 0) {
            state.g0_norm = gnorm;
            for (int i = 0; i < p; ++i) state.ema[i] = std::abs(g.values[i]);
        } else {
            ema_update(state.ema, g.values, config.alpha, state.mask,
                       config.ema_decay_frozen);
        }
        if (t == T) break; // final call only logs

        const ApfaThresholds th =
            thresholds(gnorm, state.g0_norm, state.ema, config);
        traj.thresholds_log.push_back(th);
        Mask below(p), above(p);
        for (int i = 0; i < p; ++i) {
            below[i] = state.ema[i] < th.tau_f ? 1 : 0;
            above[i] = state.ema[i] > th.tau_a ? 1 : 0;
        }
        traj.below_freeze.push_back(std::move(below));
        traj.above_activate.push_back(std::move(above));

        mask_update(state, th, config);
        for (int i = 0; i < p; ++i) {
            if (state.mask[i]) state.theta[i] -= config.eta * g.values[i];
        }
    }
    finish(traj, state.theta);
    return traj;
}

ApfaTrajectory apfa_run(const CircuitSpec& spec, const Hamiltonian& h,
                        const InitSpec& init, const ApfaConfig& config) {
    return apfa_run(spec, h, init_params(spec, init), config);
}

ApfaTrajectory baseline_run(const CircuitSpec& spec, const Hamiltonian& h,
                            const ParamVector& theta0, double eta, int iters) {
    if (static_cast<int>(theta0.size()) != spec.param_count()) {
        throw_shape("baseline_run: theta0 length mismatch");
    }
    Mask all(spec.param_count(), 1);
    return fixed_mask_run(spec, h, theta0, all, eta, iters, "baseline");
}

ApfaTrajectory frozen_set_run(const CircuitSpec& spec, const Hamiltonian& h,
                              const ParamVector& theta0,
                              const std::vector<int>& frozen_ids, double eta,
                              int iters) {
    const int p = spec.param_count();
    if (static_cast<int>(theta0.size()) != p) {
        throw_shape("frozen_set_run: theta0 length mismatch");
    }
    Mask mask(p, 1);
    for (int id : frozen_ids) {
        if (id < 0 || id >= p) {
            throw_validation("frozen_set_run: parameter id " +
                             std::to_string(id) + " out of range");
        }
        mask[id] = 0;
    }
    return fixed_mask_run(spec, h, theta0, mask, eta, iters, "frozen_set");
}

ApfaTrajectory random_freeze_run(const CircuitSpec& spec, const Hamiltonian& h,
                                 const ParamVector& theta0, int frozen_count,
                                 double eta, int iters, std::uint64_t seed) {
    const int p = spec.param_count();
    if (frozen_count < 0 || frozen_count > p) {
        throw_validation("random_freeze_run: frozen_count " +
                         std::to_string(frozen_count) + " outside [0, " +
                         std::to_string(p) + "]");
    }
    std::vector<int> ids(p);
    std::iota(ids.begin(), ids.end(), 0);
    Rng rng(derive_seed(seed, {0xF4EE2E}));
    rng.shuffle(ids);
    ids.resize(frozen_count);
    ApfaTrajectory traj = frozen_set_run(spec, h, theta0, ids, eta, iters);
    traj.algorithm = "random_freeze";
    traj.seed = seed;
    return traj;
}

std::vector<double> freeze_intensity(const ApfaTrajectory& traj) {
    if (traj.masks.empty()) {
        throw_validation("freeze_intensity: empty trajectory");
    }
    const double rows = static_cast<double>(traj.masks.size());
    std::vector<double> intensity(traj.param_count, 0.0);
    for (int i = 0; i < traj.param_count; ++i) {
        intensity[i] = 1.0 - static_cast<double>(traj.cumulative[i]) / rows;
    }
    return intensity;
}

AuditResult audit_mask_legality(const ApfaTrajectory& traj) {
    const int p = traj.param_count;
    const std::size_t steps = traj.below_freeze.size();
    if (traj.masks.size() != steps + 1 && traj.algorithm == "apfa" &&
        !traj.diverged) {
        return {false, "mask rows do not match comparator stream length"};
    }
    std::vector<int> cf(p, 0), ca(p, 0);
    Mask mask = traj.masks.empty() ? Mask(p, 1) : traj.masks.front();
    for (int i = 0; i < p; ++i) {
        if (!mask[i]) return {false, "initial mask row must be all-active"};
    }
    const int nf = traj.config.n_freeze_patience;
    const int na = traj.config.n_activate_patience;
    for (std::size_t t = 0; t < steps; ++t) {
        for (int i = 0; i < p; ++i) {
            if (traj.below_freeze[t][i]) ++cf[i]; else cf[i] = 0;
            if (traj.above_activate[t][i]) ++ca[i]; else ca[i] = 0;
            if (mask[i] && cf[i] >= nf) {
                mask[i] = 0;
                cf[i] = 0;
                ca[i] = 0;
            } else if (!mask[i] && ca[i] >= na) {
                mask[i] = 1;
                cf[i] = 0;
                ca[i] = 0;
            }
        }
        if (t + 1 >= traj.masks.size()) break;
        for (int i = 0; i < p; ++i) {
            if (mask[i] != traj.masks[t + 1][i]) {
                return {false, "illegal transition of parameter " +
                                   std::to_string(i) + " at step " +
                                   std::to_string(t + 1)};
            }
        }
    }
    return {true, ""};
}

namespace {

using nlohmann::json;

json rle_encode(const Mask& row) {
    json out = json::array();
    if (row.empty()) return out;
    out.push_back(static_cast<int>(row[0]));
    int run = 1;
    for (std::size_t i = 1; i < row.size(); ++i) {
        if (row[i] == row[i - 1]) {
            ++run;
        } else {
            out.push_back(run);
            run = 1;
        }
    }
    out.push_back(run);
    return out;
}

Mask rle_decode(const json& enc, int p) {
    Mask row;
    row.reserve(p);
    if (enc.empty()) return row;
    std::uint8_t bit = enc[0].get<int>() ? 1 : 0;
    for (std::size_t k = 1; k < enc.size(); ++k) {
        const int run = enc[k].get<int>();
        row.insert(row.end(), run, bit);
        bit ^= 1;
    }
    if (static_cast<int>(row.size()) != p) {
        throw_config("trajectory json: RLE row length mismatch");
    }
    return row;
}

json config_to_json(const ApfaConfig& c) {
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

ApfaConfig config_from_json(const json& j) {
    ApfaConfig c;
    c.alpha = j.at("alpha").get<double>();
    c.noise_std = j.at("noise_std").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.lambda_f_min = j.at("lambda_f_min").get<double>();
    c.lambda_f_max = j.at("lambda_f_max").get<double>();
    c.lambda_a_min = j.at("lambda_a_min").get<double>();
    c.lambda_a_max = j.at("lambda_a_max").get<double>();
    c.n_freeze_patience = j.at("n_freeze_patience").get<int>();
    c.n_activate_patience = j.at("n_activate_patience").get<int>();
    c.eta = j.at("eta").get<double>();
    c.max_iters = j.at("max_iters").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

} // namespace

std::string trajectory_to_json(const ApfaTrajectory& traj) {
    json j;
    j["algorithm"] = traj.algorithm;
    j["param_count"] = traj.param_count;
    j["config"] = config_to_json(traj.config);
    j["energies"] = traj.energies;
    j["grad_norms"] = traj.grad_norms;
    json rows = json::array();
    for (const Mask& m : traj.masks) rows.push_back(rle_encode(m));
    j["masks_rle"] = std::move(rows);
    j["C"] = traj.cumulative;
    j["counter"] = {{"energy_evals", traj.counter.energy_evals},
                    {"shift_evals", traj.counter.shift_evals}};
    j["diverged"] = traj.diverged;
    j["seed"] = traj.seed;
    return j.dump();
}

ApfaTrajectory trajectory_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw_config(std::string("trajectory json: ") + e.what());
    }
    ApfaTrajectory traj;
    traj.algorithm = j.at("algorithm").get<std::string>();
    traj.param_count = j.at("param_count").get<int>();
    traj.config = config_from_json(j.at("config"));
    traj.energies = j.at("energies").get<std::vector<double>>();
    traj.grad_norms = j.at("grad_norms").get<std::vector<double>>();
    for (const json& row : j.at("masks_rle")) {
        traj.masks.push_back(rle_decode(row, traj.param_count));
    }
    traj.cumulative = j.at("C").get<std::vector<int>>();
    traj.counter.energy_evals = j.at("counter").at("energy_evals").get<std::int64_t>();
    traj.counter.shift_evals = j.at("counter").at("shift_evals").get<std::int64_t>();
    traj.diverged = j.at("diverged").get<bool>();
    traj.seed = j.at("seed").get<std::uint64_t>();
    return traj;
}

} // namespace titan
