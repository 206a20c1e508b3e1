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
#include <string>
#include <vector>

#include "titan/gradient.hpp"
#include "titan/init.hpp"

namespace titan {

/// Adaptive parameter freezing/activation hyperparameters. The lambda bounds
/// must satisfy 0 < f_min < f_max <= 1 and 1 < a_min < a_max.
struct ApfaConfig {
    double alpha = 0.9;       // EMA smoothing factor, in (0, 1)
    double noise_std = 0.01;  // exploration noise std, >= 0
    double epsilon = 1e-8;    // decay-ratio denominator guard
    double lambda_f_min = 0.1;
    double lambda_f_max = 0.5;
    double lambda_a_min = 1.5;
    double lambda_a_max = 3.0;
    int n_freeze_patience = 5;   // N_f
    int n_activate_patience = 3; // N_a
    double eta = 0.05;           // learning rate
    int max_iters = 300;         // T
    std::uint64_t seed = 0;      // noise stream
    bool record_theta = false;   // keep the full theta history (debug)
    // Frozen parameters are not measured, so their EMA entry cannot track
    // the true gradient. `true` decays it as if the gradient were zero
    // (self-limiting freezing pressure); `false` holds the last value.
    bool ema_decay_frozen = true;

    void validate() const;
};

/// Per-iteration threshold bundle: the decay ratio r_t (clamped to [0, 1]),
/// the modulated scale factors, and the freeze/activate thresholds
/// tau_f = lambda_f * mean(ema), tau_a = lambda_a * tau_f.
struct ApfaThresholds {
    double r = 0.0;
    double lambda_f = 0.0;
    double lambda_a = 0.0;
    double tau_f = 0.0;
    double tau_a = 0.0;
};

/// Mutable optimizer state across iterations.
struct ApfaState {
    ParamVector theta;
    std::vector<double> ema; // EMA of |gradient|, frozen entries held
    Mask mask;               // 1 = active
    std::vector<int> freeze_counters;
    std::vector<int> activate_counters;
    double g0_norm = 0.0;
    int iter = 0;
};

/// Full run record. Row t of `masks` is the active set in effect for
/// gradient call t, so column sums C tie the mask history to the eval
/// counter exactly: shift_evals == 2 * sum(C). There are T+1 rows: calls
/// t = 0..T-1 precede parameter updates, call T only logs the final state.
struct ApfaTrajectory {
    std::string algorithm; // "apfa" | "baseline" | "random_freeze" | "frozen_set"
    int param_count = 0;
    std::vector<Mask> masks;            // (T+1) x P
    std::vector<int> cumulative;        // C[i] = sum_t masks[t][i]
    std::vector<double> energies;       // E(theta_t), length T+1
    std::vector<double> grad_norms;     // ||g_t||_2, length T+1
    EvalCounter counter;
    bool diverged = false;
    ApfaConfig config;
    std::uint64_t seed = 0;

    // Audit streams (not serialized): one row per mask-update step.
    std::vector<ApfaThresholds> thresholds_log;
    std::vector<Mask> below_freeze;   // ema < tau_f at that step
    std::vector<Mask> above_activate; // ema > tau_a at that step
    std::vector<ParamVector> theta_log; // only with config.record_theta

    [[nodiscard]] ParamVector final_theta() const { return final_theta_; }
    ParamVector final_theta_;
};

/// EMA of absolute gradients. Frozen coordinates carry no measurement;
/// with decay_frozen their entry relaxes toward zero, otherwise it holds.
void ema_update(std::vector<double>& ema, const std::vector<double>& grad,
                double alpha, const Mask& active, bool decay_frozen = true);

ApfaThresholds thresholds(double grad_norm, double g0_norm,
                          const std::vector<double>& ema,
                          const ApfaConfig& config);

/// One counter/transition step. Counters tick for every coordinate; an
/// active coordinate freezes once c_f reaches N_f, a frozen one reactivates
/// once c_a reaches N_a; both transitions reset the coordinate's counters.
void mask_update(ApfaState& state, const ApfaThresholds& th,
                 const ApfaConfig& config);

ApfaTrajectory apfa_run(const CircuitSpec& spec, const Hamiltonian& h,
                        const ParamVector& theta0, const ApfaConfig& config);
ApfaTrajectory apfa_run(const CircuitSpec& spec, const Hamiltonian& h,
                        const InitSpec& init, const ApfaConfig& config);

/// Plain gradient descent; mask stays all-ones.
ApfaTrajectory baseline_run(const CircuitSpec& spec, const Hamiltonian& h,
                            const ParamVector& theta0, double eta, int iters);

/// Gradient descent with a fixed frozen set (the inference-time strategy).
ApfaTrajectory frozen_set_run(const CircuitSpec& spec, const Hamiltonian& h,
                              const ParamVector& theta0,
                              const std::vector<int>& frozen_ids, double eta,
                              int iters);

/// Freezes `frozen_count` coordinates chosen uniformly without replacement
/// at t = 0 for the whole run.
ApfaTrajectory random_freeze_run(const CircuitSpec& spec, const Hamiltonian& h,
                                 const ParamVector& theta0, int frozen_count,
                                 double eta, int iters, std::uint64_t seed);

/// intensity[i] = 1 - C[i] / rows: the fraction of gradient calls for which
/// parameter i was frozen. Always in [0, 1].
std::vector<double> freeze_intensity(const ApfaTrajectory& traj);

/// Replays the recorded comparator streams through the patience automaton
/// and checks every mask transition against them. ok == false comes with a
/// human-readable reason.
struct AuditResult {
    bool ok = true;
    std::string message;
};
AuditResult audit_mask_legality(const ApfaTrajectory& traj);

/// JSON round-trip (config echo, energies, grad norms, run-length-encoded
/// mask rows, C vector, counter totals).
std::string trajectory_to_json(const ApfaTrajectory& traj);
ApfaTrajectory trajectory_from_json(const std::string& text);

} // namespace titan
