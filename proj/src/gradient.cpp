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

#include "titan/gradient.hpp"

#include <cmath>

namespace titan {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

double eval(const CircuitSpec& spec, const ParamVector& theta,
            const Hamiltonian& h) {
    const StateVector psi = run_circuit(spec, theta);
    return expectation(psi, h);
}

void check_shapes(const CircuitSpec& spec, const ParamVector& theta,
                  const Hamiltonian& h) {
    if (static_cast<int>(theta.size()) != spec.param_count()) {
        throw_shape("gradient: parameter vector length " +
                    std::to_string(theta.size()) + " != param count " +
                    std::to_string(spec.param_count()));
    }
    if (h.n_qubits() != spec.n_qubits) {
        throw_shape("gradient: Hamiltonian acts on " +
                    std::to_string(h.n_qubits()) + " qubits, circuit on " +
                    std::to_string(spec.n_qubits));
    }
}

void check_pauli_generators(const CircuitSpec& spec) {
    for (const Slot& s : spec.slots) {
        if (!s.tunable()) continue;
        if (s.gate.kind != GateKind::RX && s.gate.kind != GateKind::RY &&
            s.gate.kind != GateKind::RZ) {
            throw_validation(
                "parameter-shift rule supports only Pauli rotations");
        }
    }
}

} // namespace

double energy(const CircuitSpec& spec, const ParamVector& theta,
              const Hamiltonian& h, EvalCounter& counter) {
    check_shapes(spec, theta, h);
    const double e = eval(spec, theta, h);
    counter.energy_evals += 1;
    return e;
}

GradientVector parameter_shift_gradient(const CircuitSpec& spec,
                                        const ParamVector& theta,
                                        const Hamiltonian& h,
                                        const Mask& active_mask,
                                        EvalCounter& counter) {
    check_shapes(spec, theta, h);
    check_pauli_generators(spec);
    const int p = spec.param_count();
    if (static_cast<int>(active_mask.size()) != p) {
        throw_shape("gradient: mask length " +
                    std::to_string(active_mask.size()) + " != param count " +
                    std::to_string(p));
    }

    GradientVector g;
    g.values.assign(p, 0.0);
    g.mask_applied = true;
    std::int64_t active = 0;
    ParamVector shifted = theta;
    for (int j = 0; j < p; ++j) {
        if (!active_mask[j]) continue;
        ++active;
        shifted[j] = theta[j] + kHalfPi;
        const double plus = eval(spec, shifted, h);
        shifted[j] = theta[j] - kHalfPi;
        const double minus = eval(spec, shifted, h);
        shifted[j] = theta[j];
        g.values[j] = 0.5 * (plus - minus);
    }
    counter.shift_evals += 2 * active; // single update per call
    return g;
}

GradientVector parameter_shift_gradient(const CircuitSpec& spec,
                                        const ParamVector& theta,
                                        const Hamiltonian& h,
                                        EvalCounter& counter) {
    Mask all(spec.param_count(), 1);
    GradientVector g = parameter_shift_gradient(spec, theta, h, all, counter);
    g.mask_applied = false;
    return g;
}

GradientVector finite_difference_gradient(const CircuitSpec& spec,
                                          const ParamVector& theta,
                                          const Hamiltonian& h, double step) {
    check_shapes(spec, theta, h);
    if (!(step > 0.0)) throw_config("finite differences need step > 0");
    GradientVector g;
    g.values.assign(spec.param_count(), 0.0);
    ParamVector shifted = theta;
    for (int j = 0; j < spec.param_count(); ++j) {
        shifted[j] = theta[j] + step;
        const double plus = eval(spec, shifted, h);
        shifted[j] = theta[j] - step;
        const double minus = eval(spec, shifted, h);
        shifted[j] = theta[j];
        g.values[j] = (plus - minus) / (2.0 * step);
    }
    return g;
}

} // namespace titan
