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
#include <vector>

#include "titan/ansatz.hpp"
#include "titan/pauli.hpp"

namespace titan {

/// Exact tally of circuit executions; the proxy for hardware measurement
/// overhead. shift_evals grows by exactly 2 per differentiated parameter
/// per gradient call.
struct EvalCounter {
    std::int64_t energy_evals = 0;
    std::int64_t shift_evals = 0;
};

struct GradientVector {
    std::vector<double> values;
    bool mask_applied = false; // frozen coordinates are exactly 0 when set
};

using Mask = std::vector<std::uint8_t>; // 1 = active, 0 = frozen

/// E(theta) = <psi(theta)|H|psi(theta)>. Bumps counter.energy_evals once.
double energy(const CircuitSpec& spec, const ParamVector& theta,
              const Hamiltonian& h, EvalCounter& counter);

/// Parameter-shift gradient dE/dtheta_j = (E(theta + pi/2 e_j) -
/// E(theta - pi/2 e_j)) / 2, evaluated only where active_mask = 1 (zeros
/// elsewhere). Bumps counter.shift_evals by 2 * |active|.
GradientVector parameter_shift_gradient(const CircuitSpec& spec,
                                        const ParamVector& theta,
                                        const Hamiltonian& h,
                                        const Mask& active_mask,
                                        EvalCounter& counter);

/// All-active convenience overload.
GradientVector parameter_shift_gradient(const CircuitSpec& spec,
                                        const ParamVector& theta,
                                        const Hamiltonian& h,
                                        EvalCounter& counter);

/// Central-difference oracle; not counted (test/audit use).
GradientVector finite_difference_gradient(const CircuitSpec& spec,
                                          const ParamVector& theta,
                                          const Hamiltonian& h, double step);

} // namespace titan
