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

#include "titan/statevector.hpp"

namespace titan {

enum class Family { HEA, HEA_T1, SU2, SEL, UNSTRUCTURED };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// One gate slot of a circuit. Tunable slots (param_id >= 0) are RX/RY/RZ
/// whose angle comes from the parameter vector; fixed slots replay `gate`
/// verbatim.
struct Slot {
    Gate gate;
    int param_id = -1;

    [[nodiscard]] bool tunable() const { return param_id >= 0; }
};

/// (layer, slot-within-layer, qubit) coordinate of one parameter.
struct ParamCoord {
    int layer = 0; // l in [0, L)
    int slot = 0;  // d in [0, D)
    int qubit = 0; // q in [0, W)
};

using ParamVector = std::vector<double>;

/// Parameterized circuit layout. Parameter ids are contiguous 0..P-1 in
/// circuit order, with the canonical mapping id = l*D*W + d*W + q. For
/// structured families the grid width W equals n_qubits and P = L*D*N; an
/// unstructured circuit degenerates to a 1 x 1 x P grid. Immutable after
/// construction.
struct CircuitSpec {
    Family family = Family::HEA;
    int n_qubits = 0;       // physical qubit count
    int layers = 1;         // grid L
    int slots_per_qubit = 1; // grid D
    int grid_width = 0;     // grid W (= n_qubits unless UNSTRUCTURED)
    std::vector<Slot> slots;
    std::vector<ParamCoord> coords; // indexed by parameter id
    std::vector<Mat2> twirl;        // HEA_T1 only: the layer-0 fixed layer

    [[nodiscard]] int param_count() const {
        return static_cast<int>(coords.size());
    }
    [[nodiscard]] int param_id(const ParamCoord& c) const {
        return (c.layer * slots_per_qubit + c.slot) * grid_width + c.qubit;
    }
    [[nodiscard]] const ParamCoord& coord(int param_id) const {
        return coords.at(param_id);
    }
};

/// Hardware-efficient ansatz: per layer an RX on every qubit (D = 1)
/// followed by a CNOT chain i -> i+1. P = l * n.
CircuitSpec hea(int n, int l);

/// Two-sublayer HEA with a fixed single-qubit layer after the first CZ
/// chain: per layer RY sublayer, CZ chain, (layer 0 only) the twirl gates,
/// then a second RY sublayer. D = 2, P = 2 * l * n.
CircuitSpec hea_t1(int n, int l, const std::vector<Mat2>& twirl);

/// RY + RZ sublayers then a CNOT chain. D = 2, P = 2 * l * n.
CircuitSpec su2(int n, int l);

/// RZ + RY + RZ sublayers then a CNOT ring (wraps n-1 -> 0). D = 3,
/// P = 3 * l * n.
CircuitSpec sel(int n, int l);

/// Wraps an arbitrary slot list. Tunable slots are re-numbered 0..p-1 in
/// circuit order and mapped onto a degenerate 1 x p coordinate grid.
CircuitSpec unstructured(int n_qubits, std::vector<Slot> slots);

/// |psi(theta)> = U(theta)|0...0>.
StateVector run_circuit(const CircuitSpec& spec, const ParamVector& theta);

/// JSON round-trip for run reproducibility (twirl matrices as 8 reals each).
std::string circuit_to_json(const CircuitSpec& spec);
CircuitSpec circuit_from_json(const std::string& text);

} // namespace titan
