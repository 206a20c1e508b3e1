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
#include <map>
#include <string>
#include <vector>

#include "titan/statevector.hpp"

namespace titan {

enum class PauliAxis : std::uint8_t { X, Y, Z };

/// One weighted Pauli string. An empty factor map is the identity term.
/// Each qubit index appears at most once (enforced by the std::map key).
struct PauliString {
    std::map<int, PauliAxis> factors;
    double coefficient = 0.0;
};

/// Weighted sum of Pauli strings, Hermitian by construction (real
/// coefficients). Terms with identical factor maps are merged at build time
/// and exact-zero terms dropped. Immutable after construction and safe to
/// share across threads.
class Hamiltonian {
  public:
    /// Validates indices against n_qubits, merges duplicate factor maps.
    static Hamiltonian build(int n_qubits, std::vector<PauliString> terms);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliString>& terms() const {
        return terms_;
    }

    /// Matrix-free H|v> without materializing the 2^N x 2^N matrix.
    [[nodiscard]] StateVector apply(const StateVector& v) const;

  private:
    Hamiltonian() = default;

    // Compiled per-term bit masks for the matrix-free kernel.
    struct CompiledTerm {
        std::uint64_t flip_mask;  // X and Y factors
        std::uint64_t phase_mask; // Y and Z factors
        int y_count;
        double coefficient;
    };

    int n_qubits_ = 0;
    std::vector<PauliString> terms_;
    std::vector<CompiledTerm> compiled_;
};

/// Open-chain Heisenberg model: sum_{i=0}^{n-2} a X_i X_{i+1} + b Y_i Y_{i+1}
/// + c Z_i Z_{i+1}. Zero-coefficient terms are dropped.
Hamiltonian heisenberg(int n, double a, double b, double c);

/// Open-chain transverse-field Ising model: J sum Z_i Z_{i+1} + h sum X_i.
Hamiltonian tfim(int n, double J, double h);

/// Parses the line-oriented Pauli-sum grammar:
///   optional header `qubits <N>`; term lines `<coefficient> <factor>+`
///   with factor `I` or `[XYZ]<index>`; `#` starts a comment.
Hamiltonian from_pauli_file(const std::string& path);
Hamiltonian parse_pauli_text(const std::string& text);

/// Matrix-free product H|v> (free-function form of Hamiltonian::apply).
StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& v);

/// Re<v|H|v>, computed term-by-term through apply_hamiltonian. Throws if the
/// imaginary part exceeds 1e-10.
double expectation(const StateVector& state, const Hamiltonian& h);

} // namespace titan
