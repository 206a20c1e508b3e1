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

#include <array>
#include <complex>
#include <vector>

#include "titan/common.hpp"

namespace titan {

using cplx = std::complex<double>;

/// Dense amplitude vector over n qubits. Little-endian convention: qubit q
/// is bit q of the basis index (bit 0 = qubit 0).
struct StateVector {
    int n_qubits = 0;
    std::vector<cplx> amps;

    [[nodiscard]] std::size_t dim() const { return amps.size(); }
    [[nodiscard]] double norm_sq() const;
};

inline constexpr int kMaxQubits = 24; // 2^24 complex doubles ~ 256 MB

/// |0...0> on n qubits.
StateVector zero_state(int n);

enum class GateKind { RX, RY, RZ, CNOT, CZ, Fixed1Q };

/// 2x2 complex matrix in row-major order.
using Mat2 = std::array<cplx, 4>;

/// One gate instance. Rotations follow R_P(theta) = exp(-i theta P / 2).
struct Gate {
    GateKind kind = GateKind::RX;
    int target = 0;
    int control = -1;   // CNOT control / CZ first qubit
    double angle = 0.0; // rotations only
    Mat2 matrix{};      // Fixed1Q only

    static Gate rx(int q, double theta) { return {GateKind::RX, q, -1, theta, {}}; }
    static Gate ry(int q, double theta) { return {GateKind::RY, q, -1, theta, {}}; }
    static Gate rz(int q, double theta) { return {GateKind::RZ, q, -1, theta, {}}; }
    static Gate cnot(int control, int target) {
        return {GateKind::CNOT, target, control, 0.0, {}};
    }
    static Gate cz(int a, int b) { return {GateKind::CZ, b, a, 0.0, {}}; }
    /// Validates unitarity of `m` within 1e-12.
    static Gate fixed1q(int q, const Mat2& m);
};

/// Rotation matrices as 2x2 (useful for test oracles and twirl products).
Mat2 rx_matrix(double theta);
Mat2 ry_matrix(double theta);
Mat2 rz_matrix(double theta);
Mat2 mat2_mul(const Mat2& a, const Mat2& b);
bool mat2_is_unitary(const Mat2& m, double tol = 1e-12);

/// Applies one gate in place. Norm is preserved to within 1e-12.
void apply_gate(StateVector& state, const Gate& g);

} // namespace titan
