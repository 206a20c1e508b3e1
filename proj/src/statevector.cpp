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

#include "titan/statevector.hpp"

#include <cmath>
#include <string>

namespace titan {

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return s;
}

StateVector zero_state(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw_config("zero_state: qubit count " + std::to_string(n) +
                     " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    StateVector s;
    s.n_qubits = n;
    s.amps.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    s.amps[0] = cplx{1.0, 0.0};
    return s;
}

Mat2 rx_matrix(double theta) {
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0);
    return {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}};
}

Mat2 ry_matrix(double theta) {
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0);
    return {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}};
}

Mat2 rz_matrix(double theta) {
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0);
    return {cplx{c, -s}, cplx{0, 0}, cplx{0, 0}, cplx{c, s}};
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

bool mat2_is_unitary(const Mat2& m, double tol) {
    // U U^dag == I entrywise.
    cplx r00 = m[0] * std::conj(m[0]) + m[1] * std::conj(m[1]);
    cplx r01 = m[0] * std::conj(m[2]) + m[1] * std::conj(m[3]);
    cplx r10 = m[2] * std::conj(m[0]) + m[3] * std::conj(m[1]);
    cplx r11 = m[2] * std::conj(m[2]) + m[3] * std::conj(m[3]);
    return std::abs(r00 - 1.0) <= tol && std::abs(r11 - 1.0) <= tol &&
           std::abs(r01) <= tol && std::abs(r10) <= tol;
}

Gate Gate::fixed1q(int q, const Mat2& m) {
    if (!mat2_is_unitary(m)) {
        throw_validation("fixed1q: matrix is not unitary within 1e-12");
    }
    Gate g;
    g.kind = GateKind::Fixed1Q;
    g.target = q;
    g.matrix = m;
    return g;
}

namespace {

void check_index(const StateVector& state, int q, const char* what) {
    if (q < 0 || q >= state.n_qubits) {
        throw_shape(std::string(what) + ": qubit index " + std::to_string(q) +
                    " out of range for " + std::to_string(state.n_qubits) +
                    " qubits");
    }
}

// Applies a 2x2 matrix to qubit q: iterates all index pairs (i0, i1) that
// differ only in bit q.
void apply_1q(StateVector& state, int q, const Mat2& m) {
    const std::size_t bit = std::size_t{1} << q;
    const std::size_t dim = state.dim();
    cplx* a = state.amps.data();
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t lo = base; lo < base + bit; ++lo) {
            const std::size_t hi = lo | bit;
            const cplx x0 = a[lo];
            const cplx x1 = a[hi];
            a[lo] = m[0] * x0 + m[1] * x1;
            a[hi] = m[2] * x0 + m[3] * x1;
        }
    }
}

} // namespace

void apply_gate(StateVector& state, const Gate& g) {
    switch (g.kind) {
    case GateKind::RX:
        check_index(state, g.target, "apply_gate(RX)");
        apply_1q(state, g.target, rx_matrix(g.angle));
        return;
    case GateKind::RY:
        check_index(state, g.target, "apply_gate(RY)");
        apply_1q(state, g.target, ry_matrix(g.angle));
        return;
    case GateKind::RZ:
        check_index(state, g.target, "apply_gate(RZ)");
        apply_1q(state, g.target, rz_matrix(g.angle));
        return;
    case GateKind::Fixed1Q:
        check_index(state, g.target, "apply_gate(Fixed1Q)");
        apply_1q(state, g.target, g.matrix);
        return;
    case GateKind::CNOT: {
        check_index(state, g.control, "apply_gate(CNOT)");
        check_index(state, g.target, "apply_gate(CNOT)");
        if (g.control == g.target) {
            throw_shape("apply_gate(CNOT): control equals target");
        }
        const std::size_t cbit = std::size_t{1} << g.control;
        const std::size_t tbit = std::size_t{1} << g.target;
        const std::size_t dim = state.dim();
        cplx* a = state.amps.data();
        // Swap amplitudes of |c=1,t=0> and |c=1,t=1>.
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
        }
        return;
    }
    case GateKind::CZ: {
        check_index(state, g.control, "apply_gate(CZ)");
        check_index(state, g.target, "apply_gate(CZ)");
        if (g.control == g.target) {
            throw_shape("apply_gate(CZ): qubits must be distinct");
        }
        const std::size_t mask = (std::size_t{1} << g.control) |
                                 (std::size_t{1} << g.target);
        const std::size_t dim = state.dim();
        cplx* a = state.amps.data();
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & mask) == mask) a[i] = -a[i];
        }
        return;
    }
    }
    throw_validation("apply_gate: unknown gate kind");
}

} // namespace titan
