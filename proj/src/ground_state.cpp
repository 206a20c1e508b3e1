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

#include "titan/ground_state.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>

#include "titan/common.hpp"

namespace titan {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr int kDenseMaxQubits = 10;
constexpr int kIterativeMaxQubits = 20;

double residual_norm_of(const Hamiltonian& h, const StateVector& v,
                        double energy) {
    StateVector hv = h.apply(v);
    double s = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        s += std::norm(hv.amps[i] - energy * v.amps[i]);
    }
    return std::sqrt(s);
}

GroundStateResult dense_ground(const Hamiltonian& h) {
    const Eigen::MatrixXcd m = dense_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::Convergence,
                    "dense eigensolver failed to converge");
    }
    Eigen::Index best = 0;
    solver.eigenvalues().minCoeff(&best);

    StateVector v;
    v.n_qubits = h.n_qubits();
    v.amps.resize(m.rows());
    const auto col = solver.eigenvectors().col(best);
    for (Eigen::Index i = 0; i < m.rows(); ++i) v.amps[i] = col(i);

    GroundStateResult r;
    r.energy = solver.eigenvalues()(best);
    r.residual_norm = residual_norm_of(h, v, r.energy);
    r.method = EigenMethod::Dense;
    if (r.residual_norm > kResidualTol) {
        throw Error(ErrorKind::Convergence,
                    "dense eigenpair residual " +
                        std::to_string(r.residual_norm) + " exceeds 1e-8");
    }
    return r;
}

using Vec = std::vector<cplx>;

double vec_norm(const Vec& v) {
    double s = 0.0;
    for (const cplx& a : v) s += std::norm(a);
    return std::sqrt(s);
}

void scale(Vec& v, double f) {
    for (cplx& a : v) a *= f;
}

// y -= c * x
void axpy(Vec& y, const cplx& c, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * x[i];
}

cplx dot(const Vec& a, const Vec& b) {
    cplx s{0, 0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

Vec ham_apply(const Hamiltonian& h, const Vec& v) {
    StateVector s;
    s.n_qubits = h.n_qubits();
    s.amps = v;
    return h.apply(s).amps;
}

// One Lanczos sweep from start vector `q1` (assumed normalized). Runs the
// three-term recurrence for up to m steps, recording alpha/beta. When
// `basis` is non-null the Krylov vectors are stored and each new vector is
// reorthogonalized against all previous ones.
struct SweepResult {
    std::vector<double> alpha;
    std::vector<double> beta; // beta[j] couples step j and j+1
    int steps = 0;
};

SweepResult lanczos_sweep(const Hamiltonian& h, const Vec& q1, int m,
                          std::vector<Vec>* basis) {
    SweepResult r;
    Vec q_prev(q1.size(), cplx{0, 0});
    Vec q = q1;
    if (basis) basis->push_back(q);
    double beta_prev = 0.0;

    for (int j = 0; j < m; ++j) {
        Vec w = ham_apply(h, q);
        const double alpha = dot(q, w).real();
        r.alpha.push_back(alpha);
        axpy(w, cplx{alpha, 0}, q);
        if (j > 0) axpy(w, cplx{beta_prev, 0}, q_prev);
        if (basis) {
            // Full reorthogonalization (twice is enough).
            for (int pass = 0; pass < 2; ++pass) {
                for (const Vec& b : *basis) axpy(w, dot(b, w), b);
            }
        }
        const double beta = vec_norm(w);
        r.steps = j + 1;
        if (beta < 1e-13) break; // invariant subspace reached
        r.beta.push_back(beta);
        scale(w, 1.0 / beta);
        q_prev = std::move(q);
        q = std::move(w);
        if (basis) basis->push_back(q);
        beta_prev = beta;
    }
    return r;
}

// Smallest Ritz pair of the tridiagonal (alpha, beta) truncated to k steps.
struct RitzPair {
    double value;
    Eigen::VectorXd vector; // length k
};

RitzPair tridiag_min(const std::vector<double>& alpha,
                     const std::vector<double>& beta, int k) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) {
        t(i, i + 1) = beta[i];
        t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    Eigen::Index best = 0;
    solver.eigenvalues().minCoeff(&best);
    return {solver.eigenvalues()(best), solver.eigenvectors().col(best)};
}

GroundStateResult lanczos_ground(const Hamiltonian& h) {
    const std::size_t dim = std::size_t{1} << h.n_qubits();
    // Up to ~16k amplitudes the full Krylov basis fits comfortably in
    // memory; beyond that the Ritz vector is rebuilt in a second pass.
    const bool store_basis = dim <= (std::size_t{1} << 14);
    const int m = static_cast<int>(
        std::min<std::size_t>(dim, store_basis ? 300 : 200));
    const int max_restarts = 24;

    Rng rng(0x1a2c5bd3ULL); // fixed stream; restarts refine deterministically
    Vec q(dim);
    for (cplx& a : q) a = cplx{rng.normal(), rng.normal()};
    scale(q, 1.0 / vec_norm(q));

    GroundStateResult r;
    r.method = EigenMethod::Iterative;

    for (int restart = 0; restart < max_restarts; ++restart) {
        std::vector<Vec> basis_storage;
        std::vector<Vec>* basis = store_basis ? &basis_storage : nullptr;
        SweepResult sweep = lanczos_sweep(h, q, m, basis);
        const int k = sweep.steps;
        RitzPair ritz = tridiag_min(sweep.alpha, sweep.beta, k);

        // Assemble the Ritz vector: y = sum_j u_j q_j.
        Vec y(dim, cplx{0, 0});
        if (basis) {
            for (int j = 0; j < k; ++j) {
                const double u = ritz.vector(j);
                const Vec& b = basis_storage[j];
                for (std::size_t i = 0; i < dim; ++i) y[i] += u * b[i];
            }
        } else {
            // Second pass: replay the recurrence (deterministic) and
            // accumulate on the fly.
            Vec q_prev(dim, cplx{0, 0});
            Vec qq = q;
            double beta_prev = 0.0;
            for (int j = 0; j < k; ++j) {
                const double u = ritz.vector(j);
                for (std::size_t i = 0; i < dim; ++i) y[i] += u * qq[i];
                if (j + 1 == k) break;
                Vec w = ham_apply(h, qq);
                axpy(w, cplx{sweep.alpha[j], 0}, qq);
                if (j > 0) axpy(w, cplx{beta_prev, 0}, q_prev);
                scale(w, 1.0 / sweep.beta[j]);
                q_prev = std::move(qq);
                qq = std::move(w);
                beta_prev = sweep.beta[j];
            }
        }
        const double ynorm = vec_norm(y);
        if (ynorm < 1e-13) continue; // pathological cancellation; retry
        scale(y, 1.0 / ynorm);

        StateVector sv;
        sv.n_qubits = h.n_qubits();
        sv.amps = y;
        const double energy = expectation(sv, h);
        const double resid = residual_norm_of(h, sv, energy);
        if (resid <= kResidualTol) {
            r.energy = energy;
            r.residual_norm = resid;
            return r;
        }
        q = std::move(y); // restart from the best estimate so far
    }
    throw Error(ErrorKind::Convergence,
                "Lanczos did not reach residual 1e-8 within restart budget");
}

} // namespace

Eigen::MatrixXcd dense_matrix(const Hamiltonian& h) {
    const std::size_t dim = std::size_t{1} << h.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const PauliString& t : h.terms()) {
        std::uint64_t flip = 0, phase = 0;
        int y = 0;
        for (const auto& [q, axis] : t.factors) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            if (axis != PauliAxis::Z) flip |= bit;
            if (axis != PauliAxis::X) phase |= bit;
            if (axis == PauliAxis::Y) ++y;
        }
        const cplx scale = t.coefficient * kIPow[y & 3];
        for (std::size_t s = 0; s < dim; ++s) {
            const int par = std::popcount(s & phase) & 1;
            m(s ^ flip, s) += par ? -scale : scale;
        }
    }
    return m;
}

GroundStateResult exact_ground_energy(const Hamiltonian& h,
                                      EigenMethod method) {
    if (h.n_qubits() > kIterativeMaxQubits) {
        throw_config("exact_ground_energy: " + std::to_string(h.n_qubits()) +
                     " qubits exceeds the " +
                     std::to_string(kIterativeMaxQubits) + "-qubit limit");
    }
    if (method == EigenMethod::Auto) {
        method = h.n_qubits() <= kDenseMaxQubits ? EigenMethod::Dense
                                                 : EigenMethod::Iterative;
    }
    return method == EigenMethod::Dense ? dense_ground(h) : lanczos_ground(h);
}

} // namespace titan
