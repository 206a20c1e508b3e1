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

#include <Eigen/Dense>

#include "titan/pauli.hpp"

namespace titan {

enum class EigenMethod { Auto, Dense, Iterative };

struct GroundStateResult {
    double energy = 0.0;
    double residual_norm = 0.0; // ||H v - E v|| of the accepted eigenpair
    EigenMethod method = EigenMethod::Dense;
};

/// Materializes the 2^N x 2^N matrix (test oracle and dense eigensolver
/// input). Only valid for small N.
Eigen::MatrixXcd dense_matrix(const Hamiltonian& h);

/// Lowest eigenvalue of H. Auto picks dense decomposition for N <= 10 and a
/// matrix-free Lanczos solver for 11 <= N <= 20. The accepted eigenpair
/// always satisfies ||H v - E v|| <= 1e-8; otherwise a convergence error is
/// thrown. N > 20 is rejected.
GroundStateResult exact_ground_energy(const Hamiltonian& h,
                                      EigenMethod method = EigenMethod::Auto);

} // namespace titan
