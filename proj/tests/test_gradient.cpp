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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "titan/gradient.hpp"
#include "titan/ground_state.hpp"
#include "titan/init.hpp"

using namespace titan;

namespace {

CircuitSpec single_ry() {
    Slot s;
    s.gate = Gate::ry(0, 0.0);
    s.param_id = 0;
    return unstructured(1, {s});
}

const Hamiltonian kZ0 = Hamiltonian::build(1, {{{{0, PauliAxis::Z}}, 1.0}});

} // namespace

TEST_CASE("energy of a single-RY circuit is cos(theta)") {
    const CircuitSpec spec = single_ry();
    EvalCounter counter;
    CHECK(energy(spec, {0.0}, kZ0, counter) == doctest::Approx(1.0));
    CHECK(energy(spec, {Rng::kPi}, kZ0, counter) == doctest::Approx(-1.0));
    CHECK(counter.energy_evals == 2);
    CHECK(counter.shift_evals == 0);
    CHECK_THROWS_AS(energy(spec, {0.0, 0.0}, kZ0, counter), Error);
}

TEST_CASE("parameter shift reproduces -sin(theta)") {
    const CircuitSpec spec = single_ry();
    EvalCounter counter;
    const GradientVector at0 =
        parameter_shift_gradient(spec, {0.0}, kZ0, counter);
    CHECK(at0.values[0] == doctest::Approx(0.0).epsilon(1e-14));
    const GradientVector at_half =
        parameter_shift_gradient(spec, {Rng::kPi / 2}, kZ0, counter);
    CHECK(at_half.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(counter.shift_evals == 4);
}

TEST_CASE("finite differences agree with the analytic value") {
    const CircuitSpec spec = single_ry();
    const GradientVector g =
        finite_difference_gradient(spec, {Rng::kPi / 2}, kZ0, 1e-4);
    CHECK(std::abs(g.values[0] - (-1.0)) < 1e-7);

    const Hamiltonian zero_h = Hamiltonian::build(1, {});
    const GradientVector gz =
        finite_difference_gradient(spec, {0.3}, zero_h, 1e-4);
    CHECK(gz.values[0] == 0.0);

    CHECK_THROWS_AS(finite_difference_gradient(spec, {0.3}, kZ0, 0.0), Error);
}

TEST_CASE("parameter shift matches finite differences across families") {
    Rng rng(13);
    const Hamiltonian h = heisenberg(4, 1.1, -0.6, 0.8);
    const std::vector<CircuitSpec> specs = {
        hea(4, 2), hea_t1(4, 2, sample_twirl(4, 3)), su2(4, 2), sel(4, 1)};
    for (const CircuitSpec& spec : specs) {
        for (int trial = 0; trial < 5; ++trial) {
            ParamVector theta(spec.param_count());
            for (double& t : theta) t = rng.uniform(0, 2 * Rng::kPi);
            EvalCounter counter;
            const GradientVector ps =
                parameter_shift_gradient(spec, theta, h, counter);
            const GradientVector fd =
                finite_difference_gradient(spec, theta, h, 1e-4);
            for (int j = 0; j < spec.param_count(); ++j) {
                REQUIRE(std::abs(ps.values[j] - fd.values[j]) < 1e-6);
            }
        }
    }
}

TEST_CASE("masked gradients zero frozen entries and count exactly") {
    const CircuitSpec spec = hea(3, 2); // P = 6
    const Hamiltonian h = heisenberg(3, 1, 1, 1);
    ParamVector theta(spec.param_count(), 0.7);
    Mask mask(spec.param_count(), 1);
    mask[1] = mask[4] = 0;

    EvalCounter counter;
    const GradientVector g =
        parameter_shift_gradient(spec, theta, h, mask, counter);
    CHECK(g.mask_applied);
    CHECK(g.values[1] == 0.0);
    CHECK(g.values[4] == 0.0);
    CHECK(counter.shift_evals == 2 * 4); // 2 * |active|
    CHECK(counter.energy_evals == 0);    // shifted evals tallied separately

    // counting identity over repeated calls: 2(P - F) each
    parameter_shift_gradient(spec, theta, h, mask, counter);
    CHECK(counter.shift_evals == 2 * 2 * 4);
}

TEST_CASE("energy of a VQE state never beats the exact ground energy") {
    const Hamiltonian h = heisenberg(5, 1, 1, 1);
    const double e0 = exact_ground_energy(h).energy;
    const CircuitSpec spec = hea_t1(5, 5, sample_twirl(5, 21));
    InitSpec init;
    init.scheme = InitScheme::ENHANCED_GAUSS;
    init.seed = 2024;
    EvalCounter counter;
    const double e = energy(spec, init_params(spec, init), h, counter);
    CHECK(e >= e0 - 1e-8);
}

TEST_CASE("non-Pauli tunable slots are rejected by the shift rule") {
    Slot rot;
    rot.gate = Gate::ry(0, 0.0);
    rot.param_id = 0;
    CircuitSpec spec = unstructured(2, {rot});
    // Hand-craft an illegal tunable entangler on the parsed spec.
    Slot bad;
    bad.gate = Gate::cnot(0, 1);
    bad.param_id = 0;
    spec.slots[0] = bad;
    EvalCounter counter;
    CHECK_THROWS_AS(
        parameter_shift_gradient(spec, {0.1}, heisenberg(2, 1, 1, 1), counter),
        Error);
}
