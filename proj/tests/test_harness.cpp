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

#include "json.hpp"
#include "titan/harness.hpp"
#include "titan/plots.hpp"

using namespace titan;

TEST_CASE("problem config parsing") {
    SUBCASE("heisenberg") {
        const ProblemConfig p = problem_from_json_text(R"({
            "hamiltonian": {"type": "heisenberg", "n": 6, "a": 2, "b": -1, "c": 0.5},
            "ansatz": {"family": "SU2", "layers": 4}
        })");
        CHECK(p.ham_class == HamiltonianClass::HEISENBERG);
        CHECK(p.n_qubits == 6);
        CHECK(p.family == Family::SU2);
        CHECK(p.desc_ranges.size() == 3);
        const Hamiltonian h = build_hamiltonian(p);
        CHECK(h.terms().size() == 15);
        const CircuitSpec spec = build_ansatz(p, h, 1);
        CHECK(spec.param_count() == 2 * 4 * 6);
        const auto desc = problem_descriptors(p, h);
        CHECK(desc.size() == 3);
        CHECK(desc[0] == doctest::Approx(0.7)); // (2+5)/10
    }
    SUBCASE("tfim") {
        const ProblemConfig p = problem_from_json_text(R"({
            "hamiltonian": {"type": "tfim", "n": 4, "J": -3, "h": 2}
        })");
        CHECK(p.ham_class == HamiltonianClass::TFIM);
        CHECK(build_hamiltonian(p).terms().size() == 7);
        CHECK(problem_descriptors(p, build_hamiltonian(p)).size() == 2);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_WITH_AS(
            problem_from_json_text(
                R"({"hamiltonian": {"type": "tfim", "n": 4, "JJ": 1}})"),
            doctest::Contains("JJ"), Error);
        CHECK_THROWS_AS(problem_from_json_text(R"({"bogus": 1})"), Error);
    }
    SUBCASE("round-trip") {
        const ProblemConfig p = problem_from_json_text(R"({
            "hamiltonian": {"type": "heisenberg", "n": 5},
            "apfa": {"max_iters": 17}
        })");
        const ProblemConfig q =
            problem_from_json_text(problem_to_json_text(p));
        CHECK(q.apfa.max_iters == 17);
        CHECK(q.n_qubits == 5);
    }
}

TEST_CASE("frozen ratio report format") {
    CHECK(frozen_ratio_string(77, 117) == "77/117");
    CHECK(frozen_ratio_string(0, 50) == "0/50");
}

TEST_CASE("run_strategies with an empty predicted mask equals baseline") {
    // a zero-weight predictor freezes nothing at any tau < 100
    PredictorHyper hyper;
    hyper.in_channels = 6;
    hyper.channels = 8;
    hyper.conv_blocks = 2;
    hyper.heads = 2;
    hyper.head_dim = 4;
    PredictorWeights w = init_weights(hyper, 1);
    std::fill(w.head_w.begin(), w.head_w.end(), 0.0);
    w.head_b = 0.0;

    const ProblemConfig p = problem_from_json_text(R"({
        "hamiltonian": {"type": "heisenberg", "n": 3, "a": 1, "b": 1, "c": 1},
        "ansatz": {"family": "SU2", "layers": 2},
        "apfa": {"max_iters": 15}
    })");
    const RunRecord rec =
        run_strategies(p, &w, 80.0, {"baseline", "titan", "random"}, 3);
    const StrategyOutcome* base = rec.find("baseline");
    const StrategyOutcome* titan_s = rec.find("titan");
    const StrategyOutcome* random_s = rec.find("random");
    REQUIRE(base);
    REQUIRE(titan_s);
    REQUIRE(random_s);
    CHECK(titan_s->frozen == 0);
    CHECK(*titan_s->delta_e == 0.0); // identical trajectory, exact zero
    CHECK(titan_s->final_energy == base->final_energy);
    CHECK(titan_s->shift_evals == base->shift_evals);
    CHECK(random_s->frozen == 0);
    CHECK(*random_s->delta_e == 0.0);

    // record JSON: delta recomputable bit-for-bit from stored energies
    const nlohmann::json j =
        nlohmann::json::parse(run_record_to_json(rec));
    const double eb = j["strategies"]["baseline"]["final_energy"];
    const double et = j["strategies"]["titan"]["final_energy"];
    CHECK(j["strategies"]["titan"]["delta_e"].get<double>() == et - eb);
    CHECK(j["strategies"]["titan"]["frozen_ratio"] == "0/12");
}

TEST_CASE("strategies without a checkpoint") {
    const ProblemConfig p = problem_from_json_text(R"({
        "hamiltonian": {"type": "heisenberg", "n": 3},
        "ansatz": {"family": "HEA", "layers": 2},
        "apfa": {"max_iters": 10}
    })");
    CHECK_NOTHROW(run_strategies(p, nullptr, 80.0, {"baseline"}, 1));
    CHECK_THROWS_AS(run_strategies(p, nullptr, 80.0, {"baseline", "titan"}, 1),
                    Error);
    CHECK_THROWS_AS(run_strategies(p, nullptr, 80.0, {"bogus"}, 1), Error);
}

TEST_CASE("heatmap zero sits at the neutral midpoint of a symmetric scale") {
    HeatmapSpec spec;
    spec.title = "t";
    spec.values = Grid(1, 3);
    spec.values.at(0, 0) = -2.0;
    spec.values.at(0, 1) = 0.0;
    spec.values.at(0, 2) = 2.0;
    const std::string svg = heatmap_svg(spec);
    CHECK(svg.find("#ffffff") != std::string::npos); // zero cell is white
    CHECK(svg.find("<svg") == 0);
    // symmetric color-scale annotations around zero
    CHECK(svg.find("+2") != std::string::npos);
    CHECK(svg.find("-2") != std::string::npos);
}

TEST_CASE("line plot renders series and envelopes") {
    LinePlotSpec spec;
    spec.title = "conv";
    Series s;
    s.name = "baseline";
    s.x = {0, 1, 2, 3};
    s.y = {3, 2, 1.5, 1.2};
    s.y_low = {2.8, 1.8, 1.4, 1.1};
    s.y_high = {3.2, 2.2, 1.6, 1.3};
    spec.series.push_back(s);
    const std::string svg = line_plot_svg(spec);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("polygon") != std::string::npos); // the envelope
    CHECK(svg.find("baseline") != std::string::npos);
}
