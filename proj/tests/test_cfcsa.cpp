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

#include <cstdio>
#include <fstream>

#include "titan/cfcsa.hpp"
#include "titan/init.hpp"

using namespace titan;

TEST_CASE("encode shapes and channel contents") {
    SUBCASE("(3+K) x L x (DN)") {
        const InputTensor x = encode_grid(2, 2, 1, {0.5});
        CHECK(x.channels == 4);
        CHECK(x.rows == 2);
        CHECK(x.cols == 2);
        // channel 0: layer coordinate
        CHECK(x.at(0, 0, 0) == 0.0);
        CHECK(x.at(0, 1, 0) == 1.0);
        // channel 2: qubit coordinate (D = 1, col == q)
        CHECK(x.at(2, 0, 0) == 0.0);
        CHECK(x.at(2, 0, 1) == 1.0);
        // descriptor plane broadcasts
        for (int l = 0; l < 2; ++l) {
            for (int c = 0; c < 2; ++c) CHECK(x.at(3, l, c) == 0.5);
        }
    }
    SUBCASE("degenerate dimensions read zero") {
        const InputTensor x = encode_grid(1, 3, 1, {});
        for (int c = 0; c < 3; ++c) {
            CHECK(x.at(0, 0, c) == 0.0); // L = 1
            CHECK(x.at(1, 0, c) == 0.0); // D = 1
        }
        CHECK(x.at(2, 0, 2) == 1.0);
    }
    SUBCASE("column index fuses q*D + d") {
        const InputTensor x = encode_grid(2, 3, 2, {});
        // column 5 = qubit 2, slot 1
        CHECK(x.at(1, 0, 5) == 1.0);       // d/(D-1) = 1
        CHECK(x.at(2, 0, 5) == 1.0);       // q/(N-1) = 1
        CHECK(x.at(1, 0, 4) == 0.0);       // d = 0
        CHECK(x.at(2, 0, 2) == doctest::Approx(0.5)); // q = 1
    }
    SUBCASE("descriptors must be normalized") {
        CHECK_THROWS_AS(encode_grid(2, 2, 1, {1.5}), Error);
        CHECK_THROWS_AS(encode_grid(2, 2, 1, {-0.1}), Error);
    }
}

TEST_CASE("descriptor normalization") {
    const std::vector<std::pair<double, double>> ranges = {{-5, 5}};
    CHECK(normalize_descriptors({0.0}, ranges)[0] == 0.5);
    CHECK(normalize_descriptors({-5.0}, ranges)[0] == 0.0);
    CHECK(normalize_descriptors({5.0}, ranges)[0] == 1.0);
    CHECK(normalize_descriptors({7.0}, ranges)[0] == 1.0);  // clamps
    CHECK(normalize_descriptors({-9.0}, ranges)[0] == 0.0); // clamps
    CHECK_THROWS_AS(normalize_descriptors({0.0}, {{5, 5}}), Error);
    CHECK_THROWS_AS(normalize_descriptors({0.0, 1.0}, ranges), Error);
}

TEST_CASE("labels land on the right grid cells") {
    const CircuitSpec spec = su2(2, 2); // P = 8, D = 2

    SUBCASE("all-active trajectory gives a zero label") {
        ApfaTrajectory traj;
        traj.param_count = 8;
        traj.masks.assign(11, Mask(8, 1));
        traj.cumulative.assign(8, 11);
        const Grid g = label_from_trajectory(traj, spec);
        for (double v : g.data) CHECK(v == 0.0);
    }

    SUBCASE("a frozen parameter shows up at coords -> q*D + d") {
        ApfaTrajectory traj;
        traj.param_count = 8;
        traj.masks.assign(10, Mask(8, 1));
        for (Mask& m : traj.masks) m[5] = 0; // id 5: l=1, d=0, q=1
        traj.cumulative.assign(8, 10);
        traj.cumulative[5] = 0;
        const Grid g = label_from_trajectory(traj, spec);
        CHECK(g.at(1, 2) == 1.0); // row l=1, col q*2+d = 2
        CHECK(g.at(0, 0) == 0.0);
    }

    SUBCASE("unstructured trajectories give a single row") {
        Slot s;
        s.gate = Gate::ry(0, 0.0);
        s.param_id = 0;
        Slot s2 = s, s3 = s;
        const CircuitSpec flat = unstructured(1, {s, s2, s3});
        ApfaTrajectory traj;
        traj.param_count = 3;
        traj.masks.assign(4, Mask(3, 1));
        traj.cumulative.assign(3, 4);
        const Grid g = label_from_trajectory(traj, flat);
        CHECK(g.rows == 1);
        CHECK(g.cols == 3);
    }

    SUBCASE("parameter-count mismatch is rejected") {
        ApfaTrajectory traj;
        traj.param_count = 5;
        traj.masks.assign(3, Mask(5, 1));
        traj.cumulative.assign(5, 3);
        CHECK_THROWS_AS(label_from_trajectory(traj, spec), Error);
    }
}

TEST_CASE("manifest parsing") {
    const std::string text = R"({
        "family": "HEA_T1",
        "hamiltonian_class": "heisenberg",
        "layers": [2],
        "qubits": [2, 3],
        "samples": 4,
        "seed": 11,
        "apfa": {"max_iters": 20, "noise_std": 0.005}
    })";
    const DatasetManifest m = manifest_from_json(text);
    CHECK(m.samples == 4);
    CHECK(m.coeff_ranges.size() == 3); // defaults to [-5,5]^3
    CHECK(m.coeff_ranges[0].first == -5);
    CHECK(m.apfa.max_iters == 20);

    SUBCASE("unknown keys are rejected, not defaulted") {
        CHECK_THROWS_WITH_AS(
            manifest_from_json(R"({"layers":[2],"samples":1,"qubitz":[2]})"),
            doctest::Contains("qubitz"), Error);
    }
    SUBCASE("missing required fields") {
        CHECK_THROWS_AS(manifest_from_json(R"({"samples": 3})"), Error);
        CHECK_THROWS_AS(manifest_from_json(R"({"layers": [2]})"), Error);
    }
    SUBCASE("round-trip") {
        const DatasetManifest back = manifest_from_json(manifest_to_json(m));
        CHECK(back.samples == m.samples);
        CHECK(back.layer_values == m.layer_values);
        CHECK(back.coeff_ranges == m.coeff_ranges);
        CHECK(back.apfa.max_iters == m.apfa.max_iters);
    }
}

namespace {

DatasetManifest smoke_manifest() {
    DatasetManifest m;
    m.family = Family::HEA_T1;
    m.ham_class = HamiltonianClass::HEISENBERG;
    m.layer_values = {2};
    m.qubit_values = {2, 3};
    m.coeff_ranges = {{-5, 5}, {-5, 5}, {-5, 5}};
    m.samples = 4;
    m.seed = 2025;
    m.apfa.max_iters = 20;
    m.apfa.n_freeze_patience = 3;
    return m;
}

} // namespace

TEST_CASE("dataset generation is deterministic and regenerable") {
    const DatasetManifest m = smoke_manifest();
    const std::string path = "/tmp/titan_test_dataset.jsonl";
    const DatasetStats stats = generate_dataset(m, path, 2);
    CHECK(stats.records == 4);
    CHECK(stats.mean_frozen_fraction >= 0.0);
    CHECK(stats.mean_frozen_fraction <= 1.0);

    const std::vector<CfcsaSample> samples = read_dataset(path);
    REQUIRE(samples.size() == 4);
    for (const CfcsaSample& s : samples) {
        CHECK(s.layers == 2);
        CHECK((s.grid_width == 2 || s.grid_width == 3));
        CHECK(s.slots_per_qubit == 2);
        for (double v : s.label.data) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        for (double v : s.descriptors) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        // every record regenerates bit-identically from the manifest
        const CfcsaSample again = generate_sample(m, s.sample_index);
        CHECK(again.seed == s.seed);
        CHECK(again.x.data == s.x.data);
        CHECK(again.label.data == s.label.data);
    }

    // JSONL row round-trip is byte-identical
    std::ifstream f(path);
    std::string line;
    while (std::getline(f, line)) {
        CHECK(sample_to_jsonl(sample_from_jsonl(line)) == line);
    }

    // regenerating the whole file reproduces the same bytes
    const std::string path2 = "/tmp/titan_test_dataset2.jsonl";
    generate_dataset(m, path2, 1);
    std::ifstream a(path), b(path2);
    std::string sa((std::istreambuf_iterator<char>(a)),
                   std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)),
                   std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("tfim and molecule manifests draw the right descriptors") {
    SUBCASE("tfim uses K = 2") {
        DatasetManifest m = smoke_manifest();
        m.ham_class = HamiltonianClass::TFIM;
        m.coeff_ranges = {{-5, 5}, {-5, 5}};
        m.samples = 1;
        const CfcsaSample s = generate_sample(m, 0);
        CHECK(s.descriptors.size() == 2);
        CHECK(s.x.channels == 5);
    }
    SUBCASE("molecule files use K = 1 (term count)") {
        const std::string mol = "/tmp/titan_test_mol.txt";
        std::ofstream f(mol);
        f << "qubits 2\n-1.0 Z0\n0.5 Z0 Z1\n0.3 X0 X1\n";
        f.close();
        DatasetManifest m = smoke_manifest();
        m.ham_class = HamiltonianClass::MOLECULE_FILE;
        m.molecule_files = {mol};
        m.coeff_ranges = {{0, 10}};
        m.qubit_values.clear();
        m.samples = 1;
        const CfcsaSample s = generate_sample(m, 0);
        CHECK(s.descriptors.size() == 1);
        CHECK(s.descriptors[0] == doctest::Approx(0.3)); // 3 terms / cap 10
        std::remove(mol.c_str());
    }
}
