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
#include <string>
#include <utility>
#include <vector>

#include "titan/apfa.hpp"

namespace titan {

/// Row-major L x (D*N) value grid (labels, predictions, intensity maps).
struct Grid {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0.0) {}
    double& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
    [[nodiscard]] double at(int r, int c) const {
        return data[std::size_t(r) * cols + c];
    }
};

/// (3+K) x L x (D*N) input tensor, channel-major then row-major. Channels
/// 0..2 are the normalized (layer, slot, qubit) coordinates; channels 3..
/// are constant descriptor planes. Column index is q*D + d.
struct InputTensor {
    int channels = 0;
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    InputTensor() = default;
    InputTensor(int ch, int r, int c)
        : channels(ch), rows(r), cols(c),
          data(std::size_t(ch) * r * c, 0.0) {}
    double& at(int ch, int r, int c) {
        return data[(std::size_t(ch) * rows + r) * cols + c];
    }
    [[nodiscard]] double at(int ch, int r, int c) const {
        return data[(std::size_t(ch) * rows + r) * cols + c];
    }
};

/// Builds the coordinate+descriptor tensor for an L x W x D grid. A
/// dimension of size 1 yields coordinate 0 everywhere (the normalizations
/// l/(L-1) etc. are undefined there).
InputTensor encode_grid(int layers, int width, int slots_per_qubit,
                        const std::vector<double>& descriptors);

/// Encode via a circuit's own grid shape. Descriptors must already be
/// normalized to [0, 1].
InputTensor encode(const CircuitSpec& spec,
                   const std::vector<double>& descriptors);

/// (raw - lo) / (hi - lo), clamped to [0, 1]. Requires hi > lo per range.
std::vector<double>
normalize_descriptors(const std::vector<double>& raw,
                      const std::vector<std::pair<double, double>>& ranges);

/// Freeze intensity reshaped onto the L x (D*N) grid through the coords map.
Grid label_from_trajectory(const ApfaTrajectory& traj,
                           const CircuitSpec& spec);

enum class HamiltonianClass { HEISENBERG, TFIM, MOLECULE_FILE };

std::string hamiltonian_class_name(HamiltonianClass c);
HamiltonianClass hamiltonian_class_from_name(const std::string& name);

/// Everything needed to regenerate a dataset deterministically.
struct DatasetManifest {
    Family family = Family::HEA_T1;
    HamiltonianClass ham_class = HamiltonianClass::HEISENBERG;
    std::vector<int> layer_values;
    std::vector<int> qubit_values;
    // descriptor sampling/normalization ranges: (a, b, c) for Heisenberg,
    // (J, h) for TFIM, term-count cap for molecule files
    std::vector<std::pair<double, double>> coeff_ranges;
    std::vector<std::string> molecule_files; // MOLECULE_FILE only
    int samples = 0;
    std::uint64_t seed = 0;
    double init_c = 1.0; // enhanced-Gaussian c in gamma^2 = c/L
    int max_retries = 3; // divergence resampling bound
    ApfaConfig apfa;

    void validate() const;
};

DatasetManifest manifest_from_json(const std::string& text);
std::string manifest_to_json(const DatasetManifest& m);
DatasetManifest load_manifest(const std::string& path);

/// One dataset record (x, label) plus regeneration provenance.
struct CfcsaSample {
    InputTensor x;
    Grid label;
    int layers = 0;
    int grid_width = 0; // N for structured families
    int slots_per_qubit = 0;
    std::vector<double> descriptors;
    std::uint64_t seed = 0;    // the derived per-sample stream
    int sample_index = 0;
    int retries = 0;
    std::string meta_json;     // family, class, raw coefficients
};

/// Normative JSON Lines record layout; `x` flattens channel -> row ->
/// column, `label` flattens row -> column.
std::string sample_to_jsonl(const CfcsaSample& s);
CfcsaSample sample_from_jsonl(const std::string& line);

std::vector<CfcsaSample> read_dataset(const std::string& path);

struct DatasetStats {
    int records = 0;
    double mean_frozen_fraction = 0.0;
    std::vector<std::int64_t> label_histogram; // 10 bins over [0, 1]
    int resampled_runs = 0;
};

/// Draws (L, N) and coefficients per sample, runs APFA from an enhanced
/// Gaussian start, encodes, and appends JSONL records. Diverged runs are
/// logged and resampled up to max_retries each, never silently dropped.
DatasetStats generate_dataset(const DatasetManifest& manifest,
                              const std::string& out_path, int threads = 1);

/// Regenerates the record of one sample index (the determinism contract
/// behind the manifest).
CfcsaSample generate_sample(const DatasetManifest& manifest, int sample_index);

} // namespace titan
