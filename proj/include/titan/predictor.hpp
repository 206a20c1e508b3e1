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
#include <vector>

#include "titan/cfcsa.hpp"

namespace titan {

/// Architecture constants. No weight shape depends on the grid dimensions
/// (L, N, D); the input-channel width 3+K is fixed per checkpoint.
struct PredictorHyper {
    int in_channels = 6; // 3 + K
    int channels = 32;
    int conv_blocks = 4;
    int heads = 4;
    int head_dim = 8; // heads * head_dim == channels
    double learning_rate = 1e-3;
    int epochs = 100;
    int batch_cap = 32; // records per Adam step inside a shape bucket

    void validate() const;
};

/// All tensors of the regressor: stride-1 3x3 conv blocks (ReLU between
/// blocks), one token-wise MHSA block with residual, per-token linear head.
struct PredictorWeights {
    PredictorHyper hyper;
    std::vector<std::vector<double>> conv_w; // [block] out*in*3*3
    std::vector<std::vector<double>> conv_b; // [block] out
    std::vector<double> wq, wk, wv, wo;      // F*F row-major
    std::vector<double> head_w;              // F
    double head_b = 0.0;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t weight_count() const;
};

PredictorWeights init_weights(const PredictorHyper& hyper, std::uint64_t seed);

/// Inference pass; output grid clamped to [0, 1].
Grid forward(const PredictorWeights& w, const InputTensor& x);
/// Training pass; raw head output.
Grid forward_raw(const PredictorWeights& w, const InputTensor& x);

/// Squared Frobenius norm of (pred - label); mean over the batch form.
double loss(const Grid& pred, const Grid& label);
double loss(const std::vector<Grid>& pred, const std::vector<Grid>& label);

struct TrainReport {
    std::vector<double> train_losses; // one per epoch
    std::vector<double> val_losses;   // empty without a validation split
    double val_loss_at_init = 0.0;    // validation loss of the start weights
    std::string checkpoint_id;        // content hash of the final weights
    std::uint64_t split_seed = 0;
};

struct TrainResult {
    PredictorWeights weights;
    TrainReport report;
};

/// Deterministic 80/20 split by seed, shape-bucketed batches, Adam updates.
/// Pass `resume_from` to continue from an existing checkpoint (moments
/// restart at zero).
TrainResult train(const std::vector<CfcsaSample>& dataset,
                  const PredictorHyper& hyper, std::uint64_t seed,
                  const PredictorWeights* resume_from = nullptr);

/// Max elementwise deviation between analytic weight gradients and central
/// finite differences (step 1e-4) over `sample_weights` randomly chosen
/// weights; deviation is measured relative to max(1, |numeric|). Weights
/// whose halved-step estimate disagrees with the full-step one are skipped:
/// the probe interval straddles a ReLU kink there. With `head_only` the
/// sample covers just the final linear layer, where the loss is exactly
/// quadratic and central differences are exact.
double backprop_check(const PredictorWeights& w, const InputTensor& x,
                      const Grid& label, int sample_weights = 200,
                      std::uint64_t seed = 0, bool head_only = false);

struct MaskPrediction {
    std::vector<int> frozen_ids; // parameters with intensity >= tau/100
    Grid intensity;
};

/// Forward pass on the circuit's grid; parameter i freezes iff the predicted
/// intensity at coords(i) reaches tau/100. Descriptors must be normalized.
MaskPrediction predict_mask(const PredictorWeights& w, const CircuitSpec& spec,
                            const std::vector<double>& descriptors,
                            double tau_percent);

/// Versioned JSON checkpoint; loading validates tensor shapes against the
/// hyper block only, never against grid sizes.
std::string weights_to_json(const PredictorWeights& w);
PredictorWeights weights_from_json(const std::string& text);
void save_checkpoint(const PredictorWeights& w, const std::string& path);
PredictorWeights load_checkpoint(const std::string& path);

} // namespace titan
