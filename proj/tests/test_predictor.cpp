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

#include "titan/init.hpp"
#include "titan/predictor.hpp"

using namespace titan;

namespace {

PredictorHyper tiny_hyper(int k = 1) {
    PredictorHyper h;
    h.in_channels = 3 + k;
    h.channels = 8;
    h.conv_blocks = 2;
    h.heads = 2;
    h.head_dim = 4;
    return h;
}

InputTensor random_input(int channels, int rows, int cols,
                         std::uint64_t seed) {
    InputTensor x(channels, rows, cols);
    Rng rng(seed);
    for (double& v : x.data) v = rng.uniform01();
    return x;
}

Grid random_label(int rows, int cols, std::uint64_t seed) {
    Grid g(rows, cols);
    Rng rng(seed);
    for (double& v : g.data) v = rng.uniform01();
    return g;
}

CfcsaSample make_sample(const InputTensor& x, const Grid& label) {
    CfcsaSample s;
    s.x = x;
    s.label = label;
    s.layers = x.rows;
    s.slots_per_qubit = 1;
    s.grid_width = x.cols;
    s.descriptors.assign(x.channels - 3, 0.5);
    return s;
}

} // namespace

TEST_CASE("hyper validation") {
    PredictorHyper h = tiny_hyper();
    CHECK_NOTHROW(h.validate());
    h.head_dim = 3; // 2*3 != 8
    CHECK_THROWS_AS(h.validate(), Error);
    h = tiny_hyper();
    h.in_channels = 2;
    CHECK_THROWS_AS(h.validate(), Error);
}

TEST_CASE("one checkpoint runs on every grid shape") {
    const PredictorWeights w = init_weights(tiny_hyper(), 7);
    const InputTensor a = random_input(4, 5, 10, 1);
    const InputTensor b = random_input(4, 9, 28, 2);
    const Grid ga = forward(w, a);
    const Grid gb = forward(w, b);
    CHECK(ga.rows == 5);
    CHECK(ga.cols == 10);
    CHECK(gb.rows == 9);
    CHECK(gb.cols == 28);
    for (double v : ga.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    // channel mismatch is a shape error
    CHECK_THROWS_AS(forward(w, random_input(5, 4, 4, 3)), Error);
}

TEST_CASE("zero head weights give an all-zero grid") {
    PredictorWeights w = init_weights(tiny_hyper(), 3);
    std::fill(w.head_w.begin(), w.head_w.end(), 0.0);
    w.head_b = 0.0;
    const Grid g = forward(w, random_input(4, 3, 6, 4));
    for (double v : g.data) CHECK(v == 0.0);
}

TEST_CASE("tokens with identical features produce identical outputs") {
    // Constant channel planes make every interior token see the same 3x3
    // neighborhood, so its conv features match and attention treats the
    // tokens interchangeably (zero padding distinguishes border tokens).
    const PredictorWeights w = init_weights(tiny_hyper(), 5);
    InputTensor x(4, 6, 8);
    Rng rng(6);
    for (int ch = 0; ch < x.channels; ++ch) {
        const double v = rng.uniform01();
        for (int r = 0; r < x.rows; ++r) {
            for (int c = 0; c < x.cols; ++c) x.at(ch, r, c) = v;
        }
    }
    // two 3x3 blocks -> 5x5 receptive field: margin 2 from every border
    const int margin = tiny_hyper().conv_blocks;
    const Grid g = forward_raw(w, x);
    for (int r = margin; r + margin < x.rows; ++r) {
        for (int c = margin; c + margin < x.cols; ++c) {
            CHECK(g.at(r, c) ==
                  doctest::Approx(g.at(margin, margin)).epsilon(1e-12));
        }
    }
}

TEST_CASE("loss arithmetic") {
    Grid a(2, 3), b(2, 3);
    CHECK(loss(a, b) == 0.0);
    for (double& v : a.data) v = 1.0;
    CHECK(loss(a, b) == 6.0);
    const Grid r1 = random_label(4, 4, 1), r2 = random_label(4, 4, 2);
    CHECK(loss(r1, r2) >= 0.0);
    Grid c(3, 2);
    CHECK_THROWS_AS(loss(a, c), Error);
    // batch form averages
    CHECK(loss(std::vector<Grid>{a, b}, std::vector<Grid>{b, b}) == 3.0);
}

TEST_CASE("backprop matches finite differences") {
    const PredictorHyper h = tiny_hyper();
    const PredictorWeights w = init_weights(h, 11);
    const InputTensor x = random_input(h.in_channels, 3, 6, 12);
    const Grid label = random_label(3, 6, 13);

    SUBCASE("head layer is exactly quadratic") {
        const double err = backprop_check(w, x, label, 64, 1, true);
        CHECK(err < 1e-8);
    }
    SUBCASE("full network within 1e-4") {
        const double err = backprop_check(w, x, label, 250, 2);
        CHECK(err < 1e-4);
    }
}

TEST_CASE("zero input leaves conv kernels untouched by a training step") {
    const PredictorHyper h = tiny_hyper();
    InputTensor x(h.in_channels, 2, 4); // all zeros
    Grid label(2, 4);
    for (double& v : label.data) v = 0.7;

    PredictorHyper one_epoch = h;
    one_epoch.epochs = 1;
    const PredictorWeights start = init_weights(h, 21); // biases start at 0
    const TrainResult r =
        train({make_sample(x, label)}, one_epoch, 21, &start);
    for (std::size_t b = 0; b < start.conv_w.size(); ++b) {
        CHECK(r.weights.conv_w[b] == start.conv_w[b]);
    }
    CHECK(r.weights.head_b != start.head_b); // the bias path does learn
}

TEST_CASE("training") {
    const PredictorHyper h = tiny_hyper();
    const InputTensor x = random_input(h.in_channels, 3, 6, 31);
    const Grid label = random_label(3, 6, 32);

    SUBCASE("single-record memorization") {
        PredictorHyper hh = h;
        hh.epochs = 200;
        hh.learning_rate = 1e-3;
        const TrainResult r = train({make_sample(x, label)}, hh, 5);
        CHECK(r.report.train_losses.back() < 1e-3);
        CHECK(r.report.val_losses.empty()); // too few records to split
    }

    SUBCASE("determinism: same seed, bit-identical report") {
        PredictorHyper hh = h;
        hh.epochs = 5;
        std::vector<CfcsaSample> data;
        for (int i = 0; i < 8; ++i) {
            data.push_back(
                make_sample(random_input(h.in_channels, 2 + i % 2, 4, 40 + i),
                            random_label(2 + i % 2, 4, 50 + i)));
        }
        const TrainResult a = train(data, hh, 9);
        const TrainResult b = train(data, hh, 9);
        CHECK(a.report.train_losses == b.report.train_losses);
        CHECK(a.report.val_losses == b.report.val_losses);
        CHECK(a.report.checkpoint_id == b.report.checkpoint_id);
        REQUIRE(a.report.val_losses.size() == 5); // 8 records -> 1 held out
    }

    SUBCASE("resume reproduces identical subsequent losses") {
        PredictorHyper first = h;
        first.epochs = 3;
        const TrainResult warm = train({make_sample(x, label)}, first, 4);
        PredictorHyper more = h;
        more.epochs = 2;
        const TrainResult r1 =
            train({make_sample(x, label)}, more, 4, &warm.weights);
        const TrainResult r2 =
            train({make_sample(x, label)}, more, 4, &warm.weights);
        CHECK(r1.report.train_losses == r2.report.train_losses);
        CHECK(r1.report.checkpoint_id == r2.report.checkpoint_id);
    }

    SUBCASE("empty dataset and channel mismatches are rejected") {
        CHECK_THROWS_AS(train({}, h, 1), Error);
        CfcsaSample bad = make_sample(random_input(5, 2, 2, 1),
                                      random_label(2, 2, 2));
        CHECK_THROWS_AS(train({bad}, h, 1), Error);
    }
}

TEST_CASE("predict_mask") {
    const PredictorWeights w = init_weights(tiny_hyper(), 99);
    const CircuitSpec spec = hea_t1(4, 3, sample_twirl(4, 1));
    const std::vector<double> desc = {0.5};

    SUBCASE("monotone in tau") {
        const MaskPrediction lo = predict_mask(w, spec, desc, 80);
        const MaskPrediction hi = predict_mask(w, spec, desc, 90);
        for (int id : hi.frozen_ids) {
            CHECK(std::find(lo.frozen_ids.begin(), lo.frozen_ids.end(), id) !=
                  lo.frozen_ids.end());
        }
    }
    SUBCASE("zero network freezes nothing at high tau") {
        PredictorWeights z = w;
        std::fill(z.head_w.begin(), z.head_w.end(), 0.0);
        z.head_b = 0.0;
        const MaskPrediction p = predict_mask(z, spec, desc, 99.9);
        CHECK(p.frozen_ids.empty());
    }
    SUBCASE("tau bounds") {
        CHECK_THROWS_AS(predict_mask(w, spec, desc, 0.0), Error);
        CHECK_THROWS_AS(predict_mask(w, spec, desc, 100.0), Error);
    }
}

TEST_CASE("checkpoint round-trip") {
    const PredictorWeights w = init_weights(tiny_hyper(), 55);
    const std::string path = "/tmp/titan_test_ckpt.json";
    save_checkpoint(w, path);
    const PredictorWeights back = load_checkpoint(path);
    CHECK(back.conv_w == w.conv_w);
    CHECK(back.wq == w.wq);
    CHECK(back.head_w == w.head_w);
    CHECK(back.head_b == w.head_b);

    const InputTensor x = random_input(4, 4, 8, 3);
    CHECK(forward(back, x).data == forward(w, x).data);

    // corrupt hyper vs tensors disagreement is caught
    PredictorWeights bad = w;
    bad.hyper.conv_blocks = 3;
    CHECK_THROWS_AS(weights_from_json(weights_to_json(bad)), Error);
    std::remove(path.c_str());
}
