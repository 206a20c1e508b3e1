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

#include "titan/predictor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <numeric>

#include "json_util.hpp"

namespace titan {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void PredictorHyper::validate() const {
    if (in_channels < 4) {
        throw_config("predictor: in_channels must be >= 4 (3 coords + K)");
    }
    if (channels < 1 || conv_blocks < 1 || heads < 1 || head_dim < 1) {
        throw_config("predictor: channels/blocks/heads must be positive");
    }
    if (heads * head_dim != channels) {
        throw_config("predictor: heads * head_dim must equal channels");
    }
    if (!(learning_rate > 0.0)) throw_config("predictor: learning_rate <= 0");
    if (epochs < 1) throw_config("predictor: epochs must be >= 1");
    if (batch_cap < 1) throw_config("predictor: batch_cap must be >= 1");
}

std::size_t PredictorWeights::weight_count() const {
    std::size_t n = 0;
    for (const auto& w : conv_w) n += w.size();
    for (const auto& b : conv_b) n += b.size();
    n += wq.size() + wk.size() + wv.size() + wo.size();
    n += head_w.size() + 1;
    return n;
}

PredictorWeights init_weights(const PredictorHyper& hyper,
                              std::uint64_t seed) {
    hyper.validate();
    PredictorWeights w;
    w.hyper = hyper;
    w.seed = seed;
    Rng rng(derive_seed(seed, {0x11217}));
    const int f = hyper.channels;
    for (int b = 0; b < hyper.conv_blocks; ++b) {
        const int in = b == 0 ? hyper.in_channels : f;
        const double std_dev = std::sqrt(2.0 / (in * 9.0));
        std::vector<double> kernel(std::size_t(f) * in * 9);
        for (double& v : kernel) v = rng.normal(0.0, std_dev);
        w.conv_w.push_back(std::move(kernel));
        w.conv_b.emplace_back(f, 0.0);
    }
    const double attn_std = 1.0 / std::sqrt(static_cast<double>(f));
    auto fill = [&](std::vector<double>& m) {
        m.assign(std::size_t(f) * f, 0.0);
        for (double& v : m) v = rng.normal(0.0, attn_std);
    };
    fill(w.wq);
    fill(w.wk);
    fill(w.wv);
    fill(w.wo);
    w.head_w.assign(f, 0.0);
    for (double& v : w.head_w) v = rng.normal(0.0, attn_std);
    w.head_b = 0.0;
    return w;
}

namespace {

// im2col for 3x3 same-padded convolution: (in*9) x T patch matrix from a
// channel-major (in x H x W) activation.
MatrixXd im2col(const double* data, int channels, int rows, int cols) {
    const int t_count = rows * cols;
    MatrixXd out = MatrixXd::Zero(channels * 9, t_count);
    for (int ch = 0; ch < channels; ++ch) {
        const double* plane = data + std::size_t(ch) * rows * cols;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int krow = ch * 9 + (dr + 1) * 3 + (dc + 1);
                for (int r = 0; r < rows; ++r) {
                    const int rr = r + dr;
                    if (rr < 0 || rr >= rows) continue;
                    for (int c = 0; c < cols; ++c) {
                        const int cc = c + dc;
                        if (cc < 0 || cc >= cols) continue;
                        out(krow, r * cols + c) = plane[rr * cols + cc];
                    }
                }
            }
        }
    }
    return out;
}

// Transpose of im2col: scatter patch-gradients back onto the activation.
void col2im_add(const MatrixXd& dcols, int channels, int rows, int cols,
                double* out) {
    for (int ch = 0; ch < channels; ++ch) {
        double* plane = out + std::size_t(ch) * rows * cols;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int krow = ch * 9 + (dr + 1) * 3 + (dc + 1);
                for (int r = 0; r < rows; ++r) {
                    const int rr = r + dr;
                    if (rr < 0 || rr >= rows) continue;
                    for (int c = 0; c < cols; ++c) {
                        const int cc = c + dc;
                        if (cc < 0 || cc >= cols) continue;
                        plane[rr * cols + cc] += dcols(krow, r * cols + c);
                    }
                }
            }
        }
    }
}

struct ForwardTrace {
    std::vector<MatrixXd> cols; // per block: (in*9) x T
    std::vector<MatrixXd> pre;  // per block: F x T pre-activation
    MatrixXd tokens;            // T x F, attention input Z
    MatrixXd q, k, v;           // T x F
    std::vector<MatrixXd> attn; // per head: T x T row-softmaxed scores
    MatrixXd concat;            // T x F head outputs
    MatrixXd z2;                // T x F residual sum
    VectorXd y;                 // T raw head outputs
};

Eigen::Map<const RowMat> as_mat(const std::vector<double>& v, int r, int c) {
    return Eigen::Map<const RowMat>(v.data(), r, c);
}

VectorXd forward_trace(const PredictorWeights& w, const InputTensor& x,
                       ForwardTrace* trace) {
    const PredictorHyper& h = w.hyper;
    if (x.channels != h.in_channels) {
        throw_shape("predictor: input has " + std::to_string(x.channels) +
                    " channels, weights expect " +
                    std::to_string(h.in_channels));
    }
    const int rows = x.rows, cols = x.cols, t_count = rows * cols;
    const int f = h.channels;

    // conv stack
    std::vector<double> act = x.data;
    int act_channels = x.channels;
    ForwardTrace local;
    ForwardTrace& tr = trace ? *trace : local;
    for (int b = 0; b < h.conv_blocks; ++b) {
        MatrixXd patch = im2col(act.data(), act_channels, rows, cols);
        const auto kernel = as_mat(w.conv_w[b], f, act_channels * 9);
        MatrixXd pre = kernel * patch;
        const auto bias = Eigen::Map<const VectorXd>(w.conv_b[b].data(), f);
        pre.colwise() += bias;
        if (trace) {
            tr.cols.push_back(std::move(patch));
            tr.pre.push_back(pre);
        }
        std::vector<double> next(std::size_t(f) * t_count);
        for (int ch = 0; ch < f; ++ch) {
            for (int t = 0; t < t_count; ++t) {
                double val = pre(ch, t);
                if (b + 1 < h.conv_blocks && val < 0.0) val = 0.0; // ReLU
                next[std::size_t(ch) * t_count + t] = val;
            }
        }
        act = std::move(next);
        act_channels = f;
    }

    // tokens Z: T x F
    MatrixXd z(t_count, f);
    for (int t = 0; t < t_count; ++t) {
        for (int ch = 0; ch < f; ++ch) {
            z(t, ch) = act[std::size_t(ch) * t_count + t];
        }
    }
    if (trace) tr.tokens = z;

    // multi-head self-attention over all T tokens
    const auto wq = as_mat(w.wq, f, f), wk = as_mat(w.wk, f, f),
               wv = as_mat(w.wv, f, f), wo = as_mat(w.wo, f, f);
    MatrixXd q = z * wq, k = z * wk, v = z * wv;
    if (trace) {
        tr.q = q;
        tr.k = k;
        tr.v = v;
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(h.head_dim));
    MatrixXd concat(t_count, f);
    for (int head = 0; head < h.heads; ++head) {
        const int off = head * h.head_dim;
        MatrixXd scores = q.middleCols(off, h.head_dim) *
                          k.middleCols(off, h.head_dim).transpose() * scale;
        for (int r = 0; r < t_count; ++r) {
            const double row_max = scores.row(r).maxCoeff();
            scores.row(r) = (scores.row(r).array() - row_max).exp();
            scores.row(r) /= scores.row(r).sum();
        }
        concat.middleCols(off, h.head_dim) =
            scores * v.middleCols(off, h.head_dim);
        if (trace) tr.attn.push_back(std::move(scores));
    }
    MatrixXd z2 = z + concat * wo;
    if (trace) {
        tr.concat = concat;
        tr.z2 = z2;
    }

    const auto head_w = Eigen::Map<const VectorXd>(w.head_w.data(), f);
    VectorXd y = z2 * head_w;
    y.array() += w.head_b;
    if (trace) tr.y = y;
    return y;
}

struct WeightGrads {
    std::vector<std::vector<double>> conv_w, conv_b;
    std::vector<double> wq, wk, wv, wo, head_w;
    double head_b = 0.0;

    explicit WeightGrads(const PredictorWeights& w) {
        for (const auto& k : w.conv_w) conv_w.emplace_back(k.size(), 0.0);
        for (const auto& b : w.conv_b) conv_b.emplace_back(b.size(), 0.0);
        wq.assign(w.wq.size(), 0.0);
        wk.assign(w.wk.size(), 0.0);
        wv.assign(w.wv.size(), 0.0);
        wo.assign(w.wo.size(), 0.0);
        head_w.assign(w.head_w.size(), 0.0);
    }

    void scale(double s) {
        auto mul = [s](std::vector<double>& v) {
            for (double& x : v) x *= s;
        };
        for (auto& v : conv_w) mul(v);
        for (auto& v : conv_b) mul(v);
        mul(wq);
        mul(wk);
        mul(wv);
        mul(wo);
        mul(head_w);
        head_b *= s;
    }
};

// Accumulates d(loss)/d(weights) for one sample into `grads`, where the
// incoming dE/dy per token is `dy`.
void backward(const PredictorWeights& w, const InputTensor& x,
              const ForwardTrace& tr, const VectorXd& dy, WeightGrads& grads) {
    const PredictorHyper& h = w.hyper;
    const int rows = x.rows, cols = x.cols, t_count = rows * cols;
    const int f = h.channels;

    // head: y = Z2 head_w + b
    Eigen::Map<VectorXd>(grads.head_w.data(), f) +=
        tr.z2.transpose() * dy;
    grads.head_b += dy.sum();
    const auto head_w = Eigen::Map<const VectorXd>(w.head_w.data(), f);
    MatrixXd dz2 = dy * head_w.transpose(); // T x F

    // residual: Z2 = Z + O * Wo
    MatrixXd dz = dz2;
    const auto wo = as_mat(w.wo, f, f);
    MatrixXd dconcat = dz2 * wo.transpose();
    Eigen::Map<RowMat>(grads.wo.data(), f, f) +=
        tr.concat.transpose() * dz2;

    // attention heads
    const double scale = 1.0 / std::sqrt(static_cast<double>(h.head_dim));
    MatrixXd dq = MatrixXd::Zero(t_count, f);
    MatrixXd dk = MatrixXd::Zero(t_count, f);
    MatrixXd dv = MatrixXd::Zero(t_count, f);
    for (int head = 0; head < h.heads; ++head) {
        const int off = head * h.head_dim;
        const MatrixXd& a = tr.attn[head];
        const MatrixXd do_h = dconcat.middleCols(off, h.head_dim);
        dv.middleCols(off, h.head_dim) += a.transpose() * do_h;
        MatrixXd da = do_h * tr.v.middleCols(off, h.head_dim).transpose();
        // softmax backward, row-wise: ds = a .* (da - rowdot(da, a))
        MatrixXd ds(t_count, t_count);
        for (int r = 0; r < t_count; ++r) {
            const double dot = da.row(r).dot(a.row(r));
            ds.row(r) = a.row(r).array() * (da.row(r).array() - dot);
        }
        dq.middleCols(off, h.head_dim) +=
            ds * tr.k.middleCols(off, h.head_dim) * scale;
        dk.middleCols(off, h.head_dim) +=
            ds.transpose() * tr.q.middleCols(off, h.head_dim) * scale;
    }
    const auto wq = as_mat(w.wq, f, f), wk = as_mat(w.wk, f, f),
               wv = as_mat(w.wv, f, f);
    Eigen::Map<RowMat>(grads.wq.data(), f, f) += tr.tokens.transpose() * dq;
    Eigen::Map<RowMat>(grads.wk.data(), f, f) += tr.tokens.transpose() * dk;
    Eigen::Map<RowMat>(grads.wv.data(), f, f) += tr.tokens.transpose() * dv;
    dz += dq * wq.transpose() + dk * wk.transpose() + dv * wv.transpose();

    // back to channel-major activation gradient: F x T
    MatrixXd dact(f, t_count);
    for (int t = 0; t < t_count; ++t) {
        for (int ch = 0; ch < f; ++ch) dact(ch, t) = dz(t, ch);
    }

    // conv stack, last block first
    for (int b = h.conv_blocks - 1; b >= 0; --b) {
        if (b + 1 < h.conv_blocks) {
            // gradient passed through the ReLU that followed block b
            dact = (tr.pre[b].array() > 0.0).select(dact, 0.0);
        }
        const int in = b == 0 ? h.in_channels : f;
        Eigen::Map<RowMat>(grads.conv_w[b].data(), f, in * 9) +=
            dact * tr.cols[b].transpose();
        Eigen::Map<VectorXd>(grads.conv_b[b].data(), f) += dact.rowwise().sum();
        if (b > 0) {
            const auto kernel = as_mat(w.conv_w[b], f, in * 9);
            MatrixXd dcols = kernel.transpose() * dact;
            std::vector<double> dprev(std::size_t(in) * t_count, 0.0);
            col2im_add(dcols, in, rows, cols, dprev.data());
            MatrixXd next(in, t_count);
            for (int ch = 0; ch < in; ++ch) {
                for (int t = 0; t < t_count; ++t) {
                    next(ch, t) = dprev[std::size_t(ch) * t_count + t];
                }
            }
            dact = std::move(next);
        }
    }
}

Grid grid_from_y(const VectorXd& y, int rows, int cols, bool clamp) {
    Grid g(rows, cols);
    for (int t = 0; t < rows * cols; ++t) {
        g.data[t] = clamp ? std::clamp(y(t), 0.0, 1.0) : y(t);
    }
    return g;
}

} // namespace

Grid forward(const PredictorWeights& w, const InputTensor& x) {
    const VectorXd y = forward_trace(w, x, nullptr);
    return grid_from_y(y, x.rows, x.cols, true);
}

Grid forward_raw(const PredictorWeights& w, const InputTensor& x) {
    const VectorXd y = forward_trace(w, x, nullptr);
    return grid_from_y(y, x.rows, x.cols, false);
}

double loss(const Grid& pred, const Grid& label) {
    if (pred.rows != label.rows || pred.cols != label.cols) {
        throw_shape("loss: grid shapes differ");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double d = pred.data[i] - label.data[i];
        acc += d * d;
    }
    return acc;
}

double loss(const std::vector<Grid>& pred, const std::vector<Grid>& label) {
    if (pred.size() != label.size() || pred.empty()) {
        throw_shape("loss: batch sizes differ or empty");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        acc += loss(pred[i], label[i]);
    }
    return acc / static_cast<double>(pred.size());
}

namespace {

// Adam state mirrors the weight layout.
struct AdamState {
    WeightGrads m, v;
    std::int64_t step = 0;
    explicit AdamState(const PredictorWeights& w) : m(w), v(w) {}
};

void adam_tensor(std::vector<double>& w, const std::vector<double>& g,
                 std::vector<double>& m, std::vector<double>& v, double lr,
                 double bc1, double bc2) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    for (std::size_t i = 0; i < w.size(); ++i) {
        m[i] = b1 * m[i] + (1 - b1) * g[i];
        v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i];
        w[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

void adam_step(PredictorWeights& w, const WeightGrads& g, AdamState& st,
               double lr) {
    ++st.step;
    const double bc1 = 1.0 - std::pow(0.9, static_cast<double>(st.step));
    const double bc2 = 1.0 - std::pow(0.999, static_cast<double>(st.step));
    for (std::size_t b = 0; b < w.conv_w.size(); ++b) {
        adam_tensor(w.conv_w[b], g.conv_w[b], st.m.conv_w[b], st.v.conv_w[b],
                    lr, bc1, bc2);
        adam_tensor(w.conv_b[b], g.conv_b[b], st.m.conv_b[b], st.v.conv_b[b],
                    lr, bc1, bc2);
    }
    adam_tensor(w.wq, g.wq, st.m.wq, st.v.wq, lr, bc1, bc2);
    adam_tensor(w.wk, g.wk, st.m.wk, st.v.wk, lr, bc1, bc2);
    adam_tensor(w.wv, g.wv, st.m.wv, st.v.wv, lr, bc1, bc2);
    adam_tensor(w.wo, g.wo, st.m.wo, st.v.wo, lr, bc1, bc2);
    adam_tensor(w.head_w, g.head_w, st.m.head_w, st.v.head_w, lr, bc1, bc2);
    {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        st.m.head_b = b1 * st.m.head_b + (1 - b1) * g.head_b;
        st.v.head_b = b2 * st.v.head_b + (1 - b2) * g.head_b * g.head_b;
        w.head_b -= lr * (st.m.head_b / bc1) / (std::sqrt(st.v.head_b / bc2) + eps);
    }
}

std::string fnv_hash(const PredictorWeights& w) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](const std::vector<double>& v) {
        for (double d : v) {
            std::uint64_t bits;
            std::memcpy(&bits, &d, sizeof(bits));
            for (int k = 0; k < 8; ++k) {
                h ^= (bits >> (8 * k)) & 0xFF;
                h *= 0x100000001b3ULL;
            }
        }
    };
    for (const auto& t : w.conv_w) mix(t);
    for (const auto& t : w.conv_b) mix(t);
    mix(w.wq);
    mix(w.wk);
    mix(w.wv);
    mix(w.wo);
    mix(w.head_w);
    mix({w.head_b});
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

TrainResult train(const std::vector<CfcsaSample>& dataset,
                  const PredictorHyper& hyper, std::uint64_t seed,
                  const PredictorWeights* resume_from) {
    hyper.validate();
    if (dataset.empty()) throw_validation("train: empty dataset");
    for (const CfcsaSample& s : dataset) {
        if (s.x.channels != hyper.in_channels) {
            throw_shape("train: record has " + std::to_string(s.x.channels) +
                        " channels, hyper expects " +
                        std::to_string(hyper.in_channels));
        }
    }

    TrainResult result;
    result.weights = resume_from ? *resume_from : init_weights(hyper, seed);
    if (resume_from && resume_from->hyper.in_channels != hyper.in_channels) {
        throw_shape("train: resume checkpoint channel mismatch");
    }
    result.report.split_seed = seed;

    // deterministic 80/20 split (no validation below 5 records)
    const int n = static_cast<int>(dataset.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(derive_seed(seed, {0x59717}));
    split_rng.shuffle(order);
    const int n_val = n >= 5 ? n / 5 : 0;
    std::vector<int> val_idx(order.begin(), order.begin() + n_val);
    std::vector<int> train_idx(order.begin() + n_val, order.end());

    // shape buckets over the training split
    std::map<std::tuple<int, int, int>, std::vector<int>> buckets;
    for (int idx : train_idx) {
        const CfcsaSample& s = dataset[idx];
        buckets[{s.x.rows, s.x.cols, s.x.channels}].push_back(idx);
    }
    std::vector<std::vector<int>> batches;
    for (auto& [shape, members] : buckets) {
        (void)shape;
        for (std::size_t at = 0; at < members.size();
             at += hyper.batch_cap) {
            const std::size_t end =
                std::min(members.size(), at + hyper.batch_cap);
            batches.emplace_back(members.begin() + at, members.begin() + end);
        }
    }

    auto val_loss_of = [&](const PredictorWeights& w) {
        double val = 0.0;
        for (int idx : val_idx) {
            const CfcsaSample& s = dataset[idx];
            val += loss(forward_raw(w, s.x), s.label);
        }
        return val / static_cast<double>(val_idx.size());
    };
    if (!val_idx.empty()) {
        result.report.val_loss_at_init = val_loss_of(result.weights);
    }

    AdamState adam(result.weights);
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        Rng epoch_rng(derive_seed(seed, {0xE60C, static_cast<std::uint64_t>(epoch)}));
        epoch_rng.shuffle(batches);

        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (const std::vector<int>& batch : batches) {
            WeightGrads grads(result.weights);
            double batch_loss = 0.0;
            for (int idx : batch) {
                const CfcsaSample& s = dataset[idx];
                ForwardTrace trace;
                const VectorXd y =
                    forward_trace(result.weights, s.x, &trace);
                VectorXd dy(y.size());
                for (int t = 0; t < y.size(); ++t) {
                    const double diff = y(t) - s.label.data[t];
                    batch_loss += diff * diff;
                    dy(t) = 2.0 * diff;
                }
                backward(result.weights, s.x, trace, dy, grads);
            }
            grads.scale(1.0 / static_cast<double>(batch.size()));
            adam_step(result.weights, grads, adam, hyper.learning_rate);
            epoch_loss += batch_loss;
            seen += batch.size();
        }
        epoch_loss /= static_cast<double>(seen);
        if (!std::isfinite(epoch_loss)) {
            throw Error(ErrorKind::Divergence,
                        "training loss became non-finite at epoch " +
                            std::to_string(epoch));
        }
        result.report.train_losses.push_back(epoch_loss);

        if (!val_idx.empty()) {
            result.report.val_losses.push_back(val_loss_of(result.weights));
        }
    }
    result.report.checkpoint_id = fnv_hash(result.weights);
    return result;
}

double backprop_check(const PredictorWeights& w, const InputTensor& x,
                      const Grid& label, int sample_weights,
                      std::uint64_t seed, bool head_only) {
    // analytic gradients
    ForwardTrace trace;
    const VectorXd y = forward_trace(w, x, &trace);
    VectorXd dy(y.size());
    for (int t = 0; t < y.size(); ++t) dy(t) = 2.0 * (y(t) - label.data[t]);
    WeightGrads grads(w);
    backward(w, x, trace, dy, grads);

    // flatten weight/grad tensor pairs in a fixed order
    PredictorWeights mutable_w = w;
    std::vector<std::pair<std::vector<double>*, const std::vector<double>*>>
        mpairs;
    if (!head_only) {
        for (std::size_t b = 0; b < w.conv_w.size(); ++b) {
            mpairs.push_back({&mutable_w.conv_w[b], &grads.conv_w[b]});
            mpairs.push_back({&mutable_w.conv_b[b], &grads.conv_b[b]});
        }
        mpairs.push_back({&mutable_w.wq, &grads.wq});
        mpairs.push_back({&mutable_w.wk, &grads.wk});
        mpairs.push_back({&mutable_w.wv, &grads.wv});
        mpairs.push_back({&mutable_w.wo, &grads.wo});
    }
    mpairs.push_back({&mutable_w.head_w, &grads.head_w});

    std::size_t total = 0;
    for (const auto& [wt, gt] : mpairs) total += wt->size();
    total += 1; // head bias

    std::vector<std::size_t> picks;
    if (static_cast<std::size_t>(sample_weights) >= total) {
        picks.resize(total);
        std::iota(picks.begin(), picks.end(), 0);
    } else {
        Rng rng(derive_seed(seed, {0xBC27}));
        std::vector<std::size_t> all(total);
        std::iota(all.begin(), all.end(), 0);
        rng.shuffle(all);
        picks.assign(all.begin(), all.begin() + sample_weights);
    }

    const double h_step = 1e-4;
    auto loss_at = [&]() {
        return loss(forward_raw(mutable_w, x), label);
    };
    auto central = [&](double* slot, double step) {
        const double keep = *slot;
        *slot = keep + step;
        const double up = loss_at();
        *slot = keep - step;
        const double down = loss_at();
        *slot = keep;
        return (up - down) / (2.0 * step);
    };

    double worst = 0.0;
    for (std::size_t flat : picks) {
        double* slot = nullptr;
        double analytic = 0.0;
        std::size_t at = flat;
        for (const auto& [wt, gt] : mpairs) {
            if (at < wt->size()) {
                slot = wt->data() + at;
                analytic = (*gt)[at];
                break;
            }
            at -= wt->size();
        }
        if (!slot) { // the head bias
            slot = &mutable_w.head_b;
            analytic = grads.head_b;
        }
        const double n1 = central(slot, h_step);
        const double n2 = central(slot, h_step / 2.0);
        // A ReLU kink inside the probe interval makes the two estimates
        // disagree; such points carry no gradient information.
        if (std::abs(n1 - n2) > 1e-3 * std::max(1.0, std::abs(n1))) continue;
        const double err =
            std::abs(analytic - n2) / std::max(1.0, std::abs(n2));
        worst = std::max(worst, err);
    }
    return worst;
}

MaskPrediction predict_mask(const PredictorWeights& w, const CircuitSpec& spec,
                            const std::vector<double>& descriptors,
                            double tau_percent) {
    if (!(tau_percent > 0.0 && tau_percent < 100.0)) {
        throw_config("predict_mask: tau must lie in (0, 100)");
    }
    MaskPrediction out;
    out.intensity = forward(w, encode(spec, descriptors));
    const double cut = tau_percent / 100.0;
    for (int id = 0; id < spec.param_count(); ++id) {
        const ParamCoord c = spec.coord(id);
        if (out.intensity.at(c.layer,
                             c.qubit * spec.slots_per_qubit + c.slot) >= cut) {
            out.frozen_ids.push_back(id);
        }
    }
    return out;
}

std::string weights_to_json(const PredictorWeights& w) {
    nlohmann::json j;
    j["version"] = 1;
    j["seed"] = w.seed;
    j["hyper"] = {{"in_channels", w.hyper.in_channels},
                  {"channels", w.hyper.channels},
                  {"conv_blocks", w.hyper.conv_blocks},
                  {"heads", w.hyper.heads},
                  {"head_dim", w.hyper.head_dim},
                  {"learning_rate", w.hyper.learning_rate},
                  {"epochs", w.hyper.epochs},
                  {"batch_cap", w.hyper.batch_cap}};
    nlohmann::json tensors;
    for (std::size_t b = 0; b < w.conv_w.size(); ++b) {
        tensors["conv" + std::to_string(b) + ".w"] = w.conv_w[b];
        tensors["conv" + std::to_string(b) + ".b"] = w.conv_b[b];
    }
    tensors["attn.wq"] = w.wq;
    tensors["attn.wk"] = w.wk;
    tensors["attn.wv"] = w.wv;
    tensors["attn.wo"] = w.wo;
    tensors["head.w"] = w.head_w;
    tensors["head.b"] = w.head_b;
    j["tensors"] = std::move(tensors);
    return j.dump();
}

PredictorWeights weights_from_json(const std::string& text) {
    const nlohmann::json j = parse_json(text, "checkpoint");
    check_keys(j, {"version", "seed", "hyper", "tensors"}, "checkpoint");
    if (j.at("version").get<int>() != 1) {
        throw_config("checkpoint: unsupported version");
    }
    PredictorWeights w;
    const nlohmann::json& h = j.at("hyper");
    check_keys(h,
               {"in_channels", "channels", "conv_blocks", "heads", "head_dim",
                "learning_rate", "epochs", "batch_cap"},
               "checkpoint hyper");
    w.hyper.in_channels = h.at("in_channels").get<int>();
    w.hyper.channels = h.at("channels").get<int>();
    w.hyper.conv_blocks = h.at("conv_blocks").get<int>();
    w.hyper.heads = h.at("heads").get<int>();
    w.hyper.head_dim = h.at("head_dim").get<int>();
    w.hyper.learning_rate = h.at("learning_rate").get<double>();
    w.hyper.epochs = h.at("epochs").get<int>();
    w.hyper.batch_cap = h.at("batch_cap").get<int>();
    w.hyper.validate();
    w.seed = j.at("seed").get<std::uint64_t>();

    const nlohmann::json& t = j.at("tensors");
    const int f = w.hyper.channels;
    for (int b = 0; b < w.hyper.conv_blocks; ++b) {
        const int in = b == 0 ? w.hyper.in_channels : f;
        if (!t.contains("conv" + std::to_string(b) + ".w") ||
            !t.contains("conv" + std::to_string(b) + ".b")) {
            throw_shape("checkpoint: conv block " + std::to_string(b) +
                        " missing (hyper mismatch)");
        }
        auto kernel = t.at("conv" + std::to_string(b) + ".w")
                          .get<std::vector<double>>();
        auto bias = t.at("conv" + std::to_string(b) + ".b")
                        .get<std::vector<double>>();
        if (kernel.size() != std::size_t(f) * in * 9 ||
            bias.size() != std::size_t(f)) {
            throw_shape("checkpoint: conv block " + std::to_string(b) +
                        " tensor shape mismatch");
        }
        w.conv_w.push_back(std::move(kernel));
        w.conv_b.push_back(std::move(bias));
    }
    auto need_ff = [&](const char* name) {
        auto v = t.at(name).get<std::vector<double>>();
        if (v.size() != std::size_t(f) * f) {
            throw_shape(std::string("checkpoint: ") + name +
                        " shape mismatch");
        }
        return v;
    };
    w.wq = need_ff("attn.wq");
    w.wk = need_ff("attn.wk");
    w.wv = need_ff("attn.wv");
    w.wo = need_ff("attn.wo");
    w.head_w = t.at("head.w").get<std::vector<double>>();
    if (w.head_w.size() != std::size_t(f)) {
        throw_shape("checkpoint: head.w shape mismatch");
    }
    w.head_b = t.at("head.b").get<double>();
    return w;
}

void save_checkpoint(const PredictorWeights& w, const std::string& path) {
    write_file(path, weights_to_json(w));
}

PredictorWeights load_checkpoint(const std::string& path) {
    return weights_from_json(slurp_file(path));
}

} // namespace titan
