#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scn/cube.hpp"
#include "scn/kernels.hpp"
#include "scn/rng.hpp"
#include "scn/tensor.hpp"

namespace scn {

enum class LayerKind : uint8_t { CrossChannel3D = 0, Conv2D = 1 };

// One convolutional layer; padding is always "same" (zero-pad, ceil-mode
// output size), so output side = ceil(input side / stride).
struct LayerSpec {
    LayerKind kind = LayerKind::Conv2D;
    int out_maps = 0;
    int kh = 5, kw = 5;
    int stride = 1;
};

struct ScnConfig {
    std::vector<LayerSpec> layers = default_layers();
    int input_channels = kCubeChannels;
    int input_slices = kCubeSlices;
    int input_rows = kCubeSide;
    int input_cols = kCubeSide;
    double learning_rate = 0.001;
    int batch_size = 64;
    int64_t iterations = 2000;
    int64_t eval_every = 1000;
    uint64_t seed = 0;
    double class_weight0 = 1.0;
    double class_weight1 = 1.0;

    // The five-layer stack: one cross-channel 3D layer, then strided 2D
    // convolutions alternating stride 1/2, a 3x3 head, GAP and softmax.
    static std::vector<LayerSpec> default_layers() {
        return {{LayerKind::CrossChannel3D, 80, 5, 5, 1},
                {LayerKind::Conv2D, 128, 5, 5, 2},
                {LayerKind::Conv2D, 128, 5, 5, 1},
                {LayerKind::Conv2D, 128, 5, 5, 2},
                {LayerKind::Conv2D, 2, 3, 3, 1}};
    }

    int num_classes() const { return layers.empty() ? 0 : layers.back().out_maps; }

    // Input planes seen by layer l (the cube's channel*slice planes for the
    // first layer, the previous layer's maps after).
    int in_planes(size_t l) const {
        return l == 0 ? input_channels * input_slices : layers[l - 1].out_maps;
    }

    void validate() const {
        if (layers.empty()) throw std::invalid_argument("ScnConfig: no layers");
        if (layers.front().kind != LayerKind::CrossChannel3D)
            throw std::invalid_argument("ScnConfig: first layer must be CrossChannel3D");
        for (size_t l = 1; l < layers.size(); ++l)
            if (layers[l].kind != LayerKind::Conv2D)
                throw std::invalid_argument("ScnConfig: only the first layer may be CrossChannel3D");
        if (layers.back().out_maps != 2)
            throw std::invalid_argument("ScnConfig: last layer must have 2 maps (classes)");
        for (const LayerSpec& ls : layers) {
            if (ls.out_maps < 1) throw std::invalid_argument("ScnConfig: out_maps must be >= 1");
            if (ls.kh % 2 == 0 || ls.kw % 2 == 0 || ls.kh < 1 || ls.kw < 1)
                throw std::invalid_argument("ScnConfig: kernels must be odd-sided");
            if (ls.stride != 1 && ls.stride != 2)
                throw std::invalid_argument("ScnConfig: stride must be 1 or 2");
        }
        if (input_channels < 1 || input_slices < 1 || input_rows < 1 || input_cols < 1)
            throw std::invalid_argument("ScnConfig: bad input dims");
        if (learning_rate <= 0) throw std::invalid_argument("ScnConfig: learning_rate must be > 0");
        if (batch_size < 1 || iterations < 1 || eval_every < 1)
            throw std::invalid_argument("ScnConfig: bad training counts");
        if (class_weight0 <= 0 || class_weight1 <= 0)
            throw std::invalid_argument("ScnConfig: class weights must be > 0");
    }
};

// Per-layer output spatial dims under the "same"/ceil rule.
inline std::vector<std::pair<int, int>> layer_output_dims(const ScnConfig& cfg) {
    std::vector<std::pair<int, int>> dims;
    int h = cfg.input_rows, w = cfg.input_cols;
    for (const LayerSpec& ls : cfg.layers) {
        h = conv_out_dim(h, ls.kh, ls.stride, ls.kh / 2);
        w = conv_out_dim(w, ls.kw, ls.stride, ls.kw / 2);
        dims.emplace_back(h, w);
    }
    return dims;
}

// Closed-form trainable-parameter count.
inline int64_t param_count(const ScnConfig& cfg) {
    int64_t total = 0;
    for (size_t l = 0; l < cfg.layers.size(); ++l) {
        const LayerSpec& ls = cfg.layers[l];
        total += static_cast<int64_t>(ls.out_maps) * cfg.in_planes(l) * ls.kh * ls.kw + ls.out_maps;
    }
    return total;
}

// Multiply-accumulate count of one layer on the given input planes/extent,
// "same" padding.
inline int64_t flop_count(const LayerSpec& ls, int in_planes, int in_h, int in_w) {
    const int oh = conv_out_dim(in_h, ls.kh, ls.stride, ls.kh / 2);
    const int ow = conv_out_dim(in_w, ls.kw, ls.stride, ls.kw / 2);
    return static_cast<int64_t>(oh) * ow * ls.out_maps * in_planes * ls.kh * ls.kw;
}

// MAC savings of a single (N+1)x(N+1) stride-2 convolution over an NxN
// stride-1 convolution followed by 2x2 average pooling (pool cost: 4 ops per
// pooled output). Returns 1 - fused/(conv + pool).
inline double fused_savings(int n, int c_in, int c_out, int h, int w) {
    const double conv = static_cast<double>(h) * w * c_out * n * n * c_in;
    const double pool = static_cast<double>(h / 2) * (w / 2) * c_out * 4.0;
    const double fused =
        static_cast<double>((h + 1) / 2) * ((w + 1) / 2) * c_out * (n + 1) * (n + 1) * c_in;
    return 1.0 - fused / (conv + pool);
}

// Builds the 5x5 stride-2 kernel set equivalent to a 4x4 stride-1
// convolution followed by 2x2 average pooling:
//   w5[u][v] = 1/4 * sum_{a,b in {0,1}} w4[u-a][v-b]   (out-of-range omitted)
// Biases carry over unchanged. Layout [q][p][4][4] -> [q][p][5][5].
template <typename T>
std::vector<T> fuse_conv_pool(const std::vector<T>& w4, int out_maps, int in_maps) {
    if (w4.size() != static_cast<size_t>(out_maps) * in_maps * 16)
        throw std::invalid_argument("fuse_conv_pool: expected 4x4 kernels");
    std::vector<T> w5(static_cast<size_t>(out_maps) * in_maps * 25, T(0));
    for (int q = 0; q < out_maps; ++q)
        for (int p = 0; p < in_maps; ++p) {
            const T* src = w4.data() + (static_cast<size_t>(q) * in_maps + p) * 16;
            T* dst = w5.data() + (static_cast<size_t>(q) * in_maps + p) * 25;
            for (int u = 0; u < 5; ++u)
                for (int v = 0; v < 5; ++v) {
                    T acc = T(0);
                    for (int a = 0; a <= 1; ++a)
                        for (int b = 0; b <= 1; ++b) {
                            const int y = u - a, x = v - b;
                            if (y >= 0 && y < 4 && x >= 0 && x < 4) acc += src[y * 4 + x];
                        }
                    dst[u * 5 + v] = acc / T(4);
                }
        }
    return w5;
}

template <typename T>
struct ScnModelT {
    ScnConfig config;
    std::vector<std::vector<T>> weights;  // per layer, flat in documented order
    std::vector<std::vector<T>> biases;
    NormStats norm_stats;
};

using ScnModel = ScnModelT<float>;

// Seeded fan-in-scaled uniform init: W ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)),
// biases zero. Deterministic in config.seed.
template <typename T>
ScnModelT<T> init_model(const ScnConfig& cfg) {
    cfg.validate();
    ScnModelT<T> m;
    m.config = cfg;
    Rng rng(cfg.seed);
    m.weights.resize(cfg.layers.size());
    m.biases.resize(cfg.layers.size());
    for (size_t l = 0; l < cfg.layers.size(); ++l) {
        const LayerSpec& ls = cfg.layers[l];
        const size_t n = static_cast<size_t>(ls.out_maps) * cfg.in_planes(l) * ls.kh * ls.kw;
        const double fan_in = static_cast<double>(cfg.in_planes(l)) * ls.kh * ls.kw;
        const double limit = 1.0 / std::sqrt(fan_in);
        m.weights[l].resize(n);
        for (T& v : m.weights[l]) v = static_cast<T>(limit * (2.0 * rng.uniform() - 1.0));
        m.biases[l].assign(static_cast<size_t>(ls.out_maps), T(0));
    }
    return m;
}

template <typename T>
struct ModelGrads {
    std::vector<std::vector<T>> weights, biases;

    void match(const ScnModelT<T>& m) {
        weights.resize(m.weights.size());
        biases.resize(m.biases.size());
        for (size_t l = 0; l < m.weights.size(); ++l) {
            weights[l].assign(m.weights[l].size(), T(0));
            biases[l].assign(m.biases[l].size(), T(0));
        }
    }
    void zero() {
        for (auto& v : weights) std::fill(v.begin(), v.end(), T(0));
        for (auto& v : biases) std::fill(v.begin(), v.end(), T(0));
    }
};

// Activations and gradients for one batch. acts[0] holds the input planes;
// acts[l+1] the ReLU output of layer l, padded for the next layer's kernel.
template <typename T>
struct Workspace {
    std::vector<PlaneBatch<T>> acts, grads;
    std::vector<T> logits, probs, dlogits;
    int batch = 0;

    void ensure(const ScnConfig& cfg, int b) {
        if (batch == b && !acts.empty()) return;
        batch = b;
        const size_t nl = cfg.layers.size();
        acts.assign(nl + 1, {});
        grads.assign(nl + 1, {});
        auto dims = layer_output_dims(cfg);
        int h = cfg.input_rows, w = cfg.input_cols;
        int maps = cfg.input_channels * cfg.input_slices;
        for (size_t l = 0; l <= nl; ++l) {
            // Border sized for the kernel that reads this buffer next.
            const int border = l < nl ? std::max(cfg.layers[l].kh, cfg.layers[l].kw) / 2 : 0;
            acts[l].resize(b, maps, h, w, border);
            grads[l].resize(b, maps, h, w, border);
            if (l < nl) {
                h = dims[l].first;
                w = dims[l].second;
                maps = cfg.layers[l].out_maps;
            }
        }
        logits.assign(static_cast<size_t>(b) * cfg.num_classes(), T(0));
        probs.assign(static_cast<size_t>(b) * cfg.num_classes(), T(0));
        dlogits.assign(static_cast<size_t>(b) * cfg.num_classes(), T(0));
    }

    // Copies one cube payload (in_planes x rows x cols, contiguous) into
    // sample slot s of acts[0].
    void load_input(int s, const T* cube) {
        PlaneBatch<T>& a0 = acts[0];
        for (int c = 0; c < a0.maps; ++c) {
            T* pl = a0.plane(s, c);
            const T* src = cube + static_cast<size_t>(c) * a0.rows * a0.cols;
            for (int y = 0; y < a0.rows; ++y)
                for (int x = 0; x < a0.cols; ++x)
                    pl[static_cast<size_t>(y) * a0.row_stride() + x] =
                        src[static_cast<size_t>(y) * a0.cols + x];
        }
    }
};

// Runs layers + GAP + softmax on ws.acts[0]; fills ws.logits and ws.probs.
template <typename T>
void forward_batch(const ScnModelT<T>& model, Workspace<T>& ws) {
    const ScnConfig& cfg = model.config;
    for (size_t l = 0; l < cfg.layers.size(); ++l) {
        const LayerSpec& ls = cfg.layers[l];
        if (ls.kind == LayerKind::CrossChannel3D)
            kern::conv3d_cc_forward(ws.acts[l], cfg.input_channels, cfg.input_slices,
                                    model.weights[l].data(), model.biases[l].data(), ls.out_maps,
                                    ls.kh, ls.kw, ls.stride, ls.kh / 2, ls.kw / 2, ws.acts[l + 1]);
        else
            kern::conv2d_forward(ws.acts[l], model.weights[l].data(), model.biases[l].data(),
                                 ls.out_maps, ls.kh, ls.kw, ls.stride, ls.kh / 2, ls.kw / 2,
                                 ws.acts[l + 1]);
        kern::relu_forward(ws.acts[l + 1]);
    }
    kern::gap_forward(ws.acts.back(), ws.logits.data());

    const int nc = cfg.num_classes();
    for (int s = 0; s < ws.batch; ++s) {
        const T* z = ws.logits.data() + static_cast<size_t>(s) * nc;
        T* p = ws.probs.data() + static_cast<size_t>(s) * nc;
        T m = z[0];
        for (int c = 1; c < nc; ++c) m = std::max(m, z[c]);
        T zsum = T(0);
        for (int c = 0; c < nc; ++c) {
            p[c] = std::exp(z[c] - m);
            zsum += p[c];
        }
        for (int c = 0; c < nc; ++c) p[c] /= zsum;
    }
}

// Mean class-weighted softmax cross-entropy of the already-run forward pass.
template <typename T>
double batch_loss(const ScnModelT<T>& model, const Workspace<T>& ws, const uint8_t* labels) {
    const int nc = model.config.num_classes();
    double total = 0.0;
    for (int s = 0; s < ws.batch; ++s) {
        const T* z = ws.logits.data() + static_cast<size_t>(s) * nc;
        T m = z[0];
        for (int c = 1; c < nc; ++c) m = std::max(m, z[c]);
        double zsum = 0.0;
        for (int c = 0; c < nc; ++c) zsum += std::exp(static_cast<double>(z[c] - m));
        const int y = labels[s];
        const double wy = y ? model.config.class_weight1 : model.config.class_weight0;
        total += -wy * (static_cast<double>(z[y] - m) - std::log(zsum));
    }
    return total / ws.batch;
}

// Forward + hand-derived backward over the batch in ws.acts[0]; returns the
// loss and fills grads (overwritten).
template <typename T>
double loss_and_grad(const ScnModelT<T>& model, Workspace<T>& ws, const uint8_t* labels,
                     ModelGrads<T>& grads) {
    const ScnConfig& cfg = model.config;
    forward_batch(model, ws);
    const double loss = batch_loss(model, ws, labels);

    const int nc = cfg.num_classes();
    for (int s = 0; s < ws.batch; ++s) {
        const T* p = ws.probs.data() + static_cast<size_t>(s) * nc;
        T* d = ws.dlogits.data() + static_cast<size_t>(s) * nc;
        const int y = labels[s];
        const T wy = static_cast<T>((y ? cfg.class_weight1 : cfg.class_weight0) / ws.batch);
        for (int c = 0; c < nc; ++c) d[c] = wy * (p[c] - (c == y ? T(1) : T(0)));
    }

    grads.zero();
    kern::gap_backward(ws.dlogits.data(), ws.grads.back());
    for (size_t l = cfg.layers.size(); l-- > 0;) {
        const LayerSpec& ls = cfg.layers[l];
        kern::relu_backward(ws.acts[l + 1], ws.grads[l + 1]);
        kern::conv2d_backward_weights(ws.acts[l], ws.grads[l + 1], ls.kh, ls.kw, ls.stride,
                                      ls.kh / 2, ls.kw / 2, grads.weights[l].data(),
                                      grads.biases[l].data());
        if (l > 0)
            kern::conv2d_backward_data(ws.grads[l + 1], model.weights[l].data(), cfg.in_planes(l),
                                       ls.kh, ls.kw, ls.stride, ls.kh / 2, ls.kw / 2,
                                       ws.grads[l]);
    }
    return loss;
}

// w <- w - lr * g for every parameter.
template <typename T>
void sgd_step(ScnModelT<T>& model, const ModelGrads<T>& grads, double lr) {
    if (grads.weights.size() != model.weights.size())
        throw std::invalid_argument("sgd_step: gradient layer count mismatch");
    for (size_t l = 0; l < model.weights.size(); ++l) {
        if (grads.weights[l].size() != model.weights[l].size() ||
            grads.biases[l].size() != model.biases[l].size())
            throw std::invalid_argument("sgd_step: gradient shape mismatch");
        const T eta = static_cast<T>(lr);
        for (size_t i = 0; i < model.weights[l].size(); ++i)
            model.weights[l][i] -= eta * grads.weights[l][i];
        for (size_t i = 0; i < model.biases[l].size(); ++i)
            model.biases[l][i] -= eta * grads.biases[l][i];
    }
}

// Single-sample probabilities (p0, p1). `cube` must already be normalized
// with the model's stats.
template <typename T>
std::pair<double, double> forward(const ScnModelT<T>& model, const T* cube) {
    Workspace<T> ws;
    ws.ensure(model.config, 1);
    ws.load_input(0, cube);
    forward_batch(model, ws);
    return {static_cast<double>(ws.probs[0]), static_cast<double>(ws.probs[1])};
}

}  // namespace scn
