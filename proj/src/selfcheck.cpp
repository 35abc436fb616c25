#include "scn/selfcheck.hpp"

#include <algorithm>
#include <cmath>

#include "scn/kernels_serial.hpp"
#include "scn/net.hpp"
#include "scn/rng.hpp"

namespace scn {

namespace {

// Relative error with a floor so that near-zero gradients are compared
// absolutely (central differences carry ~1e-11 noise at eps=1e-5).
double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-5});
}

GradCheckCase check_one(const std::string& name, const ScnConfig& cfg, int batch, uint64_t seed) {
    ScnModelT<double> model = init_model<double>(cfg);

    Rng rng(seed);
    Workspace<double> ws;
    ws.ensure(cfg, batch);
    std::vector<double> cube(static_cast<size_t>(cfg.input_channels) * cfg.input_slices *
                             cfg.input_rows * cfg.input_cols);
    std::vector<uint8_t> labels(static_cast<size_t>(batch));
    for (int s = 0; s < batch; ++s) {
        for (double& v : cube) v = rng.uniform(-1.0, 1.0);
        ws.load_input(s, cube.data());
        labels[static_cast<size_t>(s)] = static_cast<uint8_t>(rng.uniform_index(2));
    }

    ModelGrads<double> grads;
    grads.match(model);
    loss_and_grad(model, ws, labels.data(), grads);

    const double eps = 1e-5;
    GradCheckCase result;
    result.name = name;

    auto probe = [&](double* param, double analytic) {
        const double saved = *param;
        *param = saved + eps;
        forward_batch(model, ws);
        const double up = batch_loss(model, ws, labels.data());
        *param = saved - eps;
        forward_batch(model, ws);
        const double down = batch_loss(model, ws, labels.data());
        *param = saved;
        const double numeric = (up - down) / (2.0 * eps);
        result.max_rel_err = std::max(result.max_rel_err, rel_err(analytic, numeric));
        ++result.n_params;
    };

    for (size_t l = 0; l < model.weights.size(); ++l) {
        for (size_t i = 0; i < model.weights[l].size(); ++i)
            probe(&model.weights[l][i], grads.weights[l][i]);
        for (size_t i = 0; i < model.biases[l].size(); ++i)
            probe(&model.biases[l][i], grads.biases[l][i]);
    }
    return result;
}

}  // namespace

GradCheckReport run_gradient_checks(uint64_t seed) {
    GradCheckReport report;

    auto cfg_base = [](int ch, int sl, int side) {
        ScnConfig cfg;
        cfg.input_channels = ch;
        cfg.input_slices = sl;
        cfg.input_rows = side;
        cfg.input_cols = side;
        cfg.seed = 0;
        return cfg;
    };

    {
        ScnConfig cfg = cfg_base(2, 2, 4);
        cfg.layers = {{LayerKind::CrossChannel3D, 2, 3, 3, 1}, {LayerKind::Conv2D, 2, 3, 3, 2}};
        cfg.seed = derive_seed(seed, 1);
        report.cases.push_back(check_one("cc3d3x3+conv3x3s2, 4x4 input", cfg, 2, derive_seed(seed, 2)));
    }
    {
        ScnConfig cfg = cfg_base(3, 2, 5);
        cfg.layers = {{LayerKind::CrossChannel3D, 3, 5, 5, 1}, {LayerKind::Conv2D, 2, 3, 3, 1}};
        cfg.seed = derive_seed(seed, 3);
        report.cases.push_back(check_one("cc3d5x5+conv3x3, 5x5 input", cfg, 3, derive_seed(seed, 4)));
    }
    {
        ScnConfig cfg = cfg_base(2, 3, 6);
        cfg.layers = {{LayerKind::CrossChannel3D, 4, 3, 3, 2},
                      {LayerKind::Conv2D, 3, 3, 3, 1},
                      {LayerKind::Conv2D, 2, 3, 3, 2}};
        cfg.seed = derive_seed(seed, 5);
        report.cases.push_back(check_one("3 layers, strides 2/1/2", cfg, 2, derive_seed(seed, 6)));
    }
    {
        // Shrunken five-layer stack with the default stride pattern.
        ScnConfig cfg = cfg_base(2, 2, 8);
        cfg.layers = {{LayerKind::CrossChannel3D, 3, 5, 5, 1},
                      {LayerKind::Conv2D, 4, 5, 5, 2},
                      {LayerKind::Conv2D, 4, 5, 5, 1},
                      {LayerKind::Conv2D, 4, 5, 5, 2},
                      {LayerKind::Conv2D, 2, 3, 3, 1}};
        cfg.seed = derive_seed(seed, 7);
        report.cases.push_back(check_one("5-layer default pattern, 8x8 input", cfg, 2,
                                         derive_seed(seed, 8)));
    }
    {
        ScnConfig cfg = cfg_base(2, 2, 4);
        cfg.layers = {{LayerKind::CrossChannel3D, 2, 3, 3, 1}, {LayerKind::Conv2D, 2, 1, 1, 1}};
        cfg.class_weight0 = 0.5;
        cfg.class_weight1 = 3.0;
        cfg.seed = derive_seed(seed, 9);
        report.cases.push_back(check_one("class-weighted loss, 1x1 head", cfg, 3,
                                         derive_seed(seed, 10)));
    }

    for (const GradCheckCase& c : report.cases)
        report.max_rel_err = std::max(report.max_rel_err, c.max_rel_err);
    return report;
}

FusionReport run_fusion_check(uint64_t seed, int trials) {
    FusionReport report;
    report.savings = fused_savings(4, 128, 128, 18, 18);

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const int in_maps = 1 + static_cast<int>(rng.uniform_index(3));
        const int out_maps = 1 + static_cast<int>(rng.uniform_index(3));
        const int h = 7 + static_cast<int>(rng.uniform_index(8));  // 7..14
        const int w = 7 + static_cast<int>(rng.uniform_index(8));

        std::vector<double> w4(static_cast<size_t>(out_maps) * in_maps * 16);
        std::vector<double> bias(static_cast<size_t>(out_maps));
        for (double& v : w4) v = rng.uniform(-1.0, 1.0);
        for (double& v : bias) v = rng.uniform(-0.5, 0.5);

        PlaneBatch<double> in(1, in_maps, h, w, 0);
        for (int p = 0; p < in_maps; ++p)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) in.at(0, p, y, x) = rng.uniform(-1.0, 1.0);

        // Oracle: explicit valid 4x4 convolution then 2x2 average pooling.
        const int ch = conv_out_dim(h, 4, 1, 0), cw = conv_out_dim(w, 4, 1, 0);
        PlaneBatch<double> conv4(1, out_maps, ch, cw, 0);
        serial::conv2d_forward(in, w4.data(), bias.data(), out_maps, 4, 4, 1, 0, 0, conv4);
        PlaneBatch<double> pooled(1, out_maps, ch / 2, cw / 2, 0);
        serial::avg_pool2x2(conv4, pooled);

        // Fused route: 5x5 stride-2 valid convolution with derived weights.
        const std::vector<double> w5 = fuse_conv_pool(w4, out_maps, in_maps);
        const int fh = conv_out_dim(h, 5, 2, 0), fw = conv_out_dim(w, 5, 2, 0);
        PlaneBatch<double> fused(1, out_maps, fh, fw, 0);
        kern::conv2d_forward(in, w5.data(), bias.data(), out_maps, 5, 5, 2, 0, 0, fused);

        for (int q = 0; q < out_maps; ++q)
            for (int y = 0; y < pooled.rows; ++y)
                for (int x = 0; x < pooled.cols; ++x)
                    report.max_abs_diff = std::max(
                        report.max_abs_diff,
                        std::abs(pooled.at(0, q, y, x) - fused.at(0, q, y, x)));
    }
    return report;
}

}  // namespace scn
