#pragma once

#include "scn/tensor.hpp"

// Plain serial reference implementations of the layer kernels, kept for
// testing and benchmarking against scn::kern. They gather per output element
// with explicit bounds checks and never read the zero borders, so they also
// catch padding-initialization bugs in the parallel path.

namespace scn::serial {

template <typename T>
void conv2d_forward(const PlaneBatch<T>& in, const T* w, const T* bias, int out_maps, int kh,
                    int kw, int stride, int pad_y, int pad_x, PlaneBatch<T>& out) {
    const int in_maps = in.maps;
    for (int s = 0; s < in.batch; ++s)
        for (int q = 0; q < out_maps; ++q)
            for (int oy = 0; oy < out.rows; ++oy)
                for (int ox = 0; ox < out.cols; ++ox) {
                    T acc = bias[q];
                    for (int p = 0; p < in_maps; ++p)
                        for (int ky = 0; ky < kh; ++ky)
                            for (int kx = 0; kx < kw; ++kx) {
                                const int iy = oy * stride - pad_y + ky;
                                const int ix = ox * stride - pad_x + kx;
                                if (iy < 0 || iy >= in.rows || ix < 0 || ix >= in.cols) continue;
                                acc += w[((static_cast<size_t>(q) * in_maps + p) * kh + ky) * kw +
                                         kx] *
                                       in.at(s, p, iy, ix);
                            }
                    out.at(s, q, oy, ox) = acc;
                }
}

template <typename T>
void conv3d_cc_forward(const PlaneBatch<T>& in, int channels, int slices, const T* w,
                       const T* bias, int out_maps, int kh, int kw, int stride, int pad_y,
                       int pad_x, PlaneBatch<T>& out) {
    // Identical weight layout as conv2d under p = i*slices + j.
    conv2d_forward(in, w, bias, out_maps, kh, kw, stride, pad_y, pad_x, out);
    (void)channels;
}

template <typename T>
void conv2d_backward_data(const PlaneBatch<T>& dout, const T* w, int in_maps, int kh, int kw,
                          int stride, int pad_y, int pad_x, PlaneBatch<T>& din) {
    din.zero();
    const int out_maps = dout.maps;
    for (int s = 0; s < dout.batch; ++s)
        for (int p = 0; p < in_maps; ++p)
            for (int iy = 0; iy < din.rows; ++iy)
                for (int ix = 0; ix < din.cols; ++ix) {
                    T acc = T(0);
                    for (int q = 0; q < out_maps; ++q)
                        for (int ky = 0; ky < kh; ++ky)
                            for (int kx = 0; kx < kw; ++kx) {
                                const int ny = iy + pad_y - ky;
                                const int nx = ix + pad_x - kx;
                                if (ny < 0 || nx < 0 || ny % stride || nx % stride) continue;
                                const int oy = ny / stride, ox = nx / stride;
                                if (oy >= dout.rows || ox >= dout.cols) continue;
                                acc += w[((static_cast<size_t>(q) * in_maps + p) * kh + ky) * kw +
                                         kx] *
                                       dout.at(s, q, oy, ox);
                            }
                    din.at(s, p, iy, ix) = acc;
                }
}

template <typename T>
void conv2d_backward_weights(const PlaneBatch<T>& in, const PlaneBatch<T>& dout, int kh, int kw,
                             int stride, int pad_y, int pad_x, T* dw, T* db) {
    const int in_maps = in.maps, out_maps = dout.maps;
    for (int q = 0; q < out_maps; ++q) {
        for (int p = 0; p < in_maps; ++p)
            for (int ky = 0; ky < kh; ++ky)
                for (int kx = 0; kx < kw; ++kx) {
                    T acc = T(0);
                    for (int s = 0; s < in.batch; ++s)
                        for (int oy = 0; oy < dout.rows; ++oy)
                            for (int ox = 0; ox < dout.cols; ++ox) {
                                const int iy = oy * stride - pad_y + ky;
                                const int ix = ox * stride - pad_x + kx;
                                if (iy < 0 || iy >= in.rows || ix < 0 || ix >= in.cols) continue;
                                acc += dout.at(s, q, oy, ox) * in.at(s, p, iy, ix);
                            }
                    dw[((static_cast<size_t>(q) * in_maps + p) * kh + ky) * kw + kx] += acc;
                }
        T acc = T(0);
        for (int s = 0; s < dout.batch; ++s)
            for (int oy = 0; oy < dout.rows; ++oy)
                for (int ox = 0; ox < dout.cols; ++ox) acc += dout.at(s, q, oy, ox);
        db[q] += acc;
    }
}

template <typename T>
void relu_forward(PlaneBatch<T>& a) {
    for (int s = 0; s < a.batch; ++s)
        for (int c = 0; c < a.maps; ++c)
            for (int y = 0; y < a.rows; ++y)
                for (int x = 0; x < a.cols; ++x)
                    if (!(a.at(s, c, y, x) > T(0))) a.at(s, c, y, x) = T(0);
}

template <typename T>
void gap_forward(const PlaneBatch<T>& a, T* out) {
    for (int s = 0; s < a.batch; ++s)
        for (int c = 0; c < a.maps; ++c) {
            T acc = T(0);
            for (int y = 0; y < a.rows; ++y)
                for (int x = 0; x < a.cols; ++x) acc += a.at(s, c, y, x);
            out[static_cast<size_t>(s) * a.maps + c] =
                acc / (static_cast<T>(a.rows) * static_cast<T>(a.cols));
        }
}

// Non-overlapping 2x2 mean pooling (floor sizing); oracle for the fused
// stride-2 convolution.
template <typename T>
void avg_pool2x2(const PlaneBatch<T>& in, PlaneBatch<T>& out) {
    for (int s = 0; s < in.batch; ++s)
        for (int c = 0; c < in.maps; ++c)
            for (int y = 0; y < out.rows; ++y)
                for (int x = 0; x < out.cols; ++x)
                    out.at(s, c, y, x) =
                        (in.at(s, c, 2 * y, 2 * x) + in.at(s, c, 2 * y, 2 * x + 1) +
                         in.at(s, c, 2 * y + 1, 2 * x) + in.at(s, c, 2 * y + 1, 2 * x + 1)) /
                        T(4);
}

}  // namespace scn::serial
