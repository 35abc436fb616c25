#pragma once

#include <cstddef>

#include "scn/tensor.hpp"

// OpenMP-parallel layer kernels. Every output element is produced by exactly
// one loop iteration with a fixed inner summation order, so results are
// bit-identical for any thread count and schedule.
//
// Weight layouts (flat arrays):
//   2D conv            w[q][p][ky][kx], bias[q]
//   cross-channel 3D   w[k][i][j][ky][kx], bias[k]   (i = channel, j = slice)
// The 3D layout coincides with the 2D layout under p = i*slices + j.

namespace scn::kern {

namespace detail {

// dst(oh x ow, interior of an output plane) += taps (*) src, one input plane.
// src points at the interior origin of a plane whose border >= pad.
template <typename T>
inline void accum_plane_conv(const T* src, int src_rs, T* dst, int dst_rs, const T* taps, int kh,
                             int kw, int stride, int pad_y, int pad_x, int oh, int ow) {
    for (int ky = 0; ky < kh; ++ky) {
        for (int kx = 0; kx < kw; ++kx) {
            const T c = taps[ky * kw + kx];
            for (int y = 0; y < oh; ++y) {
                const T* s = src + static_cast<ptrdiff_t>(y * stride - pad_y + ky) * src_rs +
                             (kx - pad_x);
                T* d = dst + static_cast<ptrdiff_t>(y) * dst_rs;
                if (stride == 1) {
                    for (int x = 0; x < ow; ++x) d[x] += c * s[x];
                } else {
                    for (int x = 0; x < ow; ++x) d[x] += c * s[2 * x];
                }
            }
        }
    }
}

// Transpose of accum_plane_conv: scatters one output plane's gradient back
// into one (padded) input plane.
template <typename T>
inline void scatter_plane_conv(const T* grad, int grad_rs, T* dst, int dst_rs, const T* taps,
                               int kh, int kw, int stride, int pad_y, int pad_x, int oh, int ow) {
    for (int ky = 0; ky < kh; ++ky) {
        for (int kx = 0; kx < kw; ++kx) {
            const T c = taps[ky * kw + kx];
            for (int y = 0; y < oh; ++y) {
                const T* g = grad + static_cast<ptrdiff_t>(y) * grad_rs;
                T* d = dst + static_cast<ptrdiff_t>(y * stride - pad_y + ky) * dst_rs + (kx - pad_x);
                if (stride == 1) {
                    for (int x = 0; x < ow; ++x) d[x] += c * g[x];
                } else {
                    for (int x = 0; x < ow; ++x) d[2 * x] += c * g[x];
                }
            }
        }
    }
}

// Correlates one output-gradient plane against one input plane to produce
// kh*kw weight-gradient taps. Accumulates elementwise into column buffers
// first (vector-friendly), then reduces columns left to right so the order
// is fixed.
template <typename T>
inline void accum_plane_wgrad(const T* in, int in_rs, const T* grad, int grad_rs, T* dtaps,
                              T* colbuf, int kh, int kw, int stride, int pad_y, int pad_x, int oh,
                              int ow) {
    for (int ky = 0; ky < kh; ++ky) {
        for (int kx = 0; kx < kw; ++kx) {
            for (int x = 0; x < ow; ++x) colbuf[x] = T(0);
            for (int y = 0; y < oh; ++y) {
                const T* g = grad + static_cast<ptrdiff_t>(y) * grad_rs;
                const T* s = in + static_cast<ptrdiff_t>(y * stride - pad_y + ky) * in_rs +
                             (kx - pad_x);
                if (stride == 1) {
                    for (int x = 0; x < ow; ++x) colbuf[x] += g[x] * s[x];
                } else {
                    for (int x = 0; x < ow; ++x) colbuf[x] += g[x] * s[2 * x];
                }
            }
            T acc = T(0);
            for (int x = 0; x < ow; ++x) acc += colbuf[x];
            dtaps[ky * kw + kx] += acc;
        }
    }
}

}  // namespace detail

// out[s][q] = bias[q] + sum_p w[q][p] (*) in[s][p]. Overwrites out's interior.
// Requires in.border >= pad and out sized for (oh, ow).
template <typename T>
void conv2d_forward(const PlaneBatch<T>& in, const T* w, const T* bias, int out_maps, int kh,
                    int kw, int stride, int pad_y, int pad_x, PlaneBatch<T>& out) {
    const int oh = out.rows, ow = out.cols;
    const int in_maps = in.maps;
#pragma omp parallel for collapse(2) schedule(static)
    for (int s = 0; s < in.batch; ++s) {
        for (int q = 0; q < out_maps; ++q) {
            T* dst = out.plane(s, q);
            const T b = bias[q];
            for (int y = 0; y < oh; ++y) {
                T* d = dst + static_cast<ptrdiff_t>(y) * out.row_stride();
                for (int x = 0; x < ow; ++x) d[x] = b;
            }
            for (int p = 0; p < in_maps; ++p)
                detail::accum_plane_conv(in.plane(s, p), in.row_stride(), dst, out.row_stride(),
                                         w + (static_cast<size_t>(q) * in_maps + p) * kh * kw, kh,
                                         kw, stride, pad_y, pad_x, oh, ow);
        }
    }
}

// Cross-channel 3D convolution: each output map k sums per-slice 2D
// convolutions over every (channel i, slice j) plane of the cube.
// in.maps must equal channels*slices, planes ordered channel-major.
template <typename T>
void conv3d_cc_forward(const PlaneBatch<T>& in, int channels, int slices, const T* w,
                       const T* bias, int out_maps, int kh, int kw, int stride, int pad_y,
                       int pad_x, PlaneBatch<T>& out) {
    const int oh = out.rows, ow = out.cols;
#pragma omp parallel for collapse(2) schedule(static)
    for (int s = 0; s < in.batch; ++s) {
        for (int k = 0; k < out_maps; ++k) {
            T* dst = out.plane(s, k);
            const T b = bias[k];
            for (int y = 0; y < oh; ++y) {
                T* d = dst + static_cast<ptrdiff_t>(y) * out.row_stride();
                for (int x = 0; x < ow; ++x) d[x] = b;
            }
            for (int i = 0; i < channels; ++i) {
                for (int j = 0; j < slices; ++j) {
                    const T* taps =
                        w + ((static_cast<size_t>(k) * channels + i) * slices + j) * kh * kw;
                    detail::accum_plane_conv(in.plane(s, i * slices + j), in.row_stride(), dst,
                                             out.row_stride(), taps, kh, kw, stride, pad_y, pad_x,
                                             oh, ow);
                }
            }
        }
    }
}

// din[s][p] = sum_q w[q][p] scattered from dout[s][q]. Zeroes din first
// (full buffer). din.border must be >= pad.
template <typename T>
void conv2d_backward_data(const PlaneBatch<T>& dout, const T* w, int in_maps, int kh, int kw,
                          int stride, int pad_y, int pad_x, PlaneBatch<T>& din) {
    din.zero();
    const int oh = dout.rows, ow = dout.cols;
    const int out_maps = dout.maps;
#pragma omp parallel for collapse(2) schedule(static)
    for (int s = 0; s < dout.batch; ++s) {
        for (int p = 0; p < in_maps; ++p) {
            T* dst = din.plane(s, p);
            for (int q = 0; q < out_maps; ++q)
                detail::scatter_plane_conv(dout.plane(s, q), dout.row_stride(), dst,
                                           din.row_stride(),
                                           w + (static_cast<size_t>(q) * in_maps + p) * kh * kw,
                                           kh, kw, stride, pad_y, pad_x, oh, ow);
        }
    }
}

// dw[q][p] += correlation over the whole batch; db[q] += sum of dout[s][q].
// Accumulates so a caller can sum several chunks; zero dw/db first.
template <typename T>
void conv2d_backward_weights(const PlaneBatch<T>& in, const PlaneBatch<T>& dout, int kh, int kw,
                             int stride, int pad_y, int pad_x, T* dw, T* db) {
    const int oh = dout.rows, ow = dout.cols;
    if (ow > 512) throw std::invalid_argument("conv2d_backward_weights: output wider than 512");
    const int in_maps = in.maps, out_maps = dout.maps;
#pragma omp parallel for collapse(2) schedule(static)
    for (int q = 0; q < out_maps; ++q) {
        for (int p = 0; p < in_maps; ++p) {
            T colbuf[512];
            T* dtaps = dw + (static_cast<size_t>(q) * in_maps + p) * kh * kw;
            for (int s = 0; s < in.batch; ++s)
                detail::accum_plane_wgrad(in.plane(s, p), in.row_stride(), dout.plane(s, q),
                                          dout.row_stride(), dtaps, colbuf, kh, kw, stride, pad_y,
                                          pad_x, oh, ow);
        }
    }
#pragma omp parallel for schedule(static)
    for (int q = 0; q < out_maps; ++q) {
        T acc = T(0);
        for (int s = 0; s < dout.batch; ++s) {
            const T* g = dout.plane(s, q);
            for (int y = 0; y < oh; ++y) {
                const T* row = g + static_cast<ptrdiff_t>(y) * dout.row_stride();
                for (int x = 0; x < ow; ++x) acc += row[x];
            }
        }
        db[q] += acc;
    }
}

// Elementwise max(0, x) over the interior, in place.
template <typename T>
void relu_forward(PlaneBatch<T>& a) {
#pragma omp parallel for collapse(2) schedule(static)
    for (int s = 0; s < a.batch; ++s) {
        for (int c = 0; c < a.maps; ++c) {
            T* pl = a.plane(s, c);
            for (int y = 0; y < a.rows; ++y) {
                T* row = pl + static_cast<ptrdiff_t>(y) * a.row_stride();
                for (int x = 0; x < a.cols; ++x)
                    if (!(row[x] > T(0))) row[x] = T(0);
            }
        }
    }
}

// Masks grad by activation > 0 (subgradient 0 at 0), in place on grad.
template <typename T>
void relu_backward(const PlaneBatch<T>& act, PlaneBatch<T>& grad) {
#pragma omp parallel for collapse(2) schedule(static)
    for (int s = 0; s < act.batch; ++s) {
        for (int c = 0; c < act.maps; ++c) {
            const T* a = act.plane(s, c);
            T* g = grad.plane(s, c);
            for (int y = 0; y < act.rows; ++y) {
                const T* arow = a + static_cast<ptrdiff_t>(y) * act.row_stride();
                T* grow = g + static_cast<ptrdiff_t>(y) * grad.row_stride();
                for (int x = 0; x < act.cols; ++x)
                    if (!(arow[x] > T(0))) grow[x] = T(0);
            }
        }
    }
}

// Per-map spatial mean: out[s*maps + c].
template <typename T>
void gap_forward(const PlaneBatch<T>& a, T* out) {
    const T inv = T(1) / (static_cast<T>(a.rows) * static_cast<T>(a.cols));
    for (int s = 0; s < a.batch; ++s) {
        for (int c = 0; c < a.maps; ++c) {
            const T* pl = a.plane(s, c);
            T acc = T(0);
            for (int y = 0; y < a.rows; ++y) {
                const T* row = pl + static_cast<ptrdiff_t>(y) * a.row_stride();
                for (int x = 0; x < a.cols; ++x) acc += row[x];
            }
            out[static_cast<size_t>(s) * a.maps + c] = acc * inv;
        }
    }
}

// Distributes dout[s*maps + c] / (rows*cols) uniformly; overwrites grad's
// interior.
template <typename T>
void gap_backward(const T* dout, PlaneBatch<T>& grad) {
    const T inv = T(1) / (static_cast<T>(grad.rows) * static_cast<T>(grad.cols));
    for (int s = 0; s < grad.batch; ++s) {
        for (int c = 0; c < grad.maps; ++c) {
            const T v = dout[static_cast<size_t>(s) * grad.maps + c] * inv;
            T* pl = grad.plane(s, c);
            for (int y = 0; y < grad.rows; ++y) {
                T* row = pl + static_cast<ptrdiff_t>(y) * grad.row_stride();
                for (int x = 0; x < grad.cols; ++x) row[x] = v;
            }
        }
    }
}

}  // namespace scn::kern
