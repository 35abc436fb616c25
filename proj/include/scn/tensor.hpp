#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scn {

// Batched stack of 2D planes with a zero border on every side:
// [batch][maps] planes of rows x cols, each embedded in
// (rows + 2*border) x (cols + 2*border) storage. The border doubles as
// "same" padding, so convolutions read rows contiguously with no bounds
// checks; plane() addresses the interior origin.
template <typename T>
struct PlaneBatch {
    int batch = 0, maps = 0, rows = 0, cols = 0, border = 0;
    std::vector<T> buf;

    PlaneBatch() = default;
    PlaneBatch(int b, int c, int h, int w, int bord) { resize(b, c, h, w, bord); }

    void resize(int b, int c, int h, int w, int bord) {
        batch = b;
        maps = c;
        rows = h;
        cols = w;
        border = bord;
        buf.assign(static_cast<size_t>(b) * c * (h + 2 * bord) * (w + 2 * bord), T(0));
    }

    int row_stride() const { return cols + 2 * border; }
    size_t plane_stride() const { return static_cast<size_t>(rows + 2 * border) * row_stride(); }

    T* plane(int s, int c) {
        return buf.data() + (static_cast<size_t>(s) * maps + c) * plane_stride() +
               static_cast<size_t>(border) * row_stride() + border;
    }
    const T* plane(int s, int c) const {
        return buf.data() + (static_cast<size_t>(s) * maps + c) * plane_stride() +
               static_cast<size_t>(border) * row_stride() + border;
    }

    T& at(int s, int c, int y, int x) { return plane(s, c)[static_cast<size_t>(y) * row_stride() + x]; }
    T at(int s, int c, int y, int x) const {
        return plane(s, c)[static_cast<size_t>(y) * row_stride() + x];
    }

    void zero() { std::fill(buf.begin(), buf.end(), T(0)); }
};

// Output spatial extent of a convolution; with pad = k/2 (odd k) this is the
// ceil(in/stride) "same" rule, with pad = 0 the valid rule.
inline int conv_out_dim(int in, int k, int stride, int pad) {
    const int span = in + 2 * pad - k;
    if (span < 0) throw std::invalid_argument("conv_out_dim: kernel larger than padded input");
    return span / stride + 1;
}

}  // namespace scn
