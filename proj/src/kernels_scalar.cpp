#include "usbone/kernels.hpp"

#include "usbone/grid.hpp"

#include <algorithm>

namespace usbone::kernels {
namespace {

void conv_cols_scalar(const double* src, int width, int height,
                      const double* kernel, int radius, double* dst) {
    const int klen = 2 * radius + 1;
    for (int r = 0; r < height; ++r) {
        double* out = dst + static_cast<size_t>(r) * width;
        // interior: all taps in range, no reflection needed
        if (r - radius >= 0 && r + radius < height) {
            for (int c = 0; c < width; ++c) out[c] = 0.0;
            for (int k = 0; k < klen; ++k) {
                const double w = kernel[k];
                const double* in = src + static_cast<size_t>(r - (k - radius)) * width;
                for (int c = 0; c < width; ++c) out[c] += w * in[c];
            }
        } else {
            for (int c = 0; c < width; ++c) out[c] = 0.0;
            for (int k = 0; k < klen; ++k) {
                const double w = kernel[k];
                const int rr = reflect_index(r - (k - radius), height);
                const double* in = src + static_cast<size_t>(rr) * width;
                for (int c = 0; c < width; ++c) out[c] += w * in[c];
            }
        }
    }
}

void conv_rows_scalar(const double* src, int width, int height,
                      const double* kernel, int radius, double* dst) {
    const int klen = 2 * radius + 1;
    for (int r = 0; r < height; ++r) {
        const double* in = src + static_cast<size_t>(r) * width;
        double* out = dst + static_cast<size_t>(r) * width;
        for (int c = 0; c < width; ++c) out[c] = 0.0;
        const int lo = std::min(radius, width);       // columns needing reflection on the left
        const int hi = std::max(lo, width - radius);  // first column needing it on the right
        for (int k = 0; k < klen; ++k) {
            const double w = kernel[k];
            const int off = -(k - radius);
            for (int c = 0; c < lo; ++c) out[c] += w * in[reflect_index(c + off, width)];
            for (int c = lo; c < hi; ++c) out[c] += w * in[c + off];
            for (int c = hi; c < width; ++c) out[c] += w * in[reflect_index(c + off, width)];
        }
    }
}

void min_filter_cols_scalar(const double* src, int width, int height,
                            int radius, double* dst) {
    for (int r = 0; r < height; ++r) {
        const int r0 = std::max(0, r - radius);
        const int r1 = std::min(height - 1, r + radius);
        double* out = dst + static_cast<size_t>(r) * width;
        const double* first = src + static_cast<size_t>(r0) * width;
        for (int c = 0; c < width; ++c) out[c] = first[c];
        for (int rr = r0 + 1; rr <= r1; ++rr) {
            const double* in = src + static_cast<size_t>(rr) * width;
            for (int c = 0; c < width; ++c) out[c] = std::min(out[c], in[c]);
        }
    }
}

void min_filter_rows_scalar(const double* src, int width, int height,
                            int radius, double* dst) {
    for (int r = 0; r < height; ++r) {
        const double* in = src + static_cast<size_t>(r) * width;
        double* out = dst + static_cast<size_t>(r) * width;
        for (int c = 0; c < width; ++c) {
            const int c0 = std::max(0, c - radius);
            const int c1 = std::min(width - 1, c + radius);
            double m = in[c0];
            for (int cc = c0 + 1; cc <= c1; ++cc) m = std::min(m, in[cc]);
            out[c] = m;
        }
    }
}

void complex_scale_scalar(const double* a, const double* s, size_t n, double* out) {
    for (size_t i = 0; i < n; ++i) {
        out[2 * i] = a[2 * i] * s[i];
        out[2 * i + 1] = a[2 * i + 1] * s[i];
    }
}

} // namespace

namespace detail {
const Impl& scalar_impl() {
    static const Impl impl{conv_cols_scalar, conv_rows_scalar, min_filter_cols_scalar,
                           min_filter_rows_scalar, complex_scale_scalar};
    return impl;
}
} // namespace detail

} // namespace usbone::kernels
