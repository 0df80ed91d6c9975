// AVX2 variants of the kernel layer. Compiled with -mavx2 only; callers go
// through the runtime dispatch in kernels_dispatch.cpp. FMA is deliberately
// not used so results stay bit-identical with the scalar reference.

#include "usbone/kernels.hpp"

#include "usbone/grid.hpp"

#include <algorithm>

#if defined(__AVX2__)
#include <immintrin.h>

namespace usbone::kernels {
namespace {

void conv_cols_avx2(const double* src, int width, int height,
                    const double* kernel, int radius, double* dst) {
    const int klen = 2 * radius + 1;
    const int wv = width & ~3;
    for (int r = 0; r < height; ++r) {
        double* out = dst + static_cast<size_t>(r) * width;
        for (int c = 0; c < wv; c += 4) _mm256_storeu_pd(out + c, _mm256_setzero_pd());
        for (int c = wv; c < width; ++c) out[c] = 0.0;
        const bool interior = (r - radius >= 0 && r + radius < height);
        for (int k = 0; k < klen; ++k) {
            const double w = kernel[k];
            const int rr = interior ? r - (k - radius)
                                    : reflect_index(r - (k - radius), height);
            const double* in = src + static_cast<size_t>(rr) * width;
            const __m256d wv4 = _mm256_set1_pd(w);
            for (int c = 0; c < wv; c += 4) {
                __m256d acc = _mm256_loadu_pd(out + c);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(wv4, _mm256_loadu_pd(in + c)));
                _mm256_storeu_pd(out + c, acc);
            }
            for (int c = wv; c < width; ++c) out[c] += w * in[c];
        }
    }
}

void conv_rows_avx2(const double* src, int width, int height,
                    const double* kernel, int radius, double* dst) {
    const int klen = 2 * radius + 1;
    for (int r = 0; r < height; ++r) {
        const double* in = src + static_cast<size_t>(r) * width;
        double* out = dst + static_cast<size_t>(r) * width;
        for (int c = 0; c < width; ++c) out[c] = 0.0;
        const int lo = std::min(radius, width);
        const int hi = std::max(lo, width - radius);
        const int hv = lo + ((hi - lo) & ~3);
        for (int k = 0; k < klen; ++k) {
            const double w = kernel[k];
            const int off = -(k - radius);
            for (int c = 0; c < lo; ++c) out[c] += w * in[reflect_index(c + off, width)];
            const __m256d wv4 = _mm256_set1_pd(w);
            for (int c = lo; c < hv; c += 4) {
                __m256d acc = _mm256_loadu_pd(out + c);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(wv4, _mm256_loadu_pd(in + c + off)));
                _mm256_storeu_pd(out + c, acc);
            }
            for (int c = hv; c < hi; ++c) out[c] += w * in[c + off];
            for (int c = hi; c < width; ++c) out[c] += w * in[reflect_index(c + off, width)];
        }
    }
}

void min_filter_cols_avx2(const double* src, int width, int height,
                          int radius, double* dst) {
    const int wv = width & ~3;
    for (int r = 0; r < height; ++r) {
        const int r0 = std::max(0, r - radius);
        const int r1 = std::min(height - 1, r + radius);
        double* out = dst + static_cast<size_t>(r) * width;
        const double* first = src + static_cast<size_t>(r0) * width;
        for (int c = 0; c < wv; c += 4)
            _mm256_storeu_pd(out + c, _mm256_loadu_pd(first + c));
        for (int c = wv; c < width; ++c) out[c] = first[c];
        for (int rr = r0 + 1; rr <= r1; ++rr) {
            const double* in = src + static_cast<size_t>(rr) * width;
            for (int c = 0; c < wv; c += 4) {
                // operand order matches std::min(out, in): result is in when in < out
                __m256d m = _mm256_min_pd(_mm256_loadu_pd(in + c), _mm256_loadu_pd(out + c));
                _mm256_storeu_pd(out + c, m);
            }
            for (int c = wv; c < width; ++c) out[c] = std::min(out[c], in[c]);
        }
    }
}

void min_filter_rows_avx2(const double* src, int width, int height,
                          int radius, double* dst) {
    for (int r = 0; r < height; ++r) {
        const double* in = src + static_cast<size_t>(r) * width;
        double* out = dst + static_cast<size_t>(r) * width;
        const int lo = std::min(radius, width);
        const int hi = std::max(lo, width - radius);
        const int hv = lo + ((hi - lo) & ~3);
        auto scalar_at = [&](int c) {
            const int c0 = std::max(0, c - radius);
            const int c1 = std::min(width - 1, c + radius);
            double m = in[c0];
            for (int cc = c0 + 1; cc <= c1; ++cc) m = std::min(m, in[cc]);
            out[c] = m;
        };
        for (int c = 0; c < lo; ++c) scalar_at(c);
        for (int c = lo; c < hv; c += 4) {
            __m256d m = _mm256_loadu_pd(in + c - radius);
            for (int d = 1; d <= 2 * radius; ++d)
                m = _mm256_min_pd(_mm256_loadu_pd(in + c - radius + d), m);
            _mm256_storeu_pd(out + c, m);
        }
        for (int c = hv; c < hi; ++c) scalar_at(c);
        for (int c = hi; c < width; ++c) scalar_at(c);
    }
}

void complex_scale_avx2(const double* a, const double* s, size_t n, double* out) {
    const size_t nv = n & ~size_t{3};
    for (size_t i = 0; i < nv; i += 4) {
        __m256d sv = _mm256_loadu_pd(s + i);
        __m256d s01 = _mm256_permute4x64_pd(sv, 0b01010000);  // s0 s0 s1 s1
        __m256d s23 = _mm256_permute4x64_pd(sv, 0b11111010);  // s2 s2 s3 s3
        _mm256_storeu_pd(out + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(a + 2 * i), s01));
        _mm256_storeu_pd(out + 2 * i + 4, _mm256_mul_pd(_mm256_loadu_pd(a + 2 * i + 4), s23));
    }
    for (size_t i = nv; i < n; ++i) {
        out[2 * i] = a[2 * i] * s[i];
        out[2 * i + 1] = a[2 * i + 1] * s[i];
    }
}

} // namespace

namespace detail {
const Impl* avx2_impl() {
    static const Impl impl{conv_cols_avx2, conv_rows_avx2, min_filter_cols_avx2,
                           min_filter_rows_avx2, complex_scale_avx2};
    return &impl;
}
} // namespace detail

} // namespace usbone::kernels

#else  // !__AVX2__

namespace usbone::kernels::detail {
const Impl* avx2_impl() { return nullptr; }
} // namespace usbone::kernels::detail

#endif
