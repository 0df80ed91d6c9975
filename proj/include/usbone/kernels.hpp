#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops used by the feature extractors. Every kernel has
// a scalar reference implementation and, on x86, an AVX2 variant selected at
// runtime. Both variants perform the per-element operations in the same
// order, so their outputs are bit-identical; the equivalence tests assert
// exact equality.

namespace usbone::kernels {

enum class Backend { Scalar, Avx2 };

/// Backend chosen at startup from CPU capabilities (overridable for tests
/// and via the USBONE_KERNELS=scalar|avx2 environment variable).
Backend active_backend();
void set_backend(Backend b);
bool avx2_supported();
std::string backend_name(Backend b);

/// Vertical convolution: dst(r,c) = sum_k w[k+radius] * src(reflect(r-k), c),
/// k in [-radius, radius]. Border rows reflect without repeating the edge.
void conv_cols(const double* src, int width, int height,
               const double* kernel, int radius, double* dst);

/// Horizontal convolution: dst(r,c) = sum_k w[k+radius] * src(r, reflect(c-k)).
void conv_rows(const double* src, int width, int height,
               const double* kernel, int radius, double* dst);

/// Vertical sliding minimum over rows [r-radius, r+radius] clipped to the
/// image: dst(r,c) = min_{r'} src(r',c).
void min_filter_cols(const double* src, int width, int height,
                     int radius, double* dst);

/// Horizontal sliding minimum over columns clipped to the image.
void min_filter_rows(const double* src, int width, int height,
                     int radius, double* dst);

/// Scales n interleaved complex values by per-element real factors:
/// out[2i] = a[2i]*s[i], out[2i+1] = a[2i+1]*s[i].
void complex_scale(const double* a, const double* s, size_t n, double* out);

namespace detail {
struct Impl {
    void (*conv_cols)(const double*, int, int, const double*, int, double*);
    void (*conv_rows)(const double*, int, int, const double*, int, double*);
    void (*min_filter_cols)(const double*, int, int, int, double*);
    void (*min_filter_rows)(const double*, int, int, int, double*);
    void (*complex_scale)(const double*, const double*, size_t, double*);
};
const Impl& scalar_impl();
const Impl* avx2_impl();  // nullptr when not compiled in
} // namespace detail

} // namespace usbone::kernels
