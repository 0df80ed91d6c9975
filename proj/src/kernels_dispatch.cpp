#include "usbone/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace usbone::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend initial_backend() {
    if (const char* env = std::getenv("USBONE_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::Avx2;
    }
    return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

Backend g_backend = initial_backend();

const detail::Impl& impl() {
    if (g_backend == Backend::Avx2)
        if (const detail::Impl* p = detail::avx2_impl()) return *p;
    return detail::scalar_impl();
}

} // namespace

bool avx2_supported() { return cpu_has_avx2() && detail::avx2_impl() != nullptr; }

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
    g_backend = (b == Backend::Avx2 && avx2_supported()) ? Backend::Avx2 : Backend::Scalar;
}

std::string backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

void conv_cols(const double* src, int width, int height,
               const double* kernel, int radius, double* dst) {
    impl().conv_cols(src, width, height, kernel, radius, dst);
}
void conv_rows(const double* src, int width, int height,
               const double* kernel, int radius, double* dst) {
    impl().conv_rows(src, width, height, kernel, radius, dst);
}
void min_filter_cols(const double* src, int width, int height, int radius, double* dst) {
    impl().min_filter_cols(src, width, height, radius, dst);
}
void min_filter_rows(const double* src, int width, int height, int radius, double* dst) {
    impl().min_filter_rows(src, width, height, radius, dst);
}
void complex_scale(const double* a, const double* s, size_t n, double* out) {
    impl().complex_scale(a, s, n, out);
}

} // namespace usbone::kernels
