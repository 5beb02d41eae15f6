#include "fairpost/kernels.hpp"

#include <cmath>

namespace fairpost::kern {

namespace scalar {

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

std::size_t count_greater(const double* x, std::size_t n, double t) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] > t) ? 1 : 0;
    return c;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb) {
    MinResult best{0, ca * a[0] + cb * b[0]};
    for (std::size_t i = 1; i < n; ++i) {
        double v = ca * a[i] + cb * b[i];
        if (v < best.value) best = {i, v};
    }
    return best;
}

}  // namespace scalar

#if FAIRPOST_X86
bool avx2_available() {
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
}
#endif

const char* backend_name() {
#if FAIRPOST_X86
    if (avx2_available()) return "avx2";
#elif FAIRPOST_AARCH64
    return "neon";
#endif
    return "scalar";
}

double sum(const double* x, std::size_t n) {
#if FAIRPOST_X86
    if (avx2_available()) return avx2::sum(x, n);
#elif FAIRPOST_AARCH64
    return neon::sum(x, n);
#endif
    return scalar::sum(x, n);
}

std::size_t count_greater(const double* x, std::size_t n, double t) {
#if FAIRPOST_X86
    if (avx2_available()) return avx2::count_greater(x, n, t);
#elif FAIRPOST_AARCH64
    return neon::count_greater(x, n, t);
#endif
    return scalar::count_greater(x, n, t);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
#if FAIRPOST_X86
    if (avx2_available()) return avx2::max_abs_diff(a, b, n);
#elif FAIRPOST_AARCH64
    return neon::max_abs_diff(a, b, n);
#endif
    return scalar::max_abs_diff(a, b, n);
}

MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb) {
#if FAIRPOST_X86
    if (avx2_available()) return avx2::min_affine(a, b, n, ca, cb);
#elif FAIRPOST_AARCH64
    return neon::min_affine(a, b, n, ca, cb);
#endif
    return scalar::min_affine(a, b, n, ca, cb);
}

}  // namespace fairpost::kern
