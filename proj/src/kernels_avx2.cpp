#include "fairpost/kernels.hpp"

#if FAIRPOST_X86

#include <immintrin.h>

#include <cmath>
#include <cstdint>

// Build note: this translation unit is compiled with -mavx2 and with FP
// contraction off, so min_affine rounds mul+add exactly like the scalar
// reference and the equivalence tests can compare bit-for-bit. Callers must
// gate on avx2_available().

namespace fairpost::kern::avx2 {

double sum(const double* x, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) total += x[i];
    return total;
}

std::size_t count_greater(const double* x, std::size_t n, double t) {
    std::size_t i = 0, c = 0;
    const __m256d tv = _mm256_set1_pd(t);
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d m = _mm256_cmp_pd(v, tv, _CMP_GT_OQ);
        c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(m)));
    }
    for (; i < n; ++i) c += (x[i] > t) ? 1 : 0;
    return c;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        best = _mm256_max_pd(best, _mm256_andnot_pd(signmask, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double m = lanes[0];
    if (lanes[1] > m) m = lanes[1];
    if (lanes[2] > m) m = lanes[2];
    if (lanes[3] > m) m = lanes[3];
    for (; i < n; ++i) {
        double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb) {
    if (n < 4) return scalar::min_affine(a, b, n, ca, cb);
    const __m256d cav = _mm256_set1_pd(ca);
    const __m256d cbv = _mm256_set1_pd(cb);
    __m256d vmin = _mm256_add_pd(_mm256_mul_pd(cav, _mm256_loadu_pd(a)),
                                 _mm256_mul_pd(cbv, _mm256_loadu_pd(b)));
    __m256i imin = _mm256_set_epi64x(3, 2, 1, 0);
    __m256i icur = imin;
    const __m256i step = _mm256_set1_epi64x(4);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        icur = _mm256_add_epi64(icur, step);
        __m256d v = _mm256_add_pd(_mm256_mul_pd(cav, _mm256_loadu_pd(a + i)),
                                  _mm256_mul_pd(cbv, _mm256_loadu_pd(b + i)));
        __m256d lt = _mm256_cmp_pd(v, vmin, _CMP_LT_OQ);
        vmin = _mm256_blendv_pd(vmin, v, lt);
        imin = _mm256_blendv_epi8(imin, icur, _mm256_castpd_si256(lt));
    }
    alignas(32) double vals[4];
    alignas(32) std::int64_t idxs[4];
    _mm256_store_pd(vals, vmin);
    _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), imin);
    // Equal lane minima resolve to the smallest index, matching the scalar
    // first-occurrence rule (each lane already stores its own first minimum).
    MinResult best{static_cast<std::size_t>(idxs[0]), vals[0]};
    for (int lane = 1; lane < 4; ++lane) {
        if (vals[lane] < best.value ||
            (vals[lane] == best.value && static_cast<std::size_t>(idxs[lane]) < best.index)) {
            best = {static_cast<std::size_t>(idxs[lane]), vals[lane]};
        }
    }
    for (; i < n; ++i) {
        double v = ca * a[i] + cb * b[i];
        if (v < best.value) best = {i, v};
    }
    return best;
}

}  // namespace fairpost::kern::avx2

#endif  // FAIRPOST_X86
