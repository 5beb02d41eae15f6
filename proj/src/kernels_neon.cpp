#include "fairpost/kernels.hpp"

#if FAIRPOST_AARCH64

#include <arm_neon.h>

#include <cmath>
#include <cstdint>

namespace fairpost::kern::neon {

double sum(const double* x, std::size_t n) {
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) total += x[i];
    return total;
}

std::size_t count_greater(const double* x, std::size_t n, double t) {
    std::size_t i = 0, c = 0;
    const float64x2_t tv = vdupq_n_f64(t);
    for (; i + 2 <= n; i += 2) {
        uint64x2_t m = vcgtq_f64(vld1q_f64(x + i), tv);
        c += (vgetq_lane_u64(m, 0) & 1u) + (vgetq_lane_u64(m, 1) & 1u);
    }
    for (; i < n; ++i) c += (x[i] > t) ? 1 : 0;
    return c;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    float64x2_t best = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        best = vmaxq_f64(best, d);
    }
    double m = vgetq_lane_f64(best, 0);
    if (vgetq_lane_f64(best, 1) > m) m = vgetq_lane_f64(best, 1);
    for (; i < n; ++i) {
        double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb) {
    if (n < 2) return scalar::min_affine(a, b, n, ca, cb);
    const float64x2_t cav = vdupq_n_f64(ca);
    const float64x2_t cbv = vdupq_n_f64(cb);
    // Plain mul+add (no fused op) so the rounding matches the scalar path.
    float64x2_t vmin = vaddq_f64(vmulq_f64(cav, vld1q_f64(a)), vmulq_f64(cbv, vld1q_f64(b)));
    uint64x2_t imin = {0, 1};
    uint64x2_t icur = imin;
    const uint64x2_t step = vdupq_n_u64(2);
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2) {
        icur = vaddq_u64(icur, step);
        float64x2_t v =
            vaddq_f64(vmulq_f64(cav, vld1q_f64(a + i)), vmulq_f64(cbv, vld1q_f64(b + i)));
        uint64x2_t lt = vcltq_f64(v, vmin);
        vmin = vbslq_f64(lt, v, vmin);
        imin = vbslq_u64(lt, icur, imin);
    }
    double v0 = vgetq_lane_f64(vmin, 0), v1 = vgetq_lane_f64(vmin, 1);
    std::size_t i0 = vgetq_lane_u64(imin, 0), i1 = vgetq_lane_u64(imin, 1);
    MinResult best{i0, v0};
    if (v1 < best.value || (v1 == best.value && i1 < best.index)) best = {i1, v1};
    for (; i < n; ++i) {
        double v = ca * a[i] + cb * b[i];
        if (v < best.value) best = {i, v};
    }
    return best;
}

}  // namespace fairpost::kern::neon

#endif  // FAIRPOST_AARCH64
