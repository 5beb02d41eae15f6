#pragma once

// Data-parallel inner loops shared by the estimators, the audit scans and the
// threshold sweeps. Each kernel has a scalar reference implementation plus
// SIMD variants (AVX2 on x86-64, NEON on aarch64) selected at runtime; the
// test suite checks the variants against the scalar reference.

#include <cstddef>
#include <span>

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define FAIRPOST_X86 1
#else
#define FAIRPOST_X86 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define FAIRPOST_AARCH64 1
#else
#define FAIRPOST_AARCH64 0
#endif

namespace fairpost::kern {

struct MinResult {
    std::size_t index = 0;  // first index attaining the minimum
    double value = 0.0;
};

// Dispatched entry points.
double sum(const double* x, std::size_t n);
std::size_t count_greater(const double* x, std::size_t n, double t);
double max_abs_diff(const double* a, const double* b, std::size_t n);
// argmin over i of ca*a[i] + cb*b[i]; n must be >= 1.
MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb);

inline double sum(std::span<const double> x) { return sum(x.data(), x.size()); }
inline std::size_t count_greater(std::span<const double> x, double t) {
    return count_greater(x.data(), x.size(), t);
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return max_abs_diff(a.data(), b.data(), a.size());
}
inline MinResult min_affine(std::span<const double> a, std::span<const double> b, double ca,
                            double cb) {
    return min_affine(a.data(), b.data(), a.size(), ca, cb);
}

/// Name of the backend the dispatcher would use ("avx2", "neon", "scalar").
const char* backend_name();

namespace scalar {
double sum(const double* x, std::size_t n);
std::size_t count_greater(const double* x, std::size_t n, double t);
double max_abs_diff(const double* a, const double* b, std::size_t n);
MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb);
}  // namespace scalar

#if FAIRPOST_X86
bool avx2_available();
namespace avx2 {
double sum(const double* x, std::size_t n);
std::size_t count_greater(const double* x, std::size_t n, double t);
double max_abs_diff(const double* a, const double* b, std::size_t n);
MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb);
}  // namespace avx2
#endif

#if FAIRPOST_AARCH64
namespace neon {
double sum(const double* x, std::size_t n);
std::size_t count_greater(const double* x, std::size_t n, double t);
double max_abs_diff(const double* a, const double* b, std::size_t n);
MinResult min_affine(const double* a, const double* b, std::size_t n, double ca, double cb);
}  // namespace neon
#endif

}  // namespace fairpost::kern
