#pragma once

#include <cmath>
#include <cstdint>

namespace fairpost {

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Inverse standard normal CDF (Acklam's rational approximation with one
/// Halley refinement step; relative error below 1e-14 on (0,1)).
inline double normal_ppf(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step against the exact CDF.
    double e = normal_cdf(x) - p;
    double u = e * 2.50662827463100050242 * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

namespace rng {

/// SplitMix64 finalizer.
inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based value: deterministic per (seed, index), so shards of a
/// stream can be generated independently.
inline std::uint64_t value_at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + index * 0x9E3779B97F4A7C15ull);
}

/// Uniform draw in the open interval (0,1).
inline double uniform01_at(std::uint64_t seed, std::uint64_t index) {
    return (static_cast<double>(value_at(seed, index) >> 11) + 0.5) * 0x1.0p-53;
}

/// Sequential view over a counter stream. No global state; each consumer owns
/// its stream.
class Stream {
public:
    explicit Stream(std::uint64_t seed, std::uint64_t start_index = 0)
        : seed_(seed), index_(start_index) {}

    std::uint64_t next_u64() { return value_at(seed_, index_++); }
    double next_uniform() { return uniform01_at(seed_, index_++); }
    double next_normal() { return normal_ppf(next_uniform()); }
    bool next_bernoulli(double p) { return next_uniform() < p; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t index() const { return index_; }

private:
    std::uint64_t seed_;
    std::uint64_t index_;
};

}  // namespace rng
}  // namespace fairpost
