#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fairpost/kernels.hpp"
#include "fairpost/rng.hpp"

using namespace fairpost;

namespace {

std::vector<double> random_vec(std::size_t n, rng::Stream& s, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = (s.next_uniform() - 0.5) * scale;
    return v;
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
    rng::Stream s(42);
    // Sizes around the vector width cover remainder handling.
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 64u, 1000u, 4097u}) {
        auto a = random_vec(n, s, 3.0);
        auto b = random_vec(n, s, 3.0);
        CAPTURE(n);

        CHECK(kern::sum(a.data(), n) ==
              doctest::Approx(kern::scalar::sum(a.data(), n)).epsilon(1e-12));

        double t = a[s.next_u64() % n];
        CHECK(kern::count_greater(a.data(), n, t) == kern::scalar::count_greater(a.data(), n, t));
        CHECK(kern::count_greater(a.data(), n, -10.0) == n);
        CHECK(kern::count_greater(a.data(), n, 10.0) == 0);

        // max and abs round identically in every lane, so this is bit-exact.
        CHECK(kern::max_abs_diff(a.data(), b.data(), n) ==
              kern::scalar::max_abs_diff(a.data(), b.data(), n));

        auto m1 = kern::min_affine(a.data(), b.data(), n, 0.7, -1.3);
        auto m2 = kern::scalar::min_affine(a.data(), b.data(), n, 0.7, -1.3);
        CHECK(m1.value == m2.value);
        CHECK(m1.index == m2.index);
    }
}

#if FAIRPOST_X86
TEST_CASE("avx2 variants agree with scalar when available") {
    if (!kern::avx2_available()) return;
    rng::Stream s(7);
    for (std::size_t n : {6u, 127u, 1024u}) {
        auto a = random_vec(n, s);
        auto b = random_vec(n, s);
        CHECK(kern::avx2::count_greater(a.data(), n, 0.0) ==
              kern::scalar::count_greater(a.data(), n, 0.0));
        CHECK(kern::avx2::max_abs_diff(a.data(), b.data(), n) ==
              kern::scalar::max_abs_diff(a.data(), b.data(), n));
        auto m1 = kern::avx2::min_affine(a.data(), b.data(), n, 2.0, 5.0);
        auto m2 = kern::scalar::min_affine(a.data(), b.data(), n, 2.0, 5.0);
        CHECK(m1.value == m2.value);
        CHECK(m1.index == m2.index);
        CHECK(kern::avx2::sum(a.data(), n) ==
              doctest::Approx(kern::scalar::sum(a.data(), n)).epsilon(1e-12));
    }
}
#endif

TEST_CASE("min_affine returns the first index among ties") {
    // lanes 1 and 5 hold the same minimum; the first one wins
    std::vector<double> a = {3, 1, 2, 4, 5, 1, 2, 3, 9};
    std::vector<double> b(a.size(), 0.0);
    auto m = kern::min_affine(a.data(), b.data(), a.size(), 1.0, 1.0);
    CHECK(m.index == 1);
    CHECK(m.value == 1.0);
}

TEST_CASE("backend name is consistent with the platform") {
    const char* name = kern::backend_name();
#if FAIRPOST_X86
    CHECK((std::string(name) == "avx2" || std::string(name) == "scalar"));
#else
    CHECK(name != nullptr);
#endif
}

TEST_CASE("normal ppf inverts the normal cdf") {
    for (double p : {1e-9, 1e-4, 0.02425, 0.3, 0.5, 0.7, 0.97575, 0.9999, 1 - 1e-9}) {
        double x = normal_ppf(p);
        CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(normal_ppf(0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("counter stream is deterministic and splittable") {
    rng::Stream s1(99), s2(99);
    for (int i = 0; i < 100; ++i) CHECK(s1.next_u64() == s2.next_u64());
    // value_at addresses the same stream positions
    rng::Stream s3(99);
    (void)s3.next_u64();
    CHECK(s3.next_u64() == rng::value_at(99, 1));
}
