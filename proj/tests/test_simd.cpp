#include <random>
#include <vector>

#include "doctest.h"
#include "pgz/simd.hpp"

using namespace pgz;

TEST_CASE("simd kernels agree with scalar reference") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 31u, 64u, 257u}) {
        std::vector<int64_t> x(n), y(n);
        for (auto& v : x) v = static_cast<int64_t>(rng() % 2000001) - 1000000;
        for (auto& v : y) v = static_cast<int64_t>(rng() % 2000001) - 1000000;
        int64_t a = static_cast<int64_t>(rng() % 20001) - 10000;
        auto y1 = y, y2 = y;
        simd::scalar::axpy_i64(y1.data(), x.data(), a, n);
        simd::axpy_i64(y2.data(), x.data(), a, n);
        CHECK(y1 == y2);
        // large magnitudes exercise the 64-bit multiply emulation
        std::vector<int64_t> big(n);
        for (auto& v : big) v = static_cast<int64_t>(rng() >> 2) * ((rng() & 1) ? 1 : -1);
        auto z1 = y, z2 = y;
        simd::scalar::axpy_i64(z1.data(), big.data(), -123456789, n);
        simd::axpy_i64(z2.data(), big.data(), -123456789, n);
        CHECK(z1 == z2);
        CHECK(simd::scalar::max_abs_i64(big.data(), n) == simd::max_abs_i64(big.data(), n));

        uint32_t m = 2352;
        std::vector<uint32_t> p(n), q(n), o1(n), o2(n);
        for (auto& v : p) v = static_cast<uint32_t>(rng() % m);
        for (auto& v : q) v = static_cast<uint32_t>(rng() % m);
        simd::scalar::add_mod_u32(o1.data(), p.data(), q.data(), m, n);
        simd::add_mod_u32(o2.data(), p.data(), q.data(), m, n);
        CHECK(o1 == o2);
#if defined(__x86_64__)
        if (simd::avx2_available()) {
            auto w1 = y, w2 = y;
            simd::scalar::axpy_i64(w1.data(), big.data(), 987654321987LL, n);
            simd::avx2::axpy_i64(w2.data(), big.data(), 987654321987LL, n);
            CHECK(w1 == w2);
            std::vector<uint32_t> o3(n);
            simd::avx2::add_mod_u32(o3.data(), p.data(), q.data(), m, n);
            CHECK(o1 == o3);
            CHECK(simd::scalar::max_abs_i64(x.data(), n) == simd::avx2::max_abs_i64(x.data(), n));
        }
#endif
    }
}

TEST_CASE("max_abs saturates at INT64_MIN") {
    std::vector<int64_t> v{1, INT64_MIN, 3, 4, 5};
    CHECK(simd::scalar::max_abs_i64(v.data(), v.size()) == static_cast<uint64_t>(INT64_MAX));
    CHECK(simd::max_abs_i64(v.data(), v.size()) == static_cast<uint64_t>(INT64_MAX));
}
