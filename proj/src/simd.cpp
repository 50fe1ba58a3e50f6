#include "pgz/simd.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define PGZ_X86 1
#endif

namespace pgz::simd {

namespace scalar {

void axpy_i64(int64_t* y, const int64_t* x, int64_t a, std::size_t n) {
    const uint64_t ua = static_cast<uint64_t>(a);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = static_cast<int64_t>(static_cast<uint64_t>(y[i]) + ua * static_cast<uint64_t>(x[i]));
}

uint64_t max_abs_i64(const int64_t* x, std::size_t n) {
    uint64_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        uint64_t v = x[i] < 0 ? (x[i] == std::numeric_limits<int64_t>::min()
                                     ? static_cast<uint64_t>(std::numeric_limits<int64_t>::max())
                                     : static_cast<uint64_t>(-x[i]))
                              : static_cast<uint64_t>(x[i]);
        if (v > m) m = v;
    }
    return m;
}

void add_mod_u32(uint32_t* out, const uint32_t* a, const uint32_t* b, uint32_t m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        uint32_t s = a[i] + b[i];
        out[i] = (s >= m || s < a[i]) ? s - m : s;
    }
}

}  // namespace scalar

#ifdef PGZ_X86
namespace avx2 {

// 64x64 -> low 64 multiply from 32-bit halves
__attribute__((target("avx2"))) static inline __m256i mullo64(__m256i x, __m256i a) {
    __m256i xh = _mm256_srli_epi64(x, 32);
    __m256i ah = _mm256_srli_epi64(a, 32);
    __m256i lo = _mm256_mul_epu32(x, a);
    __m256i c1 = _mm256_mul_epu32(xh, a);
    __m256i c2 = _mm256_mul_epu32(x, ah);
    __m256i cross = _mm256_slli_epi64(_mm256_add_epi64(c1, c2), 32);
    return _mm256_add_epi64(lo, cross);
}

__attribute__((target("avx2"))) void axpy_i64(int64_t* y, const int64_t* x, int64_t a, std::size_t n) {
    const __m256i va = _mm256_set1_epi64x(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i vx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
        __m256i vy = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i));
        vy = _mm256_add_epi64(vy, mullo64(vx, va));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(y + i), vy);
    }
    scalar::axpy_i64(y + i, x + i, a, n - i);
}

__attribute__((target("avx2"))) uint64_t max_abs_i64(const int64_t* x, std::size_t n) {
    __m256i vmax = _mm256_setzero_si256();
    const __m256i zero = _mm256_setzero_si256();
    const __m256i sign = _mm256_set1_epi64x(std::numeric_limits<int64_t>::min());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
        __m256i neg = _mm256_cmpgt_epi64(zero, v);
        __m256i absv = _mm256_sub_epi64(_mm256_xor_si256(v, neg), neg);
        // unsigned compare via sign flip
        __m256i gt = _mm256_cmpgt_epi64(_mm256_xor_si256(absv, sign), _mm256_xor_si256(vmax, sign));
        vmax = _mm256_blendv_epi8(vmax, absv, gt);
    }
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), vmax);
    uint64_t m = scalar::max_abs_i64(x + i, n - i);
    for (uint64_t l : lanes) {
        if (l > static_cast<uint64_t>(std::numeric_limits<int64_t>::max()))
            l = static_cast<uint64_t>(std::numeric_limits<int64_t>::max());
        if (l > m) m = l;
    }
    return m;
}

__attribute__((target("avx2"))) void add_mod_u32(uint32_t* out, const uint32_t* a, const uint32_t* b, uint32_t m,
                                                 std::size_t n) {
    const __m256i vm = _mm256_set1_epi32(static_cast<int>(m));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i s = _mm256_add_epi32(va, vb);
        __m256i d = _mm256_sub_epi32(s, vm);
        // s mod m == min_u32(s, s - m) since inputs are < m
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_min_epu32(s, d));
    }
    scalar::add_mod_u32(out + i, a + i, b + i, m, n - i);
}

}  // namespace avx2
#endif

namespace {

struct Table {
    void (*axpy)(int64_t*, const int64_t*, int64_t, std::size_t);
    uint64_t (*maxabs)(const int64_t*, std::size_t);
    void (*addmod)(uint32_t*, const uint32_t*, const uint32_t*, uint32_t, std::size_t);
    const char* name;
};

Table pick() {
    const char* force = std::getenv("PGZ_SIMD");
    bool want_scalar = force && std::strcmp(force, "scalar") == 0;
#ifdef PGZ_X86
    if (!want_scalar && avx2_available())
        return {avx2::axpy_i64, avx2::max_abs_i64, avx2::add_mod_u32, "avx2"};
#endif
    (void)want_scalar;
    return {scalar::axpy_i64, scalar::max_abs_i64, scalar::add_mod_u32, "scalar"};
}

const Table& table() {
    static const Table t = pick();
    return t;
}

}  // namespace

bool avx2_available() {
#ifdef PGZ_X86
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const char* active_variant() { return table().name; }

void axpy_i64(int64_t* y, const int64_t* x, int64_t a, std::size_t n) { table().axpy(y, x, a, n); }
uint64_t max_abs_i64(const int64_t* x, std::size_t n) { return table().maxabs(x, n); }
void add_mod_u32(uint32_t* out, const uint32_t* a, const uint32_t* b, uint32_t m, std::size_t n) {
    table().addmod(out, a, b, m, n);
}

}  // namespace pgz::simd
