#pragma once

#include <cstddef>
#include <cstdint>

// Hot integer kernels with a scalar reference and an AVX2 variant chosen at runtime.
namespace pgz::simd {

// y[i] += a * x[i] (two's complement wraparound; callers guard overflow)
void axpy_i64(int64_t* y, const int64_t* x, int64_t a, std::size_t n);
// max |x[i]|, saturating at INT64_MAX
uint64_t max_abs_i64(const int64_t* x, std::size_t n);
// out[i] = (a[i] + b[i]) mod m, inputs already reduced below m
void add_mod_u32(uint32_t* out, const uint32_t* a, const uint32_t* b, uint32_t m, std::size_t n);

const char* active_variant();
bool avx2_available();

namespace scalar {
void axpy_i64(int64_t* y, const int64_t* x, int64_t a, std::size_t n);
uint64_t max_abs_i64(const int64_t* x, std::size_t n);
void add_mod_u32(uint32_t* out, const uint32_t* a, const uint32_t* b, uint32_t m, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
namespace avx2 {
void axpy_i64(int64_t* y, const int64_t* x, int64_t a, std::size_t n);
uint64_t max_abs_i64(const int64_t* x, std::size_t n);
void add_mod_u32(uint32_t* out, const uint32_t* a, const uint32_t* b, uint32_t m, std::size_t n);
}  // namespace avx2
#endif

}  // namespace pgz::simd
