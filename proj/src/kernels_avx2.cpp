#include "hmplan/kernels.hpp"

#include <bit>
#include <immintrin.h>

// AVX2 variants of the bit-plane kernels. Compiled only into x86_64 builds;
// selected at runtime when the CPU reports AVX2.

namespace hmplan::kernels {
namespace {

void spread_x_or_avx2(uint64_t* dst, const uint64_t* src, size_t n) {
  if (n == 0) return;
  // Vector body covers words [1, n-1); the carry-ins are unaligned loads of
  // the neighbouring words shifted by 63.
  size_t w = 1;
  if (n > 5) {
    for (; w + 4 < n; w += 4) {
      __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + w));
      __m256i prev = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + w - 1));
      __m256i next = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + w + 1));
      __m256i d = _mm256_loadu_si256(reinterpret_cast<__m256i*>(dst + w));
      __m256i v = _mm256_or_si256(cur, _mm256_slli_epi64(cur, 1));
      v = _mm256_or_si256(v, _mm256_srli_epi64(cur, 1));
      v = _mm256_or_si256(v, _mm256_srli_epi64(prev, 63));
      v = _mm256_or_si256(v, _mm256_slli_epi64(next, 63));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + w), _mm256_or_si256(d, v));
    }
  }
  // Scalar head, tail and small-n fallback.
  {
    uint64_t cur = src[0];
    uint64_t next = n > 1 ? src[1] : 0;
    dst[0] |= cur | (cur << 1) | (cur >> 1) | (next << 63);
  }
  for (; w < n; ++w) {
    uint64_t cur = src[w];
    uint64_t prev = src[w - 1];
    uint64_t next = w + 1 < n ? src[w + 1] : 0;
    dst[w] |= cur | (cur << 1) | (cur >> 1) | (prev >> 63) | (next << 63);
  }
}

void or_into_avx2(uint64_t* dst, const uint64_t* src, size_t n) {
  size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<__m256i*>(dst + w));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + w));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + w), _mm256_or_si256(a, b));
  }
  for (; w < n; ++w) dst[w] |= src[w];
}

void andnot_avx2(uint64_t* dst, const uint64_t* a, const uint64_t* b, size_t n) {
  size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
    // _mm256_andnot_si256(x, y) = ~x & y
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + w), _mm256_andnot_si256(vb, va));
  }
  for (; w < n; ++w) dst[w] = a[w] & ~b[w];
}

bool and_andnot_any_avx2(uint64_t* dst, const uint64_t* a, const uint64_t* b,
                         const uint64_t* c, size_t n) {
  __m256i acc = _mm256_setzero_si256();
  size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
    __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + w));
    __m256i v = _mm256_andnot_si256(vc, _mm256_and_si256(va, vb));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + w), v);
    acc = _mm256_or_si256(acc, v);
  }
  uint64_t tail = 0;
  for (; w < n; ++w) {
    uint64_t v = a[w] & b[w] & ~c[w];
    dst[w] = v;
    tail |= v;
  }
  return tail != 0 || !_mm256_testz_si256(acc, acc);
}

uint64_t popcount_avx2(const uint64_t* p, size_t n) {
  // Harley-Seal style counting is overkill for our plane sizes; four hardware
  // popcounts per iteration already saturate the loads.
  uint64_t t0 = 0, t1 = 0, t2 = 0, t3 = 0;
  size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    t0 += static_cast<uint64_t>(_mm_popcnt_u64(p[w]));
    t1 += static_cast<uint64_t>(_mm_popcnt_u64(p[w + 1]));
    t2 += static_cast<uint64_t>(_mm_popcnt_u64(p[w + 2]));
    t3 += static_cast<uint64_t>(_mm_popcnt_u64(p[w + 3]));
  }
  uint64_t total = t0 + t1 + t2 + t3;
  for (; w < n; ++w) total += static_cast<uint64_t>(_mm_popcnt_u64(p[w]));
  return total;
}

bool equal_avx2(const uint64_t* a, const uint64_t* b, size_t n) {
  size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
    __m256i x = _mm256_xor_si256(va, vb);
    if (!_mm256_testz_si256(x, x)) return false;
  }
  for (; w < n; ++w)
    if (a[w] != b[w]) return false;
  return true;
}

bool any_avx2(const uint64_t* p, size_t n) {
  __m256i acc = _mm256_setzero_si256();
  size_t w = 0;
  for (; w + 4 <= n; w += 4)
    acc = _mm256_or_si256(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + w)));
  uint64_t tail = 0;
  for (; w < n; ++w) tail |= p[w];
  return tail != 0 || !_mm256_testz_si256(acc, acc);
}

}  // namespace

const Ops& avx2_ops_impl() {
  static const Ops ops = {
      spread_x_or_avx2, or_into_avx2, andnot_avx2, and_andnot_any_avx2,
      popcount_avx2,    equal_avx2,   any_avx2,    "avx2"};
  return ops;
}

}  // namespace hmplan::kernels
