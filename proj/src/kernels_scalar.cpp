#include "hmplan/kernels.hpp"

#include <bit>

namespace hmplan::kernels {
namespace {

void spread_x_or_scalar(uint64_t* dst, const uint64_t* src, size_t n) {
  if (n == 0) return;
  uint64_t prev = 0;
  for (size_t w = 0; w + 1 < n; ++w) {
    uint64_t cur = src[w];
    uint64_t next = src[w + 1];
    dst[w] |= cur | (cur << 1) | (cur >> 1) | (prev >> 63) | (next << 63);
    prev = cur;
  }
  uint64_t cur = src[n - 1];
  dst[n - 1] |= cur | (cur << 1) | (cur >> 1) | (prev >> 63);
}

void or_into_scalar(uint64_t* dst, const uint64_t* src, size_t n) {
  for (size_t w = 0; w < n; ++w) dst[w] |= src[w];
}

void andnot_scalar(uint64_t* dst, const uint64_t* a, const uint64_t* b, size_t n) {
  for (size_t w = 0; w < n; ++w) dst[w] = a[w] & ~b[w];
}

bool and_andnot_any_scalar(uint64_t* dst, const uint64_t* a, const uint64_t* b,
                           const uint64_t* c, size_t n) {
  uint64_t acc = 0;
  for (size_t w = 0; w < n; ++w) {
    uint64_t v = a[w] & b[w] & ~c[w];
    dst[w] = v;
    acc |= v;
  }
  return acc != 0;
}

uint64_t popcount_scalar(const uint64_t* p, size_t n) {
  uint64_t total = 0;
  for (size_t w = 0; w < n; ++w) total += static_cast<uint64_t>(std::popcount(p[w]));
  return total;
}

bool equal_scalar(const uint64_t* a, const uint64_t* b, size_t n) {
  for (size_t w = 0; w < n; ++w)
    if (a[w] != b[w]) return false;
  return true;
}

bool any_scalar(const uint64_t* p, size_t n) {
  uint64_t acc = 0;
  for (size_t w = 0; w < n; ++w) acc |= p[w];
  return acc != 0;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      spread_x_or_scalar, or_into_scalar,  andnot_scalar, and_andnot_any_scalar,
      popcount_scalar,    equal_scalar,    any_scalar,    "scalar"};
  return ops;
}

}  // namespace hmplan::kernels
