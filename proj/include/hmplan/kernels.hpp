#pragma once

#include <cstddef>
#include <cstdint>

// Word-level kernels for the packed occupancy bit planes. These are the inner
// loops of every connectivity sweep (base-connectivity flood, component
// labelling, final-state comparison), so they exist in two builds: a scalar
// reference implementation and an AVX2 variant picked at runtime. The two are
// equivalence-tested bit for bit; everything above this layer is agnostic to
// which one runs.
//
// Conventions: buffers are arrays of uint64_t, length n words. Bits past a
// row's logical width are slack; kernels may spread garbage into slack bits
// (spread_x_or shifts across word boundaries), and consumers are expected to
// mask with a properly zero-padded plane (the occupancy plane always is).

namespace hmplan::kernels {

struct Ops {
  // dst[w] |= src[w] | (src << 1) | (src >> 1), bit shifts carrying across
  // word boundaries over the whole buffer.
  void (*spread_x_or)(uint64_t* dst, const uint64_t* src, size_t n);

  // dst[w] |= src[w]
  void (*or_into)(uint64_t* dst, const uint64_t* src, size_t n);

  // dst[w] = a[w] & ~b[w]
  void (*andnot)(uint64_t* dst, const uint64_t* a, const uint64_t* b, size_t n);

  // dst[w] = a[w] & b[w] & ~c[w]; returns true if any bit survived.
  bool (*and_andnot_any)(uint64_t* dst, const uint64_t* a, const uint64_t* b,
                         const uint64_t* c, size_t n);

  uint64_t (*popcount)(const uint64_t* p, size_t n);

  bool (*equal)(const uint64_t* a, const uint64_t* b, size_t n);

  bool (*any)(const uint64_t* p, size_t n);

  const char* name;
};

// Scalar reference implementation; always available.
const Ops& scalar_ops();

// AVX2 implementation, or nullptr when the binary or the CPU lacks it.
const Ops* avx2_ops();

// Runtime-selected implementation. Honors HMPLAN_SIMD=scalar|avx2 in the
// environment (first call wins); defaults to the widest supported variant.
const Ops& active_ops();

// Test hook: override the active implementation (nullptr restores default
// selection).
void force_ops(const Ops* ops);

}  // namespace hmplan::kernels
