#pragma once

#include <cstddef>
#include <cstdint>

#include "hsmt/common.hpp"

namespace hsmt::kern {

// Flat amplitude-array kernels behind the dense simulator. Each has a scalar
// reference implementation and an AVX2 variant; the active lane is picked
// once at startup from CPU capabilities. hsmt_kernel_lane() reports which
// one is live so the equivalence tests can tell whether SIMD was exercised.

// amps[i] *= phase for every i in [0,n) with (i & mask) == match.
void phase_mask(cplx* amps, size_t n, uint64_t mask, uint64_t match, cplx phase);

// Sum of |amps[i]|^2.
double norm2(const cplx* amps, size_t n);

// amps[i] *= s.
void scale(cplx* amps, size_t n, double s);

const char* active_lane();

namespace detail {
void phase_mask_scalar(cplx*, size_t, uint64_t, uint64_t, cplx);
double norm2_scalar(const cplx*, size_t);
void scale_scalar(cplx*, size_t, double);
#if defined(HSMT_HAVE_AVX2)
void phase_mask_avx2(cplx*, size_t, uint64_t, uint64_t, cplx);
double norm2_avx2(const cplx*, size_t);
void scale_avx2(cplx*, size_t, double);
#endif
}  // namespace detail

}  // namespace hsmt::kern
