#include "hsmt/kernels.hpp"

#if defined(HSMT_HAVE_AVX2)

#include <immintrin.h>

namespace hsmt::kern::detail {

namespace {

// Multiplies two packed complex doubles (re0,im0,re1,im1) by a constant
// phase c, given c broadcast as cc = (re,im,re,im) and its swapped form
// ct = (-im,re,-im,re).
inline __m256d cmul_const(__m256d v, __m256d cc, __m256d ct) {
  __m256d re = _mm256_mul_pd(_mm256_movedup_pd(v), cc);
  __m256d im = _mm256_mul_pd(_mm256_permute_pd(v, 0xF), ct);
  return _mm256_add_pd(re, im);
}

}  // namespace

void phase_mask_avx2(cplx* amps, size_t n, uint64_t mask, uint64_t match, cplx phase) {
  double* d = reinterpret_cast<double*>(amps);
  const __m256d cc = _mm256_setr_pd(phase.real(), phase.imag(), phase.real(), phase.imag());
  const __m256d ct = _mm256_setr_pd(-phase.imag(), phase.real(), -phase.imag(), phase.real());

  // Matching indices come in contiguous runs of 2^tz(mask); long runs take
  // the vector path, stragglers stay scalar.
  if (mask == 0) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      __m256d v = _mm256_loadu_pd(d + 2 * i);
      _mm256_storeu_pd(d + 2 * i, cmul_const(v, cc, ct));
    }
    for (; i < n; ++i) amps[i] *= phase;
    return;
  }
  uint64_t run = uint64_t{1} << __builtin_ctzll(mask);
  for (uint64_t base = match; base < n;
       base = ((((base + run - 1) | mask) + 1) & ~mask) | match) {
    uint64_t end = base + (run < n - base ? run : n - base);
    uint64_t i = base;
    for (; i + 2 <= end; i += 2) {
      __m256d v = _mm256_loadu_pd(d + 2 * i);
      _mm256_storeu_pd(d + 2 * i, cmul_const(v, cc, ct));
    }
    for (; i < end; ++i) amps[i] *= phase;
  }
}

double norm2_avx2(const cplx* amps, size_t n) {
  const double* d = reinterpret_cast<const double*>(amps);
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(d + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double out = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i)
    out += amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
  return out;
}

void scale_avx2(cplx* amps, size_t n, double s) {
  double* d = reinterpret_cast<double*>(amps);
  const __m256d sv = _mm256_set1_pd(s);
  size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), sv));
  for (; i < n; ++i) amps[i] *= s;
}

}  // namespace hsmt::kern::detail

#endif  // HSMT_HAVE_AVX2
