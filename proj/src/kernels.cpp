#include "hsmt/kernels.hpp"

namespace hsmt::kern {

namespace {

using PhaseMaskFn = void (*)(cplx*, size_t, uint64_t, uint64_t, cplx);
using Norm2Fn = double (*)(const cplx*, size_t);
using ScaleFn = void (*)(cplx*, size_t, double);

struct Dispatch {
  PhaseMaskFn phase_mask = detail::phase_mask_scalar;
  Norm2Fn norm2 = detail::norm2_scalar;
  ScaleFn scale = detail::scale_scalar;
  const char* lane = "scalar";
};

Dispatch pick_lane() {
  Dispatch d;
#if defined(HSMT_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    d.phase_mask = detail::phase_mask_avx2;
    d.norm2 = detail::norm2_avx2;
    d.scale = detail::scale_avx2;
    d.lane = "avx2";
  }
#endif
  return d;
}

const Dispatch& dispatch() {
  static const Dispatch d = pick_lane();
  return d;
}

}  // namespace

void phase_mask(cplx* amps, size_t n, uint64_t mask, uint64_t match, cplx phase) {
  dispatch().phase_mask(amps, n, mask, match, phase);
}

double norm2(const cplx* amps, size_t n) { return dispatch().norm2(amps, n); }

void scale(cplx* amps, size_t n, double s) { dispatch().scale(amps, n, s); }

const char* active_lane() { return dispatch().lane; }

}  // namespace hsmt::kern
