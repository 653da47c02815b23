#include "hsmt/kernels.hpp"

namespace hsmt::kern::detail {

void phase_mask_scalar(cplx* amps, size_t n, uint64_t mask, uint64_t match, cplx phase) {
  for (size_t i = 0; i < n; ++i)
    if ((i & mask) == match) amps[i] *= phase;
}

double norm2_scalar(const cplx* amps, size_t n) {
  double acc = 0;
  for (size_t i = 0; i < n; ++i)
    acc += amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
  return acc;
}

void scale_scalar(cplx* amps, size_t n, double s) {
  for (size_t i = 0; i < n; ++i) amps[i] *= s;
}

}  // namespace hsmt::kern::detail
