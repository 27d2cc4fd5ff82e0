#include <utility>

#include "xcs/kernels.hpp"

namespace xcs::kernels {

namespace {

void matrix1q_scalar(cplx* amps, std::size_t n, std::size_t stride,
                     const cplx* m) {
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a = amps[i];
      const cplx b = amps[i + stride];
      amps[i] = m[0] * a + m[1] * b;
      amps[i + stride] = m[2] * a + m[3] * b;
    }
  }
}

void x_scalar(cplx* amps, std::size_t n, std::size_t stride) {
  for (std::size_t base = 0; base < n; base += 2 * stride)
    for (std::size_t i = base; i < base + stride; ++i)
      std::swap(amps[i], amps[i + stride]);
}

void cnot_scalar(cplx* amps, std::size_t n, std::size_t cstride,
                 std::size_t tstride) {
  // Swap pairs (i, i | tstride) over indices with the control bit set and the
  // target bit clear.  Runs of length min(cstride, tstride) are contiguous.
  const std::size_t lo = cstride < tstride ? cstride : tstride;
  for (std::size_t i = 0; i < n; i += lo) {
    if ((i & cstride) && !(i & tstride)) {
      for (std::size_t j = i; j < i + lo; ++j)
        std::swap(amps[j], amps[j + tstride]);
    }
  }
}

const KernelSet kScalar{"scalar", matrix1q_scalar, x_scalar, cnot_scalar};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace xcs::kernels
