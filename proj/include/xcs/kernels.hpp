#pragma once

#include <complex>
#include <cstddef>

namespace xcs::kernels {

using cplx = std::complex<double>;

// Amplitude-array kernels for single-qubit matrix application and CNOT.
// `stride` is 1 << bitpos of the target bit within the index; `n` is the
// total amplitude count (a power of two).  The matrix is row-major
// {m00, m01, m10, m11}.
struct KernelSet {
  const char* name;
  void (*apply_matrix1q)(cplx* amps, std::size_t n, std::size_t stride,
                         const cplx* m);
  void (*apply_x)(cplx* amps, std::size_t n, std::size_t stride);
  void (*apply_cnot)(cplx* amps, std::size_t n, std::size_t cstride,
                     std::size_t tstride);
};

const KernelSet& scalar_kernels();

bool avx2_compiled();
bool avx2_available();
const KernelSet& avx2_kernels();  // only meaningful when avx2_available()

/// Runtime-selected kernel set.  Defaults to AVX2 when the CPU supports it;
/// the XCS_KERNELS environment variable ("scalar" or "avx2") overrides.
const KernelSet& active();

/// Force a kernel set (tests); pass nullptr to restore automatic selection.
void set_active(const KernelSet* ks);

}  // namespace xcs::kernels
