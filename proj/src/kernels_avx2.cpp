// AVX2 variants of the amplitude kernels.  Each __m256d holds two
// complex<double> values laid out (re0, im0, re1, im1).  This translation
// unit is compiled with -mavx2; callers must check avx2_available() before
// selecting these kernels.

#include "xcs/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define XCS_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#endif

#include <utility>

namespace xcs::kernels {

#ifdef XCS_HAVE_AVX2_BUILD

namespace {

// (a + ib) * c for two packed complex values, c broadcast from a scalar.
inline __m256d cmul(__m256d x, __m256d cre, __m256d cim) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);  // swap re/im lanes
  return _mm256_fmaddsub_pd(x, cre, _mm256_mul_pd(xs, cim));
}

void matrix1q_avx2(cplx* amps, std::size_t n, std::size_t stride,
                   const cplx* m) {
  if (stride < 2) {
    // Target bit is the lowest bit: pairs are interleaved, keep it scalar.
    for (std::size_t i = 0; i < n; i += 2) {
      const cplx a = amps[i];
      const cplx b = amps[i + 1];
      amps[i] = m[0] * a + m[1] * b;
      amps[i + 1] = m[2] * a + m[3] * b;
    }
    return;
  }
  const __m256d m00r = _mm256_set1_pd(m[0].real()), m00i = _mm256_set1_pd(m[0].imag());
  const __m256d m01r = _mm256_set1_pd(m[1].real()), m01i = _mm256_set1_pd(m[1].imag());
  const __m256d m10r = _mm256_set1_pd(m[2].real()), m10i = _mm256_set1_pd(m[2].imag());
  const __m256d m11r = _mm256_set1_pd(m[3].real()), m11i = _mm256_set1_pd(m[3].imag());
  double* p = reinterpret_cast<double*>(amps);
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      double* pa = p + 2 * i;
      double* pb = p + 2 * (i + stride);
      const __m256d a = _mm256_loadu_pd(pa);
      const __m256d b = _mm256_loadu_pd(pb);
      const __m256d na =
          _mm256_add_pd(cmul(a, m00r, m00i), cmul(b, m01r, m01i));
      const __m256d nb =
          _mm256_add_pd(cmul(a, m10r, m10i), cmul(b, m11r, m11i));
      _mm256_storeu_pd(pa, na);
      _mm256_storeu_pd(pb, nb);
    }
  }
}

void x_avx2(cplx* amps, std::size_t n, std::size_t stride) {
  if (stride < 2) {
    for (std::size_t i = 0; i < n; i += 2) std::swap(amps[i], amps[i + 1]);
    return;
  }
  double* p = reinterpret_cast<double*>(amps);
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      double* pa = p + 2 * i;
      double* pb = p + 2 * (i + stride);
      const __m256d a = _mm256_loadu_pd(pa);
      const __m256d b = _mm256_loadu_pd(pb);
      _mm256_storeu_pd(pa, b);
      _mm256_storeu_pd(pb, a);
    }
  }
}

void cnot_avx2(cplx* amps, std::size_t n, std::size_t cstride,
               std::size_t tstride) {
  const std::size_t lo = cstride < tstride ? cstride : tstride;
  if (lo < 2) {
    for (std::size_t i = 0; i < n; i += lo)
      if ((i & cstride) && !(i & tstride))
        for (std::size_t j = i; j < i + lo; ++j)
          std::swap(amps[j], amps[j + tstride]);
    return;
  }
  double* p = reinterpret_cast<double*>(amps);
  for (std::size_t i = 0; i < n; i += lo) {
    if ((i & cstride) && !(i & tstride)) {
      for (std::size_t j = i; j < i + lo; j += 2) {
        double* pa = p + 2 * j;
        double* pb = p + 2 * (j + tstride);
        const __m256d a = _mm256_loadu_pd(pa);
        const __m256d b = _mm256_loadu_pd(pb);
        _mm256_storeu_pd(pa, b);
        _mm256_storeu_pd(pb, a);
      }
    }
  }
}

const KernelSet kAvx2{"avx2", matrix1q_avx2, x_avx2, cnot_avx2};

}  // namespace

bool avx2_compiled() { return true; }
bool avx2_available() { return __builtin_cpu_supports("avx2") != 0; }
const KernelSet& avx2_kernels() { return kAvx2; }

#else  // !XCS_HAVE_AVX2_BUILD

bool avx2_compiled() { return false; }
bool avx2_available() { return false; }
const KernelSet& avx2_kernels() { return scalar_kernels(); }

#endif

}  // namespace xcs::kernels
