#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "xcs/kernels.hpp"

namespace {

using xcs::kernels::cplx;

std::vector<cplx> random_amps(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> amps(std::size_t{1} << n);
  for (auto& a : amps) a = cplx(gauss(rng), gauss(rng));
  return amps;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree on random states") {
  if (!xcs::kernels::avx2_available()) {
    MESSAGE("avx2 unavailable on this host; skipping equivalence check");
    return;
  }
  const auto& scalar = xcs::kernels::scalar_kernels();
  const auto& avx2 = xcs::kernels::avx2_kernels();
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n = 1; n <= 8; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (int rep = 0; rep < 5; ++rep) {
      const auto base = random_amps(n, rng);
      cplx m[4];
      for (auto& v : m) v = cplx(gauss(rng), gauss(rng));
      for (int q = 0; q < n; ++q) {
        const std::size_t stride = std::size_t{1} << (n - 1 - q);
        auto a = base, b = base;
        scalar.apply_matrix1q(a.data(), dim, stride, m);
        avx2.apply_matrix1q(b.data(), dim, stride, m);
        CHECK(max_diff(a, b) < 1e-12);

        a = base;
        b = base;
        scalar.apply_x(a.data(), dim, stride);
        avx2.apply_x(b.data(), dim, stride);
        CHECK(max_diff(a, b) == 0.0);
      }
      for (int c = 0; c < n; ++c) {
        for (int t = 0; t < n; ++t) {
          if (c == t) continue;
          const std::size_t cs = std::size_t{1} << (n - 1 - c);
          const std::size_t ts = std::size_t{1} << (n - 1 - t);
          auto a = base, b = base;
          scalar.apply_cnot(a.data(), dim, cs, ts);
          avx2.apply_cnot(b.data(), dim, cs, ts);
          CHECK(max_diff(a, b) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("kernel override selects the requested implementation") {
  const auto& scalar = xcs::kernels::scalar_kernels();
  xcs::kernels::set_active(&scalar);
  CHECK(std::string(xcs::kernels::active().name) == "scalar");
  if (xcs::kernels::avx2_available()) {
    const auto& avx2 = xcs::kernels::avx2_kernels();
    xcs::kernels::set_active(&avx2);
    CHECK(std::string(xcs::kernels::active().name) == "avx2");
  }
  xcs::kernels::set_active(nullptr);
  CHECK(xcs::kernels::active().name != nullptr);
}
