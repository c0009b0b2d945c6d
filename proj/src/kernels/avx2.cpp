#include <immintrin.h>

#include "defjump/kernels.hpp"

namespace defjump::kernels::avx2 {

// std::complex<double> is layout-compatible with double[2], so a column of A
// is a contiguous run of interleaved (re, im) pairs. Two complex values fill
// one __m256d.
void cgemv_acc(int m, int k, const Complex* a, int lda, const Complex* x, Complex* y) {
  auto* yd = reinterpret_cast<double*>(y);
  const int m2 = m & ~1;
  for (int j = 0; j < k; ++j) {
    const double xr = x[j].real();
    const double xi = x[j].imag();
    if (xr == 0.0 && xi == 0.0) continue;
    const __m256d vxr = _mm256_set1_pd(xr);
    const __m256d vxi = _mm256_set1_pd(xi);
    const auto* col = reinterpret_cast<const double*>(a + static_cast<std::ptrdiff_t>(j) * lda);
    int i = 0;
    for (; i < m2; i += 2) {
      const __m256d av = _mm256_loadu_pd(col + 2 * i);
      const __m256d sw = _mm256_permute_pd(av, 0x5);  // (ai, ar, ai, ar)
      // even lanes: ar*xr - ai*xi, odd lanes: ai*xr + ar*xi
      const __m256d prod = _mm256_fmaddsub_pd(av, vxr, _mm256_mul_pd(sw, vxi));
      const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
      _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < m; ++i) {
      const double ar = col[2 * i];
      const double ai = col[2 * i + 1];
      yd[2 * i] += ar * xr - ai * xi;
      yd[2 * i + 1] += ar * xi + ai * xr;
    }
  }
}

}  // namespace defjump::kernels::avx2
