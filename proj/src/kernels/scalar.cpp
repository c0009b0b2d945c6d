#include "defjump/kernels.hpp"

namespace defjump::kernels::scalar {

void cgemv_acc(int m, int k, const Complex* a, int lda, const Complex* x, Complex* y) {
  for (int j = 0; j < k; ++j) {
    const double xr = x[j].real();
    const double xi = x[j].imag();
    const Complex* col = a + static_cast<std::ptrdiff_t>(j) * lda;
    for (int i = 0; i < m; ++i) {
      const double ar = col[i].real();
      const double ai = col[i].imag();
      y[i] = Complex(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
    }
  }
}

}  // namespace defjump::kernels::scalar
