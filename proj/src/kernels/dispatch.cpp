#include <atomic>
#include <cstdlib>
#include <string>

#include "defjump/kernels.hpp"

namespace defjump::kernels {

namespace {

using GemvFn = void (*)(int, int, const Complex*, int, const Complex*, Complex*);

bool cpu_has_avx2() {
#if defined(DEFJUMP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa default_isa() {
  const char* force = std::getenv("DEFJUMP_FORCE_SCALAR");
  if (force != nullptr && std::string(force) == "1") return Isa::Scalar;
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{default_isa()};
  return isa;
}

GemvFn gemv_for(Isa isa) {
#if defined(DEFJUMP_HAVE_AVX2)
  if (isa == Isa::Avx2) return &avx2::cgemv_acc;
#endif
  (void)isa;
  return &scalar::cgemv_acc;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
  return cpu_has_avx2();
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::UsageError, "kernel variant '" + std::string(isa_name(isa)) + "' is not supported here");
  }
  active().store(isa, std::memory_order_relaxed);
}

void cgemv_acc(int m, int k, const Complex* a, int lda, const Complex* x, Complex* y) {
  if (m <= 0 || k <= 0) return;
  gemv_for(active_isa())(m, k, a, lda, x, y);
}

#if !defined(DEFJUMP_HAVE_AVX2)
namespace avx2 {
void cgemv_acc(int m, int k, const Complex* a, int lda, const Complex* x, Complex* y) {
  scalar::cgemv_acc(m, k, a, lda, x, y);
}
}  // namespace avx2
#endif

}  // namespace defjump::kernels
