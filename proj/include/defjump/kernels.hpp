#pragma once

#include <string_view>

#include "defjump/types.hpp"

// Complex double inner-loop kernels. Each kernel has a portable scalar
// reference and, on x86-64, an AVX2/FMA variant chosen at runtime.

namespace defjump::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// True if the running CPU (and this build) can execute the variant.
bool isa_supported(Isa isa);

/// Variant used by the dispatching entry points. Defaults to the widest
/// supported ISA; DEFJUMP_FORCE_SCALAR=1 in the environment pins Scalar.
Isa active_isa();

/// Overrides the dispatch choice. Throws UsageError if unsupported.
void set_active_isa(Isa isa);

/// y[0:m] += A[0:m, 0:k] * x[0:k]; A is column-major with leading dimension lda.
void cgemv_acc(int m, int k, const Complex* a, int lda, const Complex* x, Complex* y);

namespace scalar {
void cgemv_acc(int m, int k, const Complex* a, int lda, const Complex* x, Complex* y);
}

namespace avx2 {
void cgemv_acc(int m, int k, const Complex* a, int lda, const Complex* x, Complex* y);
}

}  // namespace defjump::kernels
