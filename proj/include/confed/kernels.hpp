#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Hot inner loops of the integrators: stage accumulation and error norms.
// Each operation exists as a scalar reference implementation and, on x86-64
// builds, an AVX2+FMA variant.  The active backend is resolved once at first
// use from cpuid, overridable through the CONFED_SIMD environment variable
// ("scalar" or "avx2") and programmatically via force_backend for tests.
//
// Contract for every pair: identical results to within small floating-point
// reassociation slack (the AVX2 reductions sum in four lanes).  Equivalence is
// property-tested across sizes straddling the vector width.

namespace confed::kernels {

struct Ops {
  // y[i] += a * x[i]
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  // out[i] = base[i] + h * sum_j coeff[j] * ks[j][i]
  void (*stage_update)(std::size_t n, const double* base, double h,
                       std::size_t nk, const double* const* ks,
                       const double* coeff, double* out);
  // sqrt((1/n) * sum_i (err[i] / (atol + rtol*max(|uprev[i]|,|unew[i]|)))^2)
  // Any non-finite err[i] makes the result +inf.  n == 0 gives 0.
  double (*wrms_norm)(std::size_t n, const double* err, const double* uprev,
                      const double* unew, double atol, double rtol);
  // sqrt(sum_i (a[i] - b[i])^2)
  double (*l2_diff)(std::size_t n, const double* a, const double* b);
  const char* name;
};

// Active backend (cpuid-resolved unless overridden).
const Ops& ops();

// Override the active backend: "scalar", "avx2", or "auto".  Throws
// std::invalid_argument for unknown names or an unavailable backend.
// Not thread-safe; intended for test setup and CLI flags.
void force_backend(const std::string& name);

std::vector<std::string> available_backends();

namespace detail {
const Ops& scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_ops_if_compiled();  // null when the TU was not built
#endif
}  // namespace detail

}  // namespace confed::kernels
