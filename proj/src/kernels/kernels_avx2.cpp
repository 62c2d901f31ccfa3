// AVX2+FMA kernel variants.  This TU is the only one compiled with -mavx2
// -mfma; it must not be entered unless the dispatcher verified cpu support.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "confed/kernels.hpp"

namespace confed::kernels {
namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

inline double hsum_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void stage_update_avx2(std::size_t n, const double* base, double h,
                       std::size_t nk, const double* const* ks,
                       const double* coeff, double* out) {
  const __m256d vh = _mm256_set1_pd(h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < nk; ++j)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coeff[j]),
                            _mm256_loadu_pd(ks[j] + i), acc);
    __m256d vout = _mm256_fmadd_pd(vh, acc, _mm256_loadu_pd(base + i));
    _mm256_storeu_pd(out + i, vout);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nk; ++j) acc += coeff[j] * ks[j][i];
    out[i] = base[i] + h * acc;
  }
}

double wrms_norm_avx2(std::size_t n, const double* err, const double* uprev,
                      const double* unew, double atol, double rtol) {
  if (n == 0) return 0.0;
  const __m256d vatol = _mm256_set1_pd(atol);
  const __m256d vrtol = _mm256_set1_pd(rtol);
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d mag = _mm256_max_pd(abs_pd(_mm256_loadu_pd(uprev + i)),
                                abs_pd(_mm256_loadu_pd(unew + i)));
    __m256d scale = _mm256_fmadd_pd(vrtol, mag, vatol);
    __m256d q = _mm256_div_pd(_mm256_loadu_pd(err + i), scale);
    vacc = _mm256_fmadd_pd(q, q, vacc);
  }
  double acc = hsum_pd(vacc);
  for (; i < n; ++i) {
    double scale = atol + rtol * std::max(std::fabs(uprev[i]), std::fabs(unew[i]));
    double q = err[i] / scale;
    acc += q * q;
  }
  if (!std::isfinite(acc)) return std::numeric_limits<double>::infinity();
  return std::sqrt(acc / static_cast<double>(n));
}

double l2_diff_avx2(std::size_t n, const double* a, const double* b) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vacc = _mm256_fmadd_pd(d, d, vacc);
  }
  double acc = hsum_pd(vacc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

const Ops kAvx2Ops = {axpy_avx2, stage_update_avx2, wrms_norm_avx2,
                      l2_diff_avx2, "avx2"};

}  // namespace

namespace detail {
const Ops* avx2_ops_if_compiled() { return &kAvx2Ops; }
}  // namespace detail

}  // namespace confed::kernels

#endif  // x86-64
