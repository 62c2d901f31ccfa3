#include "confed/kernels.hpp"

#include <cmath>
#include <limits>

namespace confed::kernels {
namespace {

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void stage_update_scalar(std::size_t n, const double* base, double h,
                         std::size_t nk, const double* const* ks,
                         const double* coeff, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nk; ++j) acc += coeff[j] * ks[j][i];
    out[i] = base[i] + h * acc;
  }
}

double wrms_norm_scalar(std::size_t n, const double* err, const double* uprev,
                        const double* unew, double atol, double rtol) {
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double scale = atol + rtol * std::max(std::fabs(uprev[i]), std::fabs(unew[i]));
    double q = err[i] / scale;
    acc += q * q;
  }
  if (!std::isfinite(acc)) return std::numeric_limits<double>::infinity();
  return std::sqrt(acc / static_cast<double>(n));
}

double l2_diff_scalar(std::size_t n, const double* a, const double* b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

const Ops kScalarOps = {axpy_scalar, stage_update_scalar, wrms_norm_scalar,
                        l2_diff_scalar, "scalar"};

}  // namespace

namespace detail {
const Ops& scalar_ops() { return kScalarOps; }
}  // namespace detail

}  // namespace confed::kernels
