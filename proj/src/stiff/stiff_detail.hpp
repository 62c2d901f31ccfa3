#pragma once

#include <cmath>
#include <cstdio>

#include "confed/stiff.hpp"
#include "confed/types.hpp"

namespace confed::detail {

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void warn_large_dense(std::size_t n) {
  if (n > 10000)
    std::fprintf(stderr,
                 "confedsolve: stiff solver on n=%zu builds a dense %zux%zu "
                 "Jacobian (O(n^2) memory, O(n^3) factorization)\n",
                 n, n, n);
}

// One power-iteration sweep on J: estimates the dominant eigenvalue
// magnitude and advances the probe vector.  The vector is (re)seeded when
// its size is wrong; repeated calls across steps converge toward the fast
// mode even as J drifts.
struct PowerProbe {
  Vec v;

  bool step(const DenseMatrix& jac, double& rho) {
    const std::size_t n = jac.n;
    if (n == 0) return false;
    if (v.size() != n) v.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Vec w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += jac.at(i, j) * v[j];
      w[i] = acc;
    }
    double nrm = 0.0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return false;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nrm;
    rho = nrm;  // probe vector is kept at unit length
    return true;
  }
};

}  // namespace confed::detail
