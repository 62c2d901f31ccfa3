#include <cmath>
#include <limits>

#include "confed/stiff.hpp"

namespace confed {

void fd_jacobian(const RhsFn& f, const Vec& u, const Vec& p, double t,
                 const Vec& f0, DenseMatrix& jac, Stats& stats,
                 double typical) {
  const std::size_t n = u.size();
  const double sq = std::sqrt(std::numeric_limits<double>::epsilon());
  if (jac.n != n) jac = DenseMatrix(n);
  Vec up = u, fp(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = sq * std::max(std::fabs(u[j]), typical);
    up[j] = u[j] + h;
    const double h_actual = up[j] - u[j];  // kills representation error in h
    f(fp, up, p, t);
    ++stats.nf;
    for (std::size_t i = 0; i < n; ++i)
      jac.at(i, j) = (fp[i] - f0[i]) / h_actual;
    up[j] = u[j];
  }
  ++stats.njac;
}

bool LuFactor::factor(DenseMatrix m) {
  const std::size_t n = m.n;
  lu_ = std::move(m);
  piv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) piv_[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::fabs(lu_.at(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(lu_.at(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) return false;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(lu_.at(col, j), lu_.at(pivot, j));
      std::swap(piv_[col], piv_[pivot]);
    }
    const double inv = 1.0 / lu_.at(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double l = lu_.at(r, col) * inv;
      lu_.at(r, col) = l;
      if (l == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j)
        lu_.at(r, j) -= l * lu_.at(col, j);
    }
  }
  return true;
}

void LuFactor::solve(const Vec& rhs, Vec& x) const {
  const std::size_t n = lu_.n;
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[piv_[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= lu_.at(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lu_.at(i, j) * x[j];
    x[i] = acc / lu_.at(i, i);
  }
}

NewtonResult newton_solve(const std::function<void(const Vec&, Vec&)>& residual,
                          const LuFactor& jac, Vec& x, double tol,
                          int max_iters, Stats& stats) {
  NewtonResult res;
  const std::size_t n = x.size();
  Vec r(n), dx(n);
  double dnorm_prev = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    residual(x, r);
    double rnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) rnorm += r[i] * r[i];
    rnorm = std::sqrt(rnorm / static_cast<double>(n));
    if (!std::isfinite(rnorm)) return res;  // diverged
    // A residual already at the noise floor means the previous correction
    // finished the job; report the count of corrections actually applied.
    if (it > 1 && rnorm <= 0.1 * tol) {
      res.converged = true;
      return res;
    }
    jac.solve(r, dx);
    ++stats.nsolve;
    double dnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] -= dx[i];
      dnorm += dx[i] * dx[i];
    }
    dnorm = std::sqrt(dnorm / static_cast<double>(n));
    if (!std::isfinite(dnorm)) return res;
    res.iters = it;
    if (it > 1 && dnorm_prev > 0.0) res.rate = dnorm / dnorm_prev;
    dnorm_prev = dnorm;
    if (dnorm <= tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace confed
