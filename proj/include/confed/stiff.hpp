#pragma once

#include "confed/registry.hpp"

namespace confed {

// Dense row-major n x n matrix, the only shape the stiff path handles.
// Sized for moderate n; a system past n = 10^4 triggers a stderr diagnostic
// at stepper construction instead of silently allocating gigabytes.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> a;  // n*n, row-major

  explicit DenseMatrix(std::size_t n_ = 0) : n(n_), a(n_ * n_, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Forward-difference Jacobian of f at (u, t): J[i][j] = df_i/du_j with
// h_j = sqrt(eps) * max(|u_j|, typical).  Charges n evaluations (f(u) itself
// is supplied by the caller in f0).  Non-finite entries are left in place;
// they surface as a failed factorization and a Retry downstream.
void fd_jacobian(const RhsFn& f, const Vec& u, const Vec& p, double t,
                 const Vec& f0, DenseMatrix& jac, Stats& stats,
                 double typical = 1e-5);

// LU with partial pivoting, in place.  Returns false when a pivot column is
// exactly zero or non-finite (singular to working precision).
class LuFactor {
 public:
  bool factor(DenseMatrix m);          // copies, factors, records pivots
  void solve(const Vec& rhs, Vec& x) const;
  std::size_t size() const { return lu_.n; }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
};

struct NewtonResult {
  bool converged = false;
  int iters = 0;    // Newton corrections applied
  double rate = 0.0;  // last contraction ratio |dx_k| / |dx_{k-1}| (0 if <2)
};

// Modified Newton for F(x) = 0 with a frozen Jacobian factorization.
// Declares convergence when the WRMS-scaled update (or the residual at the
// top of an iteration) drops under tol.  Linear F converges on the first
// corrected iterate.
NewtonResult newton_solve(const std::function<void(const Vec&, Vec&)>& residual,
                          const LuFactor& jac, Vec& x, double tol,
                          int max_iters, Stats& stats);

StepperPtr make_rosenbrock23(const ODEProblem&, const SolverOptions&, Stats&);
StepperPtr make_bdf(const ODEProblem&, const SolverOptions&, Stats&);
// Order-capped variant used for fixed-order studies and extension tests.
StepperPtr make_bdf_capped(int max_order, const ODEProblem&,
                           const SolverOptions&, Stats&);

}  // namespace confed
