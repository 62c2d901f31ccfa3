#include <cmath>
#include <limits>

#include "confed/kernels.hpp"
#include "confed/stiff.hpp"
#include "stiff/stiff_detail.hpp"

namespace confed {

namespace {

using detail::all_finite;
using detail::warn_large_dense;

// L-stable 2(3) Rosenbrock-W pair with d = 1/(2 + sqrt(2)).  Three W-solves
// per step against a shared factorization of W = I - dt*d*J; the Jacobian
// may lag (W-method), refreshed on rejection or after 20 accepted steps.
class Rosenbrock23Stepper final : public Stepper {
 public:
  Rosenbrock23Stepper(const ODEProblem& prob, const SolverOptions& opts,
                      Stats& stats)
      : f_(prob.f),
        stats_(&stats),
        n_(prob.u0.size()),
        abstol_(opts.abstol),
        reltol_(opts.reltol),
        adaptive_(opts.adaptive),
        need_dense_(opts.dense || opts.saveat.has_value() ||
                    !opts.callbacks.empty()) {
    warn_large_dense(n_);
    jac_ = DenseMatrix(n_);
    f0_.assign(n_, 0.0);
    ft_.assign(n_, 0.0);
    f1_.assign(n_, 0.0);
    f2_.assign(n_, 0.0);
    k1_.assign(n_, 0.0);
    k2_.assign(n_, 0.0);
    k3_.assign(n_, 0.0);
    tdot_.assign(n_, 0.0);
    tmp_.assign(n_, 0.0);
    rhs_.assign(n_, 0.0);
  }

  StepResult try_step(double t, double dt, const Vec& u, const Vec& p,
                      Vec& out) override {
    constexpr double d = 1.0 / (2.0 + 1.41421356237309504880);  // 1/(2+sqrt 2)
    const double e32 = 6.0 + 1.41421356237309504880;
    out.resize(n_);

    if (!f0_valid_) {
      f_(f0_, u, p, t);
      ++stats_->nf;
      f0_valid_ = true;
    }
    if (jac_stale_) {
      fd_jacobian(f_, u, p, t, f0_, jac_, *stats_);
      jac_stale_ = false;
      w_dt_ = -1.0;  // force refactor
    }
    if (dt != w_dt_) {
      DenseMatrix w(n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
          w.at(i, j) = (i == j ? 1.0 : 0.0) - dt * d * jac_.at(i, j);
      ++stats_->nfactor;
      if (!lu_.factor(std::move(w))) {
        jac_stale_ = true;  // rebuild J at the halved dt
        return {StepStatus::Retry, 0.0};
      }
      w_dt_ = dt;
    }

    // df/dt by forward difference; the rotation into stage right-hand sides
    // follows the ode23s formulation.
    const double tdelta = std::sqrt(std::numeric_limits<double>::epsilon()) *
                          std::max(std::fabs(t), std::fabs(dt));
    f_(ft_, u, p, t + tdelta);
    ++stats_->nf;
    for (std::size_t i = 0; i < n_; ++i)
      tdot_[i] = (ft_[i] - f0_[i]) / tdelta;

    for (std::size_t i = 0; i < n_; ++i) rhs_[i] = f0_[i] + dt * d * tdot_[i];
    lu_.solve(rhs_, k1_);
    ++stats_->nsolve;
    if (!all_finite(k1_)) return retry_with_fresh_jac();

    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = u[i] + 0.5 * dt * k1_[i];
    f_(f1_, tmp_, p, t + 0.5 * dt);
    ++stats_->nf;
    for (std::size_t i = 0; i < n_; ++i) rhs_[i] = f1_[i] - k1_[i];
    lu_.solve(rhs_, k2_);
    ++stats_->nsolve;
    for (std::size_t i = 0; i < n_; ++i) k2_[i] += k1_[i];
    if (!all_finite(k2_)) return retry_with_fresh_jac();

    for (std::size_t i = 0; i < n_; ++i) out[i] = u[i] + dt * k2_[i];
    f_(f2_, out, p, t + dt);
    ++stats_->nf;
    for (std::size_t i = 0; i < n_; ++i)
      rhs_[i] = f2_[i] - e32 * (k2_[i] - f1_[i]) - 2.0 * (k1_[i] - f0_[i]) +
                dt * d * tdot_[i];
    lu_.solve(rhs_, k3_);
    ++stats_->nsolve;

    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = (dt / 6.0) * (k1_[i] - 2.0 * k2_[i] + k3_[i]);
    const double err = kernels::ops().wrms_norm(n_, tmp_.data(), u.data(),
                                                out.data(), abstol_, reltol_);
    StepResult res;
    res.error_norm = err;
    if (!adaptive_) {
      res.status = all_finite(out) ? StepStatus::Accept : StepStatus::Blowup;
    } else if (err <= 1.0 && all_finite(out)) {
      res.status = StepStatus::Accept;
    } else {
      res.status = StepStatus::Reject;
      jac_stale_ = true;  // refreshed before the retry
    }
    return res;
  }

  void accept(double t, double dt, const Vec& u, const Vec& unew,
              const Vec& p, StepInterp* interp) override {
    (void)p;
    if (interp && need_dense_) {
      interp->ta = t;
      interp->tb = t + dt;
      interp->kind = StepInterp::Kind::Hermite;
      interp->u0 = u;
      interp->u1 = unew;
      interp->f0 = f0_;
      interp->f1 = f2_;
    }
    f0_ = f2_;  // evaluation at (t+dt, unew) seeds the next step
    f0_valid_ = true;
    if (++steps_since_jac_ >= 20) {
      jac_stale_ = true;
      steps_since_jac_ = 0;
    }
  }

  bool adaptive() const override { return adaptive_; }
  ControllerParams controller() const override {
    ControllerParams c;
    c.order_hat = 3.0;
    // A W-method's estimate leans on a possibly stale Jacobian, so growth
    // is capped harder and the safety pulled down relative to the ERK pairs.
    c.safety = 0.8;
    c.max_factor = 5.0;
    return c;
  }
  void reset(double, const Vec&) override {
    f0_valid_ = false;
    jac_stale_ = true;
    steps_since_jac_ = 0;
  }
  const char* active_name() const override { return "rosenbrock23"; }

  bool stiffness_probe(double& rho) override {
    if (jac_stale_ && w_dt_ < 0.0) return false;  // no Jacobian built yet
    return probe_.step(jac_, rho);
  }

 private:
  StepResult retry_with_fresh_jac() {
    jac_stale_ = true;
    return {StepStatus::Retry, 0.0};
  }

  RhsFn f_;
  Stats* stats_;
  std::size_t n_;
  double abstol_, reltol_;
  bool adaptive_;
  bool need_dense_;
  bool f0_valid_ = false;
  bool jac_stale_ = true;
  int steps_since_jac_ = 0;
  double w_dt_ = -1.0;
  DenseMatrix jac_;
  LuFactor lu_;
  detail::PowerProbe probe_;
  Vec f0_, ft_, f1_, f2_, k1_, k2_, k3_, tdot_, tmp_, rhs_;
};

}  // namespace

StepperPtr make_rosenbrock23(const ODEProblem& prob, const SolverOptions& opts,
                             Stats& stats) {
  return std::make_unique<Rosenbrock23Stepper>(prob, opts, stats);
}

}  // namespace confed
