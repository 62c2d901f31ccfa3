#include "confed/steppers_explicit.hpp"

#include <cmath>

#include "confed/kernels.hpp"

namespace confed {

namespace {

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool needs_dense_output(const SolverOptions& o) {
  return o.dense || o.saveat.has_value() || !o.callbacks.empty();
}

// Shampine continuation weights for the Dormand-Prince pair (k2 unused).
constexpr double kDopriD1 = -12715105075.0 / 11282082432.0;
constexpr double kDopriD3 = 87487479700.0 / 32700410799.0;
constexpr double kDopriD4 = -10690763975.0 / 1880347072.0;
constexpr double kDopriD5 = 701980252875.0 / 199316789632.0;
constexpr double kDopriD6 = -1453857185.0 / 822651844.0;
constexpr double kDopriD7 = 69997945.0 / 29380423.0;

class ErkStepper final : public Stepper {
 public:
  ErkStepper(const ButcherTableau& tab, ControllerParams ctrl,
             const char* profile_name, const ODEProblem& prob,
             const SolverOptions& opts, Stats& stats)
      : tab_(tab),
        ctrl_(ctrl),
        profile_name_(profile_name ? profile_name : tab.name),
        f_(prob.f),
        stats_(&stats),
        abstol_(opts.abstol),
        reltol_(opts.reltol),
        adaptive_(!tab.btilde.empty() && opts.adaptive),
        need_dense_(needs_dense_output(opts)) {
    const std::size_t n = prob.u0.size();
    if (tab_.stages() > 16) throw Error("tableau exceeds the 16-stage cap");
    k_.assign(tab_.stages(), Vec(n, 0.0));
    utmp_.assign(n, 0.0);
    errv_.assign(n, 0.0);
    zero_.assign(n, 0.0);
  }

  StepResult try_step(double t, double dt, const Vec& u, const Vec& p,
                      Vec& out) override {
    const auto& ops = kernels::ops();
    const std::size_t n = u.size();
    const std::size_t s = tab_.stages();
    out.resize(n);

    if (!k1_valid_) {
      f_(k_[0], u, p, t);
      ++stats_->nf;
      k1_valid_ = true;  // stays valid across rejected retries at the same (t, u)
    }
    const double* kptr[16];
    kptr[0] = k_[0].data();
    for (std::size_t i = 1; i < s; ++i) {
      const auto& row = tab_.a[i - 1];
      if (i == s - 1) gprev_stage_ = utmp_;  // arg of stage s-2, kept for probes
      ops.stage_update(n, u.data(), dt, i, kptr, row.data(), utmp_.data());
      f_(k_[i], utmp_, p, t + tab_.c[i] * dt);
      ++stats_->nf;
      kptr[i] = k_[i].data();
    }
    ops.stage_update(n, u.data(), dt, s, kptr, tab_.b.data(), out.data());
    probe_ready_ = true;

    StepResult res;
    if (adaptive_) {
      ops.stage_update(n, zero_.data(), dt, s, kptr, tab_.btilde.data(),
                       errv_.data());
      res.error_norm = ops.wrms_norm(n, errv_.data(), u.data(), out.data(),
                                     abstol_, reltol_);
      res.status = res.error_norm <= 1.0 ? StepStatus::Accept : StepStatus::Reject;
    } else {
      res.status = all_finite(out) ? StepStatus::Accept : StepStatus::Blowup;
    }
    return res;
  }

  void accept(double t, double dt, const Vec& u, const Vec& unew,
              const Vec& p, StepInterp* interp) override {
    if (interp && need_dense_) fill_interp(t, dt, u, unew, p, *interp);
    if (tab_.fsal) {
      std::swap(k_[0], k_[tab_.stages() - 1]);  // f(t+dt, unew) becomes next k1
      k1_valid_ = true;
    } else {
      k1_valid_ = false;
    }
  }

  bool adaptive() const override { return adaptive_; }
  ControllerParams controller() const override { return ctrl_; }
  void reset(double, const Vec&) override {
    k1_valid_ = false;
    probe_ready_ = false;
  }
  const char* active_name() const override { return profile_name_; }

  bool stiffness_probe(double& rho) override {
    rho = 0.0;
    const std::size_t s = tab_.stages();
    // Valid only for pairs whose last two stages share the same c.
    if (!probe_ready_ || s < 2 || tab_.c[s - 1] != tab_.c[s - 2]) return false;
    const auto& ops = kernels::ops();
    const std::size_t n = utmp_.size();
    const double den = ops.l2_diff(n, utmp_.data(), gprev_stage_.data());
    if (!(den > 0.0) || !std::isfinite(den)) return false;
    rho = ops.l2_diff(n, k_[s - 1].data(), k_[s - 2].data()) / den;
    return std::isfinite(rho);
  }

 private:
  void fill_interp(double t, double dt, const Vec& u, const Vec& unew,
                   const Vec& p, StepInterp& si) {
    const std::size_t n = u.size();
    si.ta = t;
    si.tb = t + dt;
    if (!tab_.bpoly.empty()) {
      si.kind = StepInterp::Kind::RkTheta;
      si.u0 = u;
      si.k = k_;
      si.bpoly = &tab_.bpoly;
      return;
    }
    if (tab_.shampine_dense) {
      si.kind = StepInterp::Kind::DopriCont;
      si.k.assign(5, Vec(n));
      for (std::size_t i = 0; i < n; ++i) {
        const double du = unew[i] - u[i];
        const double r3 = dt * k_[0][i] - du;
        si.k[0][i] = u[i];
        si.k[1][i] = du;
        si.k[2][i] = r3;
        si.k[3][i] = du - dt * k_[6][i] - r3;
        si.k[4][i] = dt * (kDopriD1 * k_[0][i] + kDopriD3 * k_[2][i] +
                           kDopriD4 * k_[3][i] + kDopriD5 * k_[4][i] +
                           kDopriD6 * k_[5][i] + kDopriD7 * k_[6][i]);
      }
      return;
    }
    si.kind = StepInterp::Kind::Hermite;
    si.u0 = u;
    si.u1 = unew;
    si.f0 = k_[0];
    if (tab_.fsal) {
      si.f1 = k_[tab_.stages() - 1];
    } else {
      si.f1.resize(n);
      f_(si.f1, unew, p, t + dt);
      ++stats_->nf;
    }
  }

  const ButcherTableau& tab_;
  ControllerParams ctrl_;
  const char* profile_name_;
  RhsFn f_;
  Stats* stats_;
  double abstol_, reltol_;
  bool adaptive_;
  bool need_dense_;
  bool k1_valid_ = false;
  bool probe_ready_ = false;
  std::vector<Vec> k_;
  Vec utmp_, errv_, zero_, gprev_stage_;
};

class EulerStepper final : public Stepper {
 public:
  EulerStepper(const ODEProblem& prob, const SolverOptions& opts, Stats& stats)
      : f_(prob.f),
        stats_(&stats),
        need_dense_(needs_dense_output(opts)) {
    f0_.assign(prob.u0.size(), 0.0);
  }

  StepResult try_step(double t, double dt, const Vec& u, const Vec& p,
                      Vec& out) override {
    const std::size_t n = u.size();
    if (!f0_valid_) {
      f_(f0_, u, p, t);
      ++stats_->nf;
      f0_valid_ = true;
    }
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + dt * f0_[i];
    return {all_finite(out) ? StepStatus::Accept : StepStatus::Blowup, 0.0};
  }

  void accept(double t, double dt, const Vec& u, const Vec& unew,
              const Vec& p, StepInterp* interp) override {
    if (interp && need_dense_) {
      interp->ta = t;
      interp->tb = t + dt;
      interp->kind = StepInterp::Kind::Hermite;
      interp->u0 = u;
      interp->u1 = unew;
      interp->f0 = f0_;
      interp->f1.resize(unew.size());
      f_(interp->f1, unew, p, t + dt);
      ++stats_->nf;
      f0_ = interp->f1;  // right endpoint doubles as the next step's slope
    } else {
      f0_valid_ = false;
    }
  }

  bool adaptive() const override { return false; }
  const char* active_name() const override { return "euler"; }

 private:
  RhsFn f_;
  Stats* stats_;
  bool need_dense_;
  bool f0_valid_ = false;
  Vec f0_;
};

class VerletStepper final : public Stepper {
 public:
  VerletStepper(const SecondOrderODEProblem& prob, const SolverOptions& opts,
                Stats& stats)
      : f_(prob.f),
        stats_(&stats),
        n_(prob.x0.size()),
        need_dense_(needs_dense_output(opts)) {
    a_.assign(n_, 0.0);
    anew_.assign(n_, 0.0);
    x_.assign(n_, 0.0);
    v_.assign(n_, 0.0);
    xout_.assign(n_, 0.0);
    vout_.assign(n_, 0.0);
  }

  StepResult try_step(double t, double dt, const Vec& u, const Vec& p,
                      Vec& out) override {
    std::copy(u.begin(), u.begin() + n_, x_.begin());
    std::copy(u.begin() + n_, u.end(), v_.begin());
    if (!warm_) {
      f_(a_, v_, x_, p, t);
      ++stats_->nf;
      warm_ = true;
    }
    verlet_step(f_, p, t, dt, x_, v_, xout_, vout_, &a_, anew_, *stats_);
    out.resize(2 * n_);
    std::copy(xout_.begin(), xout_.end(), out.begin());
    std::copy(vout_.begin(), vout_.end(), out.begin() + n_);
    return {all_finite(out) ? StepStatus::Accept : StepStatus::Blowup, 0.0};
  }

  void accept(double t, double dt, const Vec& u, const Vec& unew,
              const Vec&, StepInterp* interp) override {
    if (interp && need_dense_) {
      interp->ta = t;
      interp->tb = t + dt;
      interp->kind = StepInterp::Kind::Hermite;
      interp->u0 = u;
      interp->u1 = unew;
      // du = [v, a]; both endpoints come from cached accelerations.
      interp->f0.resize(2 * n_);
      interp->f1.resize(2 * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        interp->f0[i] = u[n_ + i];
        interp->f0[n_ + i] = a_[i];
        interp->f1[i] = unew[n_ + i];
        interp->f1[n_ + i] = anew_[i];
      }
    }
    a_ = anew_;
    warm_ = true;
  }

  bool adaptive() const override { return false; }
  void reset(double, const Vec&) override { warm_ = false; }
  const char* active_name() const override { return "verlet"; }

 private:
  AccelFn f_;
  Stats* stats_;
  std::size_t n_;
  bool need_dense_;
  bool warm_ = false;
  Vec a_, anew_, x_, v_, xout_, vout_;
};

}  // namespace

void euler_step(const RhsFn& f, const Vec& p, double t, double dt,
                const Vec& u, Vec& out, Stats& stats) {
  const std::size_t n = u.size();
  thread_local Vec du;
  du.assign(n, 0.0);
  f(du, u, p, t);
  ++stats.nf;
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + dt * du[i];
}

void verlet_step(const AccelFn& f, const Vec& p, double t, double dt,
                 const Vec& x, const Vec& v, Vec& x_out, Vec& v_out,
                 const Vec* a_in, Vec& a_out, Stats& stats) {
  const std::size_t n = x.size();
  thread_local Vec a0, vhalf;
  if (a_in) {
    a0 = *a_in;
  } else {
    a0.assign(n, 0.0);
    f(a0, v, x, p, t);
    ++stats.nf;
  }
  vhalf.resize(n);
  for (std::size_t i = 0; i < n; ++i) vhalf[i] = v[i] + 0.5 * dt * a0[i];
  x_out.resize(n);
  for (std::size_t i = 0; i < n; ++i) x_out[i] = x[i] + dt * vhalf[i];
  a_out.assign(n, 0.0);
  f(a_out, vhalf, x_out, p, t + dt);  // the one per-step evaluation when warm
  ++stats.nf;
  v_out.resize(n);
  for (std::size_t i = 0; i < n; ++i) v_out[i] = vhalf[i] + 0.5 * dt * a_out[i];
}

StepperPtr make_erk(const ButcherTableau& tab, ControllerParams ctrl,
                    const ODEProblem& prob, const SolverOptions& opts,
                    Stats& stats) {
  return std::make_unique<ErkStepper>(tab, ctrl, nullptr, prob, opts, stats);
}

StepperPtr make_euler(const ODEProblem& prob, const SolverOptions& opts,
                      Stats& stats) {
  return std::make_unique<EulerStepper>(prob, opts, stats);
}

StepperPtr make_rk4(const ODEProblem& prob, const SolverOptions& opts,
                    Stats& stats) {
  return std::make_unique<ErkStepper>(rk4_tableau(), ControllerParams{},
                                      nullptr, prob, opts, stats);
}

StepperPtr make_tsit5(const ODEProblem& prob, const SolverOptions& opts,
                      Stats& stats) {
  ControllerParams ctrl;
  ctrl.order_hat = 5.0;
  return std::make_unique<ErkStepper>(tsit5_tableau(), ctrl, nullptr, prob,
                                      opts, stats);
}

StepperPtr make_dp5(const ODEProblem& prob, const SolverOptions& opts,
                    Stats& stats) {
  ControllerParams ctrl;
  ctrl.order_hat = 5.0;
  return std::make_unique<ErkStepper>(dp5_tableau(), ctrl, nullptr, prob, opts,
                                      stats);
}

StepperPtr make_dp5_lowtol(const ODEProblem& prob, const SolverOptions& opts,
                           Stats& stats) {
  ControllerParams ctrl;
  ctrl.order_hat = 5.0;
  ctrl.safety = 0.8;
  ctrl.max_factor = 5.0;
  return std::make_unique<ErkStepper>(dp5_tableau(), ctrl, "dp5_lowtol", prob,
                                      opts, stats);
}

StepperPtr make_verlet(const SecondOrderODEProblem& prob,
                       const SolverOptions& opts, Stats& stats) {
  return std::make_unique<VerletStepper>(prob, opts, stats);
}

}  // namespace confed
