#include <algorithm>
#include <cmath>

#include "confed/kernels.hpp"
#include "confed/stiff.hpp"
#include "stiff/stiff_detail.hpp"

namespace confed {

namespace {

using detail::all_finite;
using detail::warn_large_dense;

// Fixed-leading-coefficient BDF, orders 1..3, on a uniform history grid.
// A step-size change rescales the stored history by polynomial
// reinterpolation; a change beyond the trusted ratio window drops back to
// order 1.  Order raises after order+1 consecutive accepted steps; any
// restart (construction, event, history drop) begins at order 1.
//
//   order 1: u1 = u0 + dt f                      gamma = 1
//   order 2: u1 = ( 4 u0 -   u_-1) / 3 + (2/3) dt f
//   order 3: u1 = (18 u0 - 9 u_-1 + 2 u_-2) / 11 + (6/11) dt f
//
// The error estimate is kappa_k (corrector - predictor) with
// kappa_k = 1/(k+1), where the predictor extrapolates the history
// polynomial.
class BdfStepper final : public Stepper {
 public:
  BdfStepper(int max_order, bool fixed_dt, const ODEProblem& prob,
             const SolverOptions& opts, Stats& stats)
      : f_(prob.f),
        stats_(&stats),
        n_(prob.u0.size()),
        max_order_(std::clamp(max_order, 1, 3)),
        fixed_dt_(fixed_dt || !opts.adaptive),
        abstol_(opts.abstol),
        reltol_(opts.reltol),
        need_dense_(opts.dense || opts.saveat.has_value() ||
                    !opts.callbacks.empty()) {
    warn_large_dense(n_);
    jac_ = DenseMatrix(n_);
    upred_.assign(n_, 0.0);
    rhsc_.assign(n_, 0.0);
    errv_.assign(n_, 0.0);
    scratch_.assign(n_, 0.0);
  }

  StepResult try_step(double t, double dt, const Vec& u, const Vec& p,
                      Vec& out) override {
    if (hist_.empty()) hist_.push_back(u);

    // Keep the history grid on the attempted spacing.
    if (hist_.size() > 1 && dt != dt_hist_) {
      const double ratio = dt / dt_hist_;
      if (ratio < 0.2 || ratio > 2.0000001) {
        hist_.assign(1, u);
        order_ = 1;
        nsucc_ = 0;
      } else {
        rescale_history(dt);
      }
    }
    dt_hist_ = dt;

    const int k = last_k_ =
        std::min({order_, static_cast<int>(hist_.size()), max_order_});

    predict(k);
    if (hist_.size() == 1) {
      // A one-point history makes the extrapolant constant, so the
      // corrector-predictor gap would be O(dt) and the error test could
      // never pass at sharp tolerances. Seed with an Euler predictor:
      // the gap backward minus forward Euler is dt^2 u'' to leading
      // order, the right magnitude for the order-1 test.
      f_(scratch_, u, p, t);
      ++stats_->nf;
      for (std::size_t i = 0; i < n_; ++i) upred_[i] += dt * scratch_[i];
    }
    build_rhs_const(k);
    const double gamma = kGamma[k - 1];

    // Iteration matrix I - gamma dt J, shared across Newton iterations and
    // reused across steps until the scaled step or the Jacobian goes stale.
    const double key = gamma * dt;
    bool refreshed_this_attempt = false;
    if (jac_stale_) {
      refresh_jac(t, u, p);
      refreshed_this_attempt = true;
    }
    if (factored_key_ != key || factor_stale_) {
      if (!factor_iteration_matrix(key)) return retry_fresh();
      factored_key_ = key;
    }

    auto residual = [&](const Vec& x, Vec& r) {
      f_(scratch_, x, p, t + dt);
      ++stats_->nf;
      for (std::size_t i = 0; i < n_; ++i)
        r[i] = x[i] - key * scratch_[i] - rhsc_[i];
    };

    double upred_rms = 0.0;
    for (std::size_t i = 0; i < n_; ++i) upred_rms += upred_[i] * upred_[i];
    upred_rms = std::sqrt(upred_rms / static_cast<double>(n_));
    const double newton_tol = 0.1 * (abstol_ + reltol_ * upred_rms);

    out = upred_;
    NewtonResult nr = newton_solve(residual, lu_, out, newton_tol, 7, *stats_);
    if (!nr.converged && !refreshed_this_attempt) {
      // One in-place retry with a fresh Jacobian before bouncing to the driver.
      refresh_jac(t, u, p);
      if (!factor_iteration_matrix(key)) return retry_fresh();
      factored_key_ = key;
      out = upred_;
      nr = newton_solve(residual, lu_, out, newton_tol, 7, *stats_);
    }
    if (!nr.converged) return retry_fresh();
    if (nr.rate > 0.25) jac_stale_ = true;  // slow contraction: refresh next step

    if (!all_finite(out)) return retry_fresh();

    StepResult res;
    if (fixed_dt_) {
      res.status = StepStatus::Accept;
      return res;
    }
    const double kappa = 1.0 / (k + 1);
    for (std::size_t i = 0; i < n_; ++i)
      errv_[i] = kappa * (out[i] - upred_[i]);
    res.error_norm = kernels::ops().wrms_norm(n_, errv_.data(), u.data(),
                                              out.data(), abstol_, reltol_);
    res.status = res.error_norm <= 1.0 ? StepStatus::Accept : StepStatus::Reject;
    if (res.status == StepStatus::Reject) jac_stale_ = true;
    return res;
  }

  void accept(double t, double dt, const Vec& u, const Vec& unew,
              const Vec& p, StepInterp* interp) override {
    const double gamma = kGamma[last_k_ - 1];
    if (interp && need_dense_) {
      interp->ta = t;
      interp->tb = t + dt;
      interp->kind = StepInterp::Kind::Hermite;
      interp->u0 = u;
      interp->u1 = unew;
      if (!fprev_valid_) {
        fprev_.resize(n_);
        f_(fprev_, u, p, t);
        ++stats_->nf;
      }
      interp->f0 = fprev_;
      // At the converged iterate, f(t+dt, unew) = (unew - rhs_const)/(gamma dt)
      // up to the Newton tolerance; no extra evaluation needed.
      interp->f1.resize(n_);
      for (std::size_t i = 0; i < n_; ++i)
        interp->f1[i] = (unew[i] - rhsc_[i]) / (gamma * dt);
      fprev_ = interp->f1;
      fprev_valid_ = true;
    }

    hist_.insert(hist_.begin(), unew);
    if (hist_.size() > 4) hist_.resize(4);
    dt_hist_ = dt;

    if (fixed_dt_) {
      order_ = max_order_;  // ramp as fast as the history allows
    } else if (order_ < max_order_) {
      if (++nsucc_ >= order_ + 1 &&
          hist_.size() >= static_cast<std::size_t>(order_) + 2) {
        ++order_;
        nsucc_ = 0;
      }
    }
    if (++steps_since_jac_ >= 20) {
      jac_stale_ = true;
      steps_since_jac_ = 0;
    }
  }

  bool adaptive() const override { return !fixed_dt_; }

  ControllerParams controller() const override {
    ControllerParams c;
    c.max_factor = 2.0;
    c.order_hat = static_cast<double>(last_k_ + 1);
    return c;
  }

  double adjust_dt(double dt_current, double dt_proposed) override {
    // Dead-band: keep the spacing unless the controller asks for a change
    // big enough to pay for the history rescale.
    const double r = dt_proposed / dt_current;
    if (r > 0.9 && r < 1.3) return dt_current;
    return dt_proposed;
  }

  void reset(double, const Vec& u) override {
    hist_.assign(1, u);
    order_ = 1;
    nsucc_ = 0;
    jac_stale_ = true;
    factor_stale_ = true;
    fprev_valid_ = false;
    steps_since_jac_ = 0;
  }

  // Surfacing the order through the name lets the driver's trace record
  // order changes, in particular the reset to 1 after an event.
  const char* active_name() const override {
    static const char* kNames[] = {"bdf1", "bdf2", "bdf3"};
    return kNames[order_ - 1];
  }

  bool stiffness_probe(double& rho) override {
    if (!jac_ever_) return false;
    return probe_.step(jac_, rho);
  }

  int current_order() const { return last_k_; }

 private:
  static constexpr double kGamma[3] = {1.0, 2.0 / 3.0, 6.0 / 11.0};

  void rescale_history(double dtn) {
    // Values live at τ_j = -j*dt_hist_; reinterpolate to -j*dtn with the
    // unique polynomial through the stored nodes.
    const std::size_t m = hist_.size();
    std::vector<Vec> fresh(m, Vec(n_));
    fresh[0] = hist_[0];
    for (std::size_t jq = 1; jq < m; ++jq) {
      const double x = -static_cast<double>(jq) * dtn;
      // Lagrange weights over nodes -l*dt_hist_.
      for (std::size_t i = 0; i < n_; ++i) fresh[jq][i] = 0.0;
      for (std::size_t l = 0; l < m; ++l) {
        double w = 1.0;
        const double tl = -static_cast<double>(l) * dt_hist_;
        for (std::size_t o = 0; o < m; ++o) {
          if (o == l) continue;
          const double to = -static_cast<double>(o) * dt_hist_;
          w *= (x - to) / (tl - to);
        }
        for (std::size_t i = 0; i < n_; ++i) fresh[jq][i] += w * hist_[l][i];
      }
    }
    hist_ = std::move(fresh);
  }

  void predict(int k) {
    // Extrapolate through min(m, k+1) points with binomial weights.
    const int m = std::min<int>(static_cast<int>(hist_.size()), k + 1);
    static const double kPascal[4][4] = {{1, 0, 0, 0},
                                         {2, -1, 0, 0},
                                         {3, -3, 1, 0},
                                         {4, -6, 4, -1}};
    const double* w = kPascal[m - 1];
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += w[j] * hist_[j][i];
      upred_[i] = acc;
    }
  }

  void build_rhs_const(int k) {
    static const double kA[3][3] = {
        {1.0, 0.0, 0.0},
        {4.0 / 3.0, -1.0 / 3.0, 0.0},
        {18.0 / 11.0, -9.0 / 11.0, 2.0 / 11.0}};
    const double* a = kA[k - 1];
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += a[j] * hist_[j][i];
      rhsc_[i] = acc;
    }
  }

  void refresh_jac(double t, const Vec& u, const Vec& p) {
    f_(scratch_, u, p, t);
    ++stats_->nf;
    fd_jacobian(f_, u, p, t, scratch_, jac_, *stats_);
    jac_stale_ = false;
    jac_ever_ = true;
    factor_stale_ = true;
    steps_since_jac_ = 0;
  }

  bool factor_iteration_matrix(double key) {
    DenseMatrix w(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        w.at(i, j) = (i == j ? 1.0 : 0.0) - key * jac_.at(i, j);
    ++stats_->nfactor;
    factor_stale_ = false;
    return lu_.factor(std::move(w));
  }

  StepResult retry_fresh() {
    jac_stale_ = true;
    return {StepStatus::Retry, 0.0};
  }

  RhsFn f_;
  Stats* stats_;
  std::size_t n_;
  int max_order_;
  bool fixed_dt_;
  double abstol_, reltol_;
  bool need_dense_;

  std::vector<Vec> hist_;  // hist_[0] is the current state
  double dt_hist_ = 0.0;
  int order_ = 1;   // target order (votes accumulated)
  int last_k_ = 1;  // order actually used by the last attempt
  int nsucc_ = 0;

  bool jac_stale_ = true;
  bool jac_ever_ = false;
  bool factor_stale_ = true;
  bool fprev_valid_ = false;
  int steps_since_jac_ = 0;
  double factored_key_ = -1.0;

  DenseMatrix jac_;
  LuFactor lu_;
  detail::PowerProbe probe_;
  Vec upred_, rhsc_, errv_, scratch_, fprev_;
};

}  // namespace

StepperPtr make_bdf(const ODEProblem& prob, const SolverOptions& opts,
                    Stats& stats) {
  return std::make_unique<BdfStepper>(3, false, prob, opts, stats);
}

StepperPtr make_bdf_capped(int max_order, const ODEProblem& prob,
                           const SolverOptions& opts, Stats& stats) {
  return std::make_unique<BdfStepper>(max_order, true, prob, opts, stats);
}

}  // namespace confed
