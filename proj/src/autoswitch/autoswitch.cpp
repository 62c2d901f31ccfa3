#include "confed/autoswitch.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "confed/kernels.hpp"

namespace confed {

StiffnessEstimate estimate_stiffness(const Vec& k_a, const Vec& k_b,
                                     const Vec& g_a, const Vec& g_b) {
  StiffnessEstimate est;
  const std::size_t n = k_a.size();
  if (k_b.size() != n || g_a.size() != n || g_b.size() != n) return est;
  const auto& ops = kernels::ops();
  const double den = ops.l2_diff(n, g_a.data(), g_b.data());
  if (!(den > 0.0) || !std::isfinite(den)) return est;
  const double rho = ops.l2_diff(n, k_a.data(), k_b.data()) / den;
  if (!std::isfinite(rho)) return est;
  est.rho = rho;
  est.valid = true;
  return est;
}

namespace {

// Regime switcher over two adaptive members.  The active member integrates;
// every accepted step contributes a sample rho*dt compared against the
// explicit stability span S.  Three consecutive out-of-regime samples flip
// the active member, which restarts from the current state.  The driver
// polls active_name() after each accepted step, so flips show up in the
// solution's regime trace without extra plumbing here.
class AutoswitchStepper final : public Stepper {
 public:
  AutoswitchStepper(StepperPtr nonstiff, StepperPtr stiff)
      : ns_(std::move(nonstiff)), st_(std::move(stiff)) {}

  StepResult try_step(double t, double dt, const Vec& u, const Vec& p,
                      Vec& out) override {
    return active().try_step(t, dt, u, p, out);
  }

  void accept(double t, double dt, const Vec& u, const Vec& unew, const Vec& p,
              StepInterp* interp) override {
    // Probe before delegating: acceptance rotates the stage buffers the
    // non-stiff probe reads (FSAL swap).
    double rho = 0.0;
    const bool have = active().stiffness_probe(rho);
    active().accept(t, dt, u, unew, p, interp);
    vote(have, rho * dt);
    if (votes_ >= kVotesToSwitch) {
      in_stiff_ = !in_stiff_;
      votes_ = 0;
      active().reset(t + dt, unew);
    }
  }

  bool adaptive() const override { return true; }
  ControllerParams controller() const override { return active().controller(); }

  double adjust_dt(double dt_current, double dt_proposed) override {
    return active().adjust_dt(dt_current, dt_proposed);
  }

  void reset(double t, const Vec& u) override {
    ns_->reset(t, u);
    st_->reset(t, u);
    votes_ = 0;
  }

  bool stiffness_probe(double& rho) override {
    return active().stiffness_probe(rho);
  }

  const char* active_name() const override { return active().active_name(); }

 private:
  // Stability span of the explicit member along the negative real axis;
  // 3.25 sits between dp5 (~3.3) and a deliberately conservative read of
  // tsit5.  Hysteresis factors keep borderline problems from flapping.
  static constexpr double kS = 3.25;
  static constexpr int kVotesToSwitch = 3;

  Stepper& active() { return in_stiff_ ? *st_ : *ns_; }
  const Stepper& active() const { return in_stiff_ ? *st_ : *ns_; }

  void vote(bool have, double rho_dt) {
    if (!have) {
      votes_ = 0;  // a step without a usable sample breaks the streak
      return;
    }
    const bool out_of_regime =
        in_stiff_ ? (rho_dt < 1.1 * kS) : (rho_dt > 0.9 * kS);
    votes_ = out_of_regime ? votes_ + 1 : 0;
  }

  StepperPtr ns_, st_;
  bool in_stiff_ = false;  // non-stiff member starts active
  int votes_ = 0;
};

}  // namespace

StepperPtr make_autoswitch(const std::string& nonstiff_name,
                           const std::string& stiff_name, Registry& reg,
                           const ODEProblem& prob, const SolverOptions& opts,
                           Stats& stats) {
  if (!opts.adaptive)
    throw InvalidOptions("autoswitch needs step-size control; adaptive = false "
                         "contradicts the composite's regime detection");
  const RegistryEntry& ns = reg.at(nonstiff_name);
  const RegistryEntry& st = reg.at(stiff_name);
  for (const RegistryEntry* e : {&ns, &st}) {
    if (!e->desc.supports(ProblemKind::FirstOrderODE) || !e->make_first)
      throw KindMismatch("autoswitch member '" + e->desc.name +
                         "' does not integrate first-order ODEs");
    if (!e->desc.adaptive)
      throw InvalidOptions("autoswitch member '" + e->desc.name +
                           "' is not adaptive");
  }
  return std::make_unique<AutoswitchStepper>(ns.make_first(prob, opts, stats),
                                             st.make_first(prob, opts, stats));
}

}  // namespace confed
