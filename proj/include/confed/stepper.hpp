#pragma once

#include <memory>

#include "confed/options.hpp"
#include "confed/problem.hpp"
#include "confed/solution.hpp"
#include "confed/types.hpp"

namespace confed {

enum class StepStatus {
  Accept,   // error passed (or method is non-adaptive)
  Reject,   // error test failed; retry with the controller's smaller dt
  Retry,    // internal failure (Newton divergence, singular W); halve dt
  Blowup,   // non-finite result a retry cannot fix (fixed-step methods)
};

struct StepResult {
  StepStatus status = StepStatus::Accept;
  double error_norm = 0.0;  // WRMS estimate; meaningful for adaptive methods
};

struct ControllerParams {
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 10.0;
  double order_hat = 4.0;  // effective order the PI exponents divide
};

// One-step integrator.  The driver owns t, dt, the parameter vector (event
// affects may rewrite it mid-run) and the accept/reject loop; the stepper
// owns stage storage and method state (FSAL caches, BDF history).
class Stepper {
 public:
  virtual ~Stepper() = default;

  // Attempt one step from (t, u) with width dt.  On any status, out holds
  // the candidate state (garbage on Retry/Blowup).
  virtual StepResult try_step(double t, double dt, const Vec& u, const Vec& p,
                              Vec& out) = 0;

  // Called exactly once after the driver accepts the candidate.  Fills the
  // continuous extension for [t, t+dt] when the run keeps one.
  virtual void accept(double t, double dt, const Vec& u, const Vec& unew,
                      const Vec& p, StepInterp* interp) = 0;

  virtual bool adaptive() const = 0;
  virtual ControllerParams controller() const { return {}; }

  // Post-controller hook: methods with history (BDF) may veto small dt
  // changes or cap growth.  Returns the dt actually used next.
  virtual double adjust_dt(double dt_current, double dt_proposed) {
    (void)dt_current;
    return dt_proposed;
  }

  // Discontinuity notification (event fired, state changed): drop caches
  // and history; multistep methods restart at order 1.
  virtual void reset(double t, const Vec& u) {
    (void)t;
    (void)u;
  }

  // Dominant-eigenvalue-magnitude estimate from method-internal data (same-c
  // stage quotients for ERK pairs, power iteration on the stored Jacobian
  // for stiff methods).  Valid right after an accepted try_step, before
  // accept() recycles stage storage.  Returns false when no estimate exists.
  virtual bool stiffness_probe(double& rho) {
    rho = 0.0;
    return false;
  }

  // Name of the formula currently in charge (composites switch over time).
  virtual const char* active_name() const = 0;
};

using StepperPtr = std::unique_ptr<Stepper>;

}  // namespace confed
