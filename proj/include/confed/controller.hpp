#pragma once

#include "confed/stepper.hpp"

namespace confed {

// PI step-size controller.  Factor for the next step from the current WRMS
// error (normalized so err <= 1 passes):
//
//   factor = safety * err^(-beta1) * err_prev^(-beta2)
//   beta1 = 0.7 / order_hat, beta2 = 0.4 / order_hat
//
// clamped to [min_factor, max_factor].  A rejection resets the memory term
// for the retry (pure I-control on the shrink) and caps the factor at 1.
class StepController {
 public:
  explicit StepController(const ControllerParams& p);

  // err is the WRMS norm of the just-attempted step; accepted says whether
  // the driver took it.  Returns the multiplicative dt factor.
  double factor(double err, bool accepted);

  void reset();  // forget error history (restart after an event)

  // Steppers with a moving effective order (BDF) update the params per step.
  void set_params(const ControllerParams& p) { p_ = p; }

 private:
  ControllerParams p_;
  double err_prev_ = 1.0;
};

}  // namespace confed
