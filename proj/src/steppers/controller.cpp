#include "confed/controller.hpp"

#include <algorithm>
#include <cmath>

namespace confed {

StepController::StepController(const ControllerParams& p) : p_(p) {}

double StepController::factor(double err, bool accepted) {
  const double beta1 = 0.7 / p_.order_hat;
  const double beta2 = 0.4 / p_.order_hat;
  double f;
  if (err == 0.0) {
    f = p_.max_factor;  // exact step: open up as far as allowed
  } else if (!std::isfinite(err)) {
    f = p_.min_factor;
  } else if (accepted) {
    f = p_.safety * std::pow(err, -beta1) * std::pow(err_prev_, -beta2);
  } else {
    f = p_.safety * std::pow(err, -(beta1 + beta2));
  }
  f = std::clamp(f, p_.min_factor, p_.max_factor);
  if (!accepted) f = std::min(f, 1.0);
  if (accepted) err_prev_ = std::max(err, 1e-4);  // floor keeps the memory term tame
  return f;
}

void StepController::reset() { err_prev_ = 1.0; }

}  // namespace confed
