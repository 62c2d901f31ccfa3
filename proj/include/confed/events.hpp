#pragma once

#include <functional>

#include "confed/types.hpp"

namespace confed {

enum class EventDirection {
  Any,       // fire on either sign change
  Upcrossing,   // negative -> positive only
  Downcrossing, // positive -> negative only
};

// Scalar event function g(u, p, t); a root of g along the trajectory fires
// the affect.  The affect mutates the state in place; integration restarts
// from the post-affect state at the root time.
struct ContinuousCallback {
  std::function<double(const Vec& u, const Vec& p, double t)> condition;
  std::function<void(Vec& u, Vec& p, double t)> affect;
  EventDirection direction = EventDirection::Any;
  // Root localization tolerance in t, relative to the integration span.
  // Absolute tolerance used is root_tol_rel * |tf - t0|.
  double root_tol_rel = 1e-12;
};

struct EventRecord {
  double t = 0.0;
  std::size_t callback_index = 0;
};

}  // namespace confed
