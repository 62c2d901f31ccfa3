#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "confed/types.hpp"

namespace confed {

// In-place RHS: f(du, u, p, t).  du is preallocated to u.size().
using RhsFn = std::function<void(Vec& du, const Vec& u, const Vec& p, double t)>;

// In-place acceleration for second-order problems: a(dv, v, x, p, t).
using AccelFn = std::function<void(Vec& dv, const Vec& v, const Vec& x,
                                   const Vec& p, double t)>;

struct ODEProblem {
  RhsFn f;
  Vec u0;
  std::pair<double, double> tspan{0.0, 0.0};
  Vec p;
  StiffnessHint hint = StiffnessHint::None;

  std::size_t size() const { return u0.size(); }
};

// State is the pair (x, v); a solver sees it packed as [x..., v...].
struct SecondOrderODEProblem {
  AccelFn f;  // dv/dt
  Vec x0;
  Vec v0;  // must match x0 in length
  std::pair<double, double> tspan{0.0, 0.0};
  Vec p;

  std::size_t size() const { return x0.size(); }
};

struct RemakeOverrides {
  std::optional<Vec> u0;
  std::optional<Vec> p;
  std::optional<std::pair<double, double>> tspan;
};

// Non-destructive rebuild: the original is untouched, unspecified fields are
// shared.  Overridden u0/p must match the original length (ShapeMismatch).
ODEProblem remake(const ODEProblem& prob, const RemakeOverrides& over);

// Packs a second-order problem into first-order form: u = [x, v],
// du = [v, a(v, x)].  One evaluation of the returned RHS costs one
// acceleration evaluation.
ODEProblem reduce_to_first_order(const SecondOrderODEProblem& prob);

}  // namespace confed
