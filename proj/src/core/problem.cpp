#include "confed/problem.hpp"

#include <cstring>

namespace confed {

const char* to_string(Retcode rc) {
  switch (rc) {
    case Retcode::Success: return "Success";
    case Retcode::MaxIters: return "MaxIters";
    case Retcode::Unstable: return "Unstable";
    case Retcode::DtLessThanMin: return "DtLessThanMin";
    case Retcode::Failure: return "Failure";
  }
  return "?";
}

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::FirstOrderODE: return "FirstOrderODE";
    case ProblemKind::SecondOrderODE: return "SecondOrderODE";
  }
  return "?";
}

const char* to_string(StiffnessHint h) {
  switch (h) {
    case StiffnessHint::None: return "none";
    case StiffnessHint::Nonstiff: return "nonstiff";
    case StiffnessHint::Stiff: return "stiff";
  }
  return "?";
}

const char* to_string(AlgFamily f) {
  switch (f) {
    case AlgFamily::ExplicitRK: return "explicit-rk";
    case AlgFamily::Rosenbrock: return "rosenbrock";
    case AlgFamily::BDF: return "bdf";
    case AlgFamily::Symplectic: return "symplectic";
    case AlgFamily::Composite: return "composite";
  }
  return "?";
}

ODEProblem remake(const ODEProblem& prob, const RemakeOverrides& over) {
  ODEProblem out = prob;
  if (over.u0) {
    if (over.u0->size() != prob.u0.size())
      throw ShapeMismatch("remake: u0 override has length " +
                          std::to_string(over.u0->size()) + ", problem has " +
                          std::to_string(prob.u0.size()));
    out.u0 = *over.u0;
  }
  if (over.p) {
    if (over.p->size() != prob.p.size())
      throw ShapeMismatch("remake: p override has length " +
                          std::to_string(over.p->size()) + ", problem has " +
                          std::to_string(prob.p.size()));
    out.p = *over.p;
  }
  if (over.tspan) out.tspan = *over.tspan;
  return out;
}

ODEProblem reduce_to_first_order(const SecondOrderODEProblem& prob) {
  if (prob.x0.size() != prob.v0.size())
    throw ShapeMismatch("second-order problem: x0 and v0 lengths differ");
  const std::size_t n = prob.x0.size();
  AccelFn accel = prob.f;
  ODEProblem out;
  out.u0.resize(2 * n);
  std::copy(prob.x0.begin(), prob.x0.end(), out.u0.begin());
  std::copy(prob.v0.begin(), prob.v0.end(), out.u0.begin() + n);
  out.tspan = prob.tspan;
  out.p = prob.p;
  out.f = [accel, n](Vec& du, const Vec& u, const Vec& p, double t) {
    // Views into the packed state; scratch vectors keep the AccelFn signature.
    thread_local Vec x, v, dv;
    x.assign(u.begin(), u.begin() + n);
    v.assign(u.begin() + n, u.end());
    dv.assign(n, 0.0);
    accel(dv, v, x, p, t);
    std::copy(v.begin(), v.end(), du.begin());
    std::copy(dv.begin(), dv.end(), du.begin() + n);
  };
  return out;
}

}  // namespace confed
