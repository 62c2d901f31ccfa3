#include "confed/problems.hpp"

#include <cmath>

namespace confed::problems {

ODEProblem linear_decay() {
  ODEProblem prob;
  prob.f = [](Vec& du, const Vec& u, const Vec&, double) { du[0] = -u[0]; };
  prob.u0 = {1.0};
  prob.tspan = {0.0, 1.0};
  return prob;
}

ODEProblem linear_test(double lambda, double tf) {
  ODEProblem prob;
  prob.f = [](Vec& du, const Vec& u, const Vec& p, double) {
    du[0] = p[0] * u[0];
  };
  prob.u0 = {1.0};
  prob.tspan = {0.0, tf};
  prob.p = {lambda};
  return prob;
}

ODEProblem lorenz() {
  ODEProblem prob;
  prob.f = [](Vec& du, const Vec& u, const Vec& p, double) {
    du[0] = p[0] * (u[1] - u[0]);
    du[1] = u[0] * (p[1] - u[2]) - u[1];
    du[2] = u[0] * u[1] - p[2] * u[2];
  };
  prob.u0 = {1.0, 0.0, 0.0};
  prob.tspan = {0.0, 100.0};
  prob.p = {10.0, 28.0, 8.0 / 3.0};
  return prob;
}

ODEProblem vanderpol(double mu) {
  ODEProblem prob;
  prob.f = [](Vec& du, const Vec& u, const Vec& p, double) {
    du[0] = u[1];
    du[1] = p[0] * (1.0 - u[0] * u[0]) * u[1] - u[0];
  };
  prob.u0 = {2.0, 0.0};
  // The relaxation period grows like mu, so a unit window stays on the
  // slow manifold where the damping term dominates the spectrum.
  prob.tspan = {0.0, 1.0};
  prob.p = {mu};
  return prob;
}

ODEProblem robertson() {
  ODEProblem prob;
  prob.f = [](Vec& du, const Vec& u, const Vec& p, double) {
    const double r1 = p[0] * u[0];
    const double r2 = p[1] * u[1] * u[2];
    const double r3 = p[2] * u[1] * u[1];
    du[0] = -r1 + r2;
    du[1] = r1 - r2 - r3;
    du[2] = r3;
  };
  prob.u0 = {1.0, 0.0, 0.0};
  prob.tspan = {0.0, 1.0e4};
  prob.p = {0.04, 1.0e4, 3.0e7};
  prob.hint = StiffnessHint::Stiff;
  return prob;
}

ODEProblem orego() {
  // Oregonator, the 3-species Belousov-Zhabotinsky reduction.
  ODEProblem prob;
  prob.f = [](Vec& du, const Vec& u, const Vec&, double) {
    du[0] = 77.27 * (u[1] + u[0] * (1.0 - 8.375e-6 * u[0] - u[1]));
    du[1] = (u[2] - (1.0 + u[0]) * u[1]) / 77.27;
    du[2] = 0.161 * (u[0] - u[2]);
  };
  prob.u0 = {1.0, 2.0, 3.0};
  prob.tspan = {0.0, 360.0};
  prob.hint = StiffnessHint::Stiff;
  return prob;
}

ODEProblem stiff_relaxation() {
  ODEProblem prob;
  prob.f = [](Vec& du, const Vec& u, const Vec&, double t) {
    du[0] = -1000.0 * (u[0] - std::cos(t));
  };
  prob.u0 = {0.0};
  prob.tspan = {0.0, 1.0};
  return prob;
}

SecondOrderODEProblem harmonic_oscillator() {
  SecondOrderODEProblem prob;
  prob.f = [](Vec& dv, const Vec&, const Vec& x, const Vec&, double) {
    dv[0] = -x[0];
  };
  prob.x0 = {1.0};
  prob.v0 = {0.0};
  prob.tspan = {0.0, 2.0 * std::acos(-1.0)};
  return prob;
}

SecondOrderODEProblem bouncing_ball() {
  SecondOrderODEProblem prob;
  prob.f = [](Vec& dv, const Vec&, const Vec&, const Vec& p, double) {
    dv[0] = -p[0];
  };
  prob.x0 = {1.0};
  prob.v0 = {0.0};
  prob.tspan = {0.0, 5.0};
  prob.p = {9.8};
  return prob;
}

ContinuousCallback bouncing_ball_callback() {
  ContinuousCallback cb;
  // Packed state is [x, v]; fire when the height crosses zero from above
  // and reflect the velocity.
  cb.condition = [](const Vec& u, const Vec&, double) { return u[0]; };
  cb.affect = [](Vec& u, Vec&, double) { u[1] = -u[1]; };
  cb.direction = EventDirection::Downcrossing;
  return cb;
}

namespace {

Vec exact_linear_decay(double t) { return {std::exp(-t)}; }

Vec exact_stiff_relaxation(double t) {
  // u' = -a(u - cos t) with a = 1000, u(0) = 0:
  // u = (a^2 cos t + a sin t)/(a^2+1) - a^2/(a^2+1) * exp(-a t)
  const double a = 1000.0;
  const double d = a * a + 1.0;
  return {(a * a * std::cos(t) + a * std::sin(t)) / d -
          (a * a / d) * std::exp(-a * t)};
}

Vec exact_harmonic(double t) { return {std::cos(t), -std::sin(t)}; }

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"linear_decay", "u' = -u, the calibration problem",
               ProblemKind::FirstOrderODE, linear_decay, nullptr,
               exact_linear_decay, false});
  c.push_back({"lorenz", "chaotic convection model, n=3",
               ProblemKind::FirstOrderODE, lorenz, nullptr, nullptr, false});
  c.push_back({"vanderpol", "relaxation oscillator, mu=1e6 (stiff)",
               ProblemKind::FirstOrderODE, [] { return vanderpol(1.0e6); },
               nullptr, nullptr, false});
  c.push_back({"robertson", "three-species reaction kinetics (stiff)",
               ProblemKind::FirstOrderODE, robertson, nullptr, nullptr, false});
  c.push_back({"orego", "Oregonator limit cycle (stiff)",
               ProblemKind::FirstOrderODE, orego, nullptr, nullptr, false});
  c.push_back({"stiff_relaxation", "u' = -1000(u - cos t), closed form",
               ProblemKind::FirstOrderODE, stiff_relaxation, nullptr,
               exact_stiff_relaxation, false});
  c.push_back({"harmonic_oscillator", "x'' = -x, energy-conservation testbed",
               ProblemKind::SecondOrderODE, nullptr, harmonic_oscillator,
               exact_harmonic, false});
  c.push_back({"bouncing_ball", "gravity plus elastic floor reflection",
               ProblemKind::SecondOrderODE, nullptr, bouncing_ball, nullptr,
               true});
  return c;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

const CatalogEntry& lookup(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw DomainMismatch("no catalog problem named '" + name + "'");
}

}  // namespace confed::problems
