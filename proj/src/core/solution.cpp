#include "confed/solution.hpp"

#include <algorithm>
#include <cmath>

namespace confed {

namespace {

void hermite_eval(const StepInterp& s, double theta, double h, Vec& out) {
  const std::size_t n = s.u0.size();
  out.resize(n);
  const double omt = 1.0 - theta;
  const double q = theta * (theta - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double du = s.u1[i] - s.u0[i];
    out[i] = omt * s.u0[i] + theta * s.u1[i] +
             q * ((1.0 - 2.0 * theta) * du + (theta - 1.0) * h * s.f0[i] +
                  theta * h * s.f1[i]);
  }
}

void rktheta_eval(const StepInterp& s, double theta, double h, Vec& out) {
  const std::size_t n = s.u0.size();
  out.assign(s.u0.begin(), s.u0.end());
  for (std::size_t j = 0; j < s.k.size(); ++j) {
    const Vec& poly = (*s.bpoly)[j];
    // Horner in theta, then one extra multiply for the leading theta factor.
    double w = 0.0;
    for (std::size_t m = poly.size(); m-- > 0;) w = w * theta + poly[m];
    w *= theta * h;
    if (w == 0.0) continue;
    const Vec& kj = s.k[j];
    for (std::size_t i = 0; i < n; ++i) out[i] += w * kj[i];
  }
}

void dopri_eval(const StepInterp& s, double theta, Vec& out) {
  const std::size_t n = s.k[0].size();
  out.resize(n);
  const double omt = 1.0 - theta;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = s.k[0][i] +
             theta * (s.k[1][i] +
                      omt * (s.k[2][i] +
                             theta * (s.k[3][i] + omt * s.k[4][i])));
  }
}

}  // namespace

void StepInterp::eval(double tq, Vec& out) const {
  const double h = tb - ta;
  const double theta = h != 0.0 ? (tq - ta) / h : 0.0;
  switch (kind) {
    case Kind::Hermite: hermite_eval(*this, theta, h, out); return;
    case Kind::RkTheta: rktheta_eval(*this, theta, h, out); return;
    case Kind::DopriCont: dopri_eval(*this, theta, out); return;
  }
}

void Solution::eval(double tq, Vec& out) const {
  if (t.empty()) throw OutOfRange("solution holds no output");
  // Saved nodes answer exactly; a duplicated event node answers with the
  // post-event state.
  auto it = std::upper_bound(t.begin(), t.end(), tq);
  if (it != t.begin() && *(it - 1) == tq) {
    out = u[static_cast<std::size_t>(it - 1 - t.begin())];
    return;
  }
  if (interp.empty())
    throw NoDenseOutput("dense output disabled; only saved nodes are available");
  if (tq < interp.front().ta || tq > interp.back().tb)
    throw OutOfRange("query time outside the integrated span");
  // Brackets are ordered by ta but may overlap where an event cut a step
  // short; the latest segment starting at or before tq carries the state
  // that was actually kept.
  auto seg = std::upper_bound(
      interp.begin(), interp.end(), tq,
      [](double val, const StepInterp& s) { return val < s.ta; });
  if (seg != interp.begin()) --seg;
  seg->eval(tq, out);
}

Vec Solution::operator()(double tq) const {
  Vec out;
  eval(tq, out);
  return out;
}

}  // namespace confed
