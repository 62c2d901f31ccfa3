#pragma once

#include <vector>

#include "confed/types.hpp"

namespace confed {

// Embedded explicit Runge-Kutta tableau.  btilde = b - bhat is the error
// weight vector; empty btilde marks a non-embedded (fixed-step) scheme.
struct ButcherTableau {
  const char* name;
  int order;          // order of the propagating solution
  int embedded_order; // 0 when not embedded
  bool fsal;          // last stage == f(t+dt, unew), reusable as next k1
  std::vector<std::vector<double>> a;  // a[i] has i entries (row i+2 of the matrix)
  std::vector<double> b;
  std::vector<double> btilde;
  std::vector<double> c;  // c[0] == 0

  // Free interpolant as stage polynomials: bpoly[j][m] multiplies theta^(m+1).
  // Empty when the scheme has none (Hermite fallback applies).
  std::vector<Vec> bpoly;

  // Dense output via the Shampine continuation (Dormand-Prince shape).
  bool shampine_dense = false;

  std::size_t stages() const { return b.size(); }

  // Structural checks: row sums match c to 1e-14, sum(b) == 1, sum(btilde)
  // == 0, and the order conditions through order 3 hold.  Throws Error on
  // violation; called once per process for each built-in tableau.
  void check() const;
};

const ButcherTableau& tsit5_tableau();
const ButcherTableau& dp5_tableau();
const ButcherTableau& rk4_tableau();

}  // namespace confed
