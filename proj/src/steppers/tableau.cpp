#include "confed/tableau.hpp"

#include <cmath>
#include <string>

namespace confed {

namespace {

ButcherTableau make_tsit5() {
  ButcherTableau t;
  t.name = "tsit5";
  t.order = 5;
  t.embedded_order = 4;
  t.fsal = true;
  t.c = {0.0, 0.161, 0.327, 0.9, 0.9800255409045097, 1.0, 1.0};
  t.a = {
      {0.161},
      {-0.008480655492356989, 0.335480655492357},
      {2.8971530571054935, -6.359448489975075, 4.3622954328695815},
      {5.325864828439257, -11.748883564062828, 7.4955393428898365,
       -0.09249506636175525},
      {5.86145544294642, -12.92096931784711, 8.159367898576159,
       -0.071584973281401, -0.028269050394068383},
      {0.09646076681806523, 0.01, 0.4798896504144996, 1.379008574103742,
       -3.290069515436081, 2.324710524099774},
  };
  t.b = {0.09646076681806523, 0.01,          0.4798896504144996,
         1.379008574103742,   -3.290069515436081, 2.324710524099774,
         0.0};
  t.btilde = {-0.00178001105222577714, -0.0008164344596567469,
              0.007880878010261995,    -0.1447110071732629,
              0.5823571654525552,      -0.45808210592918697,
              0.015151515151515152};
  // 4th-order free interpolant, stage weight polynomials in theta
  // (coefficient m multiplies theta^(m+1)).
  t.bpoly = {
      {1.0, -2.7637061972748258, 2.9132554618219126, -1.0530884977290216},
      {0.0, 0.1317, -0.2234, 0.1017},
      {0.0, 3.9302962368947512, -5.9410338721315048, 2.4906272856512528},
      {0.0, -12.411077166933676, 30.338188630282318, -16.548102889244902},
      {0.0, 37.509313416511041, -88.178904894766404, 47.379521962819283},
      {0.0, -27.896526289197286, 65.091894674793679, -34.870657861496611},
      {0.0, 1.5, -4.0, 2.5},
  };
  return t;
}

ButcherTableau make_dp5() {
  ButcherTableau t;
  t.name = "dp5";
  t.order = 5;
  t.embedded_order = 4;
  t.fsal = true;
  t.c = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  t.a = {
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
       11.0 / 84},
  };
  t.b = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
         11.0 / 84, 0.0};
  const double bhat[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695,
                          393.0 / 640,       -92097.0 / 339200,
                          187.0 / 2100,      1.0 / 40};
  t.btilde.resize(7);
  for (int i = 0; i < 7; ++i) t.btilde[i] = t.b[i] - bhat[i];
  t.shampine_dense = true;
  return t;
}

ButcherTableau make_rk4() {
  ButcherTableau t;
  t.name = "rk4";
  t.order = 4;
  t.embedded_order = 0;
  t.fsal = false;
  t.c = {0.0, 0.5, 0.5, 1.0};
  t.a = {{0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}};
  t.b = {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};
  return t;
}

}  // namespace

void ButcherTableau::check() const {
  const std::size_t s = stages();
  auto fail = [&](const std::string& what) {
    throw Error(std::string(name) + " tableau: " + what);
  };
  if (c.size() != s || a.size() != s - 1) fail("inconsistent sizes");
  if (c[0] != 0.0) fail("c[0] must be 0");
  for (std::size_t i = 0; i + 1 < s; ++i) {
    if (a[i].size() != i + 1) fail("row " + std::to_string(i) + " width");
    double sum = 0.0;
    for (double v : a[i]) sum += v;
    if (std::fabs(sum - c[i + 1]) > 1e-14)
      fail("stage consistency: row sum != c at stage " + std::to_string(i + 1));
  }
  auto dot_c = [&](int pow) {
    // sum_i b_i * c_i^pow
    double sum = 0.0;
    for (std::size_t i = 0; i < s; ++i) sum += b[i] * std::pow(c[i], pow);
    return sum;
  };
  if (std::fabs(dot_c(0) - 1.0) > 1e-14) fail("sum(b) != 1");
  if (order >= 2 && std::fabs(dot_c(1) - 0.5) > 1e-14) fail("order-2 condition");
  if (order >= 3) {
    if (std::fabs(dot_c(2) - 1.0 / 3.0) > 1e-14) fail("order-3 condition b.c^2");
    double bac = 0.0;  // sum_i b_i sum_j a_ij c_j
    for (std::size_t i = 1; i < s; ++i) {
      double inner = 0.0;
      for (std::size_t j = 0; j < a[i - 1].size(); ++j) inner += a[i - 1][j] * c[j];
      bac += b[i] * inner;
    }
    if (std::fabs(bac - 1.0 / 6.0) > 1e-14) fail("order-3 condition b.A.c");
  }
  if (!btilde.empty()) {
    if (btilde.size() != s) fail("btilde size");
    double sum = 0.0;
    for (double v : btilde) sum += v;
    if (std::fabs(sum) > 1e-14) fail("sum(btilde) != 0");
  }
  if (!bpoly.empty()) {
    if (bpoly.size() != s) fail("bpoly size");
    for (std::size_t j = 0; j < s; ++j) {
      // Interpolant endpoint must reproduce the propagating solution.
      double at1 = 0.0;
      for (double cm : bpoly[j]) at1 += cm;
      if (std::fabs(at1 - b[j]) > 1e-13) fail("bpoly(1) != b");
    }
  }
}

const ButcherTableau& tsit5_tableau() {
  static const ButcherTableau t = [] {
    ButcherTableau tab = make_tsit5();
    tab.check();
    return tab;
  }();
  return t;
}

const ButcherTableau& dp5_tableau() {
  static const ButcherTableau t = [] {
    ButcherTableau tab = make_dp5();
    tab.check();
    return tab;
  }();
  return t;
}

const ButcherTableau& rk4_tableau() {
  static const ButcherTableau t = [] {
    ButcherTableau tab = make_rk4();
    tab.check();
    return tab;
  }();
  return t;
}

}  // namespace confed
