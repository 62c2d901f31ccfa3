#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "confed/events.hpp"
#include "confed/types.hpp"

namespace confed {

// Continuous extension of one accepted step on [ta, tb].  Interpolants are
// stored decoupled from the saved output nodes so saveat thinning does not
// degrade interpolate().
struct StepInterp {
  enum class Kind : std::uint8_t {
    Hermite,    // cubic from (u0, f0) and (u1, f1)
    RkTheta,    // u0 + h * sum_j bpoly_j(theta) * k_j   (stage polynomials)
    DopriCont,  // Shampine continuation: k holds rcont1..rcont5
  };

  double ta = 0.0, tb = 0.0;
  Kind kind = Kind::Hermite;
  Vec u0, u1, f0, f1;           // Hermite payload (u0 also used by RkTheta)
  std::vector<Vec> k;           // RkTheta stages / DopriCont rcont vectors
  const std::vector<Vec>* bpoly = nullptr;  // RkTheta: bpoly[j][m] * theta^(m+1)

  void eval(double tq, Vec& out) const;
};

struct Solution {
  Vec t;                 // saved nodes (event times appear twice: pre/post)
  std::vector<Vec> u;    // state at each node
  Retcode retcode = Retcode::Failure;
  Stats stats;
  std::string algorithm;       // descriptor name actually used
  std::string selection_note;  // set when an automatic selection picked `algorithm`

  std::vector<StepInterp> interp;  // empty unless dense output was kept
  std::vector<EventRecord> events;

  // Stiffness-regime trace from composite methods: (t, active algorithm).
  std::vector<std::pair<double, std::string>> regime_trace;

  double t0 = 0.0, tf = 0.0;  // requested span (direction preserved)

  bool success() const { return retcode == Retcode::Success; }
  const Vec& back() const { return u.back(); }
  std::size_t size() const { return t.size(); }

  // Continuous-extension evaluation.  Node times are answered exactly (last
  // node wins on a duplicated event time).  Off-node queries need dense
  // output (NoDenseOutput) and tq inside the covered span (OutOfRange).
  Vec operator()(double tq) const;
  void eval(double tq, Vec& out) const;
};

}  // namespace confed
