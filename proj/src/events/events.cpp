#include "events/events_detail.hpp"

#include <cmath>

namespace confed::detail {

// Root localization support for the driver.  A step's continuous extension
// is probed at 8 interior points plus the right endpoint; the first
// direction-respecting sign change is sharpened by Illinois false position.
// An exact zero at the left endpoint of the step never fires (it is either
// the initial condition sitting on the surface or the just-handled event).

namespace {

bool crosses(double g0, double g1, EventDirection dir) {
  switch (dir) {
    case EventDirection::Downcrossing: return g0 > 0.0 && g1 <= 0.0;
    case EventDirection::Upcrossing: return g0 < 0.0 && g1 >= 0.0;
    case EventDirection::Any:
      return (g0 > 0.0 && g1 <= 0.0) || (g0 < 0.0 && g1 >= 0.0);
  }
  return false;
}

// Bracketed [a, b] with crossing established.  Returns a point at which the
// sign has crossed, within tol of the true root (64-iteration cap).
double illinois(const std::function<double(double)>& g, double a, double b,
                double ga, double gb, double tol) {
  int last = 0;
  for (int it = 0; it < 64; ++it) {
    if (!(b - a > tol)) break;
    double c = b - gb * (b - a) / (gb - ga);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    double gc = g(c);
    if (gc == 0.0) return c;
    if ((gc > 0.0) == (ga > 0.0)) {
      a = c;
      ga = gc;
      if (last == 1) gb *= 0.5;
      last = 1;
    } else {
      b = c;
      gb = gc;
      if (last == 2) ga *= 0.5;
      last = 2;
    }
  }
  return b;  // crossed side of the final bracket
}

}  // namespace

std::optional<EventHit> first_event(const std::vector<ContinuousCallback>& cbs,
                                    const Vec& gprev, const StepInterp& si,
                                    const Vec& unew, const Vec& p,
                                    double span) {
  constexpr int kSamples = 9;  // 8 interior + the right endpoint
  std::optional<EventHit> best;
  Vec uq;
  for (std::size_t ci = 0; ci < cbs.size(); ++ci) {
    const auto& cb = cbs[ci];
    const double tol = cb.root_tol_rel * std::fabs(span);
    double tl = si.ta;
    double gl = gprev[ci];
    for (int j = 1; j <= kSamples; ++j) {
      const double tr = j == kSamples
                            ? si.tb
                            : si.ta + (si.tb - si.ta) * j / kSamples;
      double gr;
      if (j == kSamples) {
        gr = cb.condition(unew, p, tr);
      } else {
        si.eval(tr, uq);
        gr = cb.condition(uq, p, tr);
      }
      if (crosses(gl, gr, cb.direction)) {
        double tstar;
        if (gr == 0.0) {
          tstar = tr;
        } else {
          auto g = [&](double tq) {
            si.eval(tq, uq);
            return cb.condition(uq, p, tq);
          };
          tstar = illinois(g, tl, tr, gl, gr, tol);
        }
        if (!best || tstar < best->tstar) best = EventHit{tstar, ci};
        break;  // earliest crossing of this callback found
      }
      tl = tr;
      gl = gr;
    }
  }
  return best;
}

}  // namespace confed::detail
