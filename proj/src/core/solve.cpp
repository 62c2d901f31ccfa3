#include "confed/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confed/autoswitch.hpp"
#include "confed/controller.hpp"
#include "confed/polyalg.hpp"
#include "events/events_detail.hpp"

namespace confed {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double rms_scaled(const Vec& v, const Vec& sc) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double q = v[i] / sc[i];
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

// "autoswitch(a,b)" -> {"a", "b"}; empty optional for plain names.
std::optional<std::pair<std::string, std::string>> parse_composite(
    const std::string& alg) {
  auto open = alg.find('(');
  if (open == std::string::npos) return std::nullopt;
  if (alg.substr(0, open) != "autoswitch" || alg.back() != ')')
    throw UnknownAlgorithm("cannot parse algorithm expression '" + alg + "'");
  std::string inner = alg.substr(open + 1, alg.size() - open - 2);
  auto comma = inner.find(',');
  if (comma == std::string::npos)
    throw UnknownAlgorithm("autoswitch needs two member algorithms");
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  return std::make_pair(trim(inner.substr(0, comma)),
                        trim(inner.substr(comma + 1)));
}

struct DriverSetup {
  double t0 = 0.0, tf = 0.0;
  const Vec* u0 = nullptr;
  Vec p;
  std::string algname;
  // RHS used for the startup heuristic; null for non-adaptive methods.
  RhsFn f;
  int dt0_order = 5;
};

Solution run_driver(const DriverSetup& cfg, Stepper& st,
                    const SolverOptions& opts, Stats& stats) {
  const double t0 = cfg.t0, tf = cfg.tf;
  const double span = tf - t0;

  Solution sol;
  sol.t0 = t0;
  sol.tf = tf;
  sol.algorithm = cfg.algname;

  const bool have_saveat = opts.saveat.has_value();
  const bool need_dense =
      opts.dense || have_saveat || !opts.callbacks.empty();
  const bool keep_interp = opts.dense;
  const bool node_every_step = !have_saveat && opts.save_everystep;

  Vec u = *cfg.u0;
  Vec p = cfg.p;
  double t = t0;

  if (!all_finite(u)) {
    sol.retcode = Retcode::Unstable;
    sol.t.push_back(t0);
    sol.u.push_back(u);
    sol.stats = stats;
    return sol;
  }

  // Initial dt.
  double dt;
  if (!st.adaptive()) {
    if (!opts.dt) throw MissingDt("dt required for " + cfg.algname);
    dt = *opts.dt;
    if (dt <= 0.0) throw InvalidOptions("dt must be positive (forward integration)");
  } else if (opts.dt) {
    dt = *opts.dt;
    if (dt <= 0.0) throw InvalidOptions("dt must be positive (forward integration)");
  } else {
    ODEProblem tmp;
    tmp.f = cfg.f;
    tmp.u0 = u;
    tmp.tspan = {t0, tf};
    tmp.p = p;
    dt = initial_dt(tmp, cfg.dt0_order, opts.abstol, opts.reltol, stats);
  }

  // Output plumbing.
  std::size_t sv_idx = 0;
  const Vec* sv = have_saveat ? &*opts.saveat : nullptr;
  if (sv) {
    if (sv->front() < t0 || sv->back() > tf)
      throw InvalidOptions("saveat times must lie within tspan");
    while (sv_idx < sv->size() && (*sv)[sv_idx] <= t0) {
      sol.t.push_back((*sv)[sv_idx]);
      sol.u.push_back(u);
      ++sv_idx;
    }
  } else {
    sol.t.push_back(t0);
    sol.u.push_back(u);
  }

  StepController ctrl(st.controller());
  // Composite methods surface their member's name; plain methods echo their
  // own, which keeps the trace empty for them.
  if (cfg.algname != st.active_name())
    sol.regime_trace.emplace_back(t0, st.active_name());

  // Condition values at the current integration point.
  Vec gcur(opts.callbacks.size(), 0.0);
  for (std::size_t i = 0; i < opts.callbacks.size(); ++i)
    gcur[i] = opts.callbacks[i].condition(u, p, t);

  Vec ucand;
  StepInterp si;
  sol.retcode = Retcode::Success;

  while (t < tf) {
    if (stats.nsteps() >= opts.max_steps) {
      sol.retcode = Retcode::MaxIters;
      break;
    }
    const double dtmin = std::max(1e-14 * span, 4.0 * kEps * std::fabs(t));
    bool clipped = false;
    if (t + dt * (1.0 + 1e-8) >= tf) {
      dt = tf - t;
      clipped = true;
    }

    StepResult r = st.try_step(t, dt, u, p, ucand);

    if (r.status == StepStatus::Blowup) {
      sol.retcode = Retcode::Unstable;
      break;
    }
    if (r.status == StepStatus::Retry) {
      ++stats.nreject;
      dt *= 0.5;
      if (dt < dtmin) {
        sol.retcode = Retcode::DtLessThanMin;
        break;
      }
      continue;
    }
    double factor = 1.0;
    if (st.adaptive()) {
      ctrl.set_params(st.controller());
      factor = ctrl.factor(r.error_norm, r.status == StepStatus::Accept);
    }
    if (r.status == StepStatus::Reject) {
      ++stats.nreject;
      dt *= factor;
      if (dt < dtmin) {
        sol.retcode = Retcode::DtLessThanMin;
        break;
      }
      continue;
    }

    // Accepted.
    ++stats.naccept;
    const double tnew = clipped ? tf : t + dt;
    si = StepInterp{};
    st.accept(t, dt, u, ucand, p, need_dense ? &si : nullptr);
    if (need_dense) {
      si.ta = t;
      si.tb = tnew;
    }

    // Event scan on the freshly covered interval.
    double t_reached = tnew;
    bool fired = false;
    std::size_t fired_idx = 0;
    if (!opts.callbacks.empty()) {
      auto hit = detail::first_event(opts.callbacks, gcur, si, ucand, p, span);
      if (hit) {
        fired = true;
        fired_idx = hit->idx;
        t_reached = std::min(hit->tstar, tnew);
        if (t_reached < tnew) {
          si.eval(t_reached, ucand);  // ucand becomes the pre-event state
        }
        // si keeps its full bracket: the polynomial is parameterized by
        // [ta, tb], so shrinking tb would silently rescale it.  Lookup
        // prefers the later segment wherever brackets overlap, so queries
        // past the event land on post-event data.
      }
    }

    // Record: saveat materialization or per-step nodes.
    if (sv) {
      while (sv_idx < sv->size() && (*sv)[sv_idx] <= t_reached) {
        const double svt = (*sv)[sv_idx];
        if (svt == t_reached) {
          sol.t.push_back(svt);
          sol.u.push_back(ucand);
        } else {
          Vec uo;
          si.eval(svt, uo);
          sol.t.push_back(svt);
          sol.u.push_back(std::move(uo));
        }
        ++sv_idx;
      }
    } else if (node_every_step) {
      sol.t.push_back(t_reached);
      sol.u.push_back(ucand);
    }
    if (keep_interp) sol.interp.push_back(si);

    if (fired) {
      // Pre-event node was recorded above; apply the affect, duplicate the
      // node, and restart the method at the discontinuity.
      sol.events.push_back({t_reached, fired_idx});
      opts.callbacks[fired_idx].affect(ucand, p, t_reached);
      if (!have_saveat && node_every_step) {
        sol.t.push_back(t_reached);
        sol.u.push_back(ucand);
      } else if (sv && !sol.t.empty() && !sol.u.empty() &&
                 !sol.t.empty() && sol.t.back() == t_reached) {
        sol.u.back() = ucand;  // saveat node exactly on the event: keep post state
      }
      st.reset(t_reached, ucand);
      ctrl.reset();
    }

    t = t_reached;
    u.swap(ucand);
    for (std::size_t i = 0; i < opts.callbacks.size(); ++i)
      gcur[i] = opts.callbacks[i].condition(u, p, t);

    if (!sol.regime_trace.empty() &&
        sol.regime_trace.back().second != st.active_name())
      sol.regime_trace.emplace_back(t, st.active_name());

    if (t >= tf) break;
    if (st.adaptive() && !fired) {
      double proposed = dt * factor;
      dt = st.adjust_dt(dt, proposed);
    }
  }

  if (sol.retcode == Retcode::Success && t < tf) sol.retcode = Retcode::Failure;

  if (!sv && !node_every_step && sol.retcode == Retcode::Success) {
    sol.t.push_back(tf);
    sol.u.push_back(u);
  }
  sol.stats = stats;
  return sol;
}

void check_common(const SolverOptions& opts,
                  const std::pair<double, double>& tspan) {
  opts.validate();
  if (!(tspan.second > tspan.first))
    throw InvalidOptions("tspan must satisfy t0 < tf (forward integration)");
  if (!std::isfinite(tspan.first) || !std::isfinite(tspan.second))
    throw InvalidOptions("tspan must be finite");
}

}  // namespace

double initial_dt(const ODEProblem& prob, int order, double abstol,
                  double reltol, Stats& stats) {
  const double t0 = prob.tspan.first, tf = prob.tspan.second;
  const double span = tf - t0;
  const double cap = span / 100.0;
  const double floor_dt = 1e-10 * span;
  const std::size_t n = prob.u0.size();

  Vec sc(n), f0(n, 0.0), f1(n, 0.0), u1(n);
  for (std::size_t i = 0; i < n; ++i)
    sc[i] = abstol + reltol * std::fabs(prob.u0[i]);
  prob.f(f0, prob.u0, prob.p, t0);
  ++stats.nf;
  const double d0 = rms_scaled(prob.u0, sc);
  const double d1 = rms_scaled(f0, sc);
  if (d1 == 0.0 || !std::isfinite(d1)) return cap;  // quiescent (or hopeless) start

  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * (d0 / d1);
  h0 = std::min(h0, cap);
  for (std::size_t i = 0; i < n; ++i) u1[i] = prob.u0[i] + h0 * f0[i];
  prob.f(f1, u1, prob.p, t0 + h0);
  ++stats.nf;
  Vec df(n);
  for (std::size_t i = 0; i < n; ++i) df[i] = f1[i] - f0[i];
  const double d2 = rms_scaled(df, sc) / h0;

  double h1;
  const double dmax = std::max(d1, d2);
  if (dmax <= 1e-15) {
    h1 = std::max(1e-6 * span, h0 * 1e-3);
  } else {
    h1 = std::pow(0.01 / dmax, 1.0 / (order + 1));
  }
  double dt = std::min(100.0 * h0, h1);
  return std::clamp(dt, floor_dt, cap);
}

Solution solve(const ODEProblem& prob, const std::string& alg,
               const SolverOptions& opts, Registry& reg) {
  check_common(opts, prob.tspan);
  if (prob.u0.empty()) throw InvalidOptions("u0 must be nonempty");
  if (!prob.f) throw InvalidOptions("problem has no RHS");

  Stats stats;
  StepperPtr st;
  std::string algname = alg;

  if (auto parts = parse_composite(alg)) {
    st = make_autoswitch(parts->first, parts->second, reg, prob, opts, stats);
  } else if (alg == "auto") {
    Solution sol = solve(prob, opts, reg);
    return sol;
  } else {
    const RegistryEntry& entry = reg.at(alg);
    if (!entry.desc.supports(ProblemKind::FirstOrderODE))
      throw KindMismatch("algorithm '" + alg +
                         "' does not accept first-order problems");
    st = entry.make_first(prob, opts, stats);
  }

  DriverSetup cfg;
  cfg.t0 = prob.tspan.first;
  cfg.tf = prob.tspan.second;
  cfg.u0 = &prob.u0;
  cfg.p = prob.p;
  cfg.algname = algname;
  cfg.f = prob.f;
  cfg.dt0_order = static_cast<int>(st->controller().order_hat);
  return run_driver(cfg, *st, opts, stats);
}

Solution solve(const SecondOrderODEProblem& prob, const std::string& alg,
               const SolverOptions& opts, Registry& reg) {
  check_common(opts, prob.tspan);
  if (prob.x0.empty()) throw InvalidOptions("x0 must be nonempty");
  if (prob.x0.size() != prob.v0.size())
    throw ShapeMismatch("x0 and v0 lengths differ");
  if (!prob.f) throw InvalidOptions("problem has no acceleration");

  if (alg == "auto") return solve(prob, opts, reg);
  if (!parse_composite(alg)) {
    const RegistryEntry& entry = reg.at(alg);
    if (entry.desc.supports(ProblemKind::SecondOrderODE)) {
      Stats stats;
      StepperPtr st = entry.make_second(prob, opts, stats);
      Vec u0(2 * prob.x0.size());
      std::copy(prob.x0.begin(), prob.x0.end(), u0.begin());
      std::copy(prob.v0.begin(), prob.v0.end(), u0.begin() + prob.x0.size());
      DriverSetup cfg;
      cfg.t0 = prob.tspan.first;
      cfg.tf = prob.tspan.second;
      cfg.u0 = &u0;
      cfg.p = prob.p;
      cfg.algname = alg;
      return run_driver(cfg, *st, opts, stats);
    }
    if (!entry.desc.supports(ProblemKind::FirstOrderODE))
      throw KindMismatch("algorithm '" + alg + "' accepts no supported kind");
  }
  // First-order method on a second-order problem: integrate the reduction.
  ODEProblem reduced = reduce_to_first_order(prob);
  return solve(reduced, alg, opts, reg);
}

Solution solve(const ODEProblem& prob, const SolverOptions& opts,
               Registry& reg) {
  SelectionContext ctx = make_context(prob, opts);
  AlgorithmChoice choice = default_algorithm(ctx);
  Solution sol = solve(prob, choice.algorithm, opts, reg);
  sol.selection_note = choice.rationale;
  return sol;
}

Solution solve(const SecondOrderODEProblem& prob, const SolverOptions& opts,
               Registry& reg) {
  SelectionContext ctx = make_context(prob, opts);
  AlgorithmChoice choice = default_algorithm(ctx);
  Solution sol = solve(prob, choice.algorithm, opts, reg);
  sol.selection_note = choice.rationale;
  return sol;
}

}  // namespace confed
