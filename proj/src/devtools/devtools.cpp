#include "confed/devtools.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "confed/kernels.hpp"

namespace confed::devtools {

double avg_timeseries_error(const Solution& sol, const std::vector<double>& ts,
                            const std::function<Vec(double)>& ref) {
  if (ts.empty()) return 0.0;
  const auto& ops = kernels::ops();
  double acc = 0.0;
  Vec v, r;
  for (double t : ts) {
    sol.eval(t, v);
    r = ref(t);
    if (r.size() != v.size())
      throw ShapeMismatch("reference dimension differs from solution");
    acc += ops.l2_diff(v.size(), v.data(), r.data());
  }
  return acc / static_cast<double>(ts.size());
}

namespace {

template <class Problem>
ConvergenceResult convergence_impl(const Problem& prob, const std::string& alg,
                                   const std::vector<double>& dts,
                                   const std::function<Vec(double)>& exact,
                                   Registry& reg) {
  ConvergenceResult res;
  res.dts = dts;
  const auto& ops = kernels::ops();
  for (double dt : dts) {
    SolverOptions opts;
    opts.dt = dt;
    opts.adaptive = false;  // a slope is only meaningful on a fixed grid
    opts.save_everystep = false;
    opts.dense = false;
    Solution sol = solve(prob, alg, opts, reg);
    if (!sol.success()) {
      std::ostringstream msg;
      msg << "convergence run for '" << alg << "' at dt=" << dt
          << " ended with " << to_string(sol.retcode);
      throw NonFiniteError(msg.str());
    }
    const Vec ex = exact(prob.tspan.second);
    res.errors.push_back(ops.l2_diff(ex.size(), sol.back().data(), ex.data()));
  }

  bool any_zero = false;
  for (double e : res.errors) any_zero = any_zero || !(e > 0.0);
  if (any_zero || res.errors.size() < 2) {
    res.order = std::numeric_limits<double>::infinity();
    return res;
  }
  // Least-squares slope of log(err) against log(dt).
  const std::size_t m = res.errors.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += std::log(res.dts[i]);
    sy += std::log(res.errors[i]);
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(res.dts[i]) - mx;
    num += dx * (std::log(res.errors[i]) - my);
    den += dx * dx;
  }
  res.order = num / den;
  return res;
}

}  // namespace

ConvergenceResult convergence_order(const ODEProblem& prob,
                                    const std::string& alg,
                                    const std::vector<double>& dts,
                                    const std::function<Vec(double)>& exact,
                                    Registry& reg) {
  return convergence_impl(prob, alg, dts, exact, reg);
}

ConvergenceResult convergence_order(const SecondOrderODEProblem& prob,
                                    const std::string& alg,
                                    const std::vector<double>& dts,
                                    const std::function<Vec(double)>& exact,
                                    Registry& reg) {
  return convergence_impl(prob, alg, dts, exact, reg);
}

std::vector<WorkPrecisionEntry> work_precision(
    const ODEProblem& prob, const std::string& alg,
    const std::vector<std::pair<double, double>>& tols,
    const std::function<Vec(double)>& ref, const WorkPrecisionOptions& wp,
    Registry& reg) {
  std::vector<double> ts = wp.sample_ts;
  if (ts.empty()) {
    // 100 uniform samples, endpoint included, start excluded (it is exact).
    const double t0 = prob.tspan.first;
    const double h = (prob.tspan.second - t0) / 100.0;
    for (int i = 1; i <= 100; ++i) ts.push_back(t0 + h * i);
  }
  const int reps = std::max(1, wp.reps);

  std::vector<WorkPrecisionEntry> table;
  for (const auto& [atol, rtol] : tols) {
    WorkPrecisionEntry e;
    e.abstol = atol;
    e.reltol = rtol;

    SolverOptions timed = wp.base;
    timed.abstol = atol;
    timed.reltol = rtol;
    timed.save_everystep = false;
    timed.dense = false;

    // Warm-up run, untimed; it also supplies stats and the retcode.
    Solution warm = solve(prob, alg, timed, reg);
    e.retcode = warm.retcode;
    e.stats = warm.stats;

    std::vector<double> times(reps);
    for (int r = 0; r < reps; ++r) {
      const auto tic = std::chrono::steady_clock::now();
      Solution s = solve(prob, alg, timed, reg);
      const auto toc = std::chrono::steady_clock::now();
      times[r] = std::chrono::duration<double>(toc - tic).count();
    }
    auto mid = times.begin() + reps / 2;
    std::nth_element(times.begin(), mid, times.end());
    e.runtime_s = *mid;

    e.error = std::numeric_limits<double>::quiet_NaN();
    if (wp.measure_error && warm.success()) {
      // Error is measured on a separate dense run so interpolation storage
      // never contaminates the timing.
      SolverOptions densed = wp.base;
      densed.abstol = atol;
      densed.reltol = rtol;
      densed.save_everystep = true;
      densed.dense = true;
      Solution ds = solve(prob, alg, densed, reg);
      if (ds.success()) e.error = avg_timeseries_error(ds, ts, ref);
    }
    table.push_back(std::move(e));
  }
  return table;
}

namespace {

// Node table backing a reference callable.  A 1e-14 run on a stiff problem
// accumulates millions of steps; per-step interpolant objects at that count
// dominate memory, so the nodes are flattened and the cubic Hermite segment
// is rebuilt per query from two on-demand RHS evaluations.
struct RefTable {
  Vec ts;
  Vec us;  // row-major, dim per node
  std::size_t dim = 0;
  RhsFn f;
  Vec p;

  Vec eval(double tq) const {
    auto it = std::upper_bound(ts.begin(), ts.end(), tq);
    if (it != ts.begin() && *(it - 1) == tq) return node(it - 1 - ts.begin());
    if (tq < ts.front() || tq > ts.back())
      throw OutOfRange("query time outside the integrated span");
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double h = ts[hi] - ts[lo];
    Vec u0 = node(lo), u1 = node(hi);
    Vec f0(dim), f1(dim);
    f(f0, u0, p, ts[lo]);
    f(f1, u1, p, ts[hi]);
    const double th = (tq - ts[lo]) / h;
    Vec out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double du = u1[i] - u0[i];
      out[i] = u0[i] + th * du +
               th * (th - 1.0) *
                   ((1.0 - 2.0 * th) * du + (th - 1.0) * h * f0[i] +
                    th * h * f1[i]);
    }
    return out;
  }

  Vec node(std::ptrdiff_t i) const {
    const std::size_t off = static_cast<std::size_t>(i) * dim;
    return Vec(us.begin() + off, us.begin() + off + dim);
  }
};

}  // namespace

std::function<Vec(double)> reference_solution(const ODEProblem& prob) {
  SolverOptions opts;
  opts.abstol = 1e-14;
  opts.reltol = 1e-14;
  opts.max_steps = 20000000;
  opts.dense = false;  // nodes only; see RefTable
  // Profile by declared stiffness: an explicit pair would be stability-bound
  // on a stiff problem at these tolerances.
  const char* alg = prob.hint == StiffnessHint::Stiff ? "rosenbrock23" : "dp5";
  Solution sol = solve(prob, alg, opts);
  if (!sol.success())
    throw NonFiniteError(std::string("reference solve ended with ") +
                         to_string(sol.retcode));

  auto tab = std::make_shared<RefTable>();
  tab->dim = prob.u0.size();
  tab->f = prob.f;
  tab->p = prob.p;
  tab->ts = std::move(sol.t);
  tab->us.reserve(sol.u.size() * tab->dim);
  for (const Vec& u : sol.u) tab->us.insert(tab->us.end(), u.begin(), u.end());
  return [tab](double t) { return tab->eval(t); };
}

}  // namespace confed::devtools
