#include "confed/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "confed/devtools.hpp"
#include "confed/estimation.hpp"
#include "confed/kernels.hpp"
#include "confed/polyalg.hpp"
#include "confed/problems.hpp"

namespace confed::cli {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '&': r += "&amp;"; break;
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '"': r += "&quot;"; break;
      default: r += c;
    }
  }
  return r;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InvalidOptions(std::string(what) + ": cannot parse '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// ---- problem loading ------------------------------------------------------

struct Loaded {
  const problems::CatalogEntry* entry = nullptr;
  ODEProblem first;
  SecondOrderODEProblem second;

  bool is_first() const { return entry->kind == ProblemKind::FirstOrderODE; }
};

Loaded load_problem(const std::string& name, const std::string& tspan_flag) {
  Loaded lp;
  lp.entry = &problems::lookup(name);
  if (lp.entry->kind == ProblemKind::FirstOrderODE)
    lp.first = lp.entry->make();
  else
    lp.second = lp.entry->make_second();
  if (!tspan_flag.empty()) {
    const auto span = parse_tspan(tspan_flag);
    if (lp.is_first())
      lp.first.tspan = span;
    else
      lp.second.tspan = span;
  }
  return lp;
}

// First-order view for commands that need one (bench, estimate).  Second-order
// entries are packed; their exact solutions already use the packed layout.
ODEProblem as_first_order(const Loaded& lp) {
  return lp.is_first() ? lp.first : reduce_to_first_order(lp.second);
}

struct TolFlags {
  double abstol = 1e-6;
  double reltol = 1e-3;
  double dt = 0.0;  // 0 means adaptive
  std::string saveat;
};

SolverOptions build_options(const TolFlags& fl, const Loaded& lp) {
  SolverOptions opts;
  opts.abstol = fl.abstol;
  opts.reltol = fl.reltol;
  if (fl.dt != 0.0) opts.dt = fl.dt;
  if (!fl.saveat.empty()) {
    opts.saveat = parse_saveat(fl.saveat);
    opts.save_everystep = false;
  }
  if (lp.entry->has_default_callback)
    opts.callbacks.push_back(problems::bouncing_ball_callback());
  return opts;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidOptions("cannot open output file '" + path + "'");
  return f;
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_solve(const std::string& problem, const std::string& alg,
              const TolFlags& tol, const std::string& tspan,
              const std::string& out_path, const std::string& svg_path,
              std::ostream& out, std::ostream& err) {
  const Loaded lp = load_problem(problem, tspan);
  const SolverOptions opts = build_options(tol, lp);
  const Solution sol =
      lp.is_first() ? solve(lp.first, alg, opts) : solve(lp.second, alg, opts);

  if (!sol.selection_note.empty())
    err << "selected algorithm: " << sol.algorithm << " ("
        << sol.selection_note << ")\n";
  err << "retcode: " << to_string(sol.retcode) << "  naccept: "
      << sol.stats.naccept << "  nreject: " << sol.stats.nreject
      << "  nf: " << sol.stats.nf << "\n";
  for (const auto& ev : sol.events)
    err << "event: t=" << fmtg(ev.t) << " callback=" << ev.callback_index
        << "\n";
  for (const auto& [t, name] : sol.regime_trace)
    err << "regime: t=" << fmtg(t) << " -> " << name << "\n";

  if (!out_path.empty()) {
    auto f = open_out(out_path);
    write_solution_csv(f, sol);
  } else {
    write_solution_csv(out, sol);
  }
  if (!svg_path.empty()) {
    auto f = open_out(svg_path);
    write_solution_svg(f, sol, problem + " / " + sol.algorithm);
  }
  return sol.success() ? 0 : 1;
}

int cmd_list(const std::string& kind, bool list_problems, std::ostream& out) {
  if (list_problems) {
    for (const auto& e : problems::catalog())
      out << e.name << "  [" << to_string(e.kind) << "]  " << e.summary
          << (e.has_default_callback ? "  (installs callback)" : "") << "\n";
    return 0;
  }
  std::optional<ProblemKind> k;
  if (kind == "first_order")
    k = ProblemKind::FirstOrderODE;
  else if (kind == "second_order")
    k = ProblemKind::SecondOrderODE;
  else if (!kind.empty())
    throw InvalidOptions("--kind must be first_order or second_order");
  for (const auto& d : default_registry().list(k)) {
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-11s order=%d %-8s %-6s %s",
                  d.name.c_str(), to_string(d.family), d.order,
                  d.adaptive ? "adaptive" : "fixed",
                  d.stiff_capable ? "stiff" : "",
                  d.summary.c_str());
    out << line << "\n";
  }
  return 0;
}

int cmd_explain(const std::string& problem, const TolFlags& tol,
                const std::string& tspan, std::ostream& out) {
  const Loaded lp = load_problem(problem, tspan);
  const SolverOptions opts = build_options(tol, lp);
  const SelectionContext ctx = lp.is_first()
                                   ? make_context(lp.first, opts)
                                   : make_context(lp.second, opts);
  out << explain_choice(ctx);
  return 0;
}

int cmd_converge(const std::string& problem, const std::string& alg,
                 double dt0, int levels, double factor,
                 const std::string& tspan, const std::string& out_path,
                 std::ostream& out) {
  if (!(dt0 > 0.0) || levels < 2 || !(factor > 0.0) || factor >= 1.0)
    throw InvalidOptions("converge needs dt0 > 0, levels >= 2, 0 < factor < 1");
  const Loaded lp = load_problem(problem, tspan);
  if (!lp.entry->exact)
    throw DomainMismatch("problem '" + problem +
                         "' has no closed-form solution; converge needs one");
  std::vector<double> dts(levels);
  double dt = dt0;
  for (int i = 0; i < levels; ++i, dt *= factor) dts[i] = dt;

  const devtools::ConvergenceResult res =
      lp.is_first()
          ? devtools::convergence_order(lp.first, alg, dts, lp.entry->exact)
          : devtools::convergence_order(lp.second, alg, dts, lp.entry->exact);

  std::ostringstream body;
  body << "dt,error\n";
  for (std::size_t i = 0; i < res.dts.size(); ++i)
    body << fmt17(res.dts[i]) << "," << fmt17(res.errors[i]) << "\n";
  body << "order," << fmt17(res.order) << "\n";
  if (!out_path.empty()) {
    auto f = open_out(out_path);
    f << body.str();
  } else {
    out << body.str();
  }
  return 0;
}

int bench_threads() {
  const char* env = std::getenv("CONFED_SOLVE_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  return static_cast<int>(std::min(v, 64L));
}

int cmd_bench(const std::string& problem, const std::string& algs_flag,
              const std::string& reltols_flag, std::optional<double> abstol,
              int reps, const std::string& tspan, const std::string& out_path,
              const std::string& svg_path, std::ostream& out,
              std::ostream& err) {
  const Loaded lp = load_problem(problem, tspan);
  const ODEProblem prob = as_first_order(lp);

  std::vector<std::string> algs;
  for (const auto& a : split(algs_flag, ','))
    if (!a.empty()) algs.push_back(a);
  if (algs.empty()) throw InvalidOptions("--algs needs at least one name");

  std::vector<std::pair<double, double>> tols;
  for (double r : parse_tol_grid(reltols_flag))
    tols.emplace_back(abstol ? *abstol : r, r);

  const std::function<Vec(double)> ref =
      lp.entry->exact ? lp.entry->exact : devtools::reference_solution(prob);

  std::vector<double> ts;
  {
    const double t0 = prob.tspan.first;
    const double h = (prob.tspan.second - t0) / 100.0;
    for (int i = 1; i <= 100; ++i) ts.push_back(t0 + h * i);
  }

  // Untimed accuracy passes first; these may run in parallel (one thread per
  // algorithm, bounded by CONFED_SOLVE_THREADS).  Timed passes stay serial.
  std::vector<std::vector<double>> errors(algs.size());
  {
    const int nthreads = bench_threads();
    std::vector<std::exception_ptr> eps(algs.size());
    auto worker = [&](std::size_t i) {
      try {
        std::vector<double> col;
        for (const auto& [atol, rtol] : tols) {
          SolverOptions o;
          o.abstol = atol;
          o.reltol = rtol;
          Solution s = solve(prob, algs[i], o);
          col.push_back(s.success()
                            ? devtools::avg_timeseries_error(s, ts, ref)
                            : std::numeric_limits<double>::quiet_NaN());
        }
        errors[i] = std::move(col);
      } catch (...) {
        eps[i] = std::current_exception();
      }
    };
    for (std::size_t base = 0; base < algs.size();
         base += static_cast<std::size_t>(nthreads)) {
      std::vector<std::thread> pool;
      const std::size_t stop =
          std::min(algs.size(), base + static_cast<std::size_t>(nthreads));
      for (std::size_t i = base; i < stop; ++i)
        pool.emplace_back(worker, i);
      for (auto& th : pool) th.join();
    }
    for (auto& ep : eps)
      if (ep) std::rethrow_exception(ep);
  }

  std::ostringstream body;
  body << "alg,abstol,reltol,error,runtime_s,nf,naccept,nreject,njac,"
          "retcode\n";
  std::vector<SvgSeries> series;
  for (std::size_t i = 0; i < algs.size(); ++i) {
    devtools::WorkPrecisionOptions wp;
    wp.reps = reps;
    wp.sample_ts = ts;
    wp.measure_error = false;  // taken from the parallel pass above
    auto entries = devtools::work_precision(prob, algs[i], tols, ref, wp);
    SvgSeries sv;
    sv.label = algs[i];
    for (std::size_t j = 0; j < entries.size(); ++j) {
      auto& e = entries[j];
      e.error = errors[i][j];
      body << algs[i] << "," << fmt17(e.abstol) << "," << fmt17(e.reltol)
           << "," << fmt17(e.error) << "," << fmt17(e.runtime_s) << ","
           << e.stats.nf << "," << e.stats.naccept << "," << e.stats.nreject
           << "," << e.stats.njac << "," << to_string(e.retcode) << "\n";
      sv.xy.emplace_back(e.error, e.runtime_s);
    }
    series.push_back(std::move(sv));
  }

  if (!out_path.empty()) {
    auto f = open_out(out_path);
    f << body.str();
  } else {
    out << body.str();
  }
  if (!svg_path.empty()) {
    auto f = open_out(svg_path);
    write_workprecision_svg(f, series, problem + " work-precision");
  }
  err << "bench: " << algs.size() * tols.size() << " rows\n";
  return 0;
}

int cmd_estimate(const std::string& problem, const std::string& alg,
                 const TolFlags& tol, const std::string& tspan, int pindex,
                 double span, int npoints, int ndata,
                 const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  if (npoints < 2 || ndata < 1 || !(span > 0.0))
    throw InvalidOptions("estimate needs npoints >= 2, data points >= 1, span > 0");
  const Loaded lp = load_problem(problem, tspan);
  if (!lp.is_first())
    throw KindMismatch("estimate works on first-order problems");
  const ODEProblem prob = lp.first;
  if (prob.p.empty())
    throw DomainMismatch("problem '" + problem + "' has no parameters");
  if (pindex < 0 || static_cast<std::size_t>(pindex) >= prob.p.size())
    throw OutOfRange("--param-index outside the parameter vector");

  // Synthetic data: the problem solved at its catalog parameters, sampled on
  // a uniform grid.  The loss then has an exact zero at the true value.
  std::vector<double> times(ndata);
  const double t0 = prob.tspan.first, tf = prob.tspan.second;
  for (int i = 0; i < ndata; ++i)
    times[i] = t0 + (tf - t0) * (i + 1) / static_cast<double>(ndata);

  SolverOptions base;
  base.abstol = tol.abstol;
  base.reltol = tol.reltol;
  SolverOptions gen = base;
  gen.saveat = times;
  gen.save_everystep = false;
  gen.dense = false;
  const Solution truth = solve(prob, alg, gen);
  if (!truth.success())
    throw NonFiniteError(std::string("data-generating solve ended with ") +
                         to_string(truth.retcode));

  auto loss = parameter_l2loss(prob, alg, times, truth.u, base);

  const double center = prob.p[static_cast<std::size_t>(pindex)];
  const double half = span * std::max(std::abs(center), 1.0);
  std::ostringstream body;
  body << "p" << pindex << ",loss\n";
  Vec cand = prob.p;
  for (int i = 0; i < npoints; ++i) {
    const double v =
        center - half + 2.0 * half * i / static_cast<double>(npoints - 1);
    cand[static_cast<std::size_t>(pindex)] = v;
    body << fmt17(v) << "," << fmt17(loss(cand)) << "\n";
  }
  if (!out_path.empty()) {
    auto f = open_out(out_path);
    f << body.str();
  } else {
    out << body.str();
  }
  err << "estimate: " << npoints << " grid points around p" << pindex << "="
      << fmtg(center) << "\n";
  return 0;
}

}  // namespace

// ---- parsing helpers (public: reused by tests) ----------------------------

std::pair<double, double> parse_tspan(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw InvalidOptions("tspan must be 'a,b'");
  const double a = parse_double(parts[0], "tspan");
  const double b = parse_double(parts[1], "tspan");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw InvalidOptions("tspan must be finite");
  return {a, b};
}

std::vector<double> parse_saveat(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw InvalidOptions("saveat must be 'a:b:n'");
  const double a = parse_double(parts[0], "saveat");
  const double b = parse_double(parts[1], "saveat");
  const double nraw = parse_double(parts[2], "saveat");
  const long n = std::lround(nraw);
  if (n < 2 || nraw != static_cast<double>(n))
    throw InvalidOptions("saveat count must be an integer >= 2");
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    ts[static_cast<std::size_t>(i)] =
        a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  ts.back() = b;
  return ts;
}

std::vector<double> parse_tol_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw InvalidOptions("tolerance grid must be 'a:b'");
  auto decade = [](const std::string& str) -> long {
    const double v = parse_double(str, "tolerance grid");
    if (!(v > 0.0)) throw InvalidOptions("tolerances must be positive");
    const double e = std::log10(v);
    const long r = std::lround(e);
    if (std::abs(e - static_cast<double>(r)) > 1e-9)
      throw InvalidOptions("grid endpoints must be powers of ten");
    return r;
  };
  const long e0 = decade(parts[0]);
  const long e1 = decade(parts[1]);
  const long step = e1 >= e0 ? 1 : -1;
  std::vector<double> grid;
  for (long e = e0;; e += step) {
    grid.push_back(std::stod("1e" + std::to_string(e)));
    if (e == e1) break;
  }
  return grid;
}

// ---- data emission --------------------------------------------------------

void write_solution_csv(std::ostream& os, const Solution& sol) {
  const std::size_t n = sol.u.empty() ? 0 : sol.u.front().size();
  os << "t";
  for (std::size_t j = 1; j <= n; ++j) os << ",u" << j;
  os << "\n";
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    os << fmt17(sol.t[i]);
    for (double v : sol.u[i]) os << "," << fmt17(v);
    os << "\n";
  }
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#17becf", "#7f7f7f"};
constexpr int kNPalette = 8;

struct Frame {
  static constexpr double W = 860, H = 520;
  static constexpr double L = 72, R = 24, T = 44, B = 56;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return L + (x - x0) / (x1 - x0) * (W - L - R); }
  double py(double y) const {
    return H - B - (y - y0) / (y1 - y0) * (H - T - B);
  }
};

void svg_open(std::ostream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::W
     << "\" height=\"" << Frame::H << "\" viewBox=\"0 0 " << Frame::W << " "
     << Frame::H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << Frame::W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << xml_escape(title) << "</text>\n";
}

void svg_axes(std::ostream& os, const Frame& fr, const std::string& xlabel,
              const std::string& ylabel) {
  os << "<line x1=\"" << fr.px(fr.x0) << "\" y1=\"" << fr.py(fr.y0)
     << "\" x2=\"" << fr.px(fr.x1) << "\" y2=\"" << fr.py(fr.y0)
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << fr.px(fr.x0) << "\" y1=\"" << fr.py(fr.y0)
     << "\" x2=\"" << fr.px(fr.x0) << "\" y2=\"" << fr.py(fr.y1)
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << (fr.px(fr.x0) + fr.px(fr.x1)) / 2 << "\" y=\""
     << Frame::H - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">"
     << xml_escape(xlabel) << "</text>\n"
     << "<text x=\"18\" y=\"" << (fr.py(fr.y0) + fr.py(fr.y1)) / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\" transform=\"rotate(-90 18 "
     << (fr.py(fr.y0) + fr.py(fr.y1)) / 2 << ")\">" << xml_escape(ylabel)
     << "</text>\n";
}

void svg_xtick(std::ostream& os, const Frame& fr, double x,
               const std::string& label) {
  os << "<line x1=\"" << fr.px(x) << "\" y1=\"" << fr.py(fr.y0) << "\" x2=\""
     << fr.px(x) << "\" y2=\"" << fr.py(fr.y0) + 5 << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << fr.px(x) << "\" y=\"" << fr.py(fr.y0) + 20
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"11\">"
     << xml_escape(label) << "</text>\n";
}

void svg_ytick(std::ostream& os, const Frame& fr, double y,
               const std::string& label) {
  os << "<line x1=\"" << fr.px(fr.x0) - 5 << "\" y1=\"" << fr.py(y)
     << "\" x2=\"" << fr.px(fr.x0) << "\" y2=\"" << fr.py(y)
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << fr.px(fr.x0) - 8 << "\" y=\"" << fr.py(y) + 4
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << xml_escape(label) << "</text>\n";
}

}  // namespace

void write_solution_svg(std::ostream& os, const Solution& sol,
                        const std::string& title) {
  svg_open(os, title);
  const std::size_t m = sol.u.empty() ? 0 : sol.u.front().size();
  if (sol.t.size() >= 2 && m >= 1) {
    Frame fr;
    fr.x0 = sol.t.front();
    fr.x1 = sol.t.back();
    fr.y0 = std::numeric_limits<double>::infinity();
    fr.y1 = -fr.y0;
    for (const auto& u : sol.u)
      for (double v : u) {
        fr.y0 = std::min(fr.y0, v);
        fr.y1 = std::max(fr.y1, v);
      }
    if (!(fr.y1 > fr.y0)) {
      fr.y0 -= 1.0;
      fr.y1 += 1.0;
    }
    if (!(fr.x1 > fr.x0)) fr.x1 = fr.x0 + 1.0;
    svg_axes(os, fr, "t", "u");
    for (int k = 0; k <= 4; ++k) {
      const double x = fr.x0 + (fr.x1 - fr.x0) * k / 4.0;
      const double y = fr.y0 + (fr.y1 - fr.y0) * k / 4.0;
      svg_xtick(os, fr, x, fmtg(x));
      svg_ytick(os, fr, y, fmtg(y));
    }
    for (std::size_t j = 0; j < m; ++j) {
      const char* color = kPalette[j % kNPalette];
      os << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < sol.t.size(); ++i)
        os << fr.px(sol.t[i]) << "," << fr.py(sol.u[i][j]) << " ";
      os << "\"/>\n";
      os << "<text x=\"" << Frame::W - Frame::R - 10 << "\" y=\""
         << Frame::T + 16.0 * static_cast<double>(j + 1)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            "font-size=\"12\" fill=\""
         << color << "\">u" << j + 1 << "</text>\n";
    }
  } else {
    os << "<text x=\"" << Frame::W / 2 << "\" y=\"" << Frame::H / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\">no data</text>\n";
  }
  os << "</svg>\n";
}

void write_workprecision_svg(std::ostream& os,
                             const std::vector<SvgSeries>& series,
                             const std::string& title) {
  svg_open(os, title);
  double exmin = std::numeric_limits<double>::infinity(), exmax = -exmin;
  double rymin = exmin, rymax = -exmin;
  for (const auto& s : series)
    for (const auto& [e, r] : s.xy) {
      if (!(e > 0.0) || !(r > 0.0) || !std::isfinite(e) || !std::isfinite(r))
        continue;
      exmin = std::min(exmin, e);
      exmax = std::max(exmax, e);
      rymin = std::min(rymin, r);
      rymax = std::max(rymax, r);
    }
  if (exmin <= exmax) {
    Frame fr;
    fr.x0 = std::floor(std::log10(exmin));
    fr.x1 = std::ceil(std::log10(exmax));
    fr.y0 = std::floor(std::log10(rymin));
    fr.y1 = std::ceil(std::log10(rymax));
    if (!(fr.x1 > fr.x0)) fr.x1 = fr.x0 + 1.0;
    if (!(fr.y1 > fr.y0)) fr.y1 = fr.y0 + 1.0;
    svg_axes(os, fr, "error (avg timeseries)", "runtime [s]");
    for (double e = fr.x0; e <= fr.x1 + 0.5; e += 1.0)
      svg_xtick(os, fr, e, "1e" + std::to_string(static_cast<long>(e)));
    for (double e = fr.y0; e <= fr.y1 + 0.5; e += 1.0)
      svg_ytick(os, fr, e, "1e" + std::to_string(static_cast<long>(e)));
    for (std::size_t si = 0; si < series.size(); ++si) {
      const char* color = kPalette[si % kNPalette];
      std::ostringstream pts;
      for (const auto& [e, r] : series[si].xy) {
        if (!(e > 0.0) || !(r > 0.0) || !std::isfinite(e) ||
            !std::isfinite(r))
          continue;
        const double x = fr.px(std::log10(e));
        const double y = fr.py(std::log10(r));
        pts << x << "," << y << " ";
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\""
           << color << "\"/>\n";
      }
      os << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
      os << "<text x=\"" << Frame::W - Frame::R - 10 << "\" y=\""
         << Frame::T + 16.0 * static_cast<double>(si + 1)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            "font-size=\"12\" fill=\""
         << color << "\">" << xml_escape(series[si].label) << "</text>\n";
    }
  } else {
    os << "<text x=\"" << Frame::W / 2 << "\" y=\"" << Frame::H / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\">no data</text>\n";
  }
  os << "</svg>\n";
}

// ---- entry points ---------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"confedsolve: modular differential equation toolkit"};
  app.require_subcommand(1);

  std::string simd = "auto";
  app.add_option("--simd", simd, "kernel backend: scalar, avx2, or auto")
      ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

  std::string problem = "linear_decay", alg = "auto", tspan, saveat;
  std::string out_path, svg_path;
  TolFlags tol;

  auto add_common = [&](CLI::App* sc, bool with_alg, bool with_tols = true) {
    sc->add_option("--problem", problem, "catalog problem name");
    if (with_alg)
      sc->add_option("--alg", alg, "algorithm name, composite, or 'auto'");
    if (with_tols) {
      sc->add_option("--abstol", tol.abstol, "absolute tolerance");
      sc->add_option("--reltol", tol.reltol, "relative tolerance");
    }
    sc->add_option("--tspan", tspan, "integration span as 'a,b'");
    sc->add_option("--out", out_path, "write the data file here (default: stdout)");
  };

  CLI::App* sc_solve = app.add_subcommand("solve", "integrate one problem");
  add_common(sc_solve, true);
  sc_solve->add_option("--dt", tol.dt, "fixed step size (disables adaptivity)");
  sc_solve->add_option("--saveat", saveat, "output grid as 'a:b:n'");
  sc_solve->add_option("--svg", svg_path, "also write a trajectory plot");

  CLI::App* sc_list = app.add_subcommand("list", "list algorithms");
  std::string kind;
  bool list_problems = false;
  sc_list->add_option("--kind", kind, "filter: first_order or second_order");
  sc_list->add_flag("--problems", list_problems, "list catalog problems instead");

  CLI::App* sc_explain =
      app.add_subcommand("explain", "trace the automatic algorithm choice");
  add_common(sc_explain, false);
  sc_explain->add_option("--dt", tol.dt, "fixed step size (disables adaptivity)");

  CLI::App* sc_conv =
      app.add_subcommand("converge", "fixed-step convergence study");
  add_common(sc_conv, true);
  double dt0 = 1.0 / 16.0, factor = 0.5;
  int levels = 6;
  sc_conv->add_option("--dt0", dt0, "largest step size");
  sc_conv->add_option("--levels", levels, "number of refinements");
  sc_conv->add_option("--factor", factor, "step shrink factor per level");

  CLI::App* sc_bench = app.add_subcommand("bench", "work-precision sweep");
  add_common(sc_bench, false, /*with_tols=*/false);
  std::string algs = "tsit5", reltols = "1e-2:1e-7";
  double bench_abstol = 0.0;
  int reps = 5;
  sc_bench->add_option("--algs", algs, "comma-separated algorithm list");
  sc_bench->add_option("--reltols", reltols, "decade grid 'a:b'");
  auto* abstol_opt = sc_bench->add_option(
      "--abstol", bench_abstol, "fixed abstol (default: equal to reltol)");
  sc_bench->add_option("--reps", reps, "timed repetitions per point");
  sc_bench->add_option("--svg", svg_path, "also write the log-log plot");

  CLI::App* sc_est =
      app.add_subcommand("estimate", "parameter loss grid around the truth");
  add_common(sc_est, true);
  int pindex = 0, npoints = 21, ndata = 20;
  double span = 0.5;
  sc_est->add_option("--param-index", pindex, "which parameter to sweep");
  sc_est->add_option("--span", span, "relative half-width of the sweep");
  sc_est->add_option("--npoints", npoints, "grid resolution");
  sc_est->add_option("--data-points", ndata, "synthetic data samples");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    kernels::force_backend(simd);
    tol.saveat = saveat;
    if (sc_solve->parsed())
      return cmd_solve(problem, alg, tol, tspan, out_path, svg_path, out, err);
    if (sc_list->parsed()) return cmd_list(kind, list_problems, out);
    if (sc_explain->parsed()) return cmd_explain(problem, tol, tspan, out);
    if (sc_conv->parsed())
      return cmd_converge(problem, alg, dt0, levels, factor, tspan, out_path,
                          out);
    if (sc_bench->parsed())
      return cmd_bench(problem, algs, reltols,
                       abstol_opt->count() ? std::optional<double>(bench_abstol)
                                           : std::nullopt,
                       reps, tspan, out_path, svg_path, out, err);
    if (sc_est->parsed())
      return cmd_estimate(problem, alg, tol, tspan, pindex, span, npoints,
                          ndata, out_path, out, err);
  } catch (const NonFiniteError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace confed::cli
