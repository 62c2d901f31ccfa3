#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "confed/solve.hpp"

namespace confed::cli {

// Exit codes: 0 success, 1 numerical failure (non-Success retcode), 2 usage.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// "a,b" -> {a, b}.  Throws InvalidOptions on malformed input.
std::pair<double, double> parse_tspan(const std::string& s);
// "a:b:n" -> n points from a to b inclusive (n >= 2).
std::vector<double> parse_saveat(const std::string& s);
// "1e-2:1e-7" -> decade-stepped tolerance grid {1e-2, 1e-3, ..., 1e-7}.
std::vector<double> parse_tol_grid(const std::string& s);

// CSV with %.17g values: header "t,u1,...,un", one row per saved node.
void write_solution_csv(std::ostream& os, const Solution& sol);

// Minimal line-plot SVG of the chosen components over t.
void write_solution_svg(std::ostream& os, const Solution& sol,
                        const std::string& title);
// log-log work-precision scatter/lines, one series per algorithm.
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> xy;  // (error, runtime)
};
void write_workprecision_svg(std::ostream& os,
                             const std::vector<SvgSeries>& series,
                             const std::string& title);

}  // namespace confed::cli
