#pragma once

#include <functional>
#include <string>

#include "confed/registry.hpp"
#include "confed/solve.hpp"

namespace confed {

// Builds the L2 parameter-fit objective: candidate p -> solve the remade
// problem at the data times and return sum of squared residuals against
// `data` (column i is the state at times[i]).  Solver failures and shape
// surprises during evaluation are absorbed into +inf so optimizers can poll
// freely; construction validates shapes (ShapeMismatch).
std::function<double(const Vec&)> parameter_l2loss(
    const ODEProblem& prob, const std::string& alg,
    const std::vector<double>& times, const std::vector<Vec>& data,
    const SolverOptions& base = {}, Registry& reg = default_registry());

}  // namespace confed
