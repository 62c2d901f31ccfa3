#include "confed/options.hpp"

#include <cmath>

namespace confed {

void SolverOptions::validate() const {
  if (!(abstol > 0.0) || !std::isfinite(abstol))
    throw InvalidOptions("abstol must be positive and finite");
  if (!(reltol > 0.0) || !std::isfinite(reltol))
    throw InvalidOptions("reltol must be positive and finite");
  if (dt && (*dt == 0.0 || !std::isfinite(*dt)))
    throw InvalidOptions("dt must be nonzero and finite");
  if (max_steps < 1) throw InvalidOptions("max_steps must be at least 1");
  if (saveat) {
    if (saveat->size() < 1) throw InvalidOptions("saveat must be nonempty");
    for (std::size_t i = 0; i + 1 < saveat->size(); ++i)
      if (!((*saveat)[i] < (*saveat)[i + 1]))
        throw InvalidOptions("saveat times must be strictly increasing");
    for (double tv : *saveat)
      if (!std::isfinite(tv)) throw InvalidOptions("saveat times must be finite");
  }
  for (const auto& cb : callbacks) {
    if (!cb.condition) throw InvalidOptions("callback without condition");
    if (!cb.affect) throw InvalidOptions("callback without affect");
    if (!(cb.root_tol_rel > 0.0))
      throw InvalidOptions("callback root tolerance must be positive");
  }
}

}  // namespace confed
